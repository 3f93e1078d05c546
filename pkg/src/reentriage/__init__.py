"""reentriage: reentrancy candidate detection and triage for Solidity."""

__version__ = "0.1.0"
