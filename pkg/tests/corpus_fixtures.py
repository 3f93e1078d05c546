"""A 20-file labeled corpus built into a temp dir, with hand-counted totals.

Eight files are verbatim copies of the bundled corpus, nine are synthetic
single-cause suppressions, one is a second genuine reentrancy, one is a
plain contract with no external calls, and one fails to parse. The
EXPECTED dict is computed by hand from those sources; batch tests and the
acceptance suite both check the pipeline against it.
"""

from pathlib import Path

from reentriage.bundled import corpus_dir

SYNTHETIC = {
    "syn_identity.sol": """contract GatedPayout {
    address owner;
    uint paid;

    function GatedPayout() public { owner = msg.sender; }

    function payout(address to, uint amount) public {
        require(msg.sender == owner);
        to.call.value(amount)("");
        paid += amount;
    }
}
""",
    "syn_address.sol": """contract FeeSink {
    address sink = 0x2222222222222222222222222222222222222222;
    uint routed;

    function route(uint amount) public {
        sink.call.value(amount)("");
        routed += amount;
    }
}
""",
    "syn_lock.sol": """contract MutexVault {
    bool entered;
    mapping(address => uint) bal;

    function claim(uint amount) public {
        require(!entered);
        entered = true;
        msg.sender.call.value(amount)("");
        bal[msg.sender] -= amount;
        entered = false;
    }
}
""",
    "syn_no_state.sol": """contract Token {
    function totalSupply() public constant returns (uint);
}

contract SupplyMirror {
    function totalOf(address token) public constant returns (uint) {
        return Token(token).totalSupply();
    }
}
""",
    "syn_no_risk.sol": """contract Token2 {
    function transferFrom(address f, address t, uint n) public returns (bool);
}

contract EscrowIntake {
    mapping(address => uint) credit;

    function fund(address token, uint amount) public {
        require(Token2(token).transferFrom(msg.sender, this, amount));
        credit[msg.sender] += amount;
    }
}
""",
    "syn_msg_value.sol": """contract WethWrap {
    uint wrapped;

    function wrap(address weth) public payable {
        weth.call.value(msg.value)("");
        wrapped += msg.value;
    }
}
""",
    "syn_gas.sol": """contract Payroll {
    mapping(address => uint) owed;

    function pay(address payable worker) public {
        worker.transfer(owed[worker]);
        owed[worker] = 0;
    }
}
""",
    "syn_internal.sol": """contract SweepLib {
    uint sweeps;

    function _sweep(address to, uint amount) internal {
        to.call.value(amount)("");
        sweeps += 1;
    }
}
""",
    "syn_constructor.sol": """contract Seeder {
    uint seeded;

    constructor(address registry) public {
        registry.call.value(1)("");
        seeded = 1;
    }
}
""",
    "dao_variant.sol": """contract PonziBank {
    mapping(address => uint256) public deposits;

    function invest() public payable {
        deposits[msg.sender] += msg.value;
    }

    function divest(uint256 amount) public {
        if (deposits[msg.sender] >= amount) {
            if (msg.sender.call.value(amount)()) {
                deposits[msg.sender] -= amount;
            }
        }
    }
}
""",
    "plain_store.sol": """contract PlainStore {
    uint public value;

    function set(uint v) public { value = v; }

    function get() public constant returns (uint) { return value; }
}
""",
    "broken.sol": """contract Broken {
    function f() public { {
}
""",
}

LABEL_ROWS = [
    ("simple_dao.sol", "SimpleDAO", "withdraw", "TP", ""),
    ("owner_gated_forwarder.sol", "OwnedForwarder", "execute", "FP",
     "identity_control"),
    ("fixed_address_escrow.sol", "DaiSavingsEscrow", "register", "FP",
     "address_control"),
    ("guarded_vesting.sol", "GovernanceVesting", "withdraw", "FP",
     "reentrancy_lock"),
    ("token_balance_reader.sol", "Bitcash", "getTokenBal", "FP",
     "no_state_change"),
    ("token_deposit_ledger.sol", "TokenDepositLedger", "depositToken", "FP",
     "no_financial_risk"),
    ("eth_dai_trader.sol", "EthDaiTrader", "tradeEthVsDAI", "FP",
     "special_transfer_value"),
    ("internal_transfer_helper.sol", "TransferVault", "_withdraw", "FP",
     "gas_stipend_transfer_send"),
    ("syn_identity.sol", "GatedPayout", "payout", "FP", "identity_control"),
    ("syn_address.sol", "FeeSink", "route", "FP", "address_control"),
    ("syn_lock.sol", "MutexVault", "claim", "FP", "reentrancy_lock"),
    ("syn_no_state.sol", "SupplyMirror", "totalOf", "FP", "no_state_change"),
    ("syn_no_risk.sol", "EscrowIntake", "fund", "FP", "no_financial_risk"),
    ("syn_msg_value.sol", "WethWrap", "wrap", "FP", "special_transfer_value"),
    ("syn_gas.sol", "Payroll", "pay", "FP", "gas_stipend_transfer_send"),
    ("syn_internal.sol", "SweepLib", "_sweep", "FP", "non_callable"),
    ("syn_constructor.sol", "Seeder", "constructor", "FP", "non_callable"),
    ("dao_variant.sol", "PonziBank", "divest", "TP", ""),
]

# Counted by hand from the sources above plus the bundled eight:
# candidates 8 + 9 + 1, only the two unguarded withdraws survive triage.
EXPECTED = {
    "total_files": 20,
    "duplicate_files": 0,
    "analyzed_count": 19,
    "failed_count": 1,
    "candidate_count": 18,
    "reported_count": 2,
    "suppressed_count": 16,
    "tp_count": 2,
    "precision": 1.0,
    "reported_rate": 2 / 19,
    "cause_counts": {
        "identity_control": 2,
        "address_control": 2,
        "reentrancy_lock": 2,
        "no_state_change": 2,
        "no_financial_risk": 6,
        "special_transfer_value": 2,
        "gas_stipend_transfer_send": 2,
        "non_callable": 3,
    },
}

REPORTED_KEYS = {("simple_dao.sol", "SimpleDAO", "withdraw"),
                 ("dao_variant.sol", "PonziBank", "divest")}


def build_corpus(root: Path) -> Path:
    """Write the 20 sources plus labels.csv under root; returns root."""
    root.mkdir(parents=True, exist_ok=True)
    for src in sorted(corpus_dir().glob("*.sol")):
        (root / src.name).write_text(src.read_text())
    for name, text in SYNTHETIC.items():
        (root / name).write_text(text)
    lines = ["file,contract,function,label,cause"]
    lines += [",".join(row) for row in LABEL_ROWS]
    (root / "labels.csv").write_text("\n".join(lines) + "\n")
    return root
