"""Source -> AST -> source keeps the token stream intact.

Whitespace and comments may differ after unparsing; the token texts must
not. This is what lets the dedupe fingerprint and the evidence snippets
trust the tree.
"""

import pytest

from reentriage.bundled import corpus_dir
from reentriage.frontend import normalize_call_forms, parse_source, unparse
from reentriage.frontend.tokens import TokenKind, tokenize


def token_texts(source: str) -> list[str]:
    toks, _ = tokenize(source)
    return [t.text for t in toks if t.kind is not TokenKind.EOF]


def assert_roundtrip(source: str) -> None:
    unit = parse_source(source)
    regenerated = unparse(unit)
    assert token_texts(regenerated) == token_texts(source), regenerated


CORPUS = sorted(corpus_dir().glob("*.sol"))


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.name)
def test_bundled_corpus_roundtrips(path):
    assert_roundtrip(path.read_text())


SNIPPETS = [
    # legacy option chains keep their spelling
    "contract C { function f(address a, uint v) public {"
    " if (!a.call.gas(2301).value(v)()) { throw; } } }",
    # modern braces keep theirs
    "contract C { function f(address a) public payable {"
    " a.call{value: msg.value, gas: 5000}(\"\"); } }",
    # unchecked, ternary, units, exponents
    "contract C { function f(uint x) public returns (uint) {"
    " unchecked { x += 1_000; } return x > 1e18 ? x : 2 ** 8; } }",
    # modifier without parens, placeholder, named constructor
    "contract Owned { address owner; modifier only { require(msg.sender"
    " == owner); _; } function Owned() public { owner = msg.sender; }"
    " function f() public only { } }",
    # base args, unmodeled members, file directives
    "pragma solidity ^0.4.19;\nimport \"./a.sol\";\n"
    "contract C is A, B(42) { struct S { uint a; } event E(uint v);"
    " using L for uint; function f() public { emit E(1); } }",
    # loops with break and continue, fallback
    "contract C { function () public payable { }"
    " function g(uint n) public { for (uint i = 0; i < n; i++) {"
    " if (i == 2) { continue; } if (i > 4) { break; } }"
    " while (n > 0) { n--; } do { n++; } while (n < 3); } }",
    # arrays, new, delete, member chains, index chains
    "contract C { uint[] xs; mapping(address => mapping(uint => bool)) m;"
    " function f() public { xs = new uint[](3); delete xs;"
    " m[msg.sender][0] = true; xs.push(1); } }",
    # strings with escapes and hex literals
    'contract C { function f() public { bytes memory b = hex"00ff";'
    ' string memory s = "a\\"b\\n"; } }',
    # tuple-ish and assembly stay raw but in place
    "contract C { function f() public { (uint a, uint b) = (1, 2);"
    " assembly { let x := mload(0x40) } uint c = 3; } }",
    # interfaces and libraries
    "interface IToken { function transfer(address to, uint v) external"
    " returns (bool); } library L { function id(uint x) internal pure"
    " returns (uint) { return x; } }",
]


@pytest.mark.parametrize("idx", range(len(SNIPPETS)))
def test_snippets_roundtrip(idx):
    assert_roundtrip(SNIPPETS[idx])


@pytest.mark.parametrize("idx", range(len(SNIPPETS)))
def test_unparse_is_stable(idx):
    once = unparse(parse_source(SNIPPETS[idx]))
    twice = unparse(parse_source(once))
    assert once == twice


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.name)
def test_normalize_is_idempotent(path):
    unit = parse_source(path.read_text())  # parse already normalizes
    before = unparse(unit)
    normalize_call_forms(unit)
    assert unparse(unit) == before
