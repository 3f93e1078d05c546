"""Candidate detection: variants, filtering, ordering, stable ids."""

from reentriage.detector import VARIANT_BARE, VARIANT_CEI, detect
from reentriage.flow import analyze_contract
from reentriage.frontend import parse_source
from reentriage.lowering import linearize


def findings_for(text, **kwargs):
    flat = linearize(parse_source(text))[0]
    return detect(analyze_contract(flat), "t.sol", **kwargs)


TWO_SITES = """contract C { uint x; mapping(address=>uint) bal;
    function pay(address a, uint v) public {
        a.transfer(v);
    }
    function out(uint v) public {
        msg.sender.call.value(v)();
        bal[msg.sender] -= v;
    }
}"""


def test_variants():
    found = findings_for(TWO_SITES)
    by_fn = {f.function: f for f in found}
    assert by_fn["pay"].variant == VARIANT_BARE
    assert by_fn["out"].variant == VARIANT_CEI
    assert by_fn["out"].post_writes and \
        by_fn["out"].post_writes[0].var == "bal"


def test_ordering_and_determinism():
    a = findings_for(TWO_SITES)
    b = findings_for(TWO_SITES)
    assert [(f.id, f.line, f.column) for f in a] == \
        [(f.id, f.line, f.column) for f in b]
    assert [f.line for f in a] == sorted(f.line for f in a)


def test_ids_are_distinct_and_short():
    found = findings_for(TWO_SITES)
    ids = {f.id for f in found}
    assert len(ids) == len(found)
    assert all(len(i) == 12 for i in ids)


def test_call_kind_filter():
    only_transfer = findings_for(TWO_SITES,
                                 call_kinds=frozenset({"transfer"}))
    assert [f.call_kind for f in only_transfer] == ["transfer"]
    nothing = findings_for(TWO_SITES, call_kinds=frozenset({"delegatecall"}))
    assert nothing == []


def test_report_bare_off_keeps_only_cei():
    found = findings_for(TWO_SITES, report_bare=False)
    assert [f.variant for f in found] == [VARIANT_CEI]


def test_internal_calls_never_become_findings():
    found = findings_for("""contract C { uint x;
        function g() internal { x = 1; }
        function f() public { g(); x = 2; } }""")
    assert found == []


def test_rhs_call_with_assignment_is_cei():
    found = findings_for("""contract C { uint done;
        function f(address a) public { done = a.send(1) ? 1 : 2; } }""")
    assert len(found) == 1
    assert found[0].variant == VARIANT_CEI


def test_snippet_is_the_call_text():
    found = findings_for(TWO_SITES)
    by_fn = {f.function: f for f in found}
    assert "transfer" in by_fn["pay"].snippet
    assert "call" in by_fn["out"].snippet
