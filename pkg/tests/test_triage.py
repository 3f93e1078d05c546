"""Each suppression rule, exercised positively and negatively."""

from reentriage.pipeline import analyze_source
from reentriage.triage import (
    CauseType, LIKELY_FP, LIKELY_TP, TRIAGE_ORDER,
)


def verdicts_for(text, rules=TRIAGE_ORDER):
    analysis = analyze_source("t.sol", text.encode(), rules=rules)
    assert analysis.status == "ok", analysis.error
    return analysis.verdicts


def single(text, rules=TRIAGE_ORDER):
    vs = verdicts_for(text, rules)
    assert len(vs) == 1, [v.finding.function for v in vs]
    return vs[0]


def causes(verdict):
    return {c.value for c in verdict.causes}


# --- identity_control -------------------------------------------------------

def test_identity_match_on_owner_compare():
    v = single("""contract C { address owner; uint x;
        function f(address a) public {
            require(msg.sender == owner);
            a.call.value(1)("");
            x = 1;
        } }""")
    assert "identity_control" in causes(v)
    assert v.classification == LIKELY_FP


def test_identity_match_on_mapping_membership():
    v = single("""contract C { mapping(address => bool) admins; uint x;
        function f(address a) public {
            require(admins[msg.sender]);
            a.call.value(1)("");
            x = 1;
        } }""")
    assert "identity_control" in causes(v)


def test_identity_match_on_negated_blacklist():
    v = single("""contract C { mapping(address => bool) banned; uint x;
        function f(address a) public {
            require(!banned[msg.sender]);
            a.call.value(1)("");
            x = 1;
        } }""")
    assert "identity_control" in causes(v)


def test_identity_needs_state_not_parameter():
    v = single("""contract C { uint x;
        function f(address a, address who) public {
            require(msg.sender == who);
            a.call.value(1)("");
            x = 1;
        } }""")
    assert "identity_control" not in causes(v)


def test_identity_check_after_call_does_not_count():
    v = single("""contract C { address owner; uint x;
        function f(address a) public {
            a.call.value(1)("");
            x = 1;
            require(msg.sender == owner);
        } }""")
    assert "identity_control" not in causes(v)


# --- address_control ---------------------------------------------------------

def test_address_match_on_constant_target():
    v = single("""contract C { uint x;
        address constant SINK = 0x1111111111111111111111111111111111111111;
        function f() public {
            SINK.call.value(1)("");
            x = 1;
        } }""")
    assert "address_control" in causes(v)


def test_address_match_on_deploy_time_fixed_var():
    v = single("""contract C { uint x;
        address sink = 0x1111111111111111111111111111111111111111;
        function f() public {
            sink.call.value(1)("");
            x = 1;
        } }""")
    assert "address_control" in causes(v)


def test_address_mutable_var_does_not_match():
    v = single("""contract C { uint x;
        address sink = 0x1111111111111111111111111111111111111111;
        function set(address s) public { sink = s; }
        function f() public {
            sink.call.value(1)("");
            x = 1;
        } }""")
    assert "address_control" not in causes(v)


def test_address_parameter_target_does_not_match():
    v = single("""contract C { uint x;
        function f(address a) public {
            a.call.value(1)("");
            x = 1;
        } }""")
    assert "address_control" not in causes(v)


def test_address_cast_is_peeled():
    v = single("""contract Token { function pull(uint n) public; }
    contract C { uint x;
        address token = 0x1111111111111111111111111111111111111111;
        function f() public {
            Token(token).pull(1);
            x = 1;
        } }""")
    assert "address_control" in causes(v)


# --- reentrancy_lock -----------------------------------------------------------

LOCKED = """contract C {{ bool {var}; uint x;
    function f(address a) public {{
        require({check});
        {engage};
        a.call.value(1)("");
        x = 1;
        {release};
    }} }}"""


def test_lock_matches_negated_flag():
    v = single(LOCKED.format(var="locked", check="!locked",
                             engage="locked = true",
                             release="locked = false"))
    assert "reentrancy_lock" in causes(v)


def test_lock_matches_positive_flag():
    v = single(LOCKED.format(var="free", check="free",
                             engage="free = false", release="free = true"))
    assert "reentrancy_lock" in causes(v)


def test_lock_without_release_does_not_match():
    v = single("""contract C { bool locked; uint x;
        function f(address a) public {
            require(!locked);
            locked = true;
            a.call.value(1)("");
            x = 1;
        } }""")
    assert "reentrancy_lock" not in causes(v)


def test_lock_without_engage_does_not_match():
    v = single("""contract C { bool locked; uint x;
        function f(address a) public {
            require(!locked);
            a.call.value(1)("");
            x = 1;
            locked = false;
        } }""")
    assert "reentrancy_lock" not in causes(v)


def test_lock_needs_bool_state():
    v = single("""contract C { uint depth; uint x;
        function f(address a) public {
            require(depth == 0);
            depth = 1;
            a.call.value(1)("");
            x = 1;
            depth = 0;
        } }""")
    assert "reentrancy_lock" not in causes(v)


# --- no_state_change -------------------------------------------------------------

def test_no_state_change_matches_pure_read():
    v = single("""contract C {
        function peek(address t) public returns (uint) {
            return Token(t).balanceOf(address(this));
        } }""")
    assert "no_state_change" in causes(v)


def test_no_state_change_blocked_by_value():
    v = single("""contract C {
        function f(address a) public payable {
            a.call.value(msg.value)("");
        } }""")
    assert "no_state_change" not in causes(v)


def test_no_state_change_blocked_by_later_send():
    vs = verdicts_for("""contract C {
        function f(address a, address b) public {
            a.call("");
            b.transfer(1);
        } }""")
    first = [v for v in vs if v.finding.call_kind == "low_level_call"][0]
    assert "no_state_change" not in causes(first)


def test_no_state_change_blocked_by_post_write():
    v = single("""contract C { uint x;
        function f(address a) public {
            a.call("");
            x = 1;
        } }""")
    assert "no_state_change" not in causes(v)


# --- no_financial_risk -------------------------------------------------------------

def test_no_financial_risk_inbound_deposit():
    v = single("""contract C { mapping(address => uint) bal;
        function dep(address t, uint n) public {
            Token(t).transferFrom(msg.sender, address(this), n);
            bal[msg.sender] += n;
        } }""")
    assert "no_financial_risk" in causes(v)


def test_no_financial_risk_value_free_function():
    v = single("""contract C { uint pings;
        function ping(address watcher) public {
            Watcher(watcher).notify();
            pings += 1;
        } }""")
    assert "no_financial_risk" in causes(v)


def test_no_financial_risk_blocked_when_write_gates_outflow():
    vs = verdicts_for("""contract C { mapping(address => uint) bal;
        function dep(address t, uint n) public {
            Token(t).transferFrom(msg.sender, address(this), n);
            bal[msg.sender] += n;
        }
        function out(uint n) public {
            require(bal[msg.sender] >= n);
            bal[msg.sender] -= n;
            msg.sender.transfer(n);
        } }""")
    dep = [v for v in vs if v.finding.function == "dep"][0]
    assert "no_financial_risk" not in causes(dep)
    assert dep.classification == LIKELY_TP


def test_no_financial_risk_blocked_by_opaque_write():
    v = single("""contract C {
        function f(address t) public {
            Token(t).transferFrom(msg.sender, address(this), 1);
            assembly { sstore(0, 1) }
        } }""")
    assert "no_financial_risk" not in causes(v)


# --- special_transfer_value -----------------------------------------------------------

def test_special_value_direct_msg_value():
    v = single("""contract C { uint x;
        function f(address a) public payable {
            a.call.value(msg.value)("");
            x = 1;
        } }""")
    assert "special_transfer_value" in causes(v)


def test_special_value_via_guard_equality():
    v = single("""contract C { uint x;
        function f(address a, uint amount) public payable {
            require(msg.value == amount);
            a.call.value(amount)("");
            x = 1;
        } }""")
    assert "special_transfer_value" in causes(v)


def test_special_value_unguarded_parameter_does_not_match():
    v = single("""contract C { uint x;
        function f(address a, uint amount) public payable {
            a.call.value(amount)("");
            x = 1;
        } }""")
    assert "special_transfer_value" not in causes(v)


# --- gas_stipend_transfer_send ----------------------------------------------------------

def test_gas_stipend_on_transfer_and_send():
    vs = verdicts_for("""contract C { uint x;
        function f(address a, address b) public {
            a.transfer(1);
            b.send(2);
            x = 1;
        } }""")
    assert all("gas_stipend_transfer_send" in causes(v) for v in vs)


def test_gas_stipend_not_on_low_level_call():
    v = single("""contract C { uint x;
        function f(address a) public {
            a.call.value(1)("");
            x = 1;
        } }""")
    assert "gas_stipend_transfer_send" not in causes(v)


# --- non_callable -----------------------------------------------------------------------

def test_non_callable_internal_helper():
    v = single("""contract C { uint x;
        function helper(address a) internal {
            a.call.value(1)("");
            x = 1;
        } }""")
    assert "non_callable" in causes(v)


def test_non_callable_constructor():
    v = single("""contract C { uint x;
        constructor(address a) public {
            a.call.value(1)("");
            x = 1;
        } }""")
    assert "non_callable" in causes(v)


def test_callable_through_public_wrapper():
    vs = verdicts_for("""contract C { uint x;
        function go(address a) public { helper(a); }
        function helper(address a) internal {
            a.call.value(1)("");
            x = 1;
        } }""")
    helper = [v for v in vs if v.finding.function == "helper"][0]
    assert "non_callable" not in causes(helper)


# --- verdict assembly ---------------------------------------------------------------------

def test_trace_covers_every_enabled_rule():
    v = single("""contract C { uint x;
        function f(address a) public { a.call.value(1)(""); x = 1; } }""")
    assert [e.cause for e in v.rule_trace] == list(TRIAGE_ORDER)
    assert all(e.matched == (e.cause in v.causes) for e in v.rule_trace)


def test_rule_subset_only_runs_those_rules():
    v = single("""contract C { address owner; uint x;
        function f(address a) public {
            require(msg.sender == owner);
            a.transfer(1);
            x = 1;
        } }""", rules=(CauseType.GAS_STIPEND_TRANSFER_SEND,))
    assert [e.cause for e in v.rule_trace] == \
        [CauseType.GAS_STIPEND_TRANSFER_SEND]
    assert causes(v) == {"gas_stipend_transfer_send"}


def test_causes_are_union_of_independent_rules():
    text = """contract C { address owner; uint x;
        function f(address a) public {
            require(msg.sender == owner);
            a.transfer(1);
            x = 1;
        } }"""
    full = causes(single(text))
    unioned = set()
    for cause in TRIAGE_ORDER:
        unioned |= causes(single(text, rules=(cause,)))
    assert full == unioned
    assert {"identity_control", "gas_stipend_transfer_send"} <= full


def test_matched_evidence_is_never_empty():
    from reentriage.bundled import corpus_dir
    for path in sorted(corpus_dir().glob("*.sol")):
        analysis = analyze_source(str(path))
        for verdict in analysis.verdicts:
            for cause, evidence in verdict.causes.items():
                assert evidence.spans, (path.name, cause)
                assert evidence.detail, (path.name, cause)


def test_no_rules_means_everything_reported():
    vs = verdicts_for("""contract C { uint x;
        function f(address a) public { a.transfer(1); x = 1; } }""",
                      rules=())
    assert all(v.classification == LIKELY_TP for v in vs)
    assert all(v.rule_trace == [] for v in vs)
