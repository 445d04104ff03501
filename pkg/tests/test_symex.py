import io

from hypothesis import given, settings
from hypothesis import strategies as st

from tracevec.frontend import lower_to_cfg, parse_program
from tracevec.symex import (
    AssumeEv,
    CallEv,
    Const,
    RetOf,
    ReturnEv,
    StoreEv,
    enumerate_paths,
    format_trace,
    parse_trace_dump,
    trace_procedure,
)


def traces_for(src):
    prog = parse_program(src, "<t>")
    assert len(prog.procedures) == 1
    return trace_procedure(prog.procedures[0])


def branchy(k):
    checks = "\n".join(
        f"int x{i} = c{i}();\nif (x{i} == 0) {{ l{i}(); }}" for i in range(k))
    return f"int f() {{ {checks} return 0; }}"


class TestPathEnumeration:
    def test_straight_line_single_trace(self):
        (trace,) = traces_for("int f() { g(); return 0; }")
        assert [type(e) for e in trace.events] == [CallEv, ReturnEv]

    def test_branch_yields_two_traces_true_first(self):
        t1, t2 = traces_for("int f() { int x = g(); if (x == 0) { h(); } }")
        assume1 = next(e for e in t1.events if isinstance(e, AssumeEv))
        assume2 = next(e for e in t2.events if isinstance(e, AssumeEv))
        assert assume1.polarity is True
        assert assume2.polarity is False

    def test_loop_yields_exactly_two_traces(self):
        t1, t2 = traces_for(
            "int f() { int x = g(); while (x != 0) { h(); x = g(); } }")
        # taken path: body once, then the truncation assumption
        assert sum(isinstance(e, AssumeEv) for e in t1.events) == 2
        assert sum(isinstance(e, AssumeEv) for e in t2.events) == 1

    def test_sequential_branches_multiply(self):
        assert len(traces_for(branchy(5))) == 2 ** 5

    def test_budget_caps_enumeration(self):
        prog = parse_program(branchy(13), "<t>")
        cfg = lower_to_cfg(prog.procedures[0])
        assert len(enumerate_paths(cfg, budget=5000, proc_name="f")) == 5000

    def test_deterministic(self):
        src = branchy(4)
        assert traces_for(src) == traces_for(src)


class TestSemantics:
    def test_nested_call_dataflow(self):
        (trace,) = traces_for("int f() { g(h()); }")
        outer = trace.events[1]
        assert outer.callee == "g"
        assert outer.nested_sources == ("h",)

    def test_variable_mediated_dataflow(self):
        (trace,) = traces_for("int f() { int r = h(); g(r); }")
        assert trace.events[1].nested_sources == ("h",)

    def test_shared_argument_history(self):
        (trace,) = traces_for("int f(int o) { g(o); h(o); }")
        assert trace.events[1].shared_sources == ("g",)

    def test_reassignment_clears_history(self):
        (trace,) = traces_for(
            "int f() { int o = mk(); g(o); o = mk(); h(o); }")
        h_ev = trace.events[-2]
        assert h_ev.callee == "h"
        assert h_ev.shared_sources == ()

    def test_stores_do_not_update_the_environment(self):
        # the assumption still reads the access path, not the stored value
        t1, _ = traces_for(
            "int f(struct s *o) { o->n = g(); if (o->n == 0) { h(); } }")
        assume = next(e for e in t1.events if isinstance(e, AssumeEv))
        assert assume.raw_path.render() == "->n"

    def test_store_event_emitted(self):
        (trace,) = traces_for("int f(struct s *o) { o->n = 3; }")
        assert any(isinstance(e, StoreEv) for e in trace.events)

    def test_assume_normalizes_reversed_comparison(self):
        t1, _ = traces_for("int f() { int n = g(); if (0 != n) { h(); } }")
        assume = next(e for e in t1.events if isinstance(e, AssumeEv))
        assert assume.subject == RetOf("g")
        assert assume.op == "!="
        assert assume.rhs == Const(0)

    def test_false_polarity_flips_operator(self):
        _, t2 = traces_for("int f() { int n = g(); if (n < 0) { h(); } }")
        assume = next(e for e in t2.events if isinstance(e, AssumeEv))
        assert assume.op == ">="

    def test_return_of_negated_constant(self):
        (trace,) = traces_for("int f() { return -5; }")
        assert trace.events[-1] == ReturnEv(Const(-5))


class TestDumpRoundTrip:
    def test_format_and_parse_inverse(self, golden_source):
        prog = parse_program(golden_source, "golden.mc")
        traces = [t for p in prog.procedures for t in trace_procedure(p)]
        dump = "".join(format_trace(t) + "\n" for t in traces)
        parsed = parse_trace_dump(io.StringIO(dump))
        assert [t.proc_name for t in parsed] == [t.proc_name for t in traces]
        assert "".join(format_trace(t) + "\n" for t in parsed) == dump


@st.composite
def branch_skeletons(draw):
    """A procedure made only of sequential, independent binary branches."""
    k = draw(st.integers(min_value=0, max_value=8))
    return k, branchy(k)


@settings(max_examples=30, deadline=None)
@given(branch_skeletons())
def test_property_trace_count_matches_brute_force(skel):
    k, src = skel
    assert len(traces_for(src)) == 2 ** k


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=6), st.integers(min_value=1, max_value=40))
def test_property_budget_is_exact_minimum(k, budget):
    prog = parse_program(branchy(k), "<t>")
    cfg = lower_to_cfg(prog.procedures[0])
    assert len(enumerate_paths(cfg, budget=budget, proc_name="f")) == min(2 ** k, budget)
