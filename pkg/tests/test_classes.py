"""Position graphs, the acyclicity-based termination analyzers, and the
critical-instance semi-decision procedure."""

import pytest

from chasekit.classes import (
    PositionGraph, affected_positions, critical_instance, dependency_graph,
    extended_dependency_graph, flow_graph, is_sd, is_swa, positions_of,
    propagation_graph, uniform_termination_semidecision,
)
from chasekit.model import render_atom
from fixtures import ANALYZERS, CLASS_SETS, CLASS_VERDICTS, deps

R1, R2 = ("R", 1), ("R", 2)

GRAPH_OF = {
    "sw": flow_graph,
    "ra": extended_dependency_graph,
    "wa": dependency_graph,
    "sd": propagation_graph,
}


def fixture(name):
    return deps(CLASS_SETS[name])


### graphs on the one-rule extender R(x,y) -> exists z . R(x,z)

def test_dependency_graph_tracks_frontier_variables_only():
    g = dependency_graph(fixture("extend_first"))
    assert g.vertices == {R1, R2}
    # y never reaches the head, so position (R,2) sources nothing
    assert g.edges == {(R1, R1, "universal"), (R1, R2, "existential")}


def test_flow_graph_connects_all_body_positions_to_all_head_positions():
    g = flow_graph(fixture("extend_first"))
    assert g.edges == {
        (R1, R1, "universal"), (R2, R1, "universal"),
        (R1, R2, "existential"), (R2, R2, "existential"),
    }


def test_extended_graph_sources_existential_edges_from_every_body_position():
    g = extended_dependency_graph(fixture("extend_first"))
    assert g.edges == {
        (R1, R1, "universal"),
        (R1, R2, "existential"), (R2, R2, "existential"),
    }


def test_affected_positions_stop_at_unaffected_body_occurrences():
    assert affected_positions(fixture("extend_first")) == {R2}


def test_propagation_graph_drops_rules_matched_on_unaffected_positions():
    # x only occurs at the unaffected (R,1), so no edges survive
    assert propagation_graph(fixture("extend_first")).edges == set()
    assert is_sd(fixture("extend_first")) == (True, None)


def test_positions_cover_the_whole_schema():
    ds = deps("R(x,y) -> S(x)\nS(x) -> exists z . R(x,z)")
    assert positions_of(ds) == {R1, R2, ("S", 1)}


def test_cycle_search_needs_an_existential_edge():
    g = PositionGraph()
    g.add_edge(R1, R2, "universal")
    g.add_edge(R2, R1, "universal")
    assert g.cycle_through_existential() is None
    g.add_edge(R2, R1, "existential")
    cyc = g.cycle_through_existential()
    assert cyc[0] == cyc[-1] and len(cyc) >= 2


### frozen verdicts across the named sets

@pytest.mark.parametrize("name,cls,expected", CLASS_VERDICTS,
                         ids=[f"{n}-{c}" for n, c, _ in CLASS_VERDICTS])
def test_membership_verdict(name, cls, expected):
    member, _cert = ANALYZERS[cls](fixture(name))
    assert member is expected


@pytest.mark.parametrize(
    "name,cls",
    [(n, c) for n, c, ok in CLASS_VERDICTS if not ok and c in GRAPH_OF],
    ids=[f"{n}-{c}" for n, c, ok in CLASS_VERDICTS if not ok and c in GRAPH_OF])
def test_failure_certificates_are_real_cycles(name, cls):
    ds = fixture(name)
    member, cert = ANALYZERS[cls](ds)
    assert not member
    g = GRAPH_OF[cls](ds)
    assert cert[0] == cert[-1] and len(cert) >= 2
    labels = []
    for u, v in zip(cert, cert[1:]):
        hit = [lab for (a, b, lab) in g.edges if (a, b) == (u, v)]
        assert hit, f"{u} -> {v} is not an edge of the {cls} graph"
        labels.extend(hit)
    assert "existential" in labels


def test_swa_certificate_is_a_rule_cycle():
    member, cert = is_swa(fixture("tag_shift"))
    assert member is False
    assert cert == [0, 0]  # the rule re-triggers itself


def test_analyzers_reject_egds():
    for fn in (dependency_graph, flow_graph, propagation_graph, is_swa):
        with pytest.raises(ValueError):
            fn(deps("T(x,y) -> x = y"))


### critical instance and the uniform-termination semi-decision

def test_critical_instance_one_atom_per_relation():
    ci = critical_instance(deps("R(x,y) -> S(x)\nS(x) -> exists z . R(x,z)"))
    assert sorted(render_atom(a) for a in ci) == ["R('c', 'c')", "S('c')"]


def test_critical_instance_constant_avoids_the_dependency_constants():
    ci = critical_instance(deps("R('c') -> S('c')"))
    assert sorted(render_atom(a) for a in ci) == ["R('c_')", "S('c_')"]


def test_semidecision_separates_the_oblivious_variants():
    ef = fixture("extend_first")
    assert uniform_termination_semidecision(ef, "sobl", fuel=100) == \
        "terminates_all"
    # the oblivious chase refires on every fresh null, so fuel runs out
    assert uniform_termination_semidecision(ef, "obl", fuel=100) == "unknown"


def test_semidecision_reports_unknown_for_the_nonterminating_shifter():
    ss = fixture("shift_second")
    assert uniform_termination_semidecision(ss, "sobl", fuel=200) == "unknown"


def test_semidecision_rejects_unsupported_variants():
    with pytest.raises(ValueError):
        uniform_termination_semidecision(fixture("extend_first"), "std")
    with pytest.raises(ValueError):
        uniform_termination_semidecision(fixture("extend_first"), "core")
