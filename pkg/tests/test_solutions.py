import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from generators import random_dag, random_undirected
from pathgames.exactlp import parse_rational
from pathgames.games import (
    GameError,
    PayoffTotalError,
    brute_least_core,
    brute_nucleolus,
    edge_path_game,
    flow_game,
    vertex_path_game,
)
from pathgames.network import Network, PathBudgetExceeded
from pathgames.solutions import (
    ENUMERATE,
    GENERATE,
    CoreNonempty,
    flow_nucleolus,
    least_core,
    least_core_membership,
    nucleolus,
)

H, Q = Fraction(1, 2), Fraction(1, 4)
SEEDS = st.integers(0, 10**6)


def test_least_core_examples(game):
    r = least_core(game("G3"))
    assert r.epsilon == -H and r.witness == {"e1": H, "e2": H} and r.f_star == 2
    g4 = game("G4")
    r4 = least_core(g4)
    assert r4.epsilon == -H and least_core_membership(g4, r4.witness)
    rv = least_core(game("vertex_diamond", "vertex"))
    assert rv.epsilon == -H and rv.witness == {"a": H, "b": H}


def test_least_core_rejects_nonempty_core(game):
    with pytest.raises(CoreNonempty):
        least_core(game("G2"))


def test_least_core_budget(game):
    with pytest.raises(PathBudgetExceeded):
        least_core(game("G5"), ENUMERATE, path_budget=2)


def test_membership_examples(game):
    assert least_core_membership(game("G3"), {"e1": H, "e2": H})
    g4 = game("G4")
    assert least_core_membership(g4, {"sa": H, "sb": H, "at": 0, "bt": 0})
    assert not least_core_membership(g4, {"sa": 1, "sb": 0, "at": 0, "bt": 0})
    with pytest.raises(PayoffTotalError):
        least_core_membership(g4, {"sa": 1, "sb": 1, "at": 0, "bt": 0})


def test_nucleolus_examples(game):
    x, trace = nucleolus(game("G3"))
    assert x == {"e1": H, "e2": H}
    (r1,) = trace.rounds
    assert r1.epsilon == 0 and r1.fixed_paths == ((("e1",), H), (("e2",), H))
    assert nucleolus(game("G4"))[0] == dict.fromkeys(game("G4").players, Q)
    x5, _ = nucleolus(game("G5"))
    assert x5["ab"] == 0 and x5 == brute_nucleolus(game("G5"))


def test_nonempty_core_uses_veto_split(game):
    x, trace = nucleolus(game("G2"))
    assert x == {"a": H, "b": H} and trace.rounds == []


def test_flow_nucleolus_examples(game, net):
    assert flow_nucleolus(game("G3")) == {"e1": 1, "e2": 1}
    assert flow_nucleolus(flow_game(net("G2"))) == {"a": H, "b": H}
    assert flow_nucleolus(game("G4")) == dict.fromkeys(game("G4").players, H)
    with pytest.raises(GameError):
        flow_nucleolus(game("vertex_diamond", "vertex"))
    with pytest.raises(GameError):
        flow_nucleolus(flow_game(net("G4"), ["sa", "sb"]))


def test_unknown_mode(game):
    with pytest.raises(ValueError):
        nucleolus(game("G3"), "fast")


def test_trace_document_round_trips(game):
    _, trace = nucleolus(game("G5"), ENUMERATE)
    doc = json.loads(json.dumps(trace.to_list()))
    assert [parse_rational(r["epsilon"]) for r in doc] == trace.epsilons
    for r in doc:
        for p in r["fixed_paths"]:
            parse_rational(p["value"])


@pytest.mark.parametrize("name, kind, perm", [
    ("G3", "edge", {"e1": "e2", "e2": "e1"}),
    ("G4", "edge", {"sa": "sb", "sb": "sa", "at": "bt", "bt": "at"}),
    ("vertex_diamond", "vertex", {"a": "b", "b": "a"}),
])
def test_symmetry(game, name, kind, perm):
    x, _ = nucleolus(game(name, kind))
    assert all(x[p] == x[q] for p, q in perm.items())


def _check_instance(g):
    xe, se = nucleolus(g, ENUMERATE)
    xg, sg = nucleolus(g, GENERATE)
    assert xe == xg == brute_nucleolus(g)
    assert se.epsilons == sg.epsilons
    assert [(r.fixed_players, r.fixed_paths) for r in se.rounds] == [(r.fixed_players, r.fixed_paths) for r in sg.rounds]
    assert all(a < b for a, b in zip(se.epsilons, se.epsilons[1:]))
    if se.rounds:
        assert se.k <= g.n + se.rounds[-1].pool_size
    if g.f_star > 1:
        assert least_core_membership(g, xe)
        lc = least_core(g)
        assert lc.epsilon == Fraction(1, g.f_star) - 1 == least_core(g, ENUMERATE).epsilon
        assert lc.epsilon == brute_least_core(g)[0]
    return xe


@settings(max_examples=25, deadline=None)
@given(SEEDS)
def test_random_edge_games(seed):
    g = edge_path_game(random_dag(random.Random(seed), max_edges=9))
    x = _check_instance(g)
    assert flow_nucleolus(g) == {p: v * g.f_star for p, v in x.items()}


@settings(max_examples=20, deadline=None)
@given(SEEDS)
def test_random_vertex_games(seed):
    rng = random.Random(seed)
    _check_instance(vertex_path_game(random_dag(rng, inner=rng.randint(2, 6), direct=False, min_flow=1)))


@settings(max_examples=15, deadline=None)
@given(SEEDS)
def test_random_undirected_games(seed):
    _check_instance(edge_path_game(random_undirected(random.Random(seed))))


def test_dead_end_edges_get_zero():
    net = Network.build([("a", "s", "t"), ("b", "s", "t"), ("d", "s", "x")], vertices=["s", "x", "t"])
    x, _ = nucleolus(edge_path_game(net))
    assert x == {"a": H, "b": H, "d": 0}
