from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from pathgames.exactlp import (
    EQ,
    GE,
    INFEASIBLE,
    LE,
    OPTIMAL,
    UNBOUNDED,
    CertificationError,
    LinearProgram,
    LpOutcome,
    RowSpace,
    audit,
    certify,
    feasible,
    format_rational,
    max_slack_on_face,
    parse_rational,
    probe_tight,
    solve,
)


def symmetric():
    lp = LinearProgram(3, {2: 1}, nonneg=[True, True, False])
    lp.add([1, 1, 0], EQ, 1)
    lp.add([1, 0, -1], GE, Fraction(1, 2))
    lp.add([0, 1, -1], GE, Fraction(1, 2))
    return lp


def test_symmetric_program():
    out = solve(symmetric())
    assert out.status == OPTIMAL and out.value == 0
    assert out.solution == (Fraction(1, 2), Fraction(1, 2), 0)
    certify(symmetric(), out)


def test_simple_bound():
    lp = LinearProgram(1, [1])
    lp.add([1], LE, 3)
    assert solve(lp).value == 3


def test_least_core_lp_of_g3():
    lp = LinearProgram(3, {2: 1}, nonneg=[True, True, False])
    lp.add([1, 1, 0], EQ, 1)
    r1 = lp.add([1, 0, -1], GE, 1)
    lp.add([0, 1, -1], GE, 1)
    out = solve(lp)
    assert out.value == Fraction(-1, 2)
    assert probe_tight(lp, out.value, r1)


def test_probe_examples():
    lp = LinearProgram(3, {2: 1}, nonneg=[True, True, False])
    lp.add([1, 1, 0], EQ, 1)
    a = lp.add([1, 0, -1], GE, 0)
    b = lp.add([0, 1, -1], GE, 0)
    out = solve(lp)
    assert out.value == Fraction(1, 2)
    assert probe_tight(lp, out.value, a) and probe_tight(lp, out.value, b)
    # first-round probe of a nonnegativity bound in a program without the eps rows
    plain = LinearProgram(2, [0, 0])
    plain.add([1, 1], EQ, 1)
    assert not probe_tight(plain, 0, variable=0)


def test_duplicate_rows_both_tight():
    lp = LinearProgram(2, [1, 1])
    r1 = lp.add([1, 1], LE, 2)
    r2 = lp.add([1, 1], LE, 2)
    out = solve(lp)
    assert out.value == 2
    assert probe_tight(lp, 2, r1) and probe_tight(lp, 2, r2)


def test_unbounded_slack():
    lp = LinearProgram(2, [0, 1])
    lp.add([0, 1], LE, 1)
    slack, _ = max_slack_on_face(lp, 1, variable=0)
    assert slack is None


def test_feasibility_examples():
    lp = LinearProgram(2)
    lp.add([1, 1], EQ, 1)
    assert feasible(lp).optimal
    bad = LinearProgram(1)
    bad.add([1], GE, 2)
    bad.add([1], LE, 1)
    out = feasible(bad)
    assert out.status == INFEASIBLE
    certify(bad.with_objective([0]), out)
    # average of the four minimum-cut indicators of G4
    hull = LinearProgram(4)
    hull.add([1, 1, 1, 1], EQ, 1)
    cuts = [(1, 1, 0, 0), (0, 0, 1, 1), (1, 0, 0, 1), (0, 1, 1, 0)]
    for j in range(4):
        hull.add([c[j] for c in cuts], EQ, Fraction(1, 2))
    assert feasible(hull).optimal


def test_unbounded():
    lp = LinearProgram(2, [1, 0])
    lp.add([1, -1], LE, 0)
    out = solve(lp)
    assert out.status == UNBOUNDED
    certify(lp, out)


def test_floats_rejected():
    lp = LinearProgram(1)
    with pytest.raises(TypeError):
        lp.add([0.5], LE, 1)


def test_rational_strings():
    for q in (Fraction(3, 4), Fraction(-1, 2), Fraction(5), Fraction(0)):
        assert parse_rational(format_rational(q)) == q
    assert format_rational(Fraction(2, 1)) == "2"
    assert format_rational(Fraction(-3, 6)) == "-1/2"


def test_certify_rejects_forged_outcomes():
    lp = symmetric()
    out = solve(lp)
    forged = LpOutcome(OPTIMAL, Fraction(1), out.solution, out.duals, out.reduced)
    with pytest.raises(CertificationError):
        certify(lp, forged)
    bad_duals = LpOutcome(OPTIMAL, out.value, out.solution, tuple(-d for d in out.duals), out.reduced)
    with pytest.raises(CertificationError):
        certify(lp, bad_duals)


def test_audit_records_every_solve():
    with audit() as log:
        solve(symmetric())
        probe_tight(symmetric(), 0, 1)
    assert len(log) == 2
    for lp, out in log:
        certify(lp, out)


# Beale's example, the classic cycling instance for textbook Dantzig pricing
def beale():
    lp = LinearProgram(4, [Fraction(3, 4), -150, Fraction(1, 50), -6])
    lp.add([Fraction(1, 4), -60, Fraction(-1, 25), 9], LE, 0)
    lp.add([Fraction(1, 2), -90, Fraction(-1, 50), 3], LE, 0)
    lp.add([0, 0, 1, 0], LE, 1)
    return lp


DEGENERATE = {
    "beale": (beale, Fraction(1, 20)),
    "duplicate-rows": (lambda: _dup(), Fraction(1)),
    "zero-row": (lambda: _zero(), Fraction(2)),
}


def _dup():
    lp = LinearProgram(2, [1, 0])
    for _ in range(3):
        lp.add([1, 1], LE, 1)
    lp.add([1, 0], LE, 1)
    return lp


def _zero():
    lp = LinearProgram(2, [1, 1])
    lp.add([0, 0], LE, 0)
    lp.add([0, 0], EQ, 0)
    lp.add([1, 0], LE, 1)
    lp.add([0, 1], LE, 1)
    lp.add([1, 1], LE, 2)
    return lp


@pytest.mark.parametrize("name", DEGENERATE)
def test_degenerate_corpus_terminates(name):
    make, value = DEGENERATE[name]
    out = solve(make())
    assert out.status == OPTIMAL and out.value == value
    certify(make(), out)


def test_determinism():
    first = solve(beale())
    for _ in range(3):
        again = solve(beale())
        assert again.solution == first.solution and again.duals == first.duals


def test_rowspace():
    span = RowSpace(3)
    assert span.add([0, 1, 1]) and span.add([1, 1, 0])
    assert [1, 0, -1] in span and [1, 2, 1] in span
    assert [1, 0, 0] not in span
    assert not span.add([2, 3, 1])
    assert span.rank == 2


# random small programs ------------------------------------------------------

small = st.integers(-3, 3)


@st.composite
def programs(draw):
    n = draw(st.integers(1, 3))
    lp = LinearProgram(n, draw(st.lists(small, min_size=n, max_size=n)),
                       nonneg=draw(st.lists(st.booleans(), min_size=n, max_size=n)))
    for _ in range(draw(st.integers(1, 5))):
        lp.add(draw(st.lists(small, min_size=n, max_size=n)), draw(st.sampled_from([LE, GE, EQ])), draw(small))
    return lp


def _vertices(lp):
    """Every basic feasible point, by solving each square subsystem of tight rows."""
    n = lp.num_vars
    rows = [(c.coeffs, c.rhs) for c in lp.constraints]
    rows += [(tuple(Fraction(int(k == j)) for k in range(n)), Fraction(0)) for j in range(n) if lp.nonneg[j]]
    pts = []
    for combo in combinations(rows, n):
        span = RowSpace(n + 1)
        ok = all(span.add(list(a) + [b]) for a, b in combo)
        if not ok:
            continue
        x = _solve_square([list(a) for a, _ in combo], [b for _, b in combo])
        if x is not None and lp.is_feasible_point(x):
            pts.append(x)
    return pts


def _solve_square(a, b):
    n = len(a)
    m = [list(r) + [v] for r, v in zip(a, b)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c]), None)
        if p is None:
            return None
        m[c], m[p] = m[p], m[c]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c] / m[c][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return tuple(m[i][n] / m[i][i] for i in range(n))


@settings(max_examples=300, deadline=None)
@given(programs())
def test_random_programs_certify(lp):
    out = solve(lp)
    certify(lp, out)
    if out.status == OPTIMAL:
        pts = _vertices(lp)
        if pts:  # pointed feasible region: the optimum is attained at a vertex
            assert out.value == max(lp.value_at(x) for x in pts)
    if out.status == INFEASIBLE:
        assert not _vertices(lp)


def test_audit_with_check_keeps_only_failures():
    seen = []
    with audit(lambda lp, out: seen.append(out.status)) as outer:
        with audit() as inner:
            solve(symmetric())
        solve(beale())
    assert len(outer) == 2 and len(inner) == 1 and seen == [OPTIMAL, OPTIMAL]
    assert list(outer) == [] and not outer.failures

    def reject(lp, out):
        raise CertificationError("nope")

    with audit(reject) as log:
        solve(symmetric())
    assert len(log.failures) == 1
