"""Exact rational linear programming.

All data are :class:`fractions.Fraction`; nothing is ever rounded.

Programs are stated as ``maximize c.x`` subject to rows ``a.x <= b``,
``a.x = b`` or ``a.x >= b`` plus optional per-variable nonnegativity.
Internally every program is normalised to free variables with ``<=`` and
``=`` rows and solved through its dual with a two-phase revised simplex.
The dual has one row per primal variable, so programs with few variables
and many constraints (every coalition of a small game, say) stay cheap.

Pricing is Dantzig's rule; after any degenerate pivot the next pivot uses
Bland's least-index rule, which rules out cycling.

Sign convention for multipliers returned in :class:`LpOutcome`::

    c = sum_i duals[i] * a_i - reduced
    duals[i] >= 0 for <= rows, <= 0 for >= rows, free for = rows
    reduced[j] >= 0 for nonnegative variables, 0 for free ones
    sum_i duals[i] * b_i == value
"""

from __future__ import annotations

from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterator, Mapping, Sequence, Union

LE = "<="
EQ = "="
GE = ">="
RELATIONS = (LE, EQ, GE)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

Number = Union[int, Fraction, str]


def as_fraction(value: Number) -> Fraction:
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(value)


def format_rational(q: Fraction) -> str:
    """Serialise as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text or any(ch in text for ch in ".eE"):
        raise ValueError(f"not a rational of the form p/q: {text!r}")
    return Fraction(text)


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    rel: str
    rhs: Fraction

    def activity(self, x: Sequence[Fraction]) -> Fraction:
        return sum((a * v for a, v in zip(self.coeffs, x) if a), Fraction(0))

    def holds(self, x: Sequence[Fraction]) -> bool:
        lhs = self.activity(x)
        if self.rel == LE:
            return lhs <= self.rhs
        if self.rel == GE:
            return lhs >= self.rhs
        return lhs == self.rhs

    def slack(self, x: Sequence[Fraction]) -> Fraction:
        """Nonnegative slack for inequalities; signed residual for equalities."""
        lhs = self.activity(x)
        return self.rhs - lhs if self.rel == LE else lhs - self.rhs


class LinearProgram:
    """``maximize objective.x`` over a list of linear constraints."""

    def __init__(
        self,
        num_vars: int,
        objective: Sequence[Number] | Mapping[int, Number] | None = None,
        nonneg: Sequence[bool] | bool = True,
    ):
        if num_vars < 1:
            raise ValueError("a linear program needs at least one variable")
        self.num_vars = num_vars
        self.objective = self._row(objective) if objective is not None else (Fraction(0),) * num_vars
        if isinstance(nonneg, bool):
            nonneg = [nonneg] * num_vars
        if len(nonneg) != num_vars:
            raise ValueError(f"expected {num_vars} nonnegativity flags, got {len(nonneg)}")
        self.nonneg = tuple(bool(f) for f in nonneg)
        self.constraints: list[Constraint] = []

    def _row(self, coeffs: Sequence[Number] | Mapping[int, Number]) -> tuple[Fraction, ...]:
        if isinstance(coeffs, Mapping):
            row = [Fraction(0)] * self.num_vars
            for j, v in coeffs.items():
                if not 0 <= j < self.num_vars:
                    raise IndexError(f"variable index {j} out of range 0..{self.num_vars - 1}")
                row[j] = as_fraction(v)
            return tuple(row)
        if len(coeffs) != self.num_vars:
            raise ValueError(f"row has {len(coeffs)} coefficients, expected {self.num_vars}")
        return tuple(as_fraction(v) for v in coeffs)

    def add(self, coeffs: Sequence[Number] | Mapping[int, Number], rel: str, rhs: Number) -> int:
        """Append a constraint and return its index."""
        if rel not in RELATIONS:
            raise ValueError(f"unknown relation {rel!r}")
        self.constraints.append(Constraint(self._row(coeffs), rel, as_fraction(rhs)))
        return len(self.constraints) - 1

    def copy(self) -> "LinearProgram":
        other = LinearProgram(self.num_vars, self.objective, self.nonneg)
        other.constraints = list(self.constraints)
        return other

    def with_objective(self, objective: Sequence[Number] | Mapping[int, Number]) -> "LinearProgram":
        other = self.copy()
        other.objective = other._row(objective)
        return other

    def is_feasible_point(self, x: Sequence[Fraction]) -> bool:
        if len(x) != self.num_vars:
            return False
        if any(f and v < 0 for f, v in zip(self.nonneg, x)):
            return False
        return all(c.holds(x) for c in self.constraints)

    def value_at(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x) if c), Fraction(0))

    def __repr__(self) -> str:
        return f"LinearProgram(num_vars={self.num_vars}, constraints={len(self.constraints)})"


@dataclass(frozen=True)
class LpOutcome:
    status: str
    value: Fraction | None = None
    solution: tuple[Fraction, ...] | None = None
    duals: tuple[Fraction, ...] | None = None
    reduced: tuple[Fraction, ...] | None = None
    # infeasible programs: multipliers y with sum y_i a_i - r = 0 and sum y_i b_i < 0
    farkas: tuple[Fraction, ...] | None = None
    farkas_reduced: tuple[Fraction, ...] | None = None
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class CertificationError(AssertionError):
    pass


class AuditLog:
    """Solves seen inside an :func:`audit` block.

    Without a ``check`` the ``(lp, outcome)`` pairs are kept and iterable.
    With one, each pair is handed to ``check`` as soon as it is solved and
    only the count and any exceptions it raised are kept.
    """

    def __init__(self, check=None):
        self.check = check
        self.count = 0
        self.pairs: list[tuple[LinearProgram, LpOutcome]] = []
        self.failures: list[tuple[LinearProgram, LpOutcome, Exception]] = []

    def add(self, lp: LinearProgram, outcome: LpOutcome) -> None:
        self.count += 1
        if self.check is None:
            self.pairs.append((lp, outcome))
            return
        try:
            self.check(lp, outcome)
        except Exception as exc:  # recorded, reported by the caller
            self.failures.append((lp, outcome, exc))

    def __len__(self) -> int:
        return self.count

    def __iter__(self):
        return iter(self.pairs)


_audit_log: ContextVar[list | None] = ContextVar("exactlp_audit", default=None)


@contextmanager
def audit(check=None) -> Iterator[AuditLog]:
    """Record every program solved inside the block (nested blocks all see it)."""
    log = AuditLog(check)
    outer = _audit_log.get() or []
    token = _audit_log.set([*outer, log])
    try:
        yield log
    finally:
        _audit_log.reset(token)


def _record(lp: LinearProgram, outcome: LpOutcome) -> None:
    for log in _audit_log.get() or ():
        log.add(lp, outcome)


# --------------------------------------------------------------------------
# normalisation


@dataclass
class _Row:
    idx: list[int]
    val: list[int]
    rhs: int
    equality: bool
    origin: int  # constraint index, or -(j + 1) for the bound row of variable j
    factor: Fraction  # normalised row = factor * original row


def _normalise(lp: LinearProgram) -> list[_Row]:
    rows = []
    for i, con in enumerate(lp.constraints):
        sign = -1 if con.rel == GE else 1
        denom = lcm(*(a.denominator for a in con.coeffs), con.rhs.denominator)
        factor = Fraction(sign * denom)
        idx, val = [], []
        for j, a in enumerate(con.coeffs):
            if a:
                idx.append(j)
                val.append(int(a * factor))
        rows.append(_Row(idx, val, int(con.rhs * factor), con.rel == EQ, i, factor))
    for j, flag in enumerate(lp.nonneg):
        if flag:
            rows.append(_Row([j], [-1], 0, False, -(j + 1), Fraction(1)))
    return rows


class _DualSimplex:
    """Revised simplex on ``min b.y  s.t.  A^T y = c, y_ineq >= 0``."""

    def __init__(self, num_vars: int, rows: list[_Row], objective: Sequence[Fraction]):
        self.m = num_vars
        self.sigma = [(-1 if c < 0 else 1) for c in objective]
        self.rhs = [abs(c) for c in objective]
        # dual columns: one per inequality row, two per equality row
        cols_idx, cols_val, costs, owner = [], [], [], []
        for r, row in enumerate(rows):
            signed = [v * self.sigma[j] for j, v in zip(row.idx, row.val)]
            cols_idx.append(row.idx)
            cols_val.append(signed)
            costs.append(row.rhs)
            owner.append((r, 1))
            if row.equality:
                cols_idx.append(row.idx)
                cols_val.append([-v for v in signed])
                costs.append(-row.rhs)
                owner.append((r, -1))
        self.cols_idx = cols_idx
        self.cols_val = cols_val
        self.costs = costs
        self.owner = owner
        self.n = len(costs)
        self.pivots = 0

    def column(self, j: int) -> list[Fraction]:
        col = [Fraction(0)] * self.m
        if j >= self.n:
            col[j - self.n] = Fraction(1)
        else:
            for r, v in zip(self.cols_idx[j], self.cols_val[j]):
                col[r] = Fraction(v)
        return col

    def run(self) -> tuple[str, object]:
        m = self.m
        # phase 1: artificial identity basis
        self.basis = [self.n + r for r in range(m)]
        self.binv = [[Fraction(int(r == c)) for c in range(m)] for r in range(m)]
        self.xb = [Fraction(v) for v in self.rhs]
        phase1_cost = lambda j: 1 if j >= self.n else 0  # noqa: E731
        status, _ = self._iterate(phase1_cost, allow_artificial=False)
        infeasibility = sum((x for j, x in zip(self.basis, self.xb) if j >= self.n), Fraction(0))
        if infeasibility > 0:
            return "dual_infeasible", None
        self._drive_out_artificials()
        phase2_cost = lambda j: self.costs[j] if j < self.n else 0  # noqa: E731
        status, ray = self._iterate(phase2_cost, allow_artificial=False)
        if status == "unbounded":
            return "dual_unbounded", ray
        return "optimal", None

    def _pi(self, cost) -> list[Fraction]:
        cb = [Fraction(cost(j)) for j in self.basis]
        return [sum((cb[r] * self.binv[r][c] for r in range(self.m) if cb[r]), Fraction(0)) for c in range(self.m)]

    def _iterate(self, cost, allow_artificial: bool) -> tuple[str, object]:
        bland = False
        while True:
            pi = self._pi(cost)
            scale = lcm(*(p.denominator for p in pi)) if pi else 1
            pint = [int(p * scale) for p in pi]
            entering = None
            best = 0
            limit = self.n + (self.m if allow_artificial else 0)
            in_basis = set(self.basis)
            for j in range(limit):
                if j in in_basis:
                    continue
                if j < self.n:
                    d = cost(j) * scale - sum(pint[r] * v for r, v in zip(self.cols_idx[j], self.cols_val[j]))
                else:
                    d = cost(j) * scale - pint[j - self.n]
                if d < 0:
                    if bland:
                        entering = j
                        break
                    if d < best:
                        best, entering = d, j
            if entering is None:
                return "optimal", None
            col = self.column(entering)
            u = [sum((self.binv[r][c] * col[c] for c in range(self.m) if col[c]), Fraction(0)) for r in range(self.m)]
            leave = None
            ratio = None
            for r in range(self.m):
                if u[r] > 0:
                    t = self.xb[r] / u[r]
                    if leave is None or t < ratio or (t == ratio and self.basis[r] < self.basis[leave]):
                        leave, ratio = r, t
            if leave is None:
                return "unbounded", (entering, u)
            self._pivot(leave, entering, u)
            bland = ratio == 0

    def _pivot(self, r: int, j: int, u: list[Fraction]) -> None:
        m = self.m
        piv = u[r]
        row_r = [v / piv for v in self.binv[r]]
        x_r = self.xb[r] / piv
        for i in range(m):
            if i == r or not u[i]:
                continue
            f = u[i]
            bi = self.binv[i]
            for c in range(m):
                if row_r[c]:
                    bi[c] -= f * row_r[c]
            self.xb[i] -= f * x_r
        self.binv[r] = row_r
        self.xb[r] = x_r
        self.basis[r] = j
        self.pivots += 1

    def _drive_out_artificials(self) -> None:
        for r in range(self.m):
            if self.basis[r] < self.n:
                continue
            in_basis = set(self.basis)
            for j in range(self.n):
                if j in in_basis:
                    continue
                col = self.column(j)
                u = [sum((self.binv[i][c] * col[c] for c in range(self.m) if col[c]), Fraction(0)) for i in range(self.m)]
                if u[r] != 0:
                    self._pivot(r, j, u)
                    break

    def dual_values(self) -> list[Fraction]:
        y = [Fraction(0)] * self.n
        for j, x in zip(self.basis, self.xb):
            if j < self.n:
                y[j] = x
        return y

    def primal_point(self) -> list[Fraction]:
        pi = self._pi(lambda j: self.costs[j] if j < self.n else 0)
        return [p * s for p, s in zip(pi, self.sigma)]


def _row_multipliers(lp: LinearProgram, rows: list[_Row], engine: _DualSimplex, y_cols: list[Fraction]):
    """Map dual column values back to per-constraint and per-bound multipliers."""
    per_row = [Fraction(0)] * len(rows)
    for j, v in enumerate(y_cols):
        if v:
            r, sgn = engine.owner[j]
            per_row[r] += sgn * v
    duals = [Fraction(0)] * len(lp.constraints)
    reduced = [Fraction(0)] * lp.num_vars
    for row, v in zip(rows, per_row):
        if row.origin >= 0:
            duals[row.origin] = v * row.factor
        else:
            reduced[-row.origin - 1] = v
    return tuple(duals), tuple(reduced)


def _solve_raw(lp: LinearProgram) -> LpOutcome:
    rows = _normalise(lp)
    engine = _DualSimplex(lp.num_vars, rows, lp.objective)
    status, ray = engine.run()
    if status == "optimal":
        x = tuple(engine.primal_point())
        duals, reduced = _row_multipliers(lp, rows, engine, engine.dual_values())
        return LpOutcome(OPTIMAL, lp.value_at(x), x, duals, reduced, pivots=engine.pivots)
    if status == "dual_unbounded":
        entering, u = ray
        direction = [Fraction(0)] * engine.n
        direction[entering] = Fraction(1)
        for r, j in enumerate(engine.basis):
            if j < engine.n:
                direction[j] -= u[r]
        farkas, fred = _row_multipliers(lp, rows, engine, direction)
        return LpOutcome(INFEASIBLE, farkas=farkas, farkas_reduced=fred, pivots=engine.pivots)
    # dual infeasible: the primal is unbounded or infeasible
    probe = _solve_raw(lp.with_objective([0] * lp.num_vars))
    if probe.status == INFEASIBLE:
        return probe
    return LpOutcome(UNBOUNDED, solution=probe.solution, pivots=engine.pivots + probe.pivots)


def solve(lp: LinearProgram) -> LpOutcome:
    """Solve exactly. Infeasibility and unboundedness are reported via ``status``."""
    outcome = _solve_raw(lp)
    _record(lp, outcome)
    return outcome


def feasible(lp: LinearProgram) -> LpOutcome:
    """Find any feasible point (the objective is ignored)."""
    return solve(lp.with_objective([0] * lp.num_vars))


def _slack_objective(lp: LinearProgram, target: int | None, variable: int | None):
    if (target is None) == (variable is None):
        raise ValueError("give exactly one of target= or variable=")
    if variable is not None:
        if not 0 <= variable < lp.num_vars:
            raise IndexError(f"variable index {variable} out of range")
        row = [Fraction(0)] * lp.num_vars
        row[variable] = Fraction(1)
        return row, Fraction(0)
    if not 0 <= target < len(lp.constraints):
        raise IndexError(f"constraint index {target} out of range 0..{len(lp.constraints) - 1}")
    con = lp.constraints[target]
    if con.rel == EQ:
        raise ValueError(f"constraint {target} is an equality; only inequalities can be probed")
    if con.rel == GE:
        return list(con.coeffs), -con.rhs
    return [-a for a in con.coeffs], con.rhs


def max_slack_on_face(
    lp: LinearProgram, opt: Number, target: int | None = None, *, variable: int | None = None
) -> tuple[Fraction | None, LpOutcome]:
    """Largest slack of one inequality over the optimal face ``{x feasible, c.x = opt}``.

    Returns ``(None, outcome)`` when the slack is unbounded on the face.
    """
    objective, offset = _slack_objective(lp, target, variable)
    face = lp.with_objective(objective)
    face.add(lp.objective, EQ, opt)
    outcome = solve(face)
    if outcome.status == UNBOUNDED:
        return None, outcome
    if outcome.status != OPTIMAL:
        raise ValueError(f"optimal face is empty at value {opt}")
    return outcome.value + offset, outcome


def probe_tight(lp: LinearProgram, opt: Number, target: int | None = None, *, variable: int | None = None) -> bool:
    """True iff the inequality holds with equality at every optimal solution.

    ``target`` indexes a constraint; ``variable`` names a nonnegativity bound.
    """
    slack, _ = max_slack_on_face(lp, opt, target, variable=variable)
    return slack == 0


# --------------------------------------------------------------------------
# certification, independent of the solver internals


def certify(lp: LinearProgram, outcome: LpOutcome) -> None:
    """Check an outcome against ``lp`` with exact arithmetic; raise on failure.

    Optimal outcomes need a feasible primal point and a feasible dual with
    matching objective.  Infeasible outcomes need a Farkas certificate.
    """
    n = lp.num_vars
    if outcome.status == OPTIMAL:
        x, y, r = outcome.solution, outcome.duals, outcome.reduced
        if not lp.is_feasible_point(x):
            raise CertificationError("primal point violates a constraint")
        if lp.value_at(x) != outcome.value:
            raise CertificationError("reported value differs from c.x")
        _check_multipliers(lp, y, r, lp.objective)
        dual_value = sum((yi * c.rhs for yi, c in zip(y, lp.constraints) if yi), Fraction(0))
        if dual_value != outcome.value:
            raise CertificationError(f"duality gap: primal {outcome.value}, dual {dual_value}")
    elif outcome.status == INFEASIBLE:
        y, r = outcome.farkas, outcome.farkas_reduced
        _check_multipliers(lp, y, r, [Fraction(0)] * n)
        dual_value = sum((yi * c.rhs for yi, c in zip(y, lp.constraints) if yi), Fraction(0))
        if not dual_value < 0:
            raise CertificationError("Farkas multipliers do not prove infeasibility")
    elif outcome.status == UNBOUNDED:
        if outcome.solution is None or not lp.is_feasible_point(outcome.solution):
            raise CertificationError("unbounded outcome without a feasible point")
    else:
        raise CertificationError(f"unknown status {outcome.status!r}")


def _check_multipliers(lp, y, r, target) -> None:
    if y is None or r is None or len(y) != len(lp.constraints) or len(r) != lp.num_vars:
        raise CertificationError("multipliers missing or of the wrong length")
    for yi, c in zip(y, lp.constraints):
        if (c.rel == LE and yi < 0) or (c.rel == GE and yi > 0):
            raise CertificationError(f"multiplier {yi} has the wrong sign for a {c.rel} row")
    for rj, flag in zip(r, lp.nonneg):
        if rj < 0 or (rj and not flag):
            raise CertificationError("reduced cost on a free variable or negative reduced cost")
    for j in range(lp.num_vars):
        combo = sum((yi * c.coeffs[j] for yi, c in zip(y, lp.constraints) if yi), Fraction(0)) - r[j]
        if combo != target[j]:
            raise CertificationError(f"multipliers do not reproduce the objective at variable {j}")


class RowSpace:
    """Incrementally maintained span of exact row vectors (row echelon form)."""

    def __init__(self, dim: int):
        self.dim = dim
        self._rows: list[tuple[int, list[Fraction]]] = []  # (pivot column, normalised row)

    @property
    def rank(self) -> int:
        return len(self._rows)

    def _reduce(self, v: Sequence[Number]) -> list[Fraction]:
        v = [Fraction(a) for a in v]
        for col, row in self._rows:
            f = v[col]
            if f:
                # back-substitution may leave entries left of the pivot, so sweep the whole row
                for k in range(self.dim):
                    if row[k]:
                        v[k] -= f * row[k]
        return v

    def __contains__(self, v: Sequence[Number]) -> bool:
        return not any(self._reduce(v))

    def add(self, v: Sequence[Number]) -> bool:
        """Add ``v``; return False when it was already in the span."""
        r = self._reduce(v)
        col = next((k for k, a in enumerate(r) if a), None)
        if col is None:
            return False
        piv = r[col]
        r = [a / piv for a in r]
        # keep rows fully reduced so that _reduce needs one pass
        for i, (c, row) in enumerate(self._rows):
            f = row[col]
            if f:
                self._rows[i] = (c, [a - f * b for a, b in zip(row, r)])
        self._rows.append((col, r))
        return True
