"""Exact two-phase simplex over the rationals.

Solves  maximize c.x  subject to mixed <=, =, >= constraints and x >= 0,
with every feasibility and optimality decision made in Fraction
arithmetic.

Constraints are canonicalized so that rows with a right-hand side of the
correct sign start out slack-basic; artificials (and hence phase 1) only
appear for rows that genuinely exclude the origin.  Two engines share
that canonical form:

* a float simplex that merely proposes an optimal basis, whose exact
  refactorization is then checked entry by entry (basic solution
  nonnegative, reduced costs nonnegative, artificials at zero), the
  fast path on the heavily degenerate entropy polytopes;
* a sparse rational tableau with Dantzig pricing, a lexicographic ratio
  test, and Bland's rule after degenerate stalls, which terminates from
  any start and is the authority whenever the proposal fails.

A proposed basis is never trusted: if any exact check fails the solver
falls back to the rational tableau, so floats never decide anything.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = ["LpSolution", "solve_lp"]

_ZERO = Fraction(0)
_ONE = Fraction(1)

LESS = "<="
EQUAL = "="
GREATER = ">="

# Consecutive degenerate pivots tolerated before Bland's rule engages.
_STALL_LIMIT = 60
# Size guards for the float proposal stage: the dense float tableau and
# the exact dense core of the refactorization must stay tractable.
_ACCEL_CELL_LIMIT = 20_000_000
_ACCEL_CORE_LIMIT = 400
_FLOAT_EPS = 1e-9
_FLOAT_MAX_PIVOTS = 50_000


@dataclass(frozen=True)
class LpSolution:
    """Outcome of a solve.

    ``duals`` are oriented with the original constraints: nonnegative for
    <=, nonpositive for >=, unrestricted for equalities.  For a maximum,
    sum(duals[i] * rhs[i]) equals ``value``.
    """

    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Fraction | None = None
    primal: tuple[Fraction, ...] | None = None
    duals: tuple[Fraction, ...] | None = None


@dataclass
class _Canonical:
    """<=-rows with rhs >= 0 (slack-basic) and >=-rows with rhs > 0."""

    n_vars: int
    rows: list[dict[int, Fraction]]
    rhs: list[Fraction]
    rel: list[str]
    parts: list[list[tuple[int, int]]]  # original i -> [(canonical row, sign)]
    slack_col: list[int]
    art_col: list[int | None]
    ncols: int
    artificial: set[int]

    @property
    def m(self) -> int:
        return len(self.rows)

    def column(self, j: int) -> list[tuple[int, Fraction]]:
        """Sparse entries of tableau column j at the initial basis."""
        if j < self.n_vars:
            return [(i, row[j]) for i, row in enumerate(self.rows) if j in row]
        for i in range(self.m):
            if self.slack_col[i] == j:
                return [(i, _ONE if self.rel[i] == LESS else -_ONE)]
            if self.art_col[i] == j:
                return [(i, _ONE)]
        raise IndexError(j)


def _canonicalize(n_vars: int, constraints) -> _Canonical:
    rows: list[dict[int, Fraction]] = []
    rhs: list[Fraction] = []
    rel: list[str] = []
    parts: list[list[tuple[int, int]]] = []
    for coeffs, r, b in constraints:
        if r not in (LESS, EQUAL, GREATER):
            raise ValueError(f"unknown relation {r!r}")
        row = _sparse(coeffs)
        if any(j >= n_vars or j < 0 for j in row):
            raise ValueError("constraint references an unknown variable")
        b = Fraction(b)
        pieces = [(row, LESS, b), (row, GREATER, b)] if r == EQUAL else [(row, r, b)]
        own: list[tuple[int, int]] = []
        for a, rr, bb in pieces:
            sign = 1
            if (rr == LESS and bb < 0) or (rr == GREATER and bb <= 0):
                a = {j: -v for j, v in a.items()}
                bb = -bb
                rr = GREATER if rr == LESS else LESS
                sign = -1
            else:
                a = dict(a)
            own.append((len(rows), sign))
            rows.append(a)
            rhs.append(bb)
            rel.append(rr)
        parts.append(own)
    m = len(rows)
    slack_col = [0] * m
    art_col: list[int | None] = [None] * m
    ncols = n_vars
    for i in range(m):
        slack_col[i] = ncols
        ncols += 1
    for i in range(m):
        if rel[i] == GREATER:
            art_col[i] = ncols
            ncols += 1
    artificial = {c for c in art_col if c is not None}
    return _Canonical(
        n_vars, rows, rhs, rel, parts, slack_col, art_col, ncols, artificial
    )


# ---------------------------------------------------------------------------
# Exact sparse tableau (the authoritative engine)


class _Tableau:
    """Sparse row tableau with an incrementally maintained price row."""

    def __init__(self, can: _Canonical):
        self.ncols = can.ncols
        self.rows: list[dict[int, Fraction]] = []
        self.rhs: list[Fraction] = list(can.rhs)
        self.basis: list[int] = []
        for i in range(can.m):
            row = dict(can.rows[i])
            row[can.slack_col[i]] = _ONE if can.rel[i] == LESS else -_ONE
            if can.art_col[i] is not None:
                row[can.art_col[i]] = _ONE
                self.basis.append(can.art_col[i])
            else:
                self.basis.append(can.slack_col[i])
            self.rows.append(row)

    @property
    def m(self) -> int:
        return len(self.rows)

    def price(self, cost: list[Fraction]) -> tuple[list[Fraction], Fraction]:
        """d[j] = c_B B^-1 A_j - c_j plus the objective value c_B B^-1 b."""
        d = [-c for c in cost]
        value = _ZERO
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                for j, v in self.rows[i].items():
                    d[j] += cb * v
                value += cb * self.rhs[i]
        return d, value

    def pivot(self, d: list[Fraction], r: int, c: int) -> Fraction:
        prow = self.rows[r]
        piv = prow[c]
        if piv != 1:
            inv = _ONE / piv
            for k in prow:
                prow[k] *= inv
            self.rhs[r] *= inv
        items = list(prow.items())
        prhs = self.rhs[r]
        for i, row in enumerate(self.rows):
            if row is prow:
                continue
            f = row.get(c)
            if not f:
                continue
            for k, v in items:
                new = row.get(k, _ZERO) - f * v
                if new:
                    row[k] = new
                elif k in row:
                    del row[k]
            self.rhs[i] -= f * prhs
        f = d[c]
        gain = _ZERO
        if f:
            for k, v in items:
                d[k] -= f * v
            gain = -f * prhs
        self.basis[r] = c
        return gain

    def _lex_less(self, i: int, j: int, c: int) -> bool:
        """Is row i / a_ic lexicographically below row j / a_jc?"""
        ai = self.rows[i][c]
        aj = self.rows[j][c]
        ri, rj = self.rows[i], self.rows[j]
        for k in sorted(set(ri) | set(rj)):
            vi = ri.get(k, _ZERO) / ai
            vj = rj.get(k, _ZERO) / aj
            if vi != vj:
                return vi < vj
        return False

    def ratio_leave(self, c: int, bland: bool) -> int:
        best: Fraction | None = None
        ties: list[int] = []
        for i, row in enumerate(self.rows):
            a = row.get(c)
            if a is None or a <= 0:
                continue
            ratio = self.rhs[i] / a
            if best is None or ratio < best:
                best = ratio
                ties = [i]
            elif ratio == best:
                ties.append(i)
        if not ties:
            return -1
        if len(ties) == 1:
            return ties[0]
        if bland:
            return min(ties, key=lambda i: self.basis[i])
        leave = ties[0]
        for i in ties[1:]:
            if self._lex_less(i, leave, c):
                leave = i
        return leave

    def run(self, d: list[Fraction], allowed: list[int]) -> str:
        """Dantzig pricing with lexicographic ties; Bland's rule takes
        over after a degenerate stall, which rules out cycling."""
        stalled = 0
        while True:
            bland = stalled >= _STALL_LIMIT
            enter = -1
            if bland:
                for j in allowed:
                    if d[j] < 0:
                        enter = j
                        break
            else:
                worst = _ZERO
                for j in allowed:
                    dj = d[j]
                    if dj < worst:
                        worst = dj
                        enter = j
            if enter < 0:
                return "optimal"
            leave = self.ratio_leave(enter, bland)
            if leave < 0:
                return "unbounded"
            gain = self.pivot(d, leave, enter)
            stalled = 0 if gain > 0 else stalled + 1


def _solve_exact(can: _Canonical, obj: dict[int, Fraction]) -> LpSolution:
    tab = _Tableau(can)
    ncols = can.ncols
    if can.artificial:
        cost1 = [_ZERO] * ncols
        for c in can.artificial:
            cost1[c] = -_ONE
        d1, _ = tab.price(cost1)
        status = tab.run(d1, list(range(ncols)))
        # Phase-1 objective is bounded above by zero, so never unbounded.
        assert status == "optimal"
        _, value1 = tab.price(cost1)
        if value1 != 0:
            return LpSolution("infeasible")
        for i in range(tab.m):
            if tab.basis[i] in can.artificial:
                for j, v in sorted(tab.rows[i].items()):
                    if j not in can.artificial and v:
                        tab.pivot(d1, i, j)
                        break
    cost2 = [_ZERO] * ncols
    for j, c in obj.items():
        cost2[j] = c
    d2, _ = tab.price(cost2)
    allowed = [j for j in range(ncols) if j not in can.artificial]
    if tab.run(d2, allowed) == "unbounded":
        return LpSolution("unbounded")
    primal = [_ZERO] * can.n_vars
    for i, b in enumerate(tab.basis):
        if b < can.n_vars:
            primal[b] = tab.rhs[i]
    _, value = tab.price(cost2)
    duals: list[Fraction] = []
    for own in can.parts:
        y = _ZERO
        for idx, sign in own:
            # Slack prices the row dual for <= rows; the surplus prices
            # its negation, so both orientations read y_i off d2.
            delta = d2[can.slack_col[idx]]
            if can.rel[idx] == GREATER:
                delta = -delta
            y += sign * delta
        duals.append(y)
    return LpSolution("optimal", value, tuple(primal), tuple(duals))


# ---------------------------------------------------------------------------
# Float proposal engine


def _float_basis(can: _Canonical, obj: dict[int, Fraction]) -> list[int] | None:
    """Run the same two-phase simplex in float64 and return the final
    basis if it looks optimal; None on any doubt."""
    m, ncols = can.m, can.ncols
    tab = np.zeros((m, ncols + 1))
    basis = np.empty(m, dtype=np.int64)
    for i in range(m):
        for j, v in can.rows[i].items():
            tab[i, j] = float(v)
        tab[i, can.slack_col[i]] = 1.0 if can.rel[i] == LESS else -1.0
        if can.art_col[i] is not None:
            tab[i, can.art_col[i]] = 1.0
            basis[i] = can.art_col[i]
        else:
            basis[i] = can.slack_col[i]
        tab[i, -1] = float(can.rhs[i])

    def price(cost: np.ndarray) -> np.ndarray:
        d = -cost.copy()
        for i in range(m):
            cb = cost[basis[i]]
            if cb:
                d += cb * tab[i, :-1]
        return d

    def run(d: np.ndarray, allowed: np.ndarray) -> str:
        stalled = 0
        for _ in range(_FLOAT_MAX_PIVOTS):
            masked = np.where(allowed, d, np.inf)
            if stalled < _STALL_LIMIT:
                enter = int(masked.argmin())
                if masked[enter] >= -_FLOAT_EPS:
                    return "optimal"
            else:
                candidates = np.nonzero(masked < -_FLOAT_EPS)[0]
                if candidates.size == 0:
                    return "optimal"
                enter = int(candidates[0])
            col = tab[:, enter]
            pos = col > _FLOAT_EPS
            if not pos.any():
                return "unbounded"
            ratios = np.where(pos, tab[:, -1] / np.where(pos, col, 1.0), np.inf)
            leave = int(ratios.argmin())
            gain = d[enter] * ratios[leave]
            prow = tab[leave] / col[leave]
            tab[leave] = prow
            factors = col.copy()
            factors[leave] = 0.0
            touched = np.nonzero(np.abs(factors) > 1e-13)[0]
            if touched.size:
                tab[touched] -= np.outer(factors[touched], prow)
            d -= d[enter] * prow[:-1]
            basis[leave] = enter
            stalled = 0 if abs(gain) > _FLOAT_EPS else stalled + 1
        return "stuck"

    if can.artificial:
        cost1 = np.zeros(ncols)
        for c in can.artificial:
            cost1[c] = -1.0
        if run(price(cost1), np.ones(ncols, dtype=bool)) != "optimal":
            return None
        art_level = sum(
            tab[i, -1] for i in range(m) if basis[i] in can.artificial
        )
        if art_level > 1e-7:
            return None  # float thinks infeasible; let the exact engine decide
    cost2 = np.zeros(ncols)
    for j, c in obj.items():
        cost2[j] = float(c)
    allowed = np.ones(ncols, dtype=bool)
    for c in can.artificial:
        allowed[c] = False
    if run(price(cost2), allowed) != "optimal":
        return None
    return [int(b) for b in basis]


# ---------------------------------------------------------------------------
# Exact refactorization of a proposed basis


def _solve_dense(mat: list[list[Fraction]], rhs_cols: list[list[Fraction]]):
    """Solve mat . X = rhs for several right-hand sides; None if singular."""
    n = len(mat)
    width = len(rhs_cols)
    aug = [list(mat[i]) + [col[i] for col in rhs_cols] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            return None
        if piv != col:
            aug[col], aug[piv] = aug[piv], aug[col]
        inv = _ONE / aug[col][col]
        if inv != 1:
            aug[col] = [x * inv for x in aug[col]]
        prow = aug[col]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], prow)]
    return [[aug[i][n + t] for i in range(n)] for t in range(width)]


def _exact_from_basis(
    can: _Canonical, basis: list[int], obj: dict[int, Fraction]
) -> LpSolution | None:
    """Check a proposed basis exactly; return the solution or None.

    Most basic columns are unit slack/artificial columns, so the m x m
    refactorization collapses to a dense system over just the structural
    basic columns and the rows they must cover.
    """
    m = can.m
    if len(basis) != m or len(set(basis)) != m:
        return None
    cost = [_ZERO] * can.ncols
    for j, c in obj.items():
        cost[j] = c

    unit_row: dict[int, tuple[int, Fraction]] = {}  # row -> (basis pos, coeff)
    structural: list[tuple[int, int]] = []  # (basis pos, column)
    for pos, j in enumerate(basis):
        if j < can.n_vars:
            structural.append((pos, j))
            continue
        ((row, coeff),) = can.column(j)
        if row in unit_row:
            return None  # two unit columns on one row: singular basis
        unit_row[row] = (pos, coeff)
    free_rows = [i for i in range(m) if i not in unit_row]
    k = len(structural)
    if len(free_rows) != k or k > _ACCEL_CORE_LIMIT:
        return None

    # Dense k x k core: structural columns restricted to uncovered rows.
    row_pos = {r: t for t, r in enumerate(free_rows)}
    core = [[_ZERO] * k for _ in range(k)]
    for t, (pos, j) in enumerate(structural):
        for i, v in can.column(j):
            if i in row_pos:
                core[row_pos[i]][t] = v
    rhs_core = [can.rhs[i] for i in free_rows]
    cost_core = [cost[j] for _, j in structural]
    solved = _solve_dense(core, [rhs_core])
    if solved is None:
        return None
    (x_struct,) = solved
    core_t = [[core[r][t] for r in range(k)] for t in range(k)]
    solved = _solve_dense(core_t, [cost_core])
    if solved is None:
        return None
    (y_core,) = solved

    # Unit-covered components: slacks absorb what the structural part
    # leaves of each covered row; their rows price at zero.
    x_basic = [_ZERO] * m
    for t, (pos, _) in enumerate(structural):
        x_basic[pos] = x_struct[t]
    struct_cols = {j: t for t, (_, j) in enumerate(structural)}
    for i, (pos, coeff) in unit_row.items():
        residual = can.rhs[i]
        for j, t in struct_cols.items():
            v = can.rows[i].get(j)
            if v:
                residual -= v * x_struct[t]
        x_basic[pos] = residual / coeff
    if any(x < 0 for x in x_basic):
        return None
    for pos, j in enumerate(basis):
        if j in can.artificial and x_basic[pos] != 0:
            return None

    y = [_ZERO] * m
    for r, t in row_pos.items():
        y[r] = y_core[t]
    in_basis = set(basis)
    for j in range(can.n_vars):
        if j in in_basis:
            continue
        reduced = sum((y[i] * v for i, v in can.column(j) if y[i]), _ZERO) - cost[j]
        if reduced < 0:
            return None
    for i in range(m):
        # Nonbasic slack/surplus columns price to +/- y_i.
        col = can.slack_col[i]
        if col not in in_basis:
            reduced = y[i] if can.rel[i] == LESS else -y[i]
            if reduced < 0:
                return None
    value = sum((y[i] * can.rhs[i] for i in range(m) if y[i]), _ZERO)
    primal = [_ZERO] * can.n_vars
    for pos, j in enumerate(basis):
        if j < can.n_vars:
            primal[j] = x_basic[pos]
    duals: list[Fraction] = []
    for own in can.parts:
        total = _ZERO
        for idx, sign in own:
            total += sign * y[idx]
        duals.append(total)
    return LpSolution("optimal", value, tuple(primal), tuple(duals))


def solve_lp(n_vars: int, objective, constraints, accelerate: bool = True) -> LpSolution:
    """Maximize ``objective . x`` over x >= 0 under the constraints.

    Args:
        n_vars: number of structural variables.
        objective: sparse [(var, coeff)] pairs, a dict, or a dense
            sequence of length n_vars.
        constraints: triples (coeffs, relation, rhs) with coeffs in any
            of the same forms and relation one of "<=", "=", ">=".
        accelerate: try the float-proposed basis first; the proposal is
            accepted only after full exact verification.

    Returns:
        LpSolution; primal and duals are present only when optimal.
    """
    obj = _sparse(objective)
    if any(j >= n_vars or j < 0 for j in obj):
        raise ValueError("objective references an unknown variable")
    can = _canonicalize(n_vars, constraints)
    if accelerate and 0 < can.m * (can.ncols + 1) <= _ACCEL_CELL_LIMIT:
        proposal = _float_basis(can, obj)
        if proposal is not None:
            sol = _exact_from_basis(can, proposal, obj)
            if sol is not None:
                return sol
    return _solve_exact(can, obj)


def _sparse(coeffs) -> dict[int, Fraction]:
    """Accept dense sequences, dicts, or sparse [(index, value)] lists."""
    if isinstance(coeffs, dict):
        items = list(coeffs.items())
    else:
        items = list(coeffs)
        if items and not isinstance(items[0], tuple):
            items = list(enumerate(items))
    out: dict[int, Fraction] = {}
    for j, c in items:
        c = Fraction(c)
        if c:
            out[j] = out.get(j, _ZERO) + c
            if not out[j]:
                del out[j]
    return out
