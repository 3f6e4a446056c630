"""Constructive side of the capacity results: the rate-1/2 scheme, its
randomness reduction, and the two built-in demo instances.

The rate-1/2 construction assigns every vertex one symbol  s + i * z_m
over the smallest prime field that keeps the coefficients i distinct and
nonzero, where m indexes the vertex's qualified component and i its
unqualified component inside it.  The randomness reduction replaces the
per-component noise symbols by generic combinations of two base symbols.

The built-in 6-vertex instance additionally ships a rate-2/5 scheme with
4 secret bits, 9 noise bits and 5-bit signals arranged in sliding noise
windows; its secret rows are pinned by alignment constraints up to a
small exhaustive search (re-run by the test suite) whose result is frozen
here as data.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gf import GfMatrix, is_prime
from .instance import (
    CdsInstance,
    DegenerateInstanceError,
    FeasibilityResult,
    half_rate_feasible,
    is_non_degenerate,
    qualified_components,
    unqualified_components_within,
)
from .scheme import LinearScheme, verify_linear

__all__ = [
    "SynthesisPlan",
    "ComponentPlan",
    "InfeasibleInstanceError",
    "plan_synthesis",
    "synthesize_half_rate",
    "reduce_randomness",
    "builtin_fig2_instance",
    "builtin_fig2_scheme",
    "builtin_example1_instance",
    "builtin_instance",
    "derive_fig2_secret_rows",
    "FIG2_PATH_ORDER",
]


class InfeasibleInstanceError(ValueError):
    """The instance does not admit capacity 1/2; carries the witness."""

    def __init__(self, result: FeasibilityResult):
        self.result = result
        edge = result.witness_edge
        path = result.witness_path
        super().__init__(
            f"capacity 1/2 is not achievable: qualified edge "
            f"{{{edge[0]}, {edge[1]}}} is internal to the unqualified path "
            f"({', '.join(path.vertices)})"
        )


def next_prime_above(n: int) -> int:
    """Smallest prime strictly greater than n."""
    candidate = max(n + 1, 2)
    while not is_prime(candidate):
        candidate += 1
    return candidate


@dataclass(frozen=True)
class ComponentPlan:
    block: tuple[str, ...]
    unqualified_blocks: tuple[tuple[str, ...], ...]

    @property
    def u_count(self) -> int:
        return len(self.unqualified_blocks)


@dataclass(frozen=True)
class SynthesisPlan:
    """Component decomposition driving the rate-1/2 construction.

    Component m (1-based) contributes noise symbol z_m; the i-th
    unqualified block inside it uses coefficient i, so coefficients must
    stay distinct and nonzero mod p: p > max(U_1, ..., U_M).
    """

    components: tuple[ComponentPlan, ...]
    p: int

    @property
    def m_count(self) -> int:
        return len(self.components)

    @property
    def u_counts(self) -> tuple[int, ...]:
        return tuple(c.u_count for c in self.components)

    def position(self, v: str) -> tuple[int, int]:
        """(m, i), both 1-based, of the vertex's component and block."""
        for m, comp in enumerate(self.components, start=1):
            for i, blk in enumerate(comp.unqualified_blocks, start=1):
                if v in blk:
                    return m, i
        raise KeyError(v)


def plan_synthesis(inst: CdsInstance) -> SynthesisPlan:
    """Decompose a non-degenerate, feasible instance for synthesis."""
    ok, violators = is_non_degenerate(inst)
    if not ok:
        raise DegenerateInstanceError(violators)
    result = half_rate_feasible(inst)
    if not result.feasible:
        raise InfeasibleInstanceError(result)
    comps = []
    for block in qualified_components(inst).blocks:
        unq = unqualified_components_within(inst, block)
        comps.append(ComponentPlan(block, unq.blocks))
    max_u = max((c.u_count for c in comps), default=0)
    return SynthesisPlan(tuple(comps), next_prime_above(max_u))


def _scheme_from_plan(plan: SynthesisPlan, p: int, noise_rows) -> LinearScheme:
    """Assemble the L = 1 scheme given per-vertex noise row vectors."""
    noise_len = len(next(iter(noise_rows.values()))) if noise_rows else 0
    matrices = {
        v: (GfMatrix.from_rows(p, [[1]], 1), GfMatrix.from_rows(p, [row], noise_len))
        for v, row in noise_rows.items()
    }
    return LinearScheme(p, 1, noise_len, matrices)


def synthesize_half_rate(inst: CdsInstance) -> LinearScheme:
    """Build the rate-1/2 scheme: one secret symbol, one noise symbol per
    qualified component, every signal a single symbol s + i * z_m."""
    plan = plan_synthesis(inst)
    m_count = plan.m_count
    rows: dict[str, list[int]] = {}
    for m, comp in enumerate(plan.components, start=1):
        for i, blk in enumerate(comp.unqualified_blocks, start=1):
            row = [0] * m_count
            row[m - 1] = i % plan.p
            for v in blk:
                rows[v] = row
    return _scheme_from_plan(plan, plan.p, rows)


def reduce_randomness(inst: CdsInstance, sch: LinearScheme) -> LinearScheme:
    """Rewrite the synthesized scheme over two base noise symbols.

    Noise symbol z_m for m >= 3 becomes z_1 + (m - 2) z_2; the field may
    grow so the generic combinations stay pairwise independent
    (p > max(U_1, ..., U_M, M - 2)).  Schemes with at most two components
    are already randomness-optimal and are returned unchanged.
    """
    plan = plan_synthesis(inst)
    if sch != synthesize_half_rate(inst):
        raise ValueError("scheme was not produced by synthesize_half_rate for inst")
    m_count = plan.m_count
    if m_count <= 2:
        return sch
    p = next_prime_above(max(max(plan.u_counts), m_count - 2))
    rows: dict[str, list[int]] = {}
    for m, comp in enumerate(plan.components, start=1):
        for i, blk in enumerate(comp.unqualified_blocks, start=1):
            if m == 1:
                row = [i % p, 0]
            elif m == 2:
                row = [0, i % p]
            else:
                row = [i % p, (i * (m - 2)) % p]
            for v in blk:
                rows[v] = row
    return _scheme_from_plan(plan, p, rows)


# ---------------------------------------------------------------------------
# Built-in instances


def builtin_fig2_instance() -> CdsInstance:
    """The 6-vertex instance whose qualified edges form a path and whose
    edge {A2, B2} is internal to an unqualified path; capacity below 1/2."""
    return CdsInstance.from_edges(
        [
            ("q", "A1", "B1"),
            ("q", "B1", "A2"),
            ("q", "A2", "B2"),
            ("q", "B2", "A3"),
            ("q", "A3", "B3"),
            ("u", "B2", "A1"),
            ("u", "A1", "B3"),
            ("u", "B3", "A2"),
            ("u", "B1", "A3"),
        ]
    )


def builtin_example1_instance() -> CdsInstance:
    """An 8-vertex feasible instance with two qualified components."""
    return CdsInstance.from_edges(
        [
            ("q", "A1", "B1"),
            ("q", "B1", "A2"),
            ("q", "A2", "B2"),
            ("q", "B2", "A3"),
            ("q", "A3", "B3"),
            ("q", "A4", "B4"),
            ("u", "B1", "A3"),
            ("u", "A2", "B3"),
            ("u", "A1", "B4"),
            ("u", "B3", "A4"),
            ("u", "B2", "A4"),
        ]
    )


def builtin_instance(name: str) -> CdsInstance:
    builders = {"fig2": builtin_fig2_instance, "example1": builtin_example1_instance}
    if name not in builders:
        raise ValueError(f"unknown built-in instance {name!r}; choose from fig2, example1")
    return builders[name]()


# ---------------------------------------------------------------------------
# The built-in rate-2/5 scheme
#
# Vertices along the qualified path, position k = 0..5; bit j of vertex k
# combines secret row c(k, k + j) with noise bit z_{(k + j) mod 9}.  The
# secret rows below were produced by derive_fig2_secret_rows() and are
# re-derived by the test suite.

FIG2_PATH_ORDER = ("A1", "B1", "A2", "B2", "A3", "B3")
_FIG2_L = 4
_FIG2_LZ = 9
_FIG2_N = 5

# Secret-row table keyed by (path position k, absolute position t),
# rows encoded as 4-bit integers, secret symbol s1 in the high bit.
_FIG2_SECRET_ROWS: dict[tuple[int, int], int] = {
    (0, 0): 0b0000, (0, 1): 0b0000, (0, 2): 0b0000, (0, 3): 0b0000, (0, 4): 0b0000,
    (1, 1): 0b0010, (1, 2): 0b0100, (1, 3): 0b1000, (1, 4): 0b0001, (1, 5): 0b0000,
    (2, 2): 0b1000, (2, 3): 0b1110, (2, 4): 0b0010, (2, 5): 0b0001, (2, 6): 0b0000,
    (3, 3): 0b0000, (3, 4): 0b0000, (3, 5): 0b0010, (3, 6): 0b0100, (3, 7): 0b0000,
    (4, 4): 0b0001, (4, 5): 0b0000, (4, 6): 0b0010, (4, 7): 0b1000, (4, 8): 0b0000,
    (5, 5): 0b0001, (5, 6): 0b0000, (5, 7): 0b0000, (5, 8): 0b0100, (5, 9): 0b0000,
}


def _window(k: int) -> list[int]:
    return [k + j for j in range(_FIG2_N)]


def _fig2_structure():
    """Qualified edges as path positions, unqualified edges likewise, and
    the equality classes forced on (k, t) secret rows by shared noise."""
    pos = {v: k for k, v in enumerate(FIG2_PATH_ORDER)}
    inst = builtin_fig2_instance()
    qual = [tuple(sorted((pos[v], pos[u]))) for v, u in inst.qualified]
    unqual = [tuple(sorted((pos[v], pos[u]))) for v, u in inst.unqualified]
    merges = []
    for k, k2 in unqual:
        for t in _window(k):
            for t2 in _window(k2):
                if t % _FIG2_LZ == t2 % _FIG2_LZ:
                    merges.append(((k, t), (k2, t2)))
    return qual, unqual, merges


def _rank_full(rows: list[int]) -> bool:
    """True iff the 4-bit rows are linearly independent over GF(2)."""
    basis: list[int] = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r == 0:
            return False
        basis.append(r)
    return True


def derive_fig2_secret_rows() -> dict[tuple[int, int], int]:
    """Search for secret rows satisfying the alignment constraints.

    Constraints: shared noise positions of unqualified edges carry equal
    secret rows; vertex B1 carries s4 and then nothing on its last two
    bits; the differences across the (B1, A2) edge decode
    (s1+s2, s2+s3, s3+s4, s4); every qualified edge's four difference
    rows are linearly independent.
    Depth-first over undetermined rows in a fixed order, smallest value
    first, so the result is canonical.
    """
    qual, _, merges = _fig2_structure()
    variables = [(k, t) for k in range(6) for t in _window(k)]

    # Affine relations val(a) ^ offset == val(b), plus fixed values.
    relations: list[tuple[tuple[int, int], tuple[int, int], int]] = [
        (a, b, 0) for a, b in merges
    ]
    decode_rows = {2: 0b1100, 3: 0b0110, 4: 0b0011, 5: 0b0001}
    for t, row in decode_rows.items():
        relations.append(((1, t), (2, t), row))
    fixed = {(1, 4): 0b0001, (1, 5): 0b0000}

    # Union the relation graph into components with offsets from a root.
    offset = {v: None for v in variables}
    comp_root: dict[tuple[int, int], tuple[int, int]] = {}
    adj: dict[tuple[int, int], list[tuple[tuple[int, int], int]]] = {
        v: [] for v in variables
    }
    for a, b, off in relations:
        adj[a].append((b, off))
        adj[b].append((a, off))
    roots = []
    for v in sorted(variables):
        if v in comp_root:
            continue
        roots.append(v)
        stack = [(v, 0)]
        while stack:
            node, off = stack.pop()
            if node in comp_root:
                if offset[node] != off:
                    raise AssertionError("inconsistent alignment constraints")
                continue
            comp_root[node] = v
            offset[node] = off
            for nbr, o in adj[node]:
                stack.append((nbr, off ^ o))

    root_value: dict[tuple[int, int], int | None] = {r: None for r in roots}
    for v, val in fixed.items():
        r = comp_root[v]
        forced = val ^ offset[v]
        if root_value[r] is not None and root_value[r] != forced:
            raise AssertionError("conflicting fixed values")
        root_value[r] = forced

    free_roots = sorted(r for r in roots if root_value[r] is None)

    def value_of(v):
        rv = root_value[comp_root[v]]
        return None if rv is None else rv ^ offset[v]

    def edges_ok() -> bool:
        for k, k2 in qual:
            shared = [t for t in _window(k) if t in _window(k2)]
            rows = []
            for t in shared:
                a, b = value_of((k, t)), value_of((k2, t))
                if a is not None and b is not None:
                    rows.append(a ^ b)
            if not _rank_full(rows):
                return False
        return True

    def dfs(i: int) -> bool:
        if i == len(free_roots):
            return True
        root = free_roots[i]
        for candidate in range(16):
            root_value[root] = candidate
            if edges_ok() and dfs(i + 1):
                return True
        root_value[root] = None
        return False

    if not dfs(0):
        raise AssertionError("no secret-row assignment satisfies the constraints")
    return {v: value_of(v) for v in sorted(variables)}


def _row_bits(row: int) -> list[int]:
    return [(row >> (3 - i)) & 1 for i in range(_FIG2_L)]


def builtin_fig2_scheme() -> LinearScheme:
    """The rate-2/5 scheme for the built-in 6-vertex instance."""
    rows = _FIG2_SECRET_ROWS or derive_fig2_secret_rows()
    matrices = {}
    for k, v in enumerate(FIG2_PATH_ORDER):
        f_rows, h_rows = [], []
        for t in _window(k):
            f_rows.append(_row_bits(rows[(k, t)]))
            h_row = [0] * _FIG2_LZ
            h_row[t % _FIG2_LZ] = 1
            h_rows.append(h_row)
        matrices[v] = (
            GfMatrix.from_rows(2, f_rows, _FIG2_L),
            GfMatrix.from_rows(2, h_rows, _FIG2_LZ),
        )
    sch = LinearScheme(2, _FIG2_L, _FIG2_LZ, matrices)
    report = verify_linear(builtin_fig2_instance(), sch)
    if not report.passed:
        raise AssertionError("built-in rate-2/5 scheme failed verification")
    return sch
