"""Linear CDS schemes over GF(p) and their rank-based verification.

A scheme assigns every vertex v the signal  v = F_v s + H_v z  for a
shared secret s and common noise z.  Because (s, z) is uniform, every
entropy in the model is a matrix rank, so decodability, security and the
two alignment phenomena (noise-space overlap on qualified edges, forced
secret-row agreement on unqualified edges) all reduce to exact rank
computations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .gf import (
    GfMatrix,
    hstack,
    left_kernel,
    matmul,
    neg,
    rank,
    rowspace_intersection_dim,
    vstack,
)
from .instance import QUALIFIED, CdsInstance

__all__ = [
    "LinearScheme",
    "EdgeVerdict",
    "VertexVerdict",
    "VerificationReport",
    "AlignmentReport",
    "RateReport",
    "SchemeFormatError",
    "VerificationFailedError",
    "verify_linear",
    "noise_overlap_dim",
    "check_signal_alignment",
    "path_overlap_lower_bound",
    "alignment_report",
    "rate_report",
    "parse_scheme",
    "format_scheme",
]


class SchemeFormatError(ValueError):
    """Malformed scheme text; carries the 1-based offending line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class VerificationFailedError(ValueError):
    """Raised when an operation requires a scheme that verifies."""


@dataclass(frozen=True)
class LinearScheme:
    """Per-vertex secret/noise precoding pairs over a common field.

    ``matrices[v] = (F_v, H_v)`` with F_v of shape N_v x L and H_v of
    shape N_v x L_Z.
    """

    p: int
    secret_len: int
    noise_len: int
    matrices: dict[str, tuple[GfMatrix, GfMatrix]] = field(repr=False)

    def __post_init__(self):
        if self.secret_len < 1:
            raise ValueError("secret length must be at least 1")
        if self.noise_len < 0:
            raise ValueError("noise length cannot be negative")
        ordered: dict[str, tuple[GfMatrix, GfMatrix]] = {}
        for v in sorted(self.matrices):
            f, h = self.matrices[v]
            if f.p != self.p or h.p != self.p:
                raise ValueError(f"vertex {v}: matrices must be over GF({self.p})")
            if f.rows != h.rows:
                raise ValueError(
                    f"vertex {v}: F has {f.rows} rows but H has {h.rows}"
                )
            if f.cols != self.secret_len:
                raise ValueError(
                    f"vertex {v}: F has {f.cols} columns, expected {self.secret_len}"
                )
            if h.cols != self.noise_len:
                raise ValueError(
                    f"vertex {v}: H has {h.cols} columns, expected {self.noise_len}"
                )
            ordered[v] = (f, h)
        object.__setattr__(self, "matrices", ordered)

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(self.matrices)

    def signal_len(self, v: str) -> int:
        return self.matrices[v][0].rows

    def max_signal_len(self) -> int:
        if not self.matrices:
            raise ValueError("scheme has no signals")
        return max(f.rows for f, _ in self.matrices.values())

    def augmented(self, v: str) -> GfMatrix:
        """The joint precoding [F_v | H_v]."""
        f, h = self.matrices[v]
        return hstack(f, h)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearScheme):
            return NotImplemented
        return (
            self.p == other.p
            and self.secret_len == other.secret_len
            and self.noise_len == other.noise_len
            and self.matrices == other.matrices
        )


def _require_vertices(inst_vertices, sch: LinearScheme) -> None:
    missing = [v for v in inst_vertices if v not in sch.matrices]
    if missing:
        raise ValueError(f"scheme is missing matrices for: {', '.join(missing)}")


@dataclass(frozen=True)
class VertexVerdict:
    secure: bool
    leak_rank: int  # rank([F|H]) - rank(H), in p-ary symbols


@dataclass(frozen=True)
class EdgeVerdict:
    kind: str
    ok: bool
    rank_delta: int  # information rank on qualified edges, leakage on unqualified


@dataclass(frozen=True)
class VerificationReport:
    vertex_verdicts: dict[str, VertexVerdict]
    edge_verdicts: dict[tuple[str, str], EdgeVerdict]
    passed: bool


def _pair_ranks(sch: LinearScheme, v: str, u: str) -> tuple[int, int]:
    """(rank of stacked [F|H], rank of stacked H) for a vertex pair."""
    fv, hv = sch.matrices[v]
    fu, hu = sch.matrices[u]
    aug = vstack(hstack(fv, hv), hstack(fu, hu))
    noise = vstack(hv, hu)
    return rank(aug), rank(noise)


def verify_linear(inst: CdsInstance, sch: LinearScheme) -> VerificationReport:
    """Check correctness and security of a scheme by matrix ranks.

    For a pair (v, u), the secret information exposed is
    rank(stacked [F|H]) - rank(stacked H): a qualified edge must expose
    exactly L symbols, an unqualified edge none, and each vertex alone
    none.
    """
    _require_vertices(inst.vertices, sch)
    L = sch.secret_len
    vertex_verdicts: dict[str, VertexVerdict] = {}
    for v in inst.vertices:
        leak = rank(sch.augmented(v)) - rank(sch.matrices[v][1])
        vertex_verdicts[v] = VertexVerdict(leak == 0, leak)
    edge_verdicts: dict[tuple[str, str], EdgeVerdict] = {}
    for kind, (v, u) in inst.edges:
        info = _pair_ranks(sch, v, u)
        delta = info[0] - info[1]
        if kind == QUALIFIED:
            edge_verdicts[(v, u)] = EdgeVerdict(kind, delta == L, delta)
        else:
            edge_verdicts[(v, u)] = EdgeVerdict(kind, delta == 0, delta)
    passed = all(w.secure for w in vertex_verdicts.values()) and all(
        e.ok for e in edge_verdicts.values()
    )
    return VerificationReport(vertex_verdicts, edge_verdicts, passed)


def noise_overlap_dim(sch: LinearScheme, v: str, u: str) -> int:
    """Dimension of the intersection of the two noise row spaces."""
    for name in (v, u):
        if name not in sch.matrices:
            raise ValueError(f"scheme has no vertex {name}")
    return rowspace_intersection_dim(sch.matrices[v][1], sch.matrices[u][1])


def check_signal_alignment(
    sch: LinearScheme, v: str, u: str
) -> tuple[bool, tuple[tuple[int, ...], tuple[int, ...]] | None]:
    """Wherever the noise precodings coincide, the secret ones must too.

    Basis-free form: every (x, y) with x.H_v = y.H_u must satisfy
    x.F_v = y.F_u.  Checked on a kernel basis of [H_v; -H_u]; returns the
    first violating (x, y) combination otherwise.
    """
    for name in (v, u):
        if name not in sch.matrices:
            raise ValueError(f"scheme has no vertex {name}")
    fv, hv = sch.matrices[v]
    fu, hu = sch.matrices[u]
    kernel = left_kernel(vstack(hv, neg(hu)))
    if kernel.rows == 0:
        return True, None
    diffs = matmul(kernel, vstack(fv, neg(fu)))
    for i in range(kernel.rows):
        if any(diffs.data[i]):
            combo = kernel.data[i]
            x = tuple(int(c) for c in combo[: fv.rows])
            y = tuple(int(c) for c in combo[fv.rows :])
            return False, (x, y)
    return True, None


def path_overlap_lower_bound(
    sch: LinearScheme, path, instance: CdsInstance | None = None
) -> int:
    """Chain bound on the common noise overlap along a path.

    Consecutive overlaps of width alpha inside signals of length N force
    a joint overlap of at least sum(alpha) - (edges - 1) * N; the value
    may be negative, in which case it certifies nothing.
    """
    path = list(path)
    if len(path) < 2:
        raise ValueError("path needs at least two vertices")
    lengths = {sch.signal_len(v) for v in path}
    if len(lengths) != 1:
        raise ValueError(f"signals along the path differ in length: {sorted(lengths)}")
    n = lengths.pop()
    if instance is not None:
        for a, b in zip(path, path[1:]):
            if not instance.has_edge(a, b):
                raise ValueError(f"consecutive vertices {a}, {b} are not adjacent")
    total = sum(noise_overlap_dim(sch, a, b) for a, b in zip(path, path[1:]))
    return total - (len(path) - 2) * n


@dataclass(frozen=True)
class AlignmentReport:
    """Noise overlaps per qualified edge, signal alignment per unqualified
    edge, and chain bounds for requested paths."""

    noise_overlaps: dict[tuple[str, str], int]
    signal_alignment: dict[tuple[str, str], bool]
    path_bounds: tuple[tuple[tuple[str, ...], int], ...]


def alignment_report(
    inst: CdsInstance, sch: LinearScheme, paths=()
) -> AlignmentReport:
    """Aggregate the alignment diagnostics for a (verified) scheme."""
    _require_vertices(inst.vertices, sch)
    overlaps = {e: noise_overlap_dim(sch, *e) for e in inst.qualified}
    aligned = {e: check_signal_alignment(sch, *e)[0] for e in inst.unqualified}
    bounds = tuple(
        (tuple(pth), path_overlap_lower_bound(sch, pth, inst)) for pth in paths
    )
    return AlignmentReport(overlaps, aligned, bounds)


@dataclass(frozen=True)
class RateReport:
    rate: Fraction  # L / (2 max N_v)
    randomness_rate: Fraction | None  # L / L_Z, None when noiseless
    bounds: tuple[Fraction, Fraction]


def rate_report(
    inst: CdsInstance, sch: LinearScheme, converse: Fraction | None = None
) -> RateReport:
    """Exact rates plus the capacity interval [achieved, converse].

    The scheme must verify against the instance; without an explicit
    converse the generic non-degenerate bound 1/2 is used.
    """
    report = verify_linear(inst, sch)
    if not report.passed:
        raise VerificationFailedError(
            "rate_report requires a scheme that passes verification"
        )
    rate = Fraction(sch.secret_len, 2 * sch.max_signal_len())
    rz = Fraction(sch.secret_len, sch.noise_len) if sch.noise_len else None
    upper = converse if converse is not None else Fraction(1, 2)
    if rate > upper:
        raise ValueError(f"achieved rate {rate} exceeds converse bound {upper}")
    return RateReport(rate, rz, (rate, upper))


# ---------------------------------------------------------------------------
# Scheme file format


def format_scheme(sch: LinearScheme) -> str:
    lines = [
        "cds-scheme v1",
        f"field {sch.p}",
        f"secret {sch.secret_len}",
        f"noise {sch.noise_len}",
    ]
    for v in sch.vertices:
        f, h = sch.matrices[v]
        lines.append(f"signal {v} {f.rows}")
        for i in range(f.rows):
            frow = " ".join(str(int(x)) for x in f.data[i])
            hrow = " ".join(str(int(x)) for x in h.data[i])
            lines.append(f"F: {frow} | H: {hrow}".rstrip())
    return "\n".join(lines) + "\n"


def parse_scheme(text: str) -> LinearScheme:
    """Parse the scheme file format written by :func:`format_scheme`."""
    lines = [
        (no, ln.strip())
        for no, ln in enumerate(text.splitlines(), start=1)
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if not lines or lines[0][1] != "cds-scheme v1":
        raise SchemeFormatError("missing 'cds-scheme v1' header", 1)
    idx = 1

    def take_keyword(word: str) -> int:
        nonlocal idx
        if idx >= len(lines):
            raise SchemeFormatError(f"missing '{word} <n>' line")
        no, ln = lines[idx]
        parts = ln.split()
        if len(parts) != 2 or parts[0] != word:
            raise SchemeFormatError(f"expected '{word} <n>'", no)
        try:
            value = int(parts[1])
        except ValueError:
            raise SchemeFormatError(f"bad integer in '{word}'", no) from None
        idx += 1
        return value

    p = take_keyword("field")
    secret_len = take_keyword("secret")
    noise_len = take_keyword("noise")
    matrices: dict[str, tuple[GfMatrix, GfMatrix]] = {}
    while idx < len(lines):
        no, ln = lines[idx]
        parts = ln.split()
        if len(parts) != 3 or parts[0] != "signal":
            raise SchemeFormatError("expected 'signal <name> <rows>'", no)
        name = parts[1]
        if name in matrices:
            raise SchemeFormatError(f"duplicate signal {name}", no)
        try:
            nrows = int(parts[2])
        except ValueError:
            raise SchemeFormatError("bad row count", no) from None
        idx += 1
        f_rows, h_rows = [], []
        for _ in range(nrows):
            if idx >= len(lines):
                raise SchemeFormatError(f"signal {name}: missing matrix rows")
            rno, row = lines[idx]
            if not row.startswith("F:") or "| H:" not in row:
                raise SchemeFormatError("expected 'F: ... | H: ...'", rno)
            f_part, h_part = row[2:].split("| H:", 1)
            try:
                f_vals = [int(t) for t in f_part.split()]
                h_vals = [int(t) for t in h_part.split()]
            except ValueError:
                raise SchemeFormatError("bad residue", rno) from None
            if len(f_vals) != secret_len or len(h_vals) != noise_len:
                raise SchemeFormatError(
                    f"expected {secret_len} secret and {noise_len} noise residues",
                    rno,
                )
            if any(x < 0 or x >= p for x in f_vals + h_vals):
                raise SchemeFormatError(f"residues must lie in [0, {p})", rno)
            f_rows.append(f_vals)
            h_rows.append(h_vals)
            idx += 1
        matrices[name] = (
            GfMatrix.from_rows(p, f_rows, secret_len),
            GfMatrix.from_rows(p, h_rows, noise_len),
        )
    try:
        return LinearScheme(p, secret_len, noise_len, matrices)
    except ValueError as exc:
        raise SchemeFormatError(str(exc)) from None
