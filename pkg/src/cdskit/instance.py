"""CDS instances as labeled graphs, plus the capacity-1/2 feasibility test.

An instance is an undirected graph whose vertices are the signals and
whose edges are tagged qualified (the secret must be decodable from the
pair) or unqualified (the pair must leak nothing).  Bipartite mode is the
default: vertex names look like ``A3`` / ``B1`` and every edge joins the
two sides.  General mode lifts both restrictions.

The feasibility test reduces the path-based obstruction to a component
computation: the capacity is 1/2 iff no qualified edge joins two vertices
of one unqualified component inside its qualified component.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass

__all__ = [
    "CdsInstance",
    "Partition",
    "PathWitness",
    "FeasibilityResult",
    "InstanceFormatError",
    "DegenerateInstanceError",
    "parse_instance",
    "format_instance",
    "is_non_degenerate",
    "normalize_degenerate",
    "qualified_components",
    "unqualified_components_within",
    "half_rate_feasible",
    "unqualified_path",
]

QUALIFIED = "q"
UNQUALIFIED = "u"

_BIPARTITE_NAME = re.compile(r"^[AB][0-9]+$")
_GENERAL_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_RESERVED = {"S", "Z"}  # entropy variable names; vertices may not shadow them


class InstanceFormatError(ValueError):
    """Malformed instance text; carries the 1-based offending line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DegenerateInstanceError(ValueError):
    """Raised when an operation requires a non-degenerate instance."""

    def __init__(self, violators: tuple[str, ...]):
        self.violators = violators
        super().__init__(
            "instance is degenerate; vertices without an unqualified edge: "
            + ", ".join(violators)
        )


def _canon(v: str, u: str) -> tuple[str, str]:
    return (v, u) if v <= u else (u, v)


@dataclass(frozen=True)
class CdsInstance:
    """Immutable labeled graph of signals."""

    vertices: tuple[str, ...]
    qualified: tuple[tuple[str, str], ...]
    unqualified: tuple[tuple[str, str], ...]
    bipartite: bool = True

    @classmethod
    def from_edges(cls, edges, bipartite: bool = True) -> "CdsInstance":
        """Build and validate an instance from (kind, v, u) triples."""
        seen: dict[tuple[str, str], str] = {}
        for kind, v, u in edges:
            if kind not in (QUALIFIED, UNQUALIFIED):
                raise InstanceFormatError(f"unknown edge kind {kind!r}")
            for name in (v, u):
                _check_name(name, bipartite)
            if v == u:
                raise InstanceFormatError(f"self-loop on {v}")
            if bipartite and v[0] == u[0]:
                raise InstanceFormatError(
                    f"edge {{{v}, {u}}} joins two {v[0]}-side vertices"
                )
            key = _canon(v, u)
            if key in seen:
                raise InstanceFormatError(f"duplicate edge {{{key[0]}, {key[1]}}}")
            seen[key] = kind
        qualified = tuple(sorted(k for k, kind in seen.items() if kind == QUALIFIED))
        unqualified = tuple(sorted(k for k, kind in seen.items() if kind == UNQUALIFIED))
        names = sorted({x for pair in seen for x in pair})
        return cls(tuple(names), qualified, unqualified, bipartite)

    @property
    def edges(self) -> tuple[tuple[str, tuple[str, str]], ...]:
        """All edges as (kind, pair), pairs canonical and sorted."""
        tagged = [(QUALIFIED, e) for e in self.qualified] + [
            (UNQUALIFIED, e) for e in self.unqualified
        ]
        return tuple(sorted(tagged, key=lambda t: t[1]))

    def side(self, v: str) -> str | None:
        return v[0] if self.bipartite else None

    def qualified_neighbors(self, v: str) -> list[str]:
        return sorted(
            {b if a == v else a for a, b in self.qualified if v in (a, b)}
        )

    def unqualified_neighbors(self, v: str) -> list[str]:
        return sorted(
            {b if a == v else a for a, b in self.unqualified if v in (a, b)}
        )

    def has_edge(self, v: str, u: str) -> bool:
        key = _canon(v, u)
        return key in self.qualified or key in self.unqualified

    def induced(self, keep) -> "CdsInstance":
        """Sub-instance on the given vertices, keeping internal edges."""
        keep = set(keep)
        unknown = keep - set(self.vertices)
        if unknown:
            raise ValueError(f"unknown vertices: {sorted(unknown)}")
        return CdsInstance(
            tuple(v for v in self.vertices if v in keep),
            tuple(e for e in self.qualified if e[0] in keep and e[1] in keep),
            tuple(e for e in self.unqualified if e[0] in keep and e[1] in keep),
            self.bipartite,
        )


def _check_name(name: str, bipartite: bool) -> None:
    if bipartite:
        if not _BIPARTITE_NAME.match(name):
            raise InstanceFormatError(
                f"vertex {name!r} has no side label; bipartite names match [AB][0-9]+"
            )
    elif not _GENERAL_NAME.match(name):
        raise InstanceFormatError(f"invalid vertex name {name!r}")
    if name in _RESERVED:
        raise InstanceFormatError(f"vertex name {name!r} is reserved")


@dataclass(frozen=True)
class Partition:
    """Disjoint blocks covering a vertex subset; blocks and members sorted."""

    blocks: tuple[tuple[str, ...], ...]

    @classmethod
    def from_sets(cls, sets) -> "Partition":
        blocks = tuple(sorted((tuple(sorted(s)) for s in sets), key=lambda b: b[0]))
        flat = [v for b in blocks for v in b]
        if len(flat) != len(set(flat)):
            raise ValueError("partition blocks overlap")
        return cls(blocks)

    def block_of(self, v: str) -> tuple[str, ...]:
        for b in self.blocks:
            if v in b:
                return b
        raise KeyError(v)

    def index_of(self, v: str) -> int:
        for i, b in enumerate(self.blocks):
            if v in b:
                return i
        raise KeyError(v)

    def covered(self) -> tuple[str, ...]:
        return tuple(sorted(v for b in self.blocks for v in b))


@dataclass(frozen=True)
class PathWitness:
    """A path given as its vertex sequence, with the edge type it uses.

    ``internal_edge`` records a qualified edge joining two path vertices,
    oriented to match the path ends.
    """

    vertices: tuple[str, ...]
    kind: str
    internal_edge: tuple[str, str] | None = None

    def __len__(self) -> int:
        return max(len(self.vertices) - 1, 0)

    def edge_pairs(self) -> list[tuple[str, str]]:
        return [
            _canon(self.vertices[i], self.vertices[i + 1])
            for i in range(len(self.vertices) - 1)
        ]

    def is_valid_for(self, inst: CdsInstance) -> bool:
        edge_set = inst.qualified if self.kind == QUALIFIED else inst.unqualified
        pairs = self.edge_pairs()
        return len(pairs) == len(set(pairs)) and all(p in edge_set for p in pairs)


@dataclass(frozen=True)
class FeasibilityResult:
    """Outcome of the capacity-1/2 test; witness present iff infeasible."""

    feasible: bool
    witness_edge: tuple[str, str] | None = None
    witness_path: PathWitness | None = None


def parse_instance(text: str) -> CdsInstance:
    """Parse the line-based instance format.

    Comment lines start with ``#``; the header is ``cds-instance v1``
    with an optional trailing ``general`` token; edges are ``q <v> <u>``
    or ``u <v> <u>``.
    """
    header_seen = False
    bipartite = True
    edges: list[tuple[str, str, str]] = []
    seen: set[tuple[str, str]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not header_seen:
            tokens = line.split()
            if tokens[:2] != ["cds-instance", "v1"] or len(tokens) > 3:
                raise InstanceFormatError(
                    "expected header 'cds-instance v1 [general]'", lineno
                )
            if len(tokens) == 3:
                if tokens[2] != "general":
                    raise InstanceFormatError(
                        f"unknown header token {tokens[2]!r}", lineno
                    )
                bipartite = False
            header_seen = True
            continue
        tokens = line.split()
        if len(tokens) != 3 or tokens[0] not in (QUALIFIED, UNQUALIFIED):
            raise InstanceFormatError("expected 'q <v> <u>' or 'u <v> <u>'", lineno)
        kind, v, u = tokens
        try:
            _check_name(v, bipartite)
            _check_name(u, bipartite)
            if v == u:
                raise InstanceFormatError(f"self-loop on {v}")
            if bipartite and v[0] == u[0]:
                raise InstanceFormatError(
                    f"edge {{{v}, {u}}} joins two {v[0]}-side vertices"
                )
            key = _canon(v, u)
            if key in seen:
                raise InstanceFormatError(f"duplicate edge {{{key[0]}, {key[1]}}}")
        except InstanceFormatError as exc:
            if exc.line is None:
                raise InstanceFormatError(str(exc), lineno) from None
            raise
        seen.add(key)
        edges.append((kind, v, u))
    if not header_seen:
        raise InstanceFormatError("missing 'cds-instance v1' header", 1)
    return CdsInstance.from_edges(edges, bipartite)


def format_instance(inst: CdsInstance) -> str:
    """Serialize an instance back into the file format."""
    lines = ["cds-instance v1" + ("" if inst.bipartite else " general")]
    for kind, (v, u) in inst.edges:
        lines.append(f"{kind} {v} {u}")
    return "\n".join(lines) + "\n"


def is_non_degenerate(inst: CdsInstance) -> tuple[bool, tuple[str, ...]]:
    """Every vertex must meet at least one unqualified edge."""
    touched = {x for pair in inst.unqualified for x in pair}
    violators = tuple(v for v in inst.vertices if v not in touched)
    return (not violators, violators)


def normalize_degenerate(inst: CdsInstance) -> tuple[CdsInstance, tuple[str, ...]]:
    """Strip vertices with no unqualified edge until none remain.

    Removed vertices have no security constraint; their signal is defined
    to be the secret itself.  Removal deletes their (qualified) edges,
    which can expose further vertices, so the sweep iterates.
    """
    current = inst
    eliminated: list[str] = []
    while True:
        ok, violators = is_non_degenerate(current)
        if ok:
            return current, tuple(eliminated)
        eliminated.extend(violators)
        keep = [v for v in current.vertices if v not in violators]
        current = current.induced(keep)


def _components(vertices, edges) -> list[set[str]]:
    adj: dict[str, set[str]] = {v: set() for v in vertices}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen: set[str] = set()
    out: list[set[str]] = []
    for v in vertices:
        if v in seen:
            continue
        comp = {v}
        queue = deque([v])
        seen.add(v)
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.add(y)
                    queue.append(y)
        out.append(comp)
    return out


def qualified_components(inst: CdsInstance) -> Partition:
    """Connected components under qualified edges; isolated vertices are
    singleton blocks."""
    return Partition.from_sets(_components(inst.vertices, inst.qualified))


def unqualified_components_within(inst: CdsInstance, block) -> Partition:
    """Unqualified components of the subgraph induced on one qualified
    component."""
    block = tuple(sorted(block))
    if block not in qualified_components(inst).blocks:
        raise ValueError(f"{block} is not a qualified component of the instance")
    inner = [e for e in inst.unqualified if e[0] in block and e[1] in block]
    return Partition.from_sets(_components(block, inner))


def unqualified_path(
    inst: CdsInstance, block, s: str, t: str
) -> PathWitness:
    """Shortest unqualified path from s to t inside one qualified component.

    Breadth-first with neighbors visited in name order, so the returned
    path is deterministic.
    """
    block = set(block)
    if s not in block or t not in block:
        raise ValueError("endpoints must lie in the block")
    if s == t:
        return PathWitness((s,), UNQUALIFIED)
    adj: dict[str, list[str]] = {v: [] for v in block}
    for a, b in inst.unqualified:
        if a in block and b in block:
            adj[a].append(b)
            adj[b].append(a)
    for v in adj:
        adj[v].sort()
    parent: dict[str, str] = {s: s}
    queue = deque([s])
    while queue:
        x = queue.popleft()
        if x == t:
            break
        for y in adj[x]:
            if y not in parent:
                parent[y] = x
                queue.append(y)
    if t not in parent:
        raise ValueError(f"no unqualified path from {s} to {t} inside the block")
    path = [t]
    while path[-1] != s:
        path.append(parent[path[-1]])
    path.reverse()
    return PathWitness(tuple(path), UNQUALIFIED)


def half_rate_feasible(inst: CdsInstance) -> FeasibilityResult:
    """Decide whether the instance admits capacity 1/2.

    Infeasibility is witnessed by a qualified edge whose endpoints are
    joined by an unqualified path inside the same qualified component;
    the path runs from the larger-named endpoint to the smaller so that
    rendered witnesses are reproducible.
    """
    ok, violators = is_non_degenerate(inst)
    if not ok:
        raise DegenerateInstanceError(violators)
    for qblock in qualified_components(inst).blocks:
        unq = unqualified_components_within(inst, qblock)
        for v, u in sorted(e for e in inst.qualified if e[0] in qblock):
            if unq.index_of(v) == unq.index_of(u):
                start, end = (v, u) if v > u else (u, v)
                path = unqualified_path(inst, qblock, start, end)
                witness = PathWitness(path.vertices, UNQUALIFIED, (start, end))
                return FeasibilityResult(False, (start, end), witness)
    return FeasibilityResult(True)
