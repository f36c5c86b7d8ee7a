"""Quivers, dimension vectors and the Euler pairing.

A quiver is stored as a sorted tuple of vertex ids together with a sorted
tuple of ``(source, target)`` pairs, one pair per arrow.  Multiple arrows
and loops are allowed.  All objects here are immutable.
"""
from __future__ import annotations

import re
from collections import Counter, deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping


class InputError(ValueError):
    """Malformed or inconsistent input data."""


class PreconditionError(ValueError):
    """Input is well formed but outside the hypotheses of an operation."""


def _natural_key(vid: str):
    return tuple((0, int(tok), "") if tok.isdigit() else (1, 0, tok)
                 for tok in re.findall(r"\d+|\D+", vid))


def sort_vertices(ids: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(ids, key=_natural_key))


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...] = ()
    _index: dict = field(init=False, repr=False, compare=False, hash=False)
    _counts: Counter = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        verts = tuple(str(v) for v in self.vertices)
        if len(set(verts)) != len(verts):
            raise InputError(f"duplicate vertex ids in {verts}")
        verts = sort_vertices(verts)
        index = {v: k for k, v in enumerate(verts)}
        edges = []
        for e in self.edges:
            if len(e) != 2:
                raise InputError(f"edge {e!r} is not a (source, target) pair")
            s, t = str(e[0]), str(e[1])
            if s not in index or t not in index:
                raise InputError(f"edge ({s}, {t}) uses an undeclared vertex")
            edges.append((s, t))
        edges.sort(key=lambda st: (index[st[0]], index[st[1]]))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", tuple(edges))
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_counts", Counter(edges))

    @classmethod
    def from_counts(cls, vertices: Iterable[str],
                    counts: Mapping[tuple[str, str], int]) -> "Quiver":
        edges = []
        for (s, t), k in counts.items():
            if k < 0:
                raise InputError(f"negative arrow count for ({s}, {t})")
            edges.extend([(s, t)] * k)
        return cls(tuple(vertices), tuple(edges))

    @classmethod
    def from_matrix(cls, vertices: Iterable[str], matrix) -> "Quiver":
        verts = list(vertices)
        counts = {(verts[i], verts[j]): int(matrix[i][j])
                  for i in range(len(verts)) for j in range(len(verts))}
        return cls.from_counts(verts, counts)

    # -- basic structure -------------------------------------------------

    def __len__(self) -> int:
        return len(self.vertices)

    def index(self, v: str) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise InputError(f"unknown vertex {v!r}") from None

    def count(self, s: str, t: str) -> int:
        """Number of arrows from ``s`` to ``t``."""
        return self._counts[(s, t)]

    def edge_matrix(self) -> list[list[int]]:
        return [[self.count(s, t) for t in self.vertices] for s in self.vertices]

    def loops(self, v: str) -> int:
        return self.count(v, v)

    def out_degree(self, v: str) -> int:
        return sum(1 for s, _ in self.edges if s == v)

    def in_degree(self, v: str) -> int:
        return sum(1 for _, t in self.edges if t == v)

    def to_record(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_record(cls, rec: Mapping) -> "Quiver":
        try:
            verts = rec["vertices"]
            edges = rec.get("edges", [])
        except (KeyError, TypeError, AttributeError):
            raise InputError("quiver record needs 'vertices' and 'edges'") from None
        if not isinstance(verts, list) or not isinstance(edges, list):
            raise InputError("'vertices' and 'edges' must be lists")
        return cls(tuple(str(v) for v in verts), tuple(tuple(e) for e in edges))

    def relabel(self, mapping: Mapping[str, str]) -> "Quiver":
        return Quiver(tuple(mapping[v] for v in self.vertices),
                      tuple((mapping[s], mapping[t]) for s, t in self.edges))

    # -- dimension vectors -----------------------------------------------

    def dimvec(self, values: Mapping[str, int] | Iterable[int]) -> "DimVector":
        """Dimension vector from a vertex->int mapping or a sequence in vertex order."""
        if isinstance(values, Mapping):
            unknown = set(map(str, values)) - set(self.vertices)
            if unknown:
                raise InputError(f"unknown vertices {sorted(unknown)} in dimension vector")
            vals = tuple(int(values.get(v, 0)) for v in self.vertices)
        else:
            vals = tuple(int(x) for x in values)
        return DimVector(self.vertices, vals)

    def zero(self) -> "DimVector":
        return DimVector(self.vertices, (0,) * len(self.vertices))

    def unit(self, v: str) -> "DimVector":
        k = self.index(v)
        return DimVector(self.vertices, tuple(int(j == k) for j in range(len(self))))


@dataclass(frozen=True)
class DimVector:
    vertices: tuple[str, ...]
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.vertices) != len(self.values):
            raise InputError("dimension vector length does not match its vertex set")
        if any(x < 0 for x in self.values):
            raise InputError(f"negative entry in dimension vector {self.values}")

    def __getitem__(self, v: str) -> int:
        return self.values[self.vertices.index(v)]

    def __iter__(self):
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def items(self):
        return zip(self.vertices, self.values)

    def as_dict(self) -> dict[str, int]:
        return dict(self.items())

    def _check(self, other: "DimVector") -> None:
        if self.vertices != other.vertices:
            raise InputError("dimension vectors are indexed by different vertex sets")

    def __add__(self, other: "DimVector") -> "DimVector":
        self._check(other)
        return DimVector(self.vertices, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "DimVector") -> "DimVector":
        self._check(other)
        return DimVector(self.vertices, tuple(a - b for a, b in zip(self.values, other.values)))

    def is_zero(self) -> bool:
        return not any(self.values)

    def is_primitive(self) -> bool:
        from math import gcd
        g = 0
        for x in self.values:
            g = gcd(g, x)
        return g == 1

    def support(self) -> tuple[str, ...]:
        return tuple(v for v, x in self.items() if x > 0)

    def restrict(self, vertices: Iterable[str]) -> "DimVector":
        verts = sort_vertices(vertices)
        return DimVector(verts, tuple(self[v] for v in verts))

    def __str__(self) -> str:
        return "(" + ",".join(str(x) for x in self.values) + ")"


def _check_indexing(q: Quiver, *ms: DimVector) -> None:
    for m in ms:
        if m.vertices != q.vertices:
            raise InputError(f"dimension vector over {m.vertices} does not match quiver vertices {q.vertices}")


def euler_pairing(q: Quiver, m: DimVector, m2: DimVector) -> int:
    """Euler form sum_i m_i m2_i - sum_{arrows e} m_{s(e)} m2_{t(e)}."""
    _check_indexing(q, m, m2)
    diag = sum(a * b for a, b in zip(m.values, m2.values))
    return diag - sum(m[s] * m2[t] for s, t in q.edges)


def dual_quiver(q: Quiver) -> Quiver:
    return Quiver(q.vertices, tuple((t, s) for s, t in q.edges))


def is_symmetric(q: Quiver) -> bool:
    return all(q.count(s, t) == q.count(t, s) for s in q.vertices for t in q.vertices)


def full_subquiver(q: Quiver, vertices: Iterable[str]) -> Quiver:
    keep = set(vertices)
    return Quiver(tuple(v for v in q.vertices if v in keep),
                  tuple(e for e in q.edges if e[0] in keep and e[1] in keep))


def support_subquiver(q: Quiver, m: DimVector) -> Quiver:
    _check_indexing(q, m)
    return full_subquiver(q, m.support())


def _reachable(q: Quiver, start: str, reverse: bool = False) -> set[str]:
    nbrs: dict[str, set[str]] = {v: set() for v in q.vertices}
    for s, t in q.edges:
        if reverse:
            nbrs[t].add(s)
        else:
            nbrs[s].add(t)
    seen = {start}
    todo = deque([start])
    while todo:
        v = todo.popleft()
        for w in nbrs[v]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def unreachable_pair(q: Quiver) -> tuple[str, str] | None:
    """First ordered pair (u, v) in canonical order with no directed path u -> v."""
    if not q.vertices:
        raise InputError("empty quiver")
    for u in q.vertices:
        reach = _reachable(q, u)
        for v in q.vertices:
            if v not in reach:
                return (u, v)
    return None


def is_strongly_connected(q: Quiver) -> bool:
    if not q.vertices:
        raise InputError("strong connectivity of the empty quiver is undefined")
    root = q.vertices[0]
    everything = set(q.vertices)
    return _reachable(q, root) == everything and _reachable(q, root, reverse=True) == everything


class TrivialType(Enum):
    A1 = "A1"
    TILDE_A = "TildeA"
    OTHER = "Other"


@dataclass(frozen=True)
class TypeVerdict:
    kind: TrivialType
    n: int = 0  # cycle length for TILDE_A

    def __str__(self) -> str:
        if self.kind is TrivialType.TILDE_A:
            return f"TildeA{self.n}"
        return self.kind.value


def _trivial_type_of(q: Quiver) -> TypeVerdict:
    n = len(q.vertices)
    if n == 1 and not q.edges:
        return TypeVerdict(TrivialType.A1)
    if len(q.edges) != n:
        return TypeVerdict(TrivialType.OTHER)
    # one oriented n-cycle: every vertex has in- and out-degree one, and the
    # quiver is strongly connected
    outs = Counter(s for s, _ in q.edges)
    ins = Counter(t for _, t in q.edges)
    if all(outs[v] == 1 and ins[v] == 1 for v in q.vertices) and is_strongly_connected(q):
        return TypeVerdict(TrivialType.TILDE_A, n)
    return TypeVerdict(TrivialType.OTHER)


def detect_trivial_type(q: Quiver, m: DimVector) -> TypeVerdict:
    """Classify the support of ``m`` as A1, an oriented cycle, or other."""
    if m.is_zero():
        raise InputError("detect_trivial_type needs a nonzero dimension vector")
    return _trivial_type_of(support_subquiver(q, m))


def canonical_character(q: Quiver) -> dict[str, int]:
    """Exponent of det V_i in the canonical bundle: out-degree minus in-degree."""
    return {v: q.out_degree(v) - q.in_degree(v) for v in q.vertices}


def expected_stable_dim(q: Quiver, m: DimVector) -> int:
    if m.is_zero():
        raise InputError("expected_stable_dim needs a nonzero dimension vector")
    return 1 - euler_pairing(q, m, m)


# -- small named quivers used throughout tests and presets ---------------

def kronecker(arrows: int = 2, names: tuple[str, str] = ("1", "2")) -> Quiver:
    s, t = names
    return Quiver((s, t), ((s, t),) * arrows)


def cycle_quiver(n: int) -> Quiver:
    """Oriented n-cycle 1 -> 2 -> ... -> n -> 1 (a single loop when n = 1)."""
    verts = tuple(str(i) for i in range(1, n + 1))
    return Quiver(verts, tuple((verts[i], verts[(i + 1) % n]) for i in range(n)))


def two_vertex_symmetric(r: int, loops: tuple[int, int] = (0, 0),
                         names: tuple[str, str] = ("1", "2")) -> Quiver:
    """Two vertices with r arrows each way and the given loop counts."""
    a, b = names
    counts = {(a, b): r, (b, a): r, (a, a): loops[0], (b, b): loops[1]}
    return Quiver.from_counts(names, counts)
