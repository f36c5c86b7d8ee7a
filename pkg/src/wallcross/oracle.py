"""Exhaustive finite-field representation oracle for tiny instances.

Representations over F_p (p in {2, 3, 5}) are enumerated exhaustively.  A
positive simplicity answer (no proper invariant subspace tuple, scalar
endomorphisms) is meaningful evidence for the existence of simple
representations in characteristic zero; a negative answer is not, and the
module never claims otherwise.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

from .quiver import DimVector, InputError, Quiver, dual_quiver

FIELDS = (2, 3, 5)
DEFAULT_BUDGET = 3 ** 12

Vec = tuple[int, ...]
Mat = tuple[tuple[int, ...], ...]  # rows; a map F_p^cols -> F_p^rows


class BudgetExceeded(RuntimeError):
    def __init__(self, what: str, required: int, budget: int):
        super().__init__(f"{what} needs {required} candidates, budget is {budget}")
        self.required = required
        self.budget = budget


# -- linear algebra over F_p -----------------------------------------------------

def rref(rows: Sequence[Vec], p: int) -> tuple[Vec, ...]:
    """Reduced row echelon basis of the row span (zero rows dropped)."""
    mat = [list(r) for r in rows]
    if not mat:
        return ()
    ncols = len(mat[0])
    out: list[list[int]] = []
    for col in range(ncols):
        pivot = next((r for r in mat if r[col] % p), None)
        if pivot is None:
            continue
        mat.remove(pivot)
        inv = pow(pivot[col], -1, p)
        pivot = [(x * inv) % p for x in pivot]
        for r in mat:
            if r[col] % p:
                f = r[col]
                r[:] = [(x - f * y) % p for x, y in zip(r, pivot)]
        for r in out:
            if r[col]:
                f = r[col]
                r[:] = [(x - f * y) % p for x, y in zip(r, pivot)]
        out.append(pivot)
    out.sort(key=lambda r: next(i for i, x in enumerate(r) if x))
    return tuple(tuple(r) for r in out)


def rank(rows: Sequence[Vec], p: int) -> int:
    return len(rref(rows, p))


def matvec(a: Mat, v: Vec, p: int) -> Vec:
    return tuple(sum(x * y for x, y in zip(row, v)) % p for row in a)


def matmul(a: Mat, b: Mat, p: int) -> Mat:
    cols = list(zip(*b)) if b and b[0] else []
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) % p for col in cols) for row in a)


def transpose(a: Mat, rows: int, cols: int) -> Mat:
    return tuple(tuple(a[i][j] for i in range(rows)) for j in range(cols))


def span_elements(basis: Sequence[Vec], n: int, p: int) -> frozenset[Vec]:
    elems = set()
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        v = [0] * n
        for c, b in zip(coeffs, basis):
            if c:
                v = [(x + c * y) % p for x, y in zip(v, b)]
        elems.add(tuple(v))
    return frozenset(elems)


@dataclass(frozen=True)
class Subspace:
    basis: tuple[Vec, ...]
    elements: frozenset

    @property
    def dim(self) -> int:
        return len(self.basis)


@lru_cache(maxsize=None)
def subspaces(n: int, p: int) -> tuple[Subspace, ...]:
    """Every subspace of F_p^n, ordered by dimension."""
    seen: dict[tuple[Vec, ...], Subspace] = {}
    vectors = list(itertools.product(range(p), repeat=n))
    for k in range(n + 1):
        for combo in itertools.combinations(vectors, k):
            basis = rref(combo, p)
            if len(basis) == k and basis not in seen:
                seen[basis] = Subspace(basis, span_elements(basis, n, p))
    return tuple(sorted(seen.values(), key=lambda s: (s.dim, s.basis)))


def gaussian_binomial_total(n: int, p: int) -> int:
    """Number of subspaces of F_p^n."""
    total = 0
    for k in range(n + 1):
        num = den = 1
        for i in range(k):
            num *= p ** (n - i) - 1
            den *= p ** (i + 1) - 1
        total += num // den
    return total


# -- representations -----------------------------------------------------------------

@dataclass(frozen=True)
class FiniteRep:
    quiver: Quiver
    dims: tuple[int, ...]      # in quiver vertex order
    p: int
    maps: tuple[Mat, ...]      # one per quiver edge, in quiver edge order

    def __post_init__(self):
        if self.p not in FIELDS:
            raise InputError(f"field size must be one of {FIELDS}")
        if len(self.maps) != len(self.quiver.edges):
            raise InputError("one matrix per edge is required")
        for (s, t), a in zip(self.quiver.edges, self.maps):
            rows, cols = self.dim(t), self.dim(s)
            if len(a) != rows or any(len(r) != cols for r in a):
                raise InputError(f"matrix for edge {s}->{t} must be {rows}x{cols}")

    def dim(self, v: str) -> int:
        return self.dims[self.quiver.index(v)]

    @property
    def dimvec(self) -> DimVector:
        return DimVector(self.quiver.vertices, self.dims)

    def dual(self) -> "FiniteRep":
        """Transpose representation on the dual quiver."""
        qd = dual_quiver(self.quiver)
        by_edge: dict[tuple[str, str], list[Mat]] = {}
        for (s, t), a in zip(self.quiver.edges, self.maps):
            by_edge.setdefault((t, s), []).append(transpose(a, self.dim(t), self.dim(s)))
        maps = tuple(by_edge[e].pop(0) for e in qd.edges)
        return FiniteRep(qd, self.dims, self.p, maps)

    def base_change(self, g: Mapping[str, Mat], g_inv: Mapping[str, Mat]) -> "FiniteRep":
        maps = tuple(matmul(matmul(g[t], a, self.p), g_inv[s], self.p) if a and a[0] else a
                     for (s, t), a in zip(self.quiver.edges, self.maps))
        return FiniteRep(self.quiver, self.dims, self.p, maps)

    def dump(self) -> str:
        lines = [f"rep over F_{self.p}, dims {dict(zip(self.quiver.vertices, self.dims))}"]
        for (s, t), a in zip(self.quiver.edges, self.maps):
            lines.append(f"  {s}->{t}: {[list(r) for r in a]}")
        return "\n".join(lines)


def rep_count(q: Quiver, m: DimVector, p: int) -> int:
    return p ** sum(m[s] * m[t] for s, t in q.edges)


def enumerate_reps(q: Quiver, m: DimVector, p: int, budget: int = DEFAULT_BUDGET) -> Iterator[FiniteRep]:
    """Every representation over F_p exactly once (row-major flattening order)."""
    if m.vertices != q.vertices:
        raise InputError("dimension vector does not match quiver")
    if p not in FIELDS:
        raise InputError(f"field size must be one of {FIELDS}")
    needed = rep_count(q, m, p)
    if needed > budget:
        raise BudgetExceeded("representation enumeration", needed, budget)
    shapes = [(m[t], m[s]) for s, t in q.edges]
    sizes = [r * c for r, c in shapes]
    for flat in itertools.product(range(p), repeat=sum(sizes)):
        maps = []
        pos = 0
        for (r, c), k in zip(shapes, sizes):
            chunk = flat[pos:pos + k]
            pos += k
            maps.append(tuple(tuple(chunk[i * c:(i + 1) * c]) for i in range(r)))
        yield FiniteRep(q, m.values, p, tuple(maps))


# -- subrepresentations ---------------------------------------------------------------

def _is_invariant(rep: FiniteRep, choice: Sequence[Subspace]) -> bool:
    idx = rep.quiver.index
    for (s, t), a in zip(rep.quiver.edges, rep.maps):
        target = choice[idx(t)].elements
        for v in choice[idx(s)].basis:
            if matvec(a, v, rep.p) not in target:
                return False
    return True


def invariant_subspace_tuples(rep: FiniteRep, target: DimVector | None = None,
                              budget: int = DEFAULT_BUDGET) -> Counter:
    """Dimension vectors of invariant subspace tuples, with multiplicities.

    With ``target`` only tuples of that dimension vector are examined.
    """
    pools = []
    for k, n in enumerate(rep.dims):
        pool = subspaces(n, rep.p)
        if target is not None:
            pool = tuple(s for s in pool if s.dim == target.values[k])
        pools.append(pool)
    total = math.prod(len(pl) for pl in pools)
    if total > budget:
        raise BudgetExceeded("subspace tuple enumeration", total, budget)
    found: Counter = Counter()
    for choice in itertools.product(*pools):
        if _is_invariant(rep, choice):
            found[tuple(s.dim for s in choice)] += 1
    return found


def closure(rep: FiniteRep, generators: Mapping[str, Sequence[Vec]],
            edges: Sequence[int] | None = None) -> tuple[dict[str, tuple[Vec, ...]], int]:
    """Smallest subspace tuple containing ``generators`` and closed under the given edges.

    Returns the per-vertex RREF bases and the number of growth rounds taken.
    """
    q, p = rep.quiver, rep.p
    use = range(len(q.edges)) if edges is None else edges
    basis = {v: rref(list(generators.get(v, ())), p) if rep.dim(v) else () for v in q.vertices}
    rounds = 0
    while True:
        grown = False
        new_rows: dict[str, list[Vec]] = {v: list(basis[v]) for v in q.vertices}
        for k in use:
            s, t = q.edges[k]
            a = rep.maps[k]
            for vec in basis[s]:
                new_rows[t].append(matvec(a, vec, p))
        for v in q.vertices:
            if rep.dim(v) == 0:
                continue
            b = rref(new_rows[v], p)
            if len(b) > len(basis[v]):
                grown = True
            basis[v] = b
        if not grown:
            return basis, rounds
        rounds += 1


def _cyclic_generation_is_full(rep: FiniteRep) -> bool:
    q, p = rep.quiver, rep.p
    for v in q.vertices:
        n = rep.dim(v)
        for vec in itertools.product(range(p), repeat=n):
            if not any(vec):
                continue
            # one representative per line is enough
            lead = next(x for x in vec if x)
            if lead != 1:
                continue
            gen, _ = closure(rep, {v: [vec]})
            if any(len(gen[w]) != rep.dim(w) for w in q.vertices):
                return False
    return True


def endomorphism_dim(rep: FiniteRep) -> int:
    """Dimension over F_p of the commutant {phi : phi_t u_e = u_e phi_s}."""
    q, p = rep.quiver, rep.p
    offsets = {}
    pos = 0
    for v in q.vertices:
        offsets[v] = pos
        pos += rep.dim(v) ** 2
    nvars = pos
    if nvars == 0:
        return 0

    def var(v: str, i: int, j: int) -> int:
        return offsets[v] + i * rep.dim(v) + j

    rows: list[Vec] = []
    for (s, t), a in zip(q.edges, rep.maps):
        ms, mt = rep.dim(s), rep.dim(t)
        for i in range(mt):
            for j in range(ms):
                # (phi_t a)_{ij} - (a phi_s)_{ij} = 0
                row = [0] * nvars
                for k in range(mt):
                    row[var(t, i, k)] = (row[var(t, i, k)] + a[k][j]) % p
                for k in range(ms):
                    row[var(s, k, j)] = (row[var(s, k, j)] - a[i][k]) % p
                rows.append(tuple(row))
    return nvars - rank(rows, p)


def is_simple_abs(rep: FiniteRep) -> bool:
    """Absolutely simple: no proper nonzero subrepresentation and scalar endomorphisms."""
    if not any(rep.dims):
        return False
    if not _cyclic_generation_is_full(rep):
        return False
    return endomorphism_dim(rep) == 1


def _framing_checks(rep: FiniteRep, framing: str) -> None:
    if framing not in rep.quiver.vertices:
        raise InputError(f"no framing vertex {framing!r}")
    if rep.dim(framing) != 1:
        raise InputError("framing vertex must have dimension 1")


def is_star_plus_stable(rep: FiniteRep, framing: str = "0") -> bool:
    """Images of the framing maps generate the base part under base-quiver arrows."""
    _framing_checks(rep, framing)
    q = rep.quiver
    gens: dict[str, list[Vec]] = {}
    base_edges = []
    for k, ((s, t), a) in enumerate(zip(q.edges, rep.maps)):
        if s == framing and t != framing:
            gens.setdefault(t, []).append(tuple(row[0] for row in a))
        elif s != framing and t != framing:
            base_edges.append(k)
    span, _ = closure(rep, gens, base_edges)
    return all(len(span[v]) == rep.dim(v) for v in q.vertices if v != framing)


def is_star_minus_stable(rep: FiniteRep, framing: str = "0") -> bool:
    return is_star_plus_stable(rep.dual(), framing)


# -- audit helpers -------------------------------------------------------------------

def has_quotient_to_simple(rep: FiniteRep, v: str, budget: int = DEFAULT_BUDGET) -> bool:
    """Some invariant tuple has dimension vector m - e_v."""
    target = DimVector(rep.quiver.vertices, tuple(
        x - (w == v) for w, x in zip(rep.quiver.vertices, rep.dims)))
    return bool(invariant_subspace_tuples(rep, target, budget))


def has_sub_simple(rep: FiniteRep, v: str, budget: int = DEFAULT_BUDGET) -> bool:
    """Some invariant tuple has dimension vector e_v."""
    target = DimVector(rep.quiver.vertices, tuple(
        int(w == v) for w in rep.quiver.vertices))
    return bool(invariant_subspace_tuples(rep, target, budget))


@dataclass
class OracleReport:
    quiver: Quiver
    m: DimVector
    p: int
    enumerated: int = 0
    witnesses: list = None

    def to_record(self, max_dump: int = 5) -> dict:
        ws = self.witnesses or []
        return {"p": self.p, "m": self.m.as_dict(), "enumerated": self.enumerated,
                "witnesses": len(ws), "dump": [w.dump() for w in ws[:max_dump]]}


def search_simple(q: Quiver, m: DimVector, p: int, budget: int = DEFAULT_BUDGET,
                  stop_at: int | None = 1) -> OracleReport:
    """Enumerate representations and collect absolutely simple witnesses."""
    report = OracleReport(q, m, p, 0, [])
    for rep in enumerate_reps(q, m, p, budget):
        report.enumerated += 1
        if is_simple_abs(rep):
            report.witnesses.append(rep)
            if stop_at is not None and len(report.witnesses) >= stop_at:
                break
    return report


# -- curated audit family ----------------------------------------------------------------

def _canonical(matrix: Sequence[Sequence[int]], m: Sequence[int]):
    n = len(m)
    best = None
    for perm in itertools.permutations(range(n)):
        key = (tuple(m[perm[i]] for i in range(n)),
               tuple(matrix[perm[i]][perm[j]] for i in range(n) for j in range(n)))
        if best is None or key < best:
            best = key
    return best


def curated_family(max_vertices: int = 3, max_arrows: int = 2, max_loops: int = 1,
                   max_entry: int = 2, max_reps: int = 3 ** 8, p: int = 3):
    """Tiny (quiver, m) instances up to vertex relabelling.

    Every vertex carries a positive dimension (zero entries reduce to a
    smaller quiver).  Instances with more than ``max_reps`` representations
    over F_p are left out.
    """
    seen = set()
    out = []
    for n in range(1, max_vertices + 1):
        verts = tuple(str(i) for i in range(1, n + 1))
        cells = [(i, j) for i in range(n) for j in range(n)]
        ranges = [range(max_loops + 1) if i == j else range(max_arrows + 1) for i, j in cells]
        for counts in itertools.product(*ranges):
            matrix = [[0] * n for _ in range(n)]
            for (i, j), c in zip(cells, counts):
                matrix[i][j] = c
            for m in itertools.product(range(1, max_entry + 1), repeat=n):
                entries = sum(matrix[i][j] * m[i] * m[j] for i, j in cells)
                if p ** entries > max_reps:
                    continue
                key = _canonical(matrix, m)
                if key in seen:
                    continue
                seen.add(key)
                q = Quiver.from_matrix(verts, matrix)
                out.append((q, DimVector(q.vertices, tuple(m))))
    return out


@dataclass
class AuditResult:
    instances: int = 0
    negative_instances: int = 0
    reps_checked: int = 0
    violations: list = None
    certificate_checks: int = 0
    certificate_failures: list = None

    def __post_init__(self):
        self.violations = [] if self.violations is None else self.violations
        self.certificate_failures = [] if self.certificate_failures is None else self.certificate_failures

    @property
    def ok(self) -> bool:
        return not self.violations and not self.certificate_failures


def audit_criterion(family, primes: Sequence[int] = (2, 3), budget: int = DEFAULT_BUDGET) -> AuditResult:
    """Cross-check the simple-existence criterion against exhaustive enumeration.

    Only negative verdicts can be contradicted by a finite-field witness, so
    positive instances are skipped.  Destabilizing-vertex certificates are
    checked on every representation of their instance.
    """
    from .simples import has_simple

    res = AuditResult()
    for q, m in family:
        res.instances += 1
        verdict = has_simple(q, m)
        if verdict.exists:
            continue
        res.negative_instances += 1
        cert = verdict.certificate
        check = None
        if cert.kind == "DestabilizingVertex":
            v, direction = cert.data["vertex"], cert.data["direction"]
            check = (lambda r: has_quotient_to_simple(r, v, budget)) if direction == "quotient" \
                else (lambda r: has_sub_simple(r, v, budget))
        for p in primes:
            for rep in enumerate_reps(q, m, p, budget):
                res.reps_checked += 1
                if check is not None:
                    res.certificate_checks += 1
                    if not check(rep):
                        res.certificate_failures.append(rep)
                if is_simple_abs(rep):
                    res.violations.append(rep)
    return res
