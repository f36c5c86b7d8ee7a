"""Geometric wall-crossing scenarios translated into classifier input.

Curve classes enter only through omega-degrees and an explicit list of
generators; h^0 / h^1 numbers are caller input.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .classifier import (DiagramClass, ExtendedQuiverSpec, FLOP_LIKE, Kind, STRICT_KINDS,
                         classify_extended_flip, classify_symmetric_flop, classify_two_vertex,
                         grassmannian_model_dims, local_model_dims)
from .quiver import DimVector, InputError, PreconditionError, Quiver, full_subquiver
from .series import mac_mahon_coefficients

WINDOW_SLACK = 10


def _fmt(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# -- Ext quivers -----------------------------------------------------------------------

@dataclass(frozen=True)
class CollectionDescriptor:
    """ext^1 dimensions of a simple collection E_0, ..., E_k.

    E_0 is the rank-one object, E_1..E_k shifted one-dimensional sheaves.
    Hom(E_i, E_i) = C and vanishing negative exts are assumed, not checked.
    """

    ext1: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.ext1)
        size = len(rows)
        if size == 0 or any(len(r) != size for r in rows):
            raise InputError("ext1 must be a nonempty square matrix")
        if any(x < 0 for r in rows for x in r):
            raise InputError("ext1 entries must be nonnegative")
        for i in range(1, size):
            for j in range(1, size):
                if rows[i][j] != rows[j][i]:
                    raise InputError(f"ext1 block on the sheaf objects is not symmetric at ({i},{j})")
        if self.labels and len(self.labels) != size:
            raise InputError("one label per object is required")
        object.__setattr__(self, "ext1", rows)

    @property
    def k(self) -> int:
        return len(self.ext1) - 1


def ext_quiver(desc: CollectionDescriptor) -> Quiver:
    """Vertices 0..k with ext1[i][j] arrows i -> j."""
    verts = tuple(str(i) for i in range(desc.k + 1))
    return Quiver.from_matrix(verts, desc.ext1)


def extended_spec(desc: CollectionDescriptor) -> ExtendedQuiverSpec:
    q = ext_quiver(desc)
    base = full_subquiver(q, q.vertices[1:])
    row0 = desc.ext1[0]
    a = {str(i): row0[i] for i in range(1, desc.k + 1)}
    b = {str(i): desc.ext1[i][0] for i in range(1, desc.k + 1)}
    return ExtendedQuiverSpec(base, a, b, row0[0])


# -- elliptic fibration walls ------------------------------------------------------------

@dataclass(frozen=True)
class WallLine:
    """The affine line A x - B y = C in the (x, y) plane of B-fields x[D] + y[H]."""

    A: Fraction
    B: Fraction
    C: Fraction
    decomposition: tuple[int, int, int]  # (r1, k1, n1)

    def contains(self, x, y) -> bool:
        return self.A * Fraction(x) - self.B * Fraction(y) == self.C

    @property
    def direction(self) -> tuple[Fraction, Fraction]:
        return (self.B, self.A)

    def to_record(self) -> dict:
        r1, k1, n1 = self.decomposition
        return {"equation": f"{_fmt(self.A)}x - {_fmt(self.B)}y = {_fmt(self.C)}",
                "r1": r1, "k1": k1, "n1": n1}


def elliptic_walls(d1, d2, r: int, k: int, n_window: tuple[int, int]) -> list[WallLine]:
    d1, d2 = Fraction(d1), Fraction(d2)
    if d1 <= 0 or d2 <= 0:
        raise InputError("d1 and d2 must be positive")
    if r < 0 or k < 0 or (r, k) == (0, 0):
        raise InputError("need r, k >= 0 and (r, k) != (0, 0)")
    lo, hi = n_window
    A, B = 3 * d1 + d2, d1
    lines = []
    for r1 in range(r + 1):
        for k1 in range(k + 1):
            if (r1, k1) in ((0, 0), (r, k)):
                continue
            det = r * k1 - k * r1
            if det == 0:
                continue
            for n1 in range(lo, hi + 1):
                C = (r1 * d1 + k1 * d2 - n1 * (r * d1 + k * d2)) / det
                lines.append(WallLine(A, B, C, (r1, k1, n1)))
    return lines


def parallel(lines: Sequence[WallLine]) -> bool:
    return all(a.A * b.B == a.B * b.A for a, b in itertools.combinations(lines, 2))


def elliptic_fiber_descriptor(r: int) -> CollectionDescriptor:
    """E_1 (rank r bundle on a fibre) treated as object 0 and E_2 = O_l(-1)."""
    return CollectionDescriptor(((3, r), (r, 2)), ("E1", "E2"))


# -- stable pair wall ladders ------------------------------------------------------------

@dataclass(frozen=True)
class LadderWall:
    t: Fraction
    decompositions: tuple[dict, ...]

    @property
    def positive(self) -> bool:
        return self.t > 0

    def to_record(self) -> dict:
        return {"t": _fmt(self.t), "positive": self.positive, "decompositions": list(self.decompositions)}


@dataclass(frozen=True)
class WallLadder:
    beta: dict
    n: int
    walls: tuple[LadderWall, ...]
    warnings: tuple[dict, ...] = ()

    def __post_init__(self):
        ts = [w.t for w in self.walls]
        if any(a <= b for a, b in zip(ts, ts[1:])):
            raise InputError("ladder walls must be strictly decreasing")

    @property
    def values(self) -> list[Fraction]:
        return [w.t for w in self.walls]

    def to_record(self) -> dict:
        return {"beta": self.beta, "n": self.n, "walls": [w.to_record() for w in self.walls],
                "warnings": list(self.warnings)}


def _rank_one_admissible(n0: int, t: Fraction, deg0: Fraction) -> bool:
    # The rank-one summand must itself be a stable object on the wall: on the
    # positive side a pair-like object with chi in [1, t*deg), mirrored below 0.
    if t > 0:
        return 1 <= n0 < t * deg0
    if t < 0:
        return t * deg0 < n0 <= -1
    return False


def stable_pair_walls(omega_degrees: Sequence[tuple[str, object]], beta, n: int,
                      n_window: tuple[int, int] | None = None) -> WallLadder:
    """Candidate walls t = n'/deg(beta') for the rank-one class (beta, n).

    ``beta`` is a class id or a mapping class id -> multiplicity over the
    generators in ``omega_degrees``.
    """
    if not omega_degrees:
        raise InputError("the class list is empty")
    names = [str(c) for c, _ in omega_degrees]
    degs = [Fraction(d) for _, d in omega_degrees]
    if len(set(names)) != len(names):
        raise InputError("duplicate class ids")
    if any(d <= 0 for d in degs):
        raise InputError("omega-degrees must be positive")
    if isinstance(beta, str):
        beta = {beta: 1}
    unknown = set(beta) - set(names)
    if unknown:
        raise InputError(f"beta uses unknown classes {sorted(unknown)}")
    bvec = tuple(int(beta.get(c, 0)) for c in names)
    if any(x < 0 for x in bvec) or not any(bvec):
        raise InputError("beta must be a nonzero effective class")

    warnings = []
    if n_window is None:
        n_window = (-(abs(n) + WINDOW_SLACK), abs(n) + WINDOW_SLACK)
        warnings.append({"code": "W_DEFAULT_WINDOW",
                         "message": f"no effective bound on n' is known; using window {list(n_window)}"})
    lo, hi = n_window
    if lo > hi:
        raise InputError("empty n window")

    found: dict[Fraction, list[dict]] = {}
    for sub in itertools.product(*(range(x + 1) for x in bvec)):
        if not any(sub):
            continue
        deg_sub = sum((d * x for d, x in zip(degs, sub)), Fraction(0))
        rest = tuple(x - y for x, y in zip(bvec, sub))
        deg_rest = sum((d * x for d, x in zip(degs, rest)), Fraction(0))
        candidates = [n] if not any(rest) else range(lo, hi + 1)
        for n_sub in candidates:
            if not lo <= n_sub <= hi:
                continue
            t = Fraction(n_sub) / deg_sub
            n0 = n - n_sub
            if any(rest) and not _rank_one_admissible(n0, t, deg_rest):
                continue
            found.setdefault(t, []).append({
                "sheaf": {"beta": dict(zip(names, sub)), "n": n_sub},
                "rank_one": {"beta": dict(zip(names, rest)), "n": n0}})
    walls = tuple(LadderWall(t, tuple(found[t])) for t in sorted(found, reverse=True))
    return WallLadder(dict(zip(names, bvec)), n, walls, tuple(warnings))


# -- irreducible classes and Abel-Jacobi --------------------------------------------------

_GENERALIZED = {Kind.TORIC_FLIP: Kind.GENERALIZED_FLIP, Kind.TORIC_FLOP: Kind.GENERALIZED_FLOP}


def classify_irreducible_wall(n: int, h1: int) -> DiagramClass:
    """Wall-crossing at a stable pair on an irreducible class, from n and h^1(F)."""
    if h1 < 0:
        raise InputError("h1 must be nonnegative")
    local = classify_two_vertex(abs(n) + h1, h1)
    kind = _GENERALIZED.get(local.kind, local.kind)
    cert = {"n": n, "h1": h1, "local_model": local.kind.value}
    if n < 0:
        return DiagramClass(kind, cert, "-" if kind in STRICT_KINDS else "+", local.note)
    return DiagramClass(kind, cert, "+", local.note)


def abel_jacobi_model(g: int, n: int, h1: int) -> dict:
    if g < 0 or h1 < 0:
        raise InputError("g and h1 must be nonnegative")
    h0 = n + h1
    if h0 < 0:
        raise InputError(f"h0 = n + h1 = {h0} is negative")
    verdict = classify_irreducible_wall(n, h1)
    plus, minus = local_model_dims(h0, h1, g)
    return {
        "g": g, "n": n, "h0": h0, "h1": h1,
        "classification": verdict.to_record(),
        "local_model": classify_two_vertex(h0, h1).to_record(),
        "dims": [plus, minus],
        "expected_dims": [n + g - 1, -n + g - 1],
        "sides": [f"S^{n + g - 1}(C)" if plus >= 0 else "empty",
                  f"S^{-n + g - 1}(C)" if minus >= 0 else "empty"],
        "loops_at_framing": g,
    }


# -- the zigzag ledger -------------------------------------------------------------------

def mmp_ledger(ladder: WallLadder, per_wall: Sequence[DiagramClass],
               chambers: Sequence[str] | None = None) -> dict:
    """Chain of chambers M_0 (t >> 0), M_1, ..., M_l (t << 0) with K-relations."""
    if len(per_wall) != len(ladder.walls):
        raise InputError(f"{len(ladder.walls)} walls but {len(per_wall)} classifications")
    count = len(ladder.walls) + 1
    if chambers is None:
        chambers = [f"M{i}" for i in range(count)]
    elif len(chambers) != count:
        raise InputError(f"need {count} chamber labels")
    relations = []
    for w, cls in zip(ladder.walls, per_wall):
        if w.t != 0 and cls.kind in FLOP_LIKE:
            raise PreconditionError(f"wall t = {_fmt(w.t)} is off zero but classified as {cls.kind.value}")
        if w.t == 0 and cls.kind not in FLOP_LIKE:
            raise PreconditionError(f"the wall t = 0 must be flop-like, got {cls.kind.value}")
        if cls.kind is Kind.INDETERMINATE:
            rel = "?"
        elif cls.k_relation == "=":
            rel = "="
        else:
            rel = ">" if cls.orientation == "+" else "<"
        relations.append({"t": _fmt(w.t), "kind": cls.kind.value, "relation": rel,
                          "strict": rel in "<>"})
    sides = {"PT": chambers[0], "dual_PT": chambers[-1]}
    # chamber just above t = 0: the first one whose lower wall is <= 0
    idx = next((i for i, w in enumerate(ladder.walls) if w.t <= 0), len(ladder.walls))
    sides["L_invariant"] = chambers[idx]
    chain = [chambers[0]]
    for rel, label in zip(relations, chambers[1:]):
        chain += [rel["relation"], label]
    return {"chain": " ".join(chain), "relations": relations, "sides": sides}


# -- presets -----------------------------------------------------------------------------

def _toric_flip(a: int = 3, b: int = 2, c: int = 4) -> dict:
    verdict = classify_two_vertex(a, b)
    return {"a": a, "b": b, "c": c, "classification": verdict.to_record(),
            "dims": list(local_model_dims(a, b, c))}


def _grassmannian_flip(a1: int = 4, b1: int = 2, c: int = 0, m: int = 2) -> dict:
    spec = ExtendedQuiverSpec(Quiver(("1",)), {"1": a1}, {"1": b1}, c)
    mvec = DimVector(("1",), (m,))
    verdict = classify_extended_flip(spec, mvec)
    plus, minus = grassmannian_model_dims(a1, b1, c, m)
    return {"a1": a1, "b1": b1, "c": c, "m": m, "classification": verdict.to_record(),
            "dims": [plus, minus],
            "sides": [f"Tot over Gr({a1},{m})" if plus is not None else "empty",
                      f"Tot over Gr({b1},{m})" if minus is not None else "empty"]}


def _elliptic_fiber(d1=1, d2=1, r: int = 1, k: int = 1, n_lo: int = -10, n_hi: int = 10) -> dict:
    lines = elliptic_walls(d1, d2, r, k, (n_lo, n_hi))
    desc = elliptic_fiber_descriptor(r)
    spec = extended_spec(desc)
    try:
        classify_extended_flip(spec, DimVector(("1",), (1,)))
        flip_path = "accepted"
    except PreconditionError as exc:
        flip_path = f"rejected: {exc}"
    q = ext_quiver(desc)
    flop = classify_symmetric_flop(q, q.dimvec((1, 1)))
    d1, d2 = Fraction(d1), Fraction(d2)
    b0 = d2 / (r * (3 * d1 + d2)) if r else None
    return {"d1": _fmt(d1), "d2": _fmt(d2), "r": r, "k": k,
            "walls": [ln.to_record() for ln in lines],
            "all_parallel": parallel(lines),
            "direction": [_fmt(d1), _fmt(3 * d1 + d2)],
            "B0_x": _fmt(b0) if b0 is not None else None,
            "ext_quiver": q.to_record(),
            "flip_path": flip_path,
            "classification": flop.to_record()}


def _abel_jacobi(g: int = 3, n: int = 1, h1: int = 2) -> dict:
    return abel_jacobi_model(g, n, h1)


def _dtpt_point(a: int = 1, b: int = 0, c: int = 0, loops: int = 3, m: int = 1,
                e: int = 1, qmax: int = 6) -> dict:
    base = Quiver(("1",), (("1", "1"),) * loops)
    spec = ExtendedQuiverSpec(base, {"1": a}, {"1": b}, c)
    try:
        verdict = classify_extended_flip(spec, DimVector(("1",), (m,))).to_record()
    except PreconditionError as exc:
        verdict = {"error": str(exc)}
    return {"ext_data": spec.to_record(), "m": m, "classification": verdict,
            "macmahon": {"e": e, "coefficients": [_fmt(x) for x in mac_mahon_coefficients(e, qmax)]}}


def _non_irreducible_1(d1=2, d2=1) -> dict:
    d1, d2 = Fraction(d1), Fraction(d2)
    if not d1 > d2 > 0:
        raise InputError("need d1 > d2 > 0")
    ladder = stable_pair_walls([("C1", d1), ("C2", d2)], {"C1": 1, "C2": 1}, 2, (-12, 12))
    # local models (h0, h1) of the polystable objects on each wall
    per_wall = [classify_two_vertex(2, 1), classify_two_vertex(2, 0)]
    ledger = mmp_ledger(ladder, per_wall, ["C", "C1", "empty"])
    return {"d1": _fmt(d1), "d2": _fmt(d2), "ladder": ladder.to_record(),
            "ext_quiver_first_wall": ext_quiver(CollectionDescriptor(((0, 2), (1, 0)))).to_record(),
            "classes": [c.kind.value for c in per_wall], "ledger": ledger,
            "annotation": "conjectural local function g(u, v) = u^2; not asserted"}


def _non_irreducible_2(d=1) -> dict:
    d = Fraction(d)
    ladder = stable_pair_walls([("C", d)], {"C": 2}, 4, (-14, 14))
    per_wall = [classify_two_vertex(4, 1), classify_two_vertex(4, 0)]
    ledger = mmp_ledger(ladder, per_wall, ["P3", "pt", "empty"])
    return {"d": _fmt(d), "ladder": ladder.to_record(),
            "ext_quiver_first_wall": ext_quiver(CollectionDescriptor(((0, 4), (1, 0)))).to_record(),
            "classes": [c.kind.value for c in per_wall], "ledger": ledger,
            "annotation": "conjectural local function g = uv + ts; not asserted"}


PRESETS = {
    "toric-flip": _toric_flip,
    "grassmannian-flip": _grassmannian_flip,
    "elliptic-fiber": _elliptic_fiber,
    "abel-jacobi": _abel_jacobi,
    "dtpt-point": _dtpt_point,
    "non-irreducible-1": _non_irreducible_1,
    "non-irreducible-2": _non_irreducible_2,
}


def preset_report(name: str, **params) -> dict:
    try:
        fn = PRESETS[name]
    except KeyError:
        raise InputError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    return {"preset": name, **fn(**params)}
