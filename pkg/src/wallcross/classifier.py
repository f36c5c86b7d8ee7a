"""Extended quivers and birational classification of wall-crossing diagrams.

Verdicts concern the quiver-side diagram

    M^{xi+}(m) --> M(m) <-- M^{xi-}(m)

and never assert the analytic d-critical statement; that interpretation is
recorded in ``DiagramClass.note`` only.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

from .quiver import (DimVector, InputError, PreconditionError, Quiver,
                     canonical_character, is_symmetric)
from .simples import has_simple, symmetric_stable_nonempty
from .stability import enumerate_walls


class Kind(str, Enum):
    GENERALIZED_FLOP = "GeneralizedFlop"
    GENERALIZED_FLIP = "GeneralizedFlip"
    GENERALIZED_MFS = "GeneralizedMFS"
    DIVISORIAL_CONTRACTION = "DivisorialContraction"
    TORIC_FLIP = "ToricFlip"
    TORIC_FLOP = "ToricFlop"
    ISOMORPHISM = "Isomorphism"
    EMPTY_BOTH_SIDES = "EmptyBothSides"
    INDETERMINATE = "Indeterminate"


K_RELATION = {
    Kind.GENERALIZED_FLOP: "=",
    Kind.TORIC_FLOP: "=",
    Kind.ISOMORPHISM: "=",
    Kind.EMPTY_BOTH_SIDES: "=",
    Kind.GENERALIZED_FLIP: ">",
    Kind.TORIC_FLIP: ">",
    Kind.DIVISORIAL_CONTRACTION: ">",
    Kind.GENERALIZED_MFS: ">",
    Kind.INDETERMINATE: "n/a",
}

# Kinds whose two sides play asymmetric roles; for these the orientation
# says which side is K-larger.
STRICT_KINDS = frozenset(k for k, rel in K_RELATION.items() if rel == ">")
FLIP_LIKE = frozenset({Kind.GENERALIZED_FLIP, Kind.TORIC_FLIP})
FLOP_LIKE = frozenset({Kind.GENERALIZED_FLOP, Kind.TORIC_FLOP, Kind.ISOMORPHISM,
                       Kind.EMPTY_BOTH_SIDES})


@dataclass(frozen=True)
class DiagramClass:
    """Classification verdict.

    ``orientation`` is ``"+"`` when the plus side is the K-larger one
    (M+ >_K M-), ``"-"`` for the mirrored diagram.  It is irrelevant for
    "=" relations and kept as ``"+"`` there.
    """

    kind: Kind
    certificate: dict = field(default_factory=dict)
    orientation: str = "+"
    note: str = ""

    @property
    def k_relation(self) -> str:
        return K_RELATION[self.kind]

    def to_record(self) -> dict:
        rec = {"kind": self.kind.value, "k_relation": self.k_relation,
               "orientation": self.orientation, "certificate": self.certificate}
        if self.note:
            rec["note"] = self.note
        return rec


# -- extended quivers --------------------------------------------------------

@dataclass(frozen=True)
class ExtendedQuiverSpec:
    base: Quiver
    a: Mapping[str, int]
    b: Mapping[str, int]
    c: int = 0
    framing: str = "0"

    def __post_init__(self):
        object.__setattr__(self, "a", {v: int(self.a.get(v, 0)) for v in self.base.vertices})
        object.__setattr__(self, "b", {v: int(self.b.get(v, 0)) for v in self.base.vertices})
        if any(x < 0 for x in (*self.a.values(), *self.b.values(), self.c)):
            raise InputError("framing arrow counts must be nonnegative")
        if self.framing in self.base.vertices:
            raise InputError(f"framing vertex {self.framing!r} clashes with a base vertex")

    def to_record(self) -> dict:
        return {"base": self.base.to_record(), "a": dict(self.a), "b": dict(self.b),
                "c": self.c, "framing": self.framing}

    @classmethod
    def from_record(cls, rec: Mapping) -> "ExtendedQuiverSpec":
        try:
            base = Quiver.from_record(rec["base"])
            a, b = rec.get("a", {}), rec.get("b", {})
            c = int(rec.get("c", 0))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad extended-quiver spec: {exc}") from None
        unknown = (set(a) | set(b)) - set(base.vertices)
        if unknown:
            raise InputError(f"framing data names unknown vertices {sorted(unknown)}")
        return cls(base, a, b, c, str(rec.get("framing", "0")))

    def star_dimvec(self, qstar: Quiver, m: DimVector) -> DimVector:
        if m.vertices != self.base.vertices:
            raise InputError("dimension vector is not indexed by the base quiver")
        vals = {self.framing: 1, **m.as_dict()}
        return qstar.dimvec(vals)


def build_extended(spec: ExtendedQuiverSpec) -> Quiver:
    if not is_symmetric(spec.base):
        raise PreconditionError("extended quivers are built from symmetric base quivers")
    o = spec.framing
    edges = list(spec.base.edges)
    for v in spec.base.vertices:
        edges += [(o, v)] * spec.a[v] + [(v, o)] * spec.b[v]
    edges += [(o, o)] * spec.c
    return Quiver((o, *spec.base.vertices), tuple(edges))


def normalized_character(spec: ExtendedQuiverSpec) -> dict[str, int]:
    """Canonical character of Q* with the framing line bundle trivialised."""
    kappa = canonical_character(build_extended(spec))
    return {v: kappa[v] for v in spec.base.vertices}


# -- symmetric quivers: flops ---------------------------------------------------

def classify_symmetric_flop(q: Quiver, m: DimVector) -> DiagramClass:
    if not is_symmetric(q):
        raise PreconditionError("classify_symmetric_flop needs a symmetric quiver")
    if m.vertices != q.vertices:
        raise InputError("dimension vector does not match quiver")
    if m.is_zero() or not m.is_primitive():
        raise PreconditionError(f"dimension vector {m} is not primitive")
    verdict = has_simple(q, m)
    walls = enumerate_walls(m)
    cert = {"simple": verdict.to_record(), "walls": len(walls),
            "canonical_character": canonical_character(q)}
    if symmetric_stable_nonempty(q, m):
        if not walls:
            cert["subcase"] = "Isomorphism"
        return DiagramClass(Kind.GENERALIZED_FLOP, cert,
                            note="d-critical generalized flop for any convergent super-potential")
    return DiagramClass(Kind.EMPTY_BOTH_SIDES, cert)


# -- extended quivers: flips and Mori fibre spaces ---------------------------------

def framing_directions(spec: ExtendedQuiverSpec) -> dict[str, str]:
    return {v: (">" if spec.a[v] > spec.b[v] else "=" if spec.a[v] == spec.b[v] else "<")
            for v in spec.base.vertices}


def classify_extended_flip(spec: ExtendedQuiverSpec, m: DimVector) -> DiagramClass:
    dirs = framing_directions(spec)
    kinds = set(dirs.values())
    if kinds == {"="}:
        raise PreconditionError(
            "a_i = b_i at every vertex: Q* is symmetric, use classify_symmetric_flop on Q*")
    if kinds == {"<"}:
        raise PreconditionError(
            "a_i < b_i at every vertex: swap a and b (dual quiver) and read the result mirrored")
    if kinds != {">"}:
        return DiagramClass(Kind.INDETERMINATE, {"per_vertex": dirs},
                            note="mixed framing data: neither the flip nor the flop case applies")

    qstar = build_extended(spec)
    mstar = spec.star_dimvec(qstar, m)
    verdict = has_simple(qstar, mstar)
    cert: dict = {"m_star": mstar.as_dict(), "simple": verdict.to_record(),
                  "canonical_character": normalized_character(spec)}
    single = _single_vertex_data(spec, m)
    if single is not None and single[2] > 0:
        a1, b1, mm = single
        plus, minus = grassmannian_model_dims(a1, b1, spec.c, mm)
        cert["dims"] = {"plus": plus, "minus": minus}
        if minus is None and plus is not None:
            cert["plus_birational"] = plus == _affine_quotient_dim(a1, b1, spec.c, mm)

    if verdict.exists:
        return DiagramClass(Kind.GENERALIZED_FLIP, cert,
                            note="d-critical generalized flip for any convergent super-potential")
    cert["minus_side"] = "empty"
    return DiagramClass(Kind.GENERALIZED_MFS, cert,
                        note="minus side empty; d-critical generalized MFS")


def _single_vertex_data(spec: ExtendedQuiverSpec, m: DimVector):
    base = spec.base
    if len(base.vertices) != 1 or base.edges:
        return None
    v = base.vertices[0]
    return spec.a[v], spec.b[v], m[v]


def _affine_quotient_dim(a1: int, b1: int, c: int, m: int) -> int:
    # b1 x a1 matrices of rank <= m, times the loop space at the framing vertex
    if m >= min(a1, b1):
        return a1 * b1 + c
    return m * (a1 + b1 - m) + c


def is_strict_sufficient(spec: ExtendedQuiverSpec, m: DimVector, w_minimal: bool) -> bool:
    """Sufficient condition for strictness at the origin (positive-dimensional framing Grassmannian)."""
    if m.vertices != spec.base.vertices:
        raise InputError("dimension vector is not indexed by the base quiver")
    return bool(w_minimal) and all(spec.a[v] > m[v] for v in spec.base.vertices)


# -- one framed vertex: the toric local model -----------------------------------

def classify_two_vertex(a: int, b: int) -> DiagramClass:
    """Local model with V+ of dimension a and V- of dimension b."""
    if a < 0 or b < 0:
        raise InputError("dimensions must be nonnegative")
    if b > a:
        inner = classify_two_vertex(b, a)
        return DiagramClass(inner.kind, {**inner.certificate, "a": a, "b": b, "mirrored": True},
                            "-", inner.note)
    cert = {"a": a, "b": b, "chi": chi_from_ext(a, b)}
    if a == b:
        if a >= 2:
            return DiagramClass(Kind.TORIC_FLOP, cert, note="standard toric flop")
        if a == 1:
            return DiagramClass(Kind.ISOMORPHISM, cert)
        return DiagramClass(Kind.EMPTY_BOTH_SIDES, cert)
    if b >= 2:
        return DiagramClass(Kind.TORIC_FLIP, cert, note="standard toric flip")
    if b == 1:
        return DiagramClass(Kind.DIVISORIAL_CONTRACTION, cert,
                            note=f"blow-up of affine {a}-space at the origin")
    return DiagramClass(Kind.GENERALIZED_MFS, cert, note="minus side empty")


def chi_from_ext(ext_12: int, ext_21: int) -> int:
    """chi(E1, E2) = ext^1(E2, E1) - ext^1(E1, E2) for a simple pair of objects."""
    return ext_21 - ext_12


def local_model_dims(a: int, b: int, c: int) -> tuple[int, int]:
    """Critical-locus dimensions +-(a - b) + c - 1 (negative means degenerate)."""
    return a - b + c - 1, b - a + c - 1


def grassmannian_model_dims(a1: int, b1: int, c: int, m: int) -> tuple[int | None, int | None]:
    if m <= 0:
        raise InputError("m must be positive")
    plus = m * (a1 - m) + m * b1 + c if m <= a1 else None
    minus = m * (b1 - m) + m * a1 + c if m <= b1 else None
    return plus, minus
