"""Existence of simple representations (Le Bruyn-Procesi criterion).

The verdict always carries a certificate.  Negative certificates are
constructive: ``DestabilizingVertex(i, "quotient")`` means every
representation of the given dimension vector surjects onto the simple S_i,
``(i, "sub")`` means S_i injects into every such representation.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .quiver import (DimVector, InputError, Quiver, TrivialType, detect_trivial_type,
                     euler_pairing, is_symmetric, support_subquiver, unreachable_pair)


@dataclass(frozen=True)
class Certificate:
    kind: str
    data: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return {"kind": self.kind, **self.data}


POSITIVE_KINDS = ("TypeI", "InequalitiesOK")


@dataclass(frozen=True)
class SimpleVerdict:
    exists: bool
    certificate: Certificate

    def __post_init__(self):
        if self.exists != (self.certificate.kind in POSITIVE_KINDS):
            raise ValueError(f"inconsistent verdict {self.exists} with {self.certificate.kind}")

    def to_record(self) -> dict:
        return {"exists": self.exists, "certificate": self.certificate.to_record()}


def _type_i(shape: str) -> SimpleVerdict:
    return SimpleVerdict(True, Certificate("TypeI", {"shape": shape}))


def has_simple(q: Quiver, m: DimVector) -> SimpleVerdict:
    if m.vertices != q.vertices:
        raise InputError("dimension vector does not match quiver")
    if m.is_zero():
        raise InputError("has_simple needs a nonzero dimension vector")

    shape = detect_trivial_type(q, m)
    if shape.kind is not TrivialType.OTHER:
        for v, x in m.items():
            if x >= 2:
                return SimpleVerdict(False, Certificate(
                    "TypeMismatch", {"shape": str(shape), "vertex": v, "m_i": x}))
        return _type_i(str(shape))

    # pairing obstructions first: they give the sharper certificates
    for v in m.support():
        e = q.unit(v)
        into = euler_pairing(q, m, e)
        if into > 0:
            return SimpleVerdict(False, Certificate(
                "DestabilizingVertex", {"vertex": v, "direction": "quotient", "pairing": into}))
        out = euler_pairing(q, e, m)
        if out > 0:
            return SimpleVerdict(False, Certificate(
                "DestabilizingVertex", {"vertex": v, "direction": "sub", "pairing": out}))

    pair = unreachable_pair(support_subquiver(q, m))
    if pair is not None:
        return SimpleVerdict(False, Certificate("NotStronglyConnected", {"pair": list(pair)}))
    return SimpleVerdict(True, Certificate("InequalitiesOK"))


def symmetric_stable_nonempty(q: Quiver, m: DimVector) -> bool:
    """For symmetric quivers: stable locus nonempty for one (equivalently every) charge."""
    if not is_symmetric(q):
        raise InputError("quiver is not symmetric; use has_simple together with chamber data")
    return has_simple(q, m).exists
