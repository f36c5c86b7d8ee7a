"""Central charges, walls and exact chamber tests.

Charges are Gaussian rationals; every comparison here is an exact equality
or sign test over :class:`fractions.Fraction`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .quiver import DimVector, InputError, PreconditionError, Quiver, is_symmetric

Rational = Fraction | int


@dataclass(frozen=True)
class Gaussian:
    """An element re + im*i of Q(i)."""

    re: Fraction
    im: Fraction

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    def __add__(self, other: "Gaussian") -> "Gaussian":
        return Gaussian(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "Gaussian") -> "Gaussian":
        return Gaussian(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        if isinstance(other, Gaussian):
            return Gaussian(self.re * other.re - self.im * other.im,
                            self.re * other.im + self.im * other.re)
        k = Fraction(other)
        return Gaussian(self.re * k, self.im * k)

    __rmul__ = __mul__

    def __neg__(self) -> "Gaussian":
        return Gaussian(-self.re, -self.im)

    def conj(self) -> "Gaussian":
        return Gaussian(self.re, -self.im)

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


ZERO = Gaussian(0, 0)


@dataclass(frozen=True)
class CentralCharge:
    """One upper-half-plane value per vertex."""

    vertices: tuple[str, ...]
    values: tuple[Gaussian, ...]

    def __post_init__(self):
        if len(self.vertices) != len(self.values):
            raise InputError("charge has a different number of values and vertices")
        for v, z in zip(self.vertices, self.values):
            if z.im <= 0:
                raise InputError(f"charge at vertex {v} has Im <= 0: {z}")

    @classmethod
    def on(cls, q: Quiver, values: Mapping[str, Gaussian | tuple]) -> "CentralCharge":
        missing = set(q.vertices) - set(values)
        extra = set(values) - set(q.vertices)
        if missing or extra:
            raise InputError(f"charge vertex mismatch: missing {sorted(missing)}, unknown {sorted(extra)}")
        vals = []
        for v in q.vertices:
            z = values[v]
            vals.append(z if isinstance(z, Gaussian) else Gaussian(*z))
        return cls(q.vertices, tuple(vals))

    def __getitem__(self, v: str) -> Gaussian:
        return self.values[self.vertices.index(v)]

    def scaled(self, k: Rational) -> "CentralCharge":
        k = Fraction(k)
        if k <= 0:
            raise InputError("charges can only be scaled by a positive rational")
        return CentralCharge(self.vertices, tuple(z * k for z in self.values))


def charge(xi: CentralCharge, m: DimVector) -> Gaussian:
    """Z_xi(m) = sum_i m_i xi_i."""
    if xi.vertices != m.vertices:
        raise InputError("charge and dimension vector are indexed by different vertices")
    total = ZERO
    for z, k in zip(xi.values, m.values):
        if k:
            total = total + z * k
    return total


def _lex_key(m: DimVector) -> tuple[int, ...]:
    return m.values


@dataclass(frozen=True)
class Wall:
    """Unordered decomposition m = m1 + m2, stored with m1 lexicographically first."""

    m1: DimVector
    m2: DimVector

    def __post_init__(self):
        if self.m1.vertices != self.m2.vertices:
            raise InputError("wall halves are indexed by different vertices")
        if self.m1.is_zero() or self.m2.is_zero():
            raise InputError("wall halves must be nonzero")
        if _lex_key(self.m2) < _lex_key(self.m1):
            a, b = self.m1, self.m2
            object.__setattr__(self, "m1", b)
            object.__setattr__(self, "m2", a)
        if _proportional(self.m1, self.m2):
            raise InputError(f"wall halves {self.m1} and {self.m2} are proportional")

    @property
    def total(self) -> DimVector:
        return self.m1 + self.m2

    def swapped(self) -> tuple[DimVector, DimVector]:
        return (self.m2, self.m1)

    def __str__(self) -> str:
        return f"{{{self.m1},{self.m2}}}"


def _proportional(a: DimVector, b: DimVector) -> bool:
    # a, b nonzero with nonnegative entries
    return all(x * sum(b.values) == y * sum(a.values) for x, y in zip(a.values, b.values))


def wall_count(m: DimVector) -> int:
    prod = 1
    for x in m.values:
        prod *= x + 1
    return (prod - 2) // 2


def iter_walls(m: DimVector) -> Iterator[Wall]:
    """All unordered decompositions of a primitive m, in canonical order."""
    if m.is_zero():
        raise InputError("cannot enumerate walls of the zero vector")
    if not m.is_primitive():
        raise InputError(f"dimension vector {m} is not primitive")
    for head in itertools.product(*(range(x + 1) for x in m.values)):
        m1 = DimVector(m.vertices, head)
        m2 = m - m1
        if m1.is_zero() or m2.is_zero() or _lex_key(m2) < _lex_key(m1):
            continue
        yield Wall(m1, m2)


def enumerate_walls(m: DimVector) -> list[Wall]:
    return list(iter_walls(m))


def _pairing(xi: CentralCharge, w: Wall) -> Gaussian:
    return charge(xi, w.m1) * charge(xi, w.m2).conj()


def on_wall(xi: CentralCharge, w: Wall) -> bool:
    """Whether Z(m1) lies on the open ray R_{>0} Z(m2)."""
    p = _pairing(xi, w)
    return p.im == 0 and p.re > 0


def wall_side(xi: CentralCharge, w: Wall, *, orientation: tuple[DimVector, DimVector] | None = None) -> int:
    """Sign of Im(Z(m1) conj Z(m2)); +1 when the phase of Z(m1) is larger.

    ``orientation`` overrides the stored order (m1, m2) of the wall.
    """
    a, b = orientation if orientation is not None else (w.m1, w.m2)
    p = charge(xi, a) * charge(xi, b).conj()
    return (p.im > 0) - (p.im < 0)


def coincident_walls(walls: Iterable[Wall], xi: CentralCharge) -> list[list[Wall]]:
    """Group walls that ``xi`` lies on by the common ray they define.

    Distinct decompositions can cut out the same hypersurface; they are kept
    separate in wall lists and only grouped here for reporting.
    """
    groups: dict[Fraction, list[Wall]] = {}
    for w in walls:
        if not on_wall(xi, w):
            continue
        z = charge(xi, w.m1)
        # Im z > 0, so the ray is determined by re/im
        groups.setdefault(z.re / z.im, []).append(w)
    return [g for _, g in sorted(groups.items()) if len(g) > 1]


def imaginary_candidates() -> Iterator[Fraction]:
    """1, 1+1/3, 1-1/3, 1+1/5, 1-1/5, ..."""
    yield Fraction(1)
    k = 3
    while True:
        yield 1 + Fraction(1, k)
        yield 1 - Fraction(1, k)
        k += 2


def _tuples_by_max_index(n: int) -> Iterator[tuple[int, ...]]:
    k = 0
    while True:
        for t in itertools.product(range(k + 1), repeat=n):
            if max(t, default=0) == k:
                yield t
        k += 1
        if n == 0:
            return


class ChargeSearchError(PreconditionError):
    def __init__(self, message: str, blocking: list[Wall]):
        super().__init__(message)
        self.blocking = blocking


def flop_charges(q: Quiver, m: DimVector, rho: Mapping[str, int],
                 budget: int = 256) -> tuple[CentralCharge, CentralCharge]:
    """Charges xi+/xi- with Re xi+_i = rho_i = -Re xi-_i, off every wall of m."""
    if not is_symmetric(q):
        raise PreconditionError("flop charges need a symmetric quiver")
    if m.vertices != q.vertices:
        raise InputError("dimension vector does not match quiver")
    if not m.is_primitive():
        raise PreconditionError(f"dimension vector {m} is not primitive")
    r = [int(rho.get(v, 0)) for v in q.vertices]
    if not any(r):
        raise PreconditionError("rho must be nonzero")
    if sum(x * k for x, k in zip(r, m.values)) != 0:
        raise PreconditionError("rho must satisfy sum_i m_i rho_i = 0")

    walls = enumerate_walls(m)
    seq = list(itertools.islice(imaginary_candidates(), budget))
    blocking: list[Wall] = []
    for count, idx in enumerate(_tuples_by_max_index(len(r))):
        if count >= budget:
            break
        ims = [seq[i] for i in idx]
        plus = CentralCharge(q.vertices, tuple(Gaussian(x, y) for x, y in zip(r, ims)))
        minus = CentralCharge(q.vertices, tuple(Gaussian(-x, y) for x, y in zip(r, ims)))
        blocking = [w for w in walls if on_wall(plus, w) or on_wall(minus, w)]
        if not blocking:
            return plus, minus
    raise ChargeSearchError(
        f"no off-wall imaginary parts found within {budget} candidates; "
        f"blocking walls: {', '.join(map(str, blocking))}", blocking)


def star_charges(qstar: Quiver, theta: Rational, framing: str = "0") -> tuple[CentralCharge, CentralCharge]:
    """xi+_0 = -theta + i, xi-_0 = theta + i, all other vertices i."""
    theta = Fraction(theta)
    if theta <= 0:
        raise InputError("theta must be a positive rational")
    if framing not in qstar.vertices:
        raise InputError(f"quiver has no framing vertex {framing!r}")
    one = Gaussian(0, 1)
    plus = tuple(Gaussian(-theta, 1) if v == framing else one for v in qstar.vertices)
    minus = tuple(Gaussian(theta, 1) if v == framing else one for v in qstar.vertices)
    return CentralCharge(qstar.vertices, plus), CentralCharge(qstar.vertices, minus)


def wall_report(m: DimVector, xi: CentralCharge | None = None) -> list[dict]:
    rows = []
    for w in enumerate_walls(m):
        row = {"m1": list(w.m1.values), "m2": list(w.m2.values)}
        if xi is not None:
            row["on_wall"] = on_wall(xi, w)
            row["side"] = wall_side(xi, w)
        rows.append(row)
    return rows
