"""Truncated Laurent series in q graded by effective curve classes.

A series is a finite map ``(n, w) -> Fraction`` where ``n`` is the q-exponent
and ``w`` a nonnegative weight vector over a declared set of classes.  The
q-window and the weight cap ``t_cap`` say which coefficients are kept.

Products are the exact Cauchy products of the stored coefficients,
re-truncated.  The table-driven operations (wall factors, the product
formula, the DT/PT transform) compute on exact polynomials and truncate only
once at the end, so shrinking the output truncation never changes a kept
coefficient.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .quiver import InputError, PreconditionError

Weight = tuple[int, ...]
Key = tuple[int, Weight]
Poly = dict[Key, Fraction]


# -- class lattice -------------------------------------------------------------------

@dataclass(frozen=True)
class ClassLattice:
    """Generators of the effective monoid with their omega-degrees."""

    names: tuple[str, ...]
    degrees: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.names) != len(self.degrees):
            raise InputError("class names and degrees differ in length")
        if len(set(self.names)) != len(self.names):
            raise InputError("duplicate class names")
        degs = tuple(Fraction(d) for d in self.degrees)
        if any(d <= 0 for d in degs):
            raise InputError("omega-degrees must be positive")
        object.__setattr__(self, "degrees", degs)

    @classmethod
    def single(cls, degree=1, name: str = "C") -> "ClassLattice":
        return cls((name,), (Fraction(degree),))

    @property
    def rank(self) -> int:
        return len(self.names)

    def degree(self, w: Weight) -> Fraction:
        self.check(w)
        return sum((d * k for d, k in zip(self.degrees, w)), Fraction(0))

    def check(self, w: Weight) -> None:
        if len(w) != self.rank or any(k < 0 for k in w):
            raise InputError(f"class weight {w} is not a nonnegative vector of length {self.rank}")

    def unit(self, name: str) -> Weight:
        return tuple(int(n == name) for n in self.names)


def _total(w: Weight) -> int:
    return sum(w)


def _add_w(a: Weight, b: Weight) -> Weight:
    return tuple(x + y for x, y in zip(a, b))


# -- the series type -----------------------------------------------------------------

@dataclass(frozen=True)
class TruncatedSeries:
    rank: int
    window: tuple[int, int]
    t_cap: int
    coeffs: Mapping[Key, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        lo, hi = self.window
        if lo > hi:
            raise InputError(f"empty q-window [{lo}, {hi}]")
        if self.t_cap < 0:
            raise InputError("t_cap must be nonnegative")
        clean: dict[Key, Fraction] = {}
        for (n, w), c in self.coeffs.items():
            w = tuple(int(x) for x in w)
            if len(w) != self.rank or any(x < 0 for x in w):
                raise InputError(f"class weight {w} does not fit rank {self.rank}")
            c = Fraction(c)
            if c and lo <= n <= hi and _total(w) <= self.t_cap:
                clean[(int(n), w)] = clean.get((int(n), w), Fraction(0)) + c
        object.__setattr__(self, "coeffs", {k: v for k, v in clean.items() if v})
        object.__setattr__(self, "window", (int(lo), int(hi)))

    # construction

    @classmethod
    def one(cls, rank: int, window: tuple[int, int], t_cap: int) -> "TruncatedSeries":
        return cls(rank, window, t_cap, {(0, (0,) * rank): Fraction(1)})

    @classmethod
    def from_poly(cls, rank: int, poly: Mapping[Key, Fraction], window, t_cap) -> "TruncatedSeries":
        return cls(rank, tuple(window), t_cap, dict(poly))

    # access

    def coeff(self, n: int, w: Weight = ()) -> Fraction:
        return self.coeffs.get((n, tuple(w)), Fraction(0))

    def items(self) -> Iterator[tuple[Key, Fraction]]:
        """Coefficients sorted by (total weight, weight, n)."""
        for key in sorted(self.coeffs, key=lambda k: (_total(k[1]), k[1], k[0])):
            yield key, self.coeffs[key]

    def at_weight(self, w: Weight) -> list[Fraction]:
        """Coefficients of t^w across the whole window, lowest n first."""
        lo, hi = self.window
        return [self.coeff(n, w) for n in range(lo, hi + 1)]

    def truncate(self, window: tuple[int, int] | None = None, t_cap: int | None = None) -> "TruncatedSeries":
        window = self.window if window is None else window
        t_cap = self.t_cap if t_cap is None else t_cap
        return TruncatedSeries(self.rank, window, t_cap, self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs == {(0, (0,) * self.rank): 1}

    def to_rows(self) -> list[list]:
        return [[list(w), n, _fmt(c)] for (n, w), c in self.items()]

    def dump(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for (n, w), c in self.items():
            mono = "".join([f"q^{n}" if n else ""] + [f"t{i}^{k}" for i, k in enumerate(w) if k])
            terms.append(f"{_fmt(c)}{'*' + mono if mono else ''}")
        return " + ".join(terms)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return series_mul(self, other)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        window, cap = _meet(self, other)
        poly = dict(self.coeffs)
        for k, c in other.coeffs.items():
            poly[k] = poly.get(k, Fraction(0)) + c
        return TruncatedSeries(self.rank, window, cap, poly)


def _fmt(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _meet(a: TruncatedSeries, b: TruncatedSeries) -> tuple[tuple[int, int], int]:
    if a.rank != b.rank:
        raise InputError("series are graded by different class sets")
    lo, hi = max(a.window[0], b.window[0]), min(a.window[1], b.window[1])
    if lo > hi:
        raise InputError("series windows do not intersect")
    return (lo, hi), min(a.t_cap, b.t_cap)


# -- exact polynomial kernel ----------------------------------------------------------

def _pmul(a: Mapping[Key, Fraction], b: Mapping[Key, Fraction], t_cap: int,
          n_max: int | None = None) -> Poly:
    """Exact product, dropping total weight above t_cap (and q-degree above n_max).

    Dropping the top in q is only safe when both factors have valuation >= 0;
    callers pass n_max only in that situation.
    """
    out: Poly = {}
    for (n1, w1), c1 in a.items():
        t1 = _total(w1)
        for (n2, w2), c2 in b.items():
            if t1 + _total(w2) > t_cap:
                continue
            n = n1 + n2
            if n_max is not None and n > n_max:
                continue
            key = (n, _add_w(w1, w2))
            out[key] = out.get(key, Fraction(0)) + c1 * c2
    return {k: v for k, v in out.items() if v}


def _pexp_nilpotent(x: Mapping[Key, Fraction], rank: int, t_cap: int) -> Poly:
    """exp(x) for x with every term of positive total weight."""
    for (_, w) in x:
        if _total(w) == 0:
            raise InputError("exponent has a term of class weight 0")
    result: Poly = {(0, (0,) * rank): Fraction(1)}
    power: Poly = dict(result)
    for k in range(1, t_cap + 1):
        power = _pmul(power, x, t_cap)
        if not power:
            break
        inv = Fraction(1, math.factorial(k))
        for key, c in power.items():
            result[key] = result.get(key, Fraction(0)) + c * inv
    return {k: v for k, v in result.items() if v}


def series_mul(a: TruncatedSeries, b: TruncatedSeries, window: tuple[int, int] | None = None,
               t_cap: int | None = None) -> TruncatedSeries:
    """Cauchy product of the stored coefficients, truncated to the common window and cap."""
    w, cap = _meet(a, b)
    window = w if window is None else window
    cap = cap if t_cap is None else t_cap
    return TruncatedSeries(a.rank, window, cap, _pmul(a.coeffs, b.coeffs, cap))


# -- invariant tables -----------------------------------------------------------------

@dataclass(frozen=True)
class InvariantTable:
    """Finitely many values indexed by (class weight, n).

    ``symmetric`` records the claim value(w, n) = value(w, -n); it is
    validated on construction for the pairs actually present.
    ``periodic`` records value(w, n) = value(w, n + deg w) and is checked
    only where deg w is an integer.
    """

    lattice: ClassLattice
    values: Mapping[tuple[Weight, int], Fraction]
    symmetric: bool = False
    periodic: bool = False

    def __post_init__(self):
        clean = {}
        for (w, n), v in self.values.items():
            w = tuple(int(x) for x in w)
            self.lattice.check(w)
            clean[(w, int(n))] = Fraction(v)
        object.__setattr__(self, "values", clean)
        if self.symmetric:
            bad = self.asymmetry()
            if bad is not None:
                raise InputError(f"table declared symmetric but entries at {bad} differ")
        if self.periodic:
            bad = self.aperiodicity()
            if bad is not None:
                raise InputError(f"table declared periodic but entries at {bad} differ")

    def get(self, w: Weight, n: int) -> Fraction:
        return self.values.get((tuple(w), n), Fraction(0))

    def asymmetry(self):
        for (w, n), v in sorted(self.values.items()):
            if self.get(w, -n) != v:
                return (list(w), n)
        return None

    def aperiodicity(self):
        for (w, n), v in sorted(self.values.items()):
            d = self.lattice.degree(w)
            if d.denominator != 1 or d == 0:
                continue
            shifted = (w, n + int(d))
            if shifted in self.values and self.values[shifted] != v:
                return (list(w), n)
        return None

    def negated(self) -> "InvariantTable":
        return InvariantTable(self.lattice, {k: -v for k, v in self.values.items()},
                              self.symmetric, self.periodic)

    def to_rows(self) -> list[list]:
        return [[list(w), n, _fmt(v)] for (w, n), v in sorted(self.values.items())]


def palindrome_check(table: InvariantTable | Mapping[tuple[Weight, int], Fraction]) -> bool:
    """True iff the table is invariant under n -> -n."""
    values = table.values if isinstance(table, InvariantTable) else table
    vals = {(tuple(w), n): Fraction(v) for (w, n), v in values.items()}
    return all(vals.get((w, -n), 0) == v for (w, n), v in vals.items())


def _first_order_exponent(table: InvariantTable, t_cap: int) -> Poly:
    # sum over n > 0 and nonzero class of (-1)^(n-1) n N q^n t^w
    out: Poly = {}
    for (w, n), v in table.values.items():
        if n <= 0 or _total(w) == 0 or _total(w) > t_cap or not v:
            continue
        sign = 1 if n % 2 else -1
        out[(n, w)] = out.get((n, w), Fraction(0)) + sign * n * v
    return out


def _l_poly(table: InvariantTable, t_cap: int) -> Poly:
    rank = table.lattice.rank
    poly: Poly = {(0, (0,) * rank): Fraction(1)}
    for (w, n), v in table.values.items():
        if _total(w) == 0:
            if (n, v) != (0, 1) and v:
                raise InputError("the class-0 part of an L table must be the constant 1")
            continue
        if _total(w) <= t_cap and v:
            poly[(n, w)] = poly.get((n, w), Fraction(0)) + v
    return poly


# -- walls ----------------------------------------------------------------------------

@dataclass(frozen=True)
class WallDatum:
    t: Fraction
    lattice: ClassLattice
    contributions: tuple[tuple[Weight, int, Fraction], ...]

    def __post_init__(self):
        t = Fraction(self.t)
        if t <= 0:
            raise InputError("wall position t must be positive")
        contribs = []
        for w, n, value in self.contributions:
            w = tuple(int(x) for x in w)
            self.lattice.check(w)
            if _total(w) == 0:
                raise InputError("wall contribution with class weight 0")
            if n <= 0:
                raise InputError("wall contributions need n > 0")
            if Fraction(n) / self.lattice.degree(w) != t:
                raise InputError(f"contribution (n={n}, weight {w}) does not lie on t = {t}")
            contribs.append((w, int(n), Fraction(value)))
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "contributions", tuple(contribs))

    def negated(self) -> "WallDatum":
        return WallDatum(self.t, self.lattice, tuple((w, n, -v) for w, n, v in self.contributions))

    def exponent(self, t_cap: int) -> Poly:
        out: Poly = {}
        for w, n, v in self.contributions:
            if _total(w) > t_cap or not v:
                continue
            sign = 1 if n % 2 else -1
            out[(n, w)] = out.get((n, w), Fraction(0)) + sign * n * v
        return out


def walls_from_table(table: InvariantTable, t_cap: int) -> list[WallDatum]:
    """Split the n > 0 part of an N table into walls t = n / deg(w), sorted descending."""
    buckets: dict[Fraction, list] = {}
    for (w, n), v in sorted(table.values.items()):
        if n <= 0 or _total(w) == 0 or _total(w) > t_cap:
            continue
        t = Fraction(n) / table.lattice.degree(w)
        buckets.setdefault(t, []).append((w, n, v))
    return [WallDatum(t, table.lattice, tuple(c)) for t, c in sorted(buckets.items(), reverse=True)]


def wall_factor(wd: WallDatum, window: tuple[int, int], t_cap: int) -> TruncatedSeries:
    """exp(sum (-1)^(n-1) n N q^n t^w) over the wall's contributions."""
    rank = wd.lattice.rank
    poly = _pexp_nilpotent(wd.exponent(t_cap), rank, t_cap)
    return TruncatedSeries(rank, window, t_cap, poly)


def apply_wall_crossing(L: TruncatedSeries, wd: WallDatum) -> TruncatedSeries:
    if L.rank != wd.lattice.rank:
        raise InputError("series and wall are graded by different class sets")
    factor = _pexp_nilpotent(wd.exponent(L.t_cap), L.rank, L.t_cap)
    return TruncatedSeries(L.rank, L.window, L.t_cap, _pmul(factor, L.coeffs, L.t_cap))


def pt_product_formula(N: InvariantTable, L: InvariantTable, window: tuple[int, int],
                       t_cap: int) -> TruncatedSeries:
    """1 + sum P q^n t^w = exp(sum_{n>0} (-1)^(n-1) n N q^n t^w) * (1 + sum L q^n t^w)."""
    if N.lattice != L.lattice:
        raise InputError("N and L tables use different class sets")
    if not palindrome_check(L):
        bad = L.asymmetry() if isinstance(L, InvariantTable) else None
        raise PreconditionError(f"L table is not symmetric under n -> -n (first mismatch at {bad})")
    rank = N.lattice.rank
    expo = _pexp_nilpotent(_first_order_exponent(N, t_cap), rank, t_cap)
    return TruncatedSeries(rank, window, t_cap, _pmul(expo, _l_poly(L, t_cap), t_cap))


@dataclass
class TelescopeReport:
    ok: bool
    first_mismatch: dict | None = None
    mismatches: int = 0

    def to_record(self) -> dict:
        return {"ok": self.ok, "mismatches": self.mismatches, "first_mismatch": self.first_mismatch}


def compare_series(lhs: TruncatedSeries, rhs: TruncatedSeries) -> TelescopeReport:
    keys = sorted(set(lhs.coeffs) | set(rhs.coeffs), key=lambda k: (_total(k[1]), k[1], k[0]))
    bad = [k for k in keys if lhs.coeff(*k) != rhs.coeff(*k)]
    if not bad:
        return TelescopeReport(True)
    n, w = bad[0]
    first = {"n": n, "weight": list(w), "lhs": _fmt(lhs.coeff(n, w)), "rhs": _fmt(rhs.coeff(n, w))}
    return TelescopeReport(False, first, len(bad))


def telescope_check(N: InvariantTable, L_plus: InvariantTable, walls: Sequence[WallDatum],
                    window: tuple[int, int], t_cap: int) -> TelescopeReport:
    """Compare (product of wall factors) * L+ with the product formula, coefficient by coefficient."""
    ts = [w.t for w in walls]
    if any(t <= 0 for t in ts):
        raise InputError("telescoping walls must all be positive")
    if any(a <= b for a, b in zip(ts, ts[1:])):
        raise InputError("walls must be sorted strictly descending")
    rank = L_plus.lattice.rank
    acc = _l_poly(L_plus, t_cap)
    for wd in walls:
        if wd.lattice != L_plus.lattice:
            raise InputError("wall uses a different class set")
        acc = _pmul(_pexp_nilpotent(wd.exponent(t_cap), rank, t_cap), acc, t_cap)
    lhs = TruncatedSeries(rank, window, t_cap, acc)
    rhs = pt_product_formula(N, L_plus, window, t_cap)
    return compare_series(lhs, rhs)


# -- MacMahon and DT/PT ----------------------------------------------------------------

def _binomial_series(s: Fraction, step: int, q_max: int) -> list[Fraction]:
    """(1 - q^step)^(-s) up to q^q_max."""
    out = [Fraction(0)] * (q_max + 1)
    coef = Fraction(1)
    j = 0
    while j * step <= q_max:
        out[j * step] = coef
        coef = coef * (s + j) / (j + 1)
        j += 1
    return out


def _mul_power_series(a: Sequence[Fraction], b: Sequence[Fraction], q_max: int) -> list[Fraction]:
    out = [Fraction(0)] * (q_max + 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j in range(0, q_max + 1 - i):
            if b[j]:
                out[i + j] += x * b[j]
    return out


def mac_mahon_coefficients(e: int, q_max: int) -> list[Fraction]:
    if q_max < 0:
        raise InputError("q_max must be nonnegative")
    out = [Fraction(1)] + [Fraction(0)] * q_max
    for n in range(1, q_max + 1):
        if e:
            out = _mul_power_series(out, _binomial_series(Fraction(n * e), n, q_max), q_max)
    return out


def mac_mahon(e: int, q_max: int) -> TruncatedSeries:
    """prod_{n>=1} (1 - q^n)^(-n e), truncated at q^q_max."""
    coeffs = mac_mahon_coefficients(e, q_max)
    return TruncatedSeries(0, (0, q_max), 0, {(n, ()): c for n, c in enumerate(coeffs)})


def dtpt_transform(P: TruncatedSeries, e: int) -> TruncatedSeries:
    """Multiply every class-weight slice of P by the MacMahon factor with exponent e."""
    if not P.coeffs:
        return P
    lo = min(n for n, _ in P.coeffs)
    span = max(P.window[1] - lo, 0)
    mm = mac_mahon_coefficients(e, span)
    out: Poly = {}
    for (n, w), c in P.coeffs.items():
        for k, m in enumerate(mm):
            if m and n + k <= P.window[1]:
                key = (n + k, w)
                out[key] = out.get(key, Fraction(0)) + c * m
    return TruncatedSeries(P.rank, P.window, P.t_cap, out)


def series_from_rows(rank: int, rows: Iterable, window, t_cap) -> TruncatedSeries:
    poly: Poly = {}
    for w, n, v in rows:
        key = (int(n), tuple(int(x) for x in w))
        poly[key] = poly.get(key, Fraction(0)) + Fraction(v)
    return TruncatedSeries(rank, tuple(window), t_cap, poly)
