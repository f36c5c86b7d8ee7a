"""JSON input records and exact number parsing.

Numbers are integers or "p/q" strings; decimals are refused.
"""
from __future__ import annotations

import hashlib
import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from .quiver import DimVector, InputError, Quiver
from .series import ClassLattice, InvariantTable, WallDatum
from .stability import CentralCharge, Gaussian

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(x: Any) -> Fraction:
    if isinstance(x, bool):
        raise InputError(f"boolean {x!r} is not a number")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        m = _RATIONAL.match(x)
        if m:
            num, den = m.groups()
            if den is not None and int(den) == 0:
                raise InputError(f"zero denominator in {x!r}")
            return Fraction(int(num), int(den) if den else 1)
    raise InputError(f"{x!r} is not an exact number (use an integer or 'p/q')")


def parse_int(x: Any) -> int:
    v = parse_rational(x)
    if v.denominator != 1:
        raise InputError(f"{x!r} is not an integer")
    return int(v)


def fmt_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class Inputs:
    """Reads input files and keeps a digest of everything read."""

    def __init__(self):
        self._hash = hashlib.sha256()

    def feed(self, text: str) -> None:
        self._hash.update(text.encode())
        self._hash.update(b"\0")

    def load(self, path: str | Path) -> Any:
        try:
            raw = Path(path).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
        self.feed(raw)
        try:
            return json.loads(raw, parse_float=_reject_float)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None

    @property
    def digest(self) -> str:
        return self._hash.hexdigest()


def _reject_float(text: str):
    raise InputError(f"decimal number {text} is not allowed; use 'p/q'")


def parse_quiver(rec: Any) -> Quiver:
    if not isinstance(rec, Mapping):
        raise InputError("quiver record must be a JSON object")
    return Quiver.from_record(rec)


def parse_dimvec(q: Quiver, spec: Any) -> DimVector:
    """A dimension vector from "1,2", a JSON list in vertex order, or a vertex map."""
    if isinstance(spec, str):
        text = spec.strip()
        if text.startswith("[") or text.startswith("{"):
            try:
                spec = json.loads(text, parse_float=_reject_float)
            except json.JSONDecodeError:
                raise InputError(f"cannot parse dimension vector {text!r}") from None
        else:
            spec = [t for t in text.split(",") if t.strip()]
    if isinstance(spec, Mapping):
        values = {str(k): parse_int(v) for k, v in spec.items()}
        return q.dimvec(values)
    if isinstance(spec, list):
        if len(spec) != len(q.vertices):
            raise InputError(f"dimension vector has {len(spec)} entries, quiver has {len(q.vertices)} vertices")
        return q.dimvec([parse_int(v) for v in spec])
    raise InputError("dimension vector must be a list, a mapping or a comma list")


def parse_charge(q: Quiver, rec: Any) -> CentralCharge:
    """{"vertex": ["re", "im"], ...}"""
    if not isinstance(rec, Mapping):
        raise InputError("charge record must map vertex ids to [re, im]")
    vals = {}
    for v, z in rec.items():
        if not isinstance(z, list) or len(z) != 2:
            raise InputError(f"charge at vertex {v} must be [re, im]")
        vals[str(v)] = Gaussian(parse_rational(z[0]), parse_rational(z[1]))
    return CentralCharge.on(q, vals)


def parse_lattice(rec: Any) -> ClassLattice:
    """[{"id": "C", "degree": "1"}, ...]"""
    if not isinstance(rec, list) or not rec:
        raise InputError("'classes' must be a nonempty list")
    try:
        names = tuple(str(c["id"]) for c in rec)
        degs = tuple(parse_rational(c["degree"]) for c in rec)
    except (KeyError, TypeError):
        raise InputError("each class needs 'id' and 'degree'") from None
    return ClassLattice(names, degs)


def _rows(rec: Any, lattice: ClassLattice):
    if not isinstance(rec, list):
        raise InputError("'rows' must be a list of [weight, n, value]")
    for row in rec:
        if not isinstance(row, list) or len(row) != 3 or not isinstance(row[0], list):
            raise InputError(f"bad table row {row!r}; expected [weight, n, value]")
        w = tuple(parse_int(x) for x in row[0])
        lattice.check(w)
        yield w, parse_int(row[1]), parse_rational(row[2])


def parse_table(rec: Any, lattice: ClassLattice | None = None) -> InvariantTable:
    """{"classes": [...], "symmetric": bool, "periodic": bool, "rows": [[w, n, v], ...]}"""
    if not isinstance(rec, Mapping):
        raise InputError("table record must be a JSON object")
    if "classes" in rec:
        lat = parse_lattice(rec["classes"])
        if lattice is not None and lat != lattice:
            raise InputError("table classes differ from the other inputs")
        lattice = lat
    if lattice is None:
        raise InputError("table record needs 'classes'")
    values: dict = {}
    for w, n, v in _rows(rec.get("rows", []), lattice):
        values[(w, n)] = values.get((w, n), Fraction(0)) + v
    return InvariantTable(lattice, values, bool(rec.get("symmetric", False)),
                          bool(rec.get("periodic", False)))


def parse_walls(rec: Any, lattice: ClassLattice) -> list[WallDatum]:
    """{"walls": [{"t": "1", "contributions": [[w, n, N], ...]}, ...]}"""
    walls = rec.get("walls") if isinstance(rec, Mapping) else rec
    if not isinstance(walls, list):
        raise InputError("walls record must hold a list of walls")
    out = []
    for w in walls:
        if not isinstance(w, Mapping) or "t" not in w:
            raise InputError("each wall needs 't' and 'contributions'")
        contribs = tuple(_rows(w.get("contributions", []), lattice))
        out.append(WallDatum(parse_rational(w["t"]), lattice, contribs))
    return out
