"""JSON complex files.

A complex file is one object::

    {"flavor": "D2",
     "generators": [{"id": "theta", "deg_z": -3, "deg_i": "0", "theta": true}, ...],
     "diff": [{"from": "theta", "to": "x", "ypow": 0}, ...],
     "tau": [...], "tau_level": "1/4", "h_witness": [...]}

``tau`` lists every entry of the involution (the identity entries included);
``ypow`` may be omitted, in which case the grading supplies it.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .core import (
    AnyComplex,
    Flavor,
    Generator,
    InstantonComplex,
    InvolutiveComplex,
    LinearMap,
    StructuralError,
    underlying,
)
from .filt import fmt_filt, parse_filt


class ComplexFormatError(ValueError):
    """Input file problem, located by line (JSON syntax) or field path."""

    def __init__(self, message: str, where: str = "") -> None:
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


def _field(obj: dict, key: str, where: str, required: bool = True) -> Any:
    if not isinstance(obj, dict):
        raise ComplexFormatError("expected an object", where)
    if key not in obj:
        if required:
            raise ComplexFormatError(f"missing field {key!r}", where)
        return None
    return obj[key]


def _filt(value: Any, where: str) -> Fraction:
    try:
        return parse_filt(value)
    except ValueError as exc:
        raise ComplexFormatError(str(exc), where) from None


def _entries(raw: Any, where: str) -> list[tuple]:
    if not isinstance(raw, list):
        raise ComplexFormatError("expected a list of entries", where)
    out = []
    for i, e in enumerate(raw):
        at = f"{where}[{i}]"
        src = _field(e, "from", at)
        dst = _field(e, "to", at)
        k = _field(e, "ypow", at, required=False)
        if k is not None and (isinstance(k, bool) or not isinstance(k, int)):
            raise ComplexFormatError("ypow must be an integer", f"{at}.ypow")
        out.append((src, dst, k))
    return out


def _map(gens: tuple, raw: Any, shift: int, where: str, level=None) -> LinearMap:
    entries = _entries(raw, where)
    try:
        return LinearMap.from_entries(gens, gens, entries, shift, level)
    except StructuralError as exc:
        raise ComplexFormatError(str(exc), where) from None


def complex_from_dict(data: Any) -> AnyComplex:
    if not isinstance(data, dict):
        raise ComplexFormatError("top level must be an object", "$")
    flavor_raw = _field(data, "flavor", "$")
    try:
        flavor = Flavor(flavor_raw)
    except ValueError:
        raise ComplexFormatError(f"flavor must be 'D2' or 'D1', got {flavor_raw!r}", "$.flavor") from None
    raw_gens = _field(data, "generators", "$")
    if not isinstance(raw_gens, list) or not raw_gens:
        raise ComplexFormatError("expected a nonempty list", "$.generators")
    gens = []
    seen: set[str] = set()
    for i, g in enumerate(raw_gens):
        at = f"$.generators[{i}]"
        gid = _field(g, "id", at)
        if not isinstance(gid, str) or not gid:
            raise ComplexFormatError("id must be a nonempty string", f"{at}.id")
        if gid in seen:
            raise ComplexFormatError(f"duplicate generator id {gid!r}", f"{at}.id")
        seen.add(gid)
        dz = _field(g, "deg_z", at)
        if isinstance(dz, bool) or not isinstance(dz, int):
            raise ComplexFormatError("deg_z must be an integer", f"{at}.deg_z")
        di = _filt(_field(g, "deg_i", at), f"{at}.deg_i")
        if not isinstance(di, Fraction):
            raise ComplexFormatError("deg_i must be finite", f"{at}.deg_i")
        th = _field(g, "theta", at, required=False) or False
        if not isinstance(th, bool):
            raise ComplexFormatError("theta must be a boolean", f"{at}.theta")
        gens.append(Generator(gid, dz, di, th))
    gens = tuple(gens)
    if sum(g.is_theta for g in gens) != 1:
        raise ComplexFormatError("exactly one generator must have theta: true", "$.generators")
    d = _map(gens, _field(data, "diff", "$", required=False) or [], -1, "$.diff", Fraction(0))
    name = data.get("name", "")
    try:
        cx = InstantonComplex(gens, d, flavor, name if isinstance(name, str) else "")
    except StructuralError as exc:
        raise ComplexFormatError(str(exc), "$") from None
    if data.get("tau") is None:
        if data.get("h_witness") is not None:
            raise ComplexFormatError("h_witness given without tau", "$.h_witness")
        return cx
    level = _filt(data.get("tau_level", "0"), "$.tau_level")
    tau = _map(gens, data["tau"], 0, "$.tau", level)
    h = None
    if data.get("h_witness") is not None:
        h = _map(gens, data["h_witness"], 1, "$.h_witness")
    try:
        return InvolutiveComplex(cx, tau, level, h)
    except (StructuralError, ValueError) as exc:
        raise ComplexFormatError(str(exc), "$") from None


def map_entries_to_list(m: LinearMap) -> list[dict]:
    return [{"from": s, "to": t, "ypow": k} for s, t, k in m.named_entries()]


def complex_to_dict(c: AnyComplex, extra: dict | None = None) -> dict:
    cx = underlying(c)
    out: dict[str, Any] = {}
    if cx.name:
        out["name"] = cx.name
    out["flavor"] = cx.flavor.value
    out["generators"] = [
        {"id": g.name, "deg_z": g.deg_z, "deg_i": fmt_filt(g.deg_i), "theta": g.is_theta} for g in cx.generators
    ]
    out["diff"] = map_entries_to_list(cx.diff)
    if isinstance(c, InvolutiveComplex):
        out["tau"] = map_entries_to_list(c.tau)
        out["tau_level"] = fmt_filt(c.level)
        if c.h_witness is not None:
            out["h_witness"] = map_entries_to_list(c.h_witness)
    if extra:
        out.update(extra)
    return out


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=False) + "\n"


def loads_complex(text: str) -> AnyComplex:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ComplexFormatError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    return complex_from_dict(data)


def load_complex(path: str | Path) -> AnyComplex:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ComplexFormatError(str(exc), str(path)) from None
    except UnicodeDecodeError:
        raise ComplexFormatError("file is not UTF-8", str(path)) from None
    try:
        return loads_complex(text)
    except ComplexFormatError as exc:
        raise ComplexFormatError(str(exc), str(path)) from None


def save_complex(c: AnyComplex, path: str | Path, extra: dict | None = None) -> None:
    Path(path).write_text(dumps(complex_to_dict(c, extra)), encoding="utf-8")


# --------------------------------------------------------------------------
# standalone maps (local-map witnesses, enriched psi data)


def map_to_dict(f: LinearMap, h: LinearMap | None = None) -> dict:
    out: dict[str, Any] = {
        "level": fmt_filt(f.level()) if not f.is_zero() else "0",
        "entries": map_entries_to_list(f),
    }
    if h is not None:
        out["h"] = map_entries_to_list(h)
    return out


def map_from_dict(data: Any, source: AnyComplex, target: AnyComplex, where: str = "$") -> tuple[LinearMap, LinearMap | None]:
    """Parse ``{"entries": [...], "h": [...]}`` between two complexes."""
    src, dst = underlying(source).generators, underlying(target).generators
    try:
        f = LinearMap.from_entries(src, dst, _entries(_field(data, "entries", where), f"{where}.entries"), 0)
        h = None
        if isinstance(data, dict) and data.get("h") is not None:
            h = LinearMap.from_entries(src, dst, _entries(data["h"], f"{where}.h"), 1)
    except StructuralError as exc:
        raise ComplexFormatError(str(exc), where) from None
    return f, h
