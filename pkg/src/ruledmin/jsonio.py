"""JSON wire format: deterministic output and path-tagged input validation.

The serializer prints every float with 17 significant digits so identical
runs produce byte-identical files; the parsers point at the offending field
("gamma.terms[2].coeff: ...") instead of raising bare KeyErrors.
"""

from __future__ import annotations

import json
import math
import numbers

import numpy as np

from . import basisfn
from .basisfn import Atom, ScalarFn
from .curves import JSON_BASES, CurveExpr
from .errors import UsageError
from .metric import Signature
from .surface import RuledSurface

_KIND_BY_BASIS = {
    "cos": basisfn.COS,
    "sin": basisfn.SIN,
    "cosh": basisfn.COSH,
    "sinh": basisfn.SINH,
    "exp": basisfn.EXP,
}
_BASIS_BY_KIND = {v: k for k, v in _KIND_BY_BASIS.items()}
_KIND_ORDER = {kind: i for i, kind in enumerate(basisfn.KINDS)}


# ---------------------------------------------------------------------------
# deterministic serialization


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"  # JSON has no NaN/Inf; reports use null for masked values
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return format(x, ".17g")


def _emit(obj, out: list, indent: int, level: int) -> None:
    pad = " " * (indent * level)
    pad_in = " " * (indent * (level + 1))
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool) or isinstance(obj, np.bool_):
        out.append("true" if obj else "false")
    elif isinstance(obj, numbers.Integral):
        out.append(str(int(obj)))
    elif isinstance(obj, numbers.Real):
        out.append(_fmt_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, val) in enumerate(obj.items()):
            if not isinstance(key, str):
                raise UsageError(f"JSON object keys must be strings, got {key!r}")
            out.append(pad_in + json.dumps(key) + ": ")
            _emit(val, out, indent, level + 1)
            out.append(",\n" if i + 1 < len(obj) else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            out.append("[]")
            return
        simple = all(
            item is None or isinstance(item, (bool, str, numbers.Number))
            for item in items
        )
        if simple:
            parts = []
            for item in items:
                sub: list = []
                _emit(item, sub, indent, 0)
                parts.append("".join(sub))
            out.append("[" + ", ".join(parts) + "]")
        else:
            out.append("[\n")
            for i, item in enumerate(items):
                out.append(pad_in)
                _emit(item, out, indent, level + 1)
                out.append(",\n" if i + 1 < len(items) else "\n")
            out.append(pad + "]")
    else:
        raise UsageError(f"cannot serialize {type(obj).__name__} to JSON")


def dumps(obj, indent: int = 2) -> str:
    """Serialize to JSON with 17-significant-digit floats, trailing newline."""
    out: list = []
    _emit(obj, out, indent, 0)
    return "".join(out) + "\n"


# ---------------------------------------------------------------------------
# input validation helpers


def _expect_dict(data, path: str) -> dict:
    if not isinstance(data, dict):
        raise UsageError(f"{path}: expected an object, got {type(data).__name__}")
    return data


def _expect_list(data, path: str) -> list:
    if not isinstance(data, list):
        raise UsageError(f"{path}: expected an array, got {type(data).__name__}")
    return data


def _get(data: dict, key: str, path: str):
    if key not in data:
        raise UsageError(f"{path}.{key}: missing required field")
    return data[key]


def _num(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise UsageError(f"{path}: expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise UsageError(f"{path}: expected a finite number, got {value!r}")
    return value


def _int(value, path: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Real) or value != int(value):
        raise UsageError(f"{path}: expected an integer, got {value!r}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise UsageError(f"{path}: expected an integer >= {minimum}, got {value}")
    return value


def _interval(data, path: str) -> tuple[float, float]:
    arr = _expect_list(data, path)
    if len(arr) != 2:
        raise UsageError(f"{path}: expected [lo, hi], got {len(arr)} entries")
    lo = _num(arr[0], f"{path}[0]")
    hi = _num(arr[1], f"{path}[1]")
    if not lo < hi:
        raise UsageError(f"{path}: needs lo < hi, got [{lo}, {hi}]")
    return (lo, hi)


# ---------------------------------------------------------------------------
# curves


def curve_to_json(curve: CurveExpr) -> dict:
    """Wire form of a closed-form curve.

    Terms that mix a power with an oscillating factor (they arise from exact
    gauge integrals) carry an extra "degree" field; plain terms match the
    input schema exactly.
    """
    terms = []
    atoms = sorted(
        curve.terms, key=lambda a: (_KIND_ORDER[a.kind], a.omega, a.k)
    )
    for atom in atoms:
        coeff = [float(c) for c in curve.terms[atom]]
        if atom.kind == basisfn.ONE:
            terms.append({"basis": "pow", "param": atom.k, "coeff": coeff})
        else:
            term = {"basis": _BASIS_BY_KIND[atom.kind], "param": atom.omega}
            if atom.k:
                term["degree"] = atom.k
            term["coeff"] = coeff
            terms.append(term)
    return {"n": curve.n, "terms": terms}


def curve_from_json(data, path: str = "curve") -> CurveExpr:
    data = _expect_dict(data, path)
    n = _int(_get(data, "n", path), f"{path}.n", minimum=1)
    raw_terms = _expect_list(_get(data, "terms", path), f"{path}.terms")
    curve = CurveExpr(n)
    for i, raw in enumerate(raw_terms):
        tp = f"{path}.terms[{i}]"
        term = _expect_dict(raw, tp)
        basis = _get(term, "basis", tp)
        if basis not in JSON_BASES:
            raise UsageError(f"{tp}.basis: unknown basis {basis!r}; expected one of {JSON_BASES}")
        param = _num(_get(term, "param", tp), f"{tp}.param")
        coeff = _expect_list(_get(term, "coeff", tp), f"{tp}.coeff")
        if len(coeff) != n:
            raise UsageError(f"{tp}.coeff: expected {n} components, got {len(coeff)}")
        vec = [_num(c, f"{tp}.coeff[{j}]") for j, c in enumerate(coeff)]
        if basis == "pow":
            if "degree" in term:
                raise UsageError(f"{tp}.degree: not allowed with basis \"pow\" (param is the power)")
            k = _int(param, f"{tp}.param", minimum=0)
            parts = basisfn.canon(1.0, k, basisfn.ONE, 0.0)
        else:
            k = _int(term.get("degree", 0), f"{tp}.degree", minimum=0)
            parts = basisfn.canon(1.0, k, _KIND_BY_BASIS[basis], param)
        for c, atom in parts:
            curve._add(atom, [c * v for v in vec])
    return curve


def scalar_fn_to_json(fn: ScalarFn) -> list:
    """Wire form of a scalar closed form (list of terms with scalar coeff)."""
    terms = []
    atoms = sorted(fn.terms, key=lambda a: (_KIND_ORDER[a.kind], a.omega, a.k))
    for atom in atoms:
        coeff = float(fn.terms[atom])
        if atom.kind == basisfn.ONE:
            terms.append({"basis": "pow", "param": atom.k, "coeff": coeff})
        else:
            term = {"basis": _BASIS_BY_KIND[atom.kind], "param": atom.omega}
            if atom.k:
                term["degree"] = atom.k
            term["coeff"] = coeff
            terms.append(term)
    return terms


# ---------------------------------------------------------------------------
# surfaces


def surface_to_json(sig: Signature, surface: RuledSurface) -> dict:
    if not isinstance(surface.gamma, CurveExpr) or not isinstance(surface.base, CurveExpr):
        raise UsageError(
            "only closed-form surfaces serialize to JSON; a quadrature-backed "
            "base has no term representation (export its lambda table instead)"
        )
    return {
        "signature": {"n": sig.n, "p": sig.p},
        "gamma": curve_to_json(surface.gamma),
        "base": curve_to_json(surface.base),
        "s_domain": list(surface.s_domain),
        "t_domain": list(surface.t_domain),
    }


def surface_from_json(data) -> tuple[Signature, RuledSurface]:
    data = _expect_dict(data, "surface")
    sig_data = _expect_dict(_get(data, "signature", "surface"), "signature")
    n = _int(_get(sig_data, "n", "signature"), "signature.n", minimum=2)
    p = _int(_get(sig_data, "p", "signature"), "signature.p", minimum=0)
    if p > n:
        raise UsageError(f"signature.p: index {p} exceeds dimension {n}")
    sig = Signature(n, p)
    gamma = curve_from_json(_get(data, "gamma", "surface"), "gamma")
    base = curve_from_json(_get(data, "base", "surface"), "base")
    if gamma.n != n:
        raise UsageError(f"gamma.n: curve dimension {gamma.n} does not match signature.n = {n}")
    if base.n != n:
        raise UsageError(f"base.n: curve dimension {base.n} does not match signature.n = {n}")
    s_domain = _interval(_get(data, "s_domain", "surface"), "s_domain")
    t_domain = _interval(_get(data, "t_domain", "surface"), "t_domain")
    return sig, RuledSurface(gamma=gamma, base=base, s_domain=s_domain, t_domain=t_domain)


def loads_surface(text: str) -> tuple[Signature, RuledSurface]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON: {exc}") from exc
    return surface_from_json(data)
