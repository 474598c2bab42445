"""JSON forms of complexes, sequences, maps and reports.

Rationals travel as strings (``"2/3"``) so nothing passes through floats.
Decoding errors carry a JSON path such as ``$.initial.vertices[2].weight``.
"""

from __future__ import annotations

import json
from dataclasses import fields, is_dataclass
from enum import Enum
from fractions import Fraction
from typing import Any

from .complexes import DeleteMaximal, Identity, StellarStep, Subdivide, WeightedComplex
from .exactgeom import format_rational, parse_rational
from .mcnfun import PLFunc, Term, parse_term
from .regular import RegularComplex, Verdict
from .sequences import (Callback, ConstantW, EffrosShen, FiniteSteps, LexZ2, SimplicialWeights,
                        SkeletonConstant, StellarSequence, constant_segment,
                        family_sequence)
from .zhomeo import PLMap


class DataError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DataError(path, exc.strerror or str(exc)) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(path, f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False)


# --- helpers -------------------------------------------------------------------


def _get(d: Any, key: str, path: str):
    if not isinstance(d, dict):
        raise DataError(path, "expected an object")
    if key not in d:
        raise DataError(path, f"missing key {key!r}")
    return d[key]


def _list(x: Any, path: str) -> list:
    if not isinstance(x, list):
        raise DataError(path, "expected a list")
    return x


def _int(x: Any, path: str, minimum: int | None = None) -> int:
    if not isinstance(x, int) or isinstance(x, bool):
        raise DataError(path, "expected an integer")
    if minimum is not None and x < minimum:
        raise DataError(path, f"expected an integer >= {minimum}")
    return x


def _rational(x: Any, path: str) -> Fraction:
    try:
        if isinstance(x, bool) or isinstance(x, float):
            raise ValueError("floats are not accepted; write rationals as strings")
        return parse_rational(x)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise DataError(path, f"bad rational {x!r}: {exc}") from exc


# --- weighted complexes and steps ---------------------------------------------------


def weighted_to_json(w: WeightedComplex) -> dict:
    return {
        "vertices": [{"label": v, "weight": w.weights[v]} for v in w.vertices],
        "maximal_faces": w.sorted_faces(),
    }


def weighted_from_json(d: Any, path: str = "$") -> WeightedComplex:
    verts = _list(_get(d, "vertices", path), f"{path}.vertices")
    weights = []
    for k, v in enumerate(verts):
        p = f"{path}.vertices[{k}]"
        label = _get(v, "label", p)
        if not isinstance(label, str) or not label:
            raise DataError(f"{p}.label", "expected a nonempty string")
        weights.append((label, _int(_get(v, "weight", p), f"{p}.weight")))
    faces = []
    for k, f in enumerate(_list(_get(d, "maximal_faces", path), f"{path}.maximal_faces")):
        f = _list(f, f"{path}.maximal_faces[{k}]")
        if any(not isinstance(x, str) for x in f):
            raise DataError(f"{path}.maximal_faces[{k}]", "face entries must be vertex labels")
        faces.append(f)
    return WeightedComplex.build(weights, faces)


def step_to_json(s: StellarStep) -> dict:
    if isinstance(s, Identity):
        return {"op": "id"}
    if isinstance(s, DeleteMaximal):
        return {"op": "delete", "face": sorted(s.face)}
    return {"op": "subdivide", "edge": list(s.edge), "new": s.new_label}


def step_from_json(d: Any, path: str = "$") -> StellarStep:
    op = _get(d, "op", path)
    if op == "id":
        return Identity()
    if op == "delete":
        return DeleteMaximal(_list(_get(d, "face", path), f"{path}.face"))
    if op == "subdivide":
        edge = _list(_get(d, "edge", path), f"{path}.edge")
        label = d.get("new", d.get("new_label"))
        if not isinstance(label, str) or not label:
            raise DataError(f"{path}.new", "expected the new vertex label")
        return Subdivide(edge, label)
    raise DataError(f"{path}.op", f"unknown step {op!r}; expected id, delete or subdivide")


# --- geometric complexes --------------------------------------------------------------


def point_to_json(p) -> list[str]:
    return [format_rational(c) for c in p]


def complex_to_json(cx: RegularComplex) -> dict:
    out = {
        "ambient_dim": cx.ambient_dim,
        "vertices": [point_to_json(v) for v in cx.vertices],
        "maximal_simplexes": cx.sorted_simplexes(),
    }
    if not cx.regular:
        out["regular"] = False
    return out


def complex_from_json(d: Any, path: str = "$", *, check: bool = True) -> RegularComplex:
    verts = []
    for k, v in enumerate(_list(_get(d, "vertices", path), f"{path}.vertices")):
        v = _list(v, f"{path}.vertices[{k}]")
        verts.append(tuple(_rational(c, f"{path}.vertices[{k}][{j}]") for j, c in enumerate(v)))
    simps = []
    for k, s in enumerate(_list(_get(d, "maximal_simplexes", path), f"{path}.maximal_simplexes")):
        s = _list(s, f"{path}.maximal_simplexes[{k}]")
        simps.append([_int(i, f"{path}.maximal_simplexes[{k}][{j}]", 0) for j, i in enumerate(s)])
    dim = d.get("ambient_dim")
    if dim is not None:
        dim = _int(dim, f"{path}.ambient_dim", 1)
    regular = d.get("regular", True)
    if not isinstance(regular, bool):
        raise DataError(f"{path}.regular", "expected true or false")
    return RegularComplex.build(verts, simps, ambient_dim=dim, regular=regular, check=check)


# --- sequences -----------------------------------------------------------------------


def provider_to_json(p) -> dict:
    if isinstance(p, FiniteSteps):
        return {"kind": "finite", "steps": [step_to_json(s) for s in p.steps]}
    if isinstance(p, ConstantW):
        return {"kind": "constant"}
    if isinstance(p, LexZ2):
        return {"kind": "family", "name": "lex-z2", "n": p.n}
    if isinstance(p, EffrosShen):
        return {"kind": "family", "name": "effros-shen", "cf": p.cf if isinstance(p.cf, str) else list(p.cf)}
    if isinstance(p, SimplicialWeights):
        return {"kind": "family", "name": "simplicial", "weights": list(p.weights)}
    if isinstance(p, SkeletonConstant):
        return {"kind": "family", "name": "skeleton", "complex": complex_to_json(p.complex)}
    if isinstance(p, Callback):
        raise TypeError("callback providers cannot be serialized")
    raise TypeError(f"unknown provider {p!r}")


def sequence_to_json(seq: StellarSequence) -> dict:
    return {"initial": weighted_to_json(seq.initial), "provider": provider_to_json(seq.provider)}


FAMILY_NAMES = ("lex-z2", "effros-shen", "simplicial", "skeleton", "constant-segment")


def provider_from_json(d: Any, path: str):
    kind = _get(d, "kind", path)
    if kind == "finite":
        steps = _list(_get(d, "steps", path), f"{path}.steps")
        return FiniteSteps([step_from_json(s, f"{path}.steps[{k}]") for k, s in enumerate(steps)])
    if kind == "constant":
        return ConstantW()
    if kind != "family":
        raise DataError(f"{path}.kind", f"unknown provider kind {kind!r}; expected finite, constant or family")
    name = _get(d, "name", path)
    try:
        if name == "lex-z2":
            return LexZ2(_int(_get(d, "n", path), f"{path}.n", 1))
        if name == "effros-shen":
            cf = _get(d, "cf", path)
            if not isinstance(cf, str):
                cf = [_int(a, f"{path}.cf[{k}]", 1) for k, a in enumerate(_list(cf, f"{path}.cf"))]
            return EffrosShen(cf)
        if name == "simplicial":
            ws = _list(_get(d, "weights", path), f"{path}.weights")
            return SimplicialWeights(*[_int(a, f"{path}.weights[{k}]", 1) for k, a in enumerate(ws)])
        if name == "skeleton":
            return SkeletonConstant(complex_from_json(_get(d, "complex", path), f"{path}.complex"))
    except ValueError as exc:
        if isinstance(exc, DataError):
            raise
        raise DataError(path, str(exc)) from exc
    raise DataError(f"{path}.name", f"unknown family {name!r}; expected one of {', '.join(FAMILY_NAMES)}")


def sequence_from_json(d: Any, path: str = "$") -> StellarSequence:
    pd = _get(d, "provider", path)
    initial = weighted_from_json(d["initial"], f"{path}.initial") if "initial" in d else None
    if isinstance(pd, dict) and pd.get("kind") == "family" and pd.get("name") == "constant-segment":
        seq = constant_segment()
    else:
        provider = provider_from_json(pd, f"{path}.provider")
        if isinstance(provider, (FiniteSteps, ConstantW)):
            if initial is None:
                raise DataError(path, "missing key 'initial'")
            return StellarSequence(initial, provider)
        seq = family_sequence(provider)
    if initial is not None and initial != seq.initial:
        raise DataError(f"{path}.initial", "does not match the family's initial complex")
    return seq


def realization_order(d: Any, path: str = "$") -> list[str] | None:
    """Optional ``"vertex_order"`` for the canonical realization."""
    if isinstance(d, dict) and "vertex_order" in d:
        order = _list(d["vertex_order"], f"{path}.vertex_order")
        if any(not isinstance(x, str) for x in order):
            raise DataError(f"{path}.vertex_order", "expected vertex labels")
        return order
    return None


# --- functions and maps --------------------------------------------------------------


def plfunc_to_json(f: PLFunc) -> dict:
    return {"carrier": complex_to_json(f.carrier), "values": [format_rational(v) for v in f.values]}


def plfunc_from_json(d: Any, path: str = "$"):
    """A PLFunc, or a Term plus optional ambient dimension when the file holds ``{"term": ...}``."""
    if isinstance(d, dict) and "term" in d:
        text = d["term"]
        if not isinstance(text, str):
            raise DataError(f"{path}.term", "expected a string")
        dim = d.get("ambient_dim")
        if dim is not None:
            dim = _int(dim, f"{path}.ambient_dim", 1)
        try:
            return parse_term(text), dim
        except ValueError as exc:
            raise DataError(f"{path}.term", str(exc)) from exc
    carrier = complex_from_json(_get(d, "carrier", path), f"{path}.carrier")
    vals = _list(_get(d, "values", path), f"{path}.values")
    return PLFunc(carrier, tuple(_rational(v, f"{path}.values[{k}]") for k, v in enumerate(vals))), None


def plmap_to_json(eta: PLMap) -> dict:
    pieces = []
    for s in sorted(eta.pieces, key=sorted):
        mat, off = eta.pieces[s]
        pieces.append({"simplex": sorted(s), "matrix": [list(r) for r in mat], "offset": list(off)})
    return {"domain": complex_to_json(eta.domain), "codomain_dim": eta.codomain_dim, "pieces": pieces}


# --- generic conversion for reports ------------------------------------------------


def to_jsonable(obj: Any) -> Any:
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, Verdict):
        return obj.name.capitalize() if obj is not Verdict.UNKNOWN else "Unknown"
    if isinstance(obj, Enum):
        return obj.name
    if isinstance(obj, RegularComplex):
        return complex_to_json(obj)
    if isinstance(obj, WeightedComplex):
        return weighted_to_json(obj)
    if isinstance(obj, PLMap):
        return plmap_to_json(obj)
    if isinstance(obj, PLFunc):
        return plfunc_to_json(obj)
    if isinstance(obj, StellarSequence):
        return sequence_to_json(obj)
    if isinstance(obj, Term):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [to_jsonable(x) for x in obj]
        if isinstance(obj, (set, frozenset)):
            items.sort(key=lambda x: json.dumps(x, sort_keys=True))
        return items
    if is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in fields(obj) if not f.name.startswith("_")}
    raise TypeError(f"cannot serialize {type(obj).__name__}")
