"""Lossless JSON documents for algebra and module instances.

Scalars travel as decimal-free "p/q" strings, weights likewise; the grading
operator is implicit in the weights.  Field and entry order is canonical, so
serialization is byte-stable.  Parsing is strict: unknown fields and
malformed scalars are rejected with the offending path; semantic problems
(like an inhomogeneous vertex entry) are left for validate_instance.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import SchemaError
from .graded import GradedOp, GradedSpace, Vec
from .scalars import format_scalar, parse_scalar
from .vertex import (ALGEBRA, LEFT, RIGHT, AlgebraInstance, ModuleInstance,
                     VertexMap)

FORMAT_VERSION = 1

_ALGEBRA_KEYS = {"format_version", "kind", "metadata", "cutoff", "complete",
                 "weights", "vacuum", "operators", "vertex", "absent"}
_MODULE_KEYS = {"format_version", "kind", "side", "metadata", "algebra",
                "cutoff", "complete", "weights", "operators",
                "vertex_left", "vertex_right", "absent_left", "absent_right"}
_OPERATOR_KEYS = {"D", "L1", "N0"}


def _fmt_weight(w) -> str:
    return format_scalar(w)


def _vec_doc(v: Vec):
    return [[lbl, format_scalar(c)] for lbl, c in sorted(v.entries.items())]


def _op_doc(op: GradedOp | None):
    if op is None:
        return None
    return {lbl: _vec_doc(vec) for lbl, vec in sorted(op.action.items())}


def _space_doc(space: GradedSpace):
    return [[_fmt_weight(w), list(labels)] for w, labels in space.components.items()]


def _vertex_doc(vmap: VertexMap | None):
    if vmap is None:
        return None
    return [[f, n, s, _vec_doc(out)] for (f, n, s), out in sorted(vmap.entries.items())]


def _absent_doc(vmap: VertexMap | None):
    if vmap is None:
        return []
    return [[f, n, s] for f, n, s in sorted(vmap.absent)]


def _meta_doc(meta: dict):
    return {k: (format_scalar(v) if isinstance(v, Fraction) else v)
            for k, v in sorted(meta.items())}


def to_document(inst) -> dict:
    if isinstance(inst, AlgebraInstance):
        return {
            "format_version": FORMAT_VERSION,
            "kind": "algebra",
            "metadata": _meta_doc(inst.meta),
            "cutoff": _fmt_weight(inst.cutoff),
            "complete": inst.space.complete,
            "weights": _space_doc(inst.space),
            "vacuum": _vec_doc(inst.vacuum),
            "operators": {"D": _op_doc(inst.D), "L1": _op_doc(inst.L1),
                          "N0": None},
            "vertex": _vertex_doc(inst.Y),
            "absent": _absent_doc(inst.Y),
        }
    if isinstance(inst, ModuleInstance):
        return {
            "format_version": FORMAT_VERSION,
            "kind": "module",
            "side": inst.side,
            "metadata": _meta_doc(inst.meta),
            "algebra": to_document(inst.algebra),
            "cutoff": _fmt_weight(inst.cutoff),
            "complete": inst.space.complete,
            "weights": _space_doc(inst.space),
            "operators": {"D": _op_doc(inst.D), "L1": _op_doc(inst.L1),
                          "N0": _op_doc(inst.N0)},
            "vertex_left": _vertex_doc(inst.YL),
            "vertex_right": _vertex_doc(inst.YR),
            "absent_left": _absent_doc(inst.YL),
            "absent_right": _absent_doc(inst.YR),
        }
    raise TypeError(f"cannot serialize {type(inst).__name__}")


def serialize(inst) -> str:
    return json.dumps(to_document(inst), indent=1) + "\n"


# -- parsing -----------------------------------------------------------------


def _expect(cond, message, path):
    if not cond:
        raise SchemaError(message, path)


def _parse_scalar_at(text, path) -> Fraction:
    try:
        return parse_scalar(text)
    except (ValueError, TypeError) as e:
        raise SchemaError(str(e), path) from None


def _parse_vec(doc, space, path) -> Vec:
    _expect(isinstance(doc, list), "expected a list of [label, scalar] pairs", path)
    entries = {}
    for i, item in enumerate(doc):
        _expect(isinstance(item, list) and len(item) == 2,
                "expected [label, scalar]", f"{path}[{i}]")
        lbl, sc = item
        _expect(isinstance(lbl, str), "label must be a string", f"{path}[{i}]")
        _expect(lbl in space.label_weights, f"unknown label {lbl!r}", f"{path}[{i}]")
        entries[lbl] = _parse_scalar_at(sc, f"{path}[{i}]")
    return Vec(space, entries)


def _parse_space(doc, cutoff, complete, path) -> GradedSpace:
    _expect(isinstance(doc, list), "expected a list of [weight, labels] pairs", path)
    comps = {}
    for i, item in enumerate(doc):
        _expect(isinstance(item, list) and len(item) == 2,
                "expected [weight, labels]", f"{path}[{i}]")
        w, labels = item
        wt = _parse_scalar_at(w, f"{path}[{i}]")
        _expect(isinstance(labels, list) and all(isinstance(l, str) for l in labels),
                "labels must be strings", f"{path}[{i}]")
        _expect(wt not in comps, f"duplicate weight {w}", f"{path}[{i}]")
        comps[wt] = labels
    try:
        return GradedSpace(comps, cutoff, complete)
    except ValueError as e:
        raise SchemaError(str(e), path) from None


def _parse_op(doc, space, shift, path) -> GradedOp | None:
    if doc is None:
        return None
    _expect(isinstance(doc, dict), "expected a label -> vector table", path)
    action = {}
    for lbl, vec_doc in doc.items():
        _expect(lbl in space.label_weights, f"unknown label {lbl!r}", f"{path}.{lbl}")
        action[lbl] = _parse_vec(vec_doc, space, f"{path}.{lbl}")
    try:
        return GradedOp(space, shift, action)
    except ValueError as e:
        raise SchemaError(str(e), path) from None


def _parse_vertex(doc, kind, first_space, second_space, out_space, absent_doc, path):
    if doc is None:
        return None
    _expect(isinstance(doc, list), "expected a list of entries", path)
    entries = {}
    for i, item in enumerate(doc):
        _expect(isinstance(item, list) and len(item) == 4,
                "expected [first, mode, second, vector]", f"{path}[{i}]")
        f, n, s, out = item
        _expect(isinstance(f, str) and f in first_space.label_weights,
                f"unknown first label {f!r}", f"{path}[{i}]")
        _expect(isinstance(n, int), "mode must be an integer", f"{path}[{i}]")
        _expect(isinstance(s, str) and s in second_space.label_weights,
                f"unknown second label {s!r}", f"{path}[{i}]")
        _expect((f, n, s) not in entries, "duplicate entry", f"{path}[{i}]")
        entries[(f, n, s)] = _parse_vec(out, out_space, f"{path}[{i}]")
    absent = []
    for i, item in enumerate(absent_doc or []):
        _expect(isinstance(item, list) and len(item) == 3,
                "expected [first, mode, second]", f"{path}-absent[{i}]")
        absent.append(tuple(item))
    try:
        return VertexMap(kind, first_space, second_space, out_space, entries, absent)
    except ValueError as e:
        raise SchemaError(str(e), path) from None


def _check_keys(doc, allowed, path):
    _expect(isinstance(doc, dict), "expected an object", path)
    for key in doc:
        _expect(key in allowed, f"unknown field {key!r}", path)


def _parse_algebra(doc, path="$") -> AlgebraInstance:
    _check_keys(doc, _ALGEBRA_KEYS, path)
    _expect(doc.get("format_version") == FORMAT_VERSION,
            f"unsupported format_version {doc.get('format_version')!r}",
            f"{path}.format_version")
    _expect(doc.get("kind") == "algebra", "expected kind 'algebra'", f"{path}.kind")
    cutoff = _parse_scalar_at(doc.get("cutoff"), f"{path}.cutoff")
    complete = doc.get("complete", False)
    _expect(isinstance(complete, bool), "complete must be a boolean",
            f"{path}.complete")
    space = _parse_space(doc.get("weights"), cutoff, complete, f"{path}.weights")
    vacuum = _parse_vec(doc.get("vacuum"), space, f"{path}.vacuum")
    ops = doc.get("operators")
    _check_keys(ops, _OPERATOR_KEYS, f"{path}.operators")
    D = _parse_op(ops.get("D"), space, 1, f"{path}.operators.D")
    _expect(D is not None, "algebra needs the shift operator D", f"{path}.operators.D")
    L1 = _parse_op(ops.get("L1"), space, -1, f"{path}.operators.L1")
    Y = _parse_vertex(doc.get("vertex"), ALGEBRA, space, space, space,
                      doc.get("absent"), f"{path}.vertex")
    _expect(Y is not None, "algebra needs a vertex table", f"{path}.vertex")
    meta = doc.get("metadata") or {}
    _expect(isinstance(meta, dict), "metadata must be an object", f"{path}.metadata")
    return AlgebraInstance(space, Y, vacuum, D, L1, meta=meta)


def _parse_module(doc, path="$") -> ModuleInstance:
    _check_keys(doc, _MODULE_KEYS, path)
    _expect(doc.get("format_version") == FORMAT_VERSION,
            f"unsupported format_version {doc.get('format_version')!r}",
            f"{path}.format_version")
    side = doc.get("side")
    _expect(side in (LEFT, RIGHT, "bi"), f"unknown side {side!r}", f"{path}.side")
    algebra = _parse_algebra(doc.get("algebra"), f"{path}.algebra")
    cutoff = _parse_scalar_at(doc.get("cutoff"), f"{path}.cutoff")
    complete = doc.get("complete", False)
    _expect(isinstance(complete, bool), "complete must be a boolean",
            f"{path}.complete")
    space = _parse_space(doc.get("weights"), cutoff, complete, f"{path}.weights")
    ops = doc.get("operators")
    _check_keys(ops, _OPERATOR_KEYS, f"{path}.operators")
    D = _parse_op(ops.get("D"), space, 1, f"{path}.operators.D")
    _expect(D is not None, "module needs the shift operator D", f"{path}.operators.D")
    L1 = _parse_op(ops.get("L1"), space, -1, f"{path}.operators.L1")
    N0 = _parse_op(ops.get("N0"), space, 0, f"{path}.operators.N0")
    YL = _parse_vertex(doc.get("vertex_left"), LEFT, algebra.space, space, space,
                       doc.get("absent_left"), f"{path}.vertex_left")
    YR = _parse_vertex(doc.get("vertex_right"), RIGHT, space, algebra.space, space,
                       doc.get("absent_right"), f"{path}.vertex_right")
    meta = doc.get("metadata") or {}
    _expect(isinstance(meta, dict), "metadata must be an object", f"{path}.metadata")
    try:
        return ModuleInstance(side, space, algebra, YL=YL, YR=YR, D=D, L1=L1,
                              N0=N0, meta=meta)
    except ValueError as e:
        raise SchemaError(str(e), path) from None


def from_document(doc: dict):
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object", "$")
    kind = doc.get("kind")
    if kind == "algebra":
        return _parse_algebra(doc)
    if kind == "module":
        return _parse_module(doc)
    raise SchemaError(f"unknown kind {kind!r}", "$.kind")


def deserialize(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON at line {e.lineno} column {e.colno}: "
                          f"{e.msg}", "$") from None
    return from_document(doc)


def save(inst, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize(inst))


def load(path):
    with open(path, encoding="utf-8") as fh:
        return deserialize(fh.read())
