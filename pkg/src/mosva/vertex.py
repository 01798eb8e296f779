"""Vertex structure constants and validated algebra/module bundles.

A VertexMap stores the modes (first, n, second) -> output vector sparsely.
The truncation contract: an entry whose output weight fits under the cutoff
is stored when nonzero and reads as exact zero when missing; an entry whose
output weight exceeds the cutoff is absent, and any computation that needs
it reports exact=False.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping

from .graded import GradedOp, GradedSpace, Vec, weight_diagonal_op
from .report import Report

ALGEBRA = "algebra"
LEFT = "left"
RIGHT = "right"


class VertexMap:
    """Sparse mode table for one vertex operator map.

    kind "algebra": Y(u, x)v with u, v in V.
    kind "left":    Y(u, x)w with u in V acting on the module.
    kind "right":   Y(w, x)u keyed (w, n, u), module element first.
    """

    __slots__ = ("kind", "first_space", "second_space", "out_space", "entries",
                 "absent")

    def __init__(self, kind: str, first_space: GradedSpace, second_space: GradedSpace,
                 out_space: GradedSpace, entries: Mapping | None = None,
                 absent=()):
        if kind not in (ALGEBRA, LEFT, RIGHT):
            raise ValueError(f"unknown vertex map kind {kind!r}")
        table: dict[tuple[str, int, str], Vec] = {}
        for (f, n, s), out in (entries or {}).items():
            first_space.weight_of(f)
            second_space.weight_of(s)
            if not isinstance(out, Vec):
                raise TypeError("entries must map to Vec")
            table[(f, int(n), s)] = out
        gaps = frozenset((f, int(n), s) for f, n, s in absent)
        if gaps & table.keys():
            raise ValueError("a key cannot be both stored and absent")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "first_space", first_space)
        object.__setattr__(self, "second_space", second_space)
        object.__setattr__(self, "out_space", out_space)
        object.__setattr__(self, "entries", table)
        object.__setattr__(self, "absent", gaps)

    def __setattr__(self, name, value):
        raise AttributeError("VertexMap is immutable")

    @property
    def cutoff(self) -> Fraction:
        return self.out_space.cutoff

    def output_weight(self, first_label: str, n: int, second_label: str) -> Fraction:
        return (self.first_space.weight_of(first_label)
                + self.second_space.weight_of(second_label) - n - 1)

    def basis_entry(self, first_label: str, n: int, second_label: str):
        """(Vec, exact) for one basis pair; a zero vector with exact=False
        marks an absent (cutoff-overflow or explicitly unknown) entry."""
        key = (first_label, n, second_label)
        hit = self.entries.get(key)
        if hit is not None:
            return hit, True
        if key in self.absent:
            return Vec(self.out_space), False
        if self.output_weight(first_label, n, second_label) > self.out_space.cutoff:
            return Vec(self.out_space), self.out_space.complete
        return Vec(self.out_space), True

    def mode_range(self, first_label: str, second_label: str):
        """All modes n whose output weight the truncated space can represent."""
        w = (self.first_space.weight_of(first_label)
             + self.second_space.weight_of(second_label))
        n_lo = math.ceil(w - 1 - self.out_space.cutoff)
        n_hi = math.floor(w - 1 - self.out_space.min_weight)
        return range(n_lo, n_hi + 1)

    def stored_keys(self):
        return sorted(self.entries)

    def __eq__(self, other):
        if not isinstance(other, VertexMap):
            return NotImplemented
        a = {k: v for k, v in self.entries.items() if not v.is_zero()}
        b = {k: v for k, v in other.entries.items() if not v.is_zero()}
        return self.kind == other.kind and a == b


def mode_apply(vmap: VertexMap, first: Vec, n: int, second: Vec) -> tuple[Vec, bool]:
    """Bilinear extension of the stored modes; exact=False if an absent
    (cutoff-overflow) entry was required."""
    if first.space != vmap.first_space:
        raise ValueError(f"first argument lives in the wrong space for kind {vmap.kind!r}")
    if second.space != vmap.second_space:
        raise ValueError(f"second argument lives in the wrong space for kind {vmap.kind!r}")
    out = Vec(vmap.out_space)
    exact = True
    for f, cf in first.entries.items():
        for s, cs in second.entries.items():
            hit, ok = vmap.basis_entry(f, n, s)
            if not ok:
                exact = False
                continue
            if not hit.is_zero():
                out = out.add(hit.scale(cf * cs))
    return out, exact


def vertex_series(vmap: VertexMap, first: Vec, second: Vec, var: str = "x"):
    """The whole series sum_n (mode n) x^{-n-1} on the certified mode range.

    Returns (coefficients {exponent: Vec}, (lo, hi) certified exponent
    window, exact flag).  Inputs need not be homogeneous; the window is the
    intersection over their homogeneous components.
    """
    coeffs: dict[int, Vec] = {}
    exact = True
    lo_w, hi_w = None, None
    fparts = first.weight_components()
    sparts = second.weight_components()
    if not fparts or not sparts:
        return {}, (0, -1), True
    for wf, fv in fparts.items():
        for ws, sv in sparts.items():
            total = wf + ws
            n_lo = math.ceil(total - 1 - vmap.out_space.cutoff)
            n_hi = math.floor(total - 1 - vmap.out_space.min_weight)
            # certified exponents e = -n-1 for n in [n_lo, n_hi]
            e_lo, e_hi = -n_hi - 1, -n_lo - 1
            lo_w = e_lo if lo_w is None else max(lo_w, e_lo)
            hi_w = e_hi if hi_w is None else min(hi_w, e_hi)
            for n in range(n_lo, n_hi + 1):
                out, ok = mode_apply(vmap, fv, n, sv)
                if not ok:
                    exact = False
                    continue
                if not out.is_zero():
                    e = -n - 1
                    coeffs[e] = coeffs.get(e, Vec(vmap.out_space)).add(out)
    coeffs = {e: v for e, v in coeffs.items() if not v.is_zero()
              and lo_w <= e <= hi_w}
    return coeffs, (lo_w, hi_w), exact


class AlgebraInstance:
    """A vertex algebra bundle truncated at a weight cutoff."""

    __slots__ = ("space", "Y", "vacuum", "D", "L1", "cutoff", "d", "meta")

    def __init__(self, space: GradedSpace, Y: VertexMap, vacuum: Vec,
                 D: GradedOp, L1: GradedOp | None = None, meta: dict | None = None):
        if Y.kind != ALGEBRA:
            raise ValueError("algebra instance needs an algebra-kind vertex map")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "vacuum", vacuum)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "L1", L1)
        object.__setattr__(self, "cutoff", space.cutoff)
        object.__setattr__(self, "d", weight_diagonal_op(space))
        object.__setattr__(self, "meta", dict(meta or {}))

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraInstance is immutable")

    @property
    def kind(self):
        return "algebra"

    def basis_vec(self, label: str) -> Vec:
        return Vec(self.space, {label: 1})


class ModuleInstance:
    """A left, right or bi module bundle over an algebra instance."""

    __slots__ = ("side", "space", "algebra", "YL", "YR", "D", "L1", "N0",
                 "cutoff", "d", "meta")

    def __init__(self, side: str, space: GradedSpace, algebra: AlgebraInstance,
                 YL: VertexMap | None = None, YR: VertexMap | None = None,
                 D: GradedOp | None = None, L1: GradedOp | None = None,
                 N0: GradedOp | None = None, meta: dict | None = None):
        if side not in (LEFT, RIGHT, "bi"):
            raise ValueError(f"unknown module side {side!r}")
        if side in (LEFT, "bi") and (YL is None or YL.kind != LEFT):
            raise ValueError("left or bi module needs a left vertex map")
        if side in (RIGHT, "bi") and (YR is None or YR.kind != RIGHT):
            raise ValueError("right or bi module needs a right vertex map")
        if D is None:
            raise ValueError("module needs the weight-one shift operator")
        object.__setattr__(self, "side", side)
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "YL", YL)
        object.__setattr__(self, "YR", YR)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "L1", L1)
        object.__setattr__(self, "N0", N0)
        object.__setattr__(self, "cutoff", space.cutoff)
        object.__setattr__(self, "d", weight_diagonal_op(space))
        object.__setattr__(self, "meta", dict(meta or {}))

    def __setattr__(self, name, value):
        raise AttributeError("ModuleInstance is immutable")

    @property
    def kind(self):
        return "module"

    def basis_vec(self, label: str) -> Vec:
        return Vec(self.space, {label: 1})


def _validate_map(vmap: VertexMap, name: str, rep: Report):
    bad_weight = None
    for (f, n, s), out in sorted(vmap.entries.items()):
        expected = vmap.output_weight(f, n, s)
        if expected > vmap.out_space.cutoff:
            bad_weight = bad_weight or (f, n, s, "stored beyond cutoff")
            continue
        got = out.weight()
        if got is not None and got != expected:
            bad_weight = bad_weight or (f, n, s, f"weight {got} != {expected}")
    if bad_weight:
        f, n, s, why = bad_weight
        rep.fail(f"{name}: homogeneity", inputs=f"({f}, {n}, {s})", witness=why)
    else:
        rep.ok(f"{name}: homogeneity", inputs=f"{len(vmap.entries)} entries")

    # lower truncation: for each pair the nonzero modes are finitely many and
    # bounded above; finite storage makes this structural, recorded per pair
    pairs = {}
    for (f, n, s), out in vmap.entries.items():
        if not out.is_zero():
            pairs.setdefault((f, s), []).append(n)
    worst = max((max(ns) for ns in pairs.values()), default=None)
    rep.ok(f"{name}: lower truncation",
           inputs=f"{len(pairs)} pairs, max mode {worst}")


def validate_instance(inst) -> Report:
    """Structural invariants: homogeneity of every entry, truncation, vacuum
    weight, grading operator, lower bound of weights."""
    rep = Report("structural")
    space = inst.space
    if space.components and min(space.components) > space.cutoff:
        rep.fail("weights bounded below")  # unreachable by construction
    else:
        rep.ok("weights bounded below", inputs=f"min weight {space.min_weight}")
    if inst.kind == "algebra":
        if any(w != int(w) for w in space.components):
            rep.fail("integer grading", witness="algebra weights must be integers")
        else:
            rep.ok("integer grading")
        wt = inst.vacuum.weight()
        if inst.vacuum.is_zero() or wt != 0:
            rep.fail("vacuum weight", witness=f"weight {wt}")
        else:
            rep.ok("vacuum weight")
        _validate_map(inst.Y, "Y", rep)
        ops = [("D", inst.D, 1), ("L1", inst.L1, -1)]
    else:
        alg = inst.algebra
        rep.ok(f"module side {inst.side}")
        if inst.side in (LEFT, "bi"):
            _validate_map(inst.YL, "Y_left", rep)
        if inst.side in (RIGHT, "bi"):
            _validate_map(inst.YR, "Y_right", rep)
        ops = [("D", inst.D, 1), ("L1", inst.L1, -1), ("N0", inst.N0, 0)]
    for name, op, shift in ops:
        if op is None:
            continue
        if op.weight_shift != shift:
            rep.fail(f"{name} weight shift", witness=f"{op.weight_shift} != {shift}")
        else:
            rep.ok(f"{name} weight shift", inputs=f"{len(op.action)} labels stored")
    # d acts by weight on every basis label (by construction, asserted anyway)
    bad = None
    for lbl in space.labels():
        out, _ = inst.d.apply(inst.basis_vec(lbl))
        if out != inst.basis_vec(lbl).scale(space.weight_of(lbl)):
            bad = lbl
            break
    if bad:
        rep.fail("d grading", witness=bad)
    else:
        rep.ok("d grading", inputs=f"{len(space.labels())} labels")
    return rep
