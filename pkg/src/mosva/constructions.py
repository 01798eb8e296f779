"""Executable constructions: opposite algebra, module transports between a
structure and its opposite, the opposite vertex operator, and contragredient
modules on the graded dual.

All of them revolve around one finite sum.  The skew transport of a mode
table S under the weight-one operator D is

    T_n(first) second = sum_{k>=0} (1/k!) (-1)^{n+k+1} D^k S_{n+k}(second) first,

the coefficient of x^{-n-1} in exp(xD) S(second, -x) first.  The inner modes
have output weights descending from the target weight, so for a fully stored
source every certified entry of the result is exact; absences propagate as
absences, never as silent zeros.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .graded import GradedOp, Vec, dual_space, op_power_apply, transpose_op
from .scalars import factorial_fraction
from .vertex import (ALGEBRA, LEFT, RIGHT, AlgebraInstance, ModuleInstance,
                     VertexMap)


def _skew_map(source: VertexMap, D: GradedOp, out_kind: str):
    """Apply the skew transport to a whole mode table.

    The result's first/second roles are swapped relative to the source.
    Returns (VertexMap, provenance) where provenance records, per produced
    entry, the (k, source key) terms of the exponential sum that built it.
    """
    first_space = source.second_space
    second_space = source.first_space
    out_space = source.out_space
    minw = out_space.min_weight
    entries: dict[tuple, Vec] = {}
    absent = set()
    provenance: dict[tuple, tuple] = {}
    shaped = VertexMap(out_kind, first_space, second_space, out_space)
    for f in first_space.labels():
        for s in second_space.labels():
            for n in shaped.mode_range(f, s):
                wtout = first_space.weight_of(f) + second_space.weight_of(s) - n - 1
                total = Vec(out_space)
                used = []
                ok = True
                for k in range(math.floor(wtout - minw) + 1):
                    base, stored = source.basis_entry(s, n + k, f)
                    if not stored:
                        ok = False
                        break
                    if base.is_zero():
                        continue
                    lifted, lifted_ok = op_power_apply(D, base, k)
                    if not lifted_ok:
                        ok = False
                        break
                    sign = -1 if (n + k + 1) % 2 else 1
                    total = total.add(lifted.scale(sign * factorial_fraction(k)))
                    used.append((k, (s, n + k, f)))
                key = (f, n, s)
                if not ok:
                    absent.add(key)
                elif not total.is_zero():
                    entries[key] = total
                    provenance[key] = tuple(used)
    return (VertexMap(out_kind, first_space, second_space, out_space,
                      entries, absent), provenance)


@dataclass(frozen=True)
class OppositeWitness:
    source: AlgebraInstance
    result: AlgebraInstance
    mode_table: dict = field(default_factory=dict)

    @property
    def fully_exact(self) -> bool:
        return not self.result.Y.absent


def opposite_mosva(V: AlgebraInstance) -> OppositeWitness:
    """The algebra with reversed multiplication, Y^s(u,x)v = exp(xD) Y(v,-x)u.

    The underlying space, vacuum, grading and sl(2) data are untouched;
    entries whose computation touched absent data stay absent.
    """
    Y_op, provenance = _skew_map(V.Y, V.D, ALGEBRA)
    result = AlgebraInstance(V.space, Y_op, V.vacuum, V.D, V.L1,
                             meta={**V.meta, "opposite_of": V.meta.get("example", "?")})
    return OppositeWitness(V, result, provenance)


_DIRECTIONS = {
    "right_to_left_op": (RIGHT, LEFT),
    "right_op_to_left": (RIGHT, LEFT),
    "left_to_right_op": (LEFT, RIGHT),
    "left_op_to_right": (LEFT, RIGHT),
}


def transport_module(W: ModuleInstance, direction: str,
                     target_algebra: AlgebraInstance | None = None) -> ModuleInstance:
    """Move a one-sided module across the opposite construction.

    A right module becomes a left module for the opposite algebra via
    Y(v,x)w = exp(xD_W) Y^R(w,-x)v, a left module a right one via
    Y(w,x)v = exp(xD_W) Y^L(v,-x)w; the same formulas invert themselves.
    Grading and sl(2) operators are carried over unchanged.
    """
    if direction not in _DIRECTIONS:
        raise ValueError(f"unknown transport direction {direction!r}")
    src_side, dst_side = _DIRECTIONS[direction]
    if W.side != src_side:
        raise ValueError(f"direction {direction} needs a {src_side} module, got {W.side}")
    if target_algebra is None:
        target_algebra = opposite_mosva(W.algebra).result
    if src_side == RIGHT:
        new_map, _ = _skew_map(W.YR, W.D, LEFT)
        return ModuleInstance(LEFT, W.space, target_algebra, YL=new_map,
                              D=W.D, L1=W.L1, N0=W.N0,
                              meta={**W.meta, "transport": direction})
    new_map, _ = _skew_map(W.YL, W.D, RIGHT)
    return ModuleInstance(RIGHT, W.space, target_algebra, YR=new_map,
                          D=W.D, L1=W.L1, N0=W.N0,
                          meta={**W.meta, "transport": direction})


def opposite_vertex_components(W: ModuleInstance, u: Vec, n: int):
    """The mode (Y^o)_n(u) of Y^L(exp(xL(1)) (-x^-2)^{L(0)} u, x^-1).

    For homogeneous u of integer weight h this is
    (-1)^h sum_m (1/m!) (Y^L)_{-n-m-2+2h}(L(1)^m u); the sum is finite since
    L(1) lowers weight on a bounded-below space.  Returns (GradedOp of
    weight shift n+1-h, exact); basis actions that would overflow the cutoff
    are left absent.
    """
    if W.side not in (LEFT, "bi"):
        raise ValueError("opposite vertex operator needs a left module structure")
    algebra = W.algebra
    if algebra.L1 is None:
        raise ValueError("the algebra carries no L(1); opposite vertex operator undefined")
    h = u.weight()
    if h is None:
        raise ValueError("argument must be homogeneous; decompose first")
    if h != int(h):
        raise ValueError("algebra weights must be integers")
    h = int(h)
    sign = -1 if h % 2 else 1
    shift = Fraction(n + 1 - h)
    # L(1)^m u, exactly, until it vanishes
    powers = []
    current = u
    exact_powers = True
    while not current.is_zero():
        powers.append(current)
        current, ok = algebra.L1.apply(current)
        exact_powers = exact_powers and ok
    action: dict[str, Vec] = {}
    exact = exact_powers
    for lbl in W.space.labels():
        wv = W.space.weight_of(lbl)
        if wv + shift > W.space.cutoff and not W.space.complete:
            exact = False
            continue
        out = Vec(W.space)
        ok_all = True
        for m, um in enumerate(powers):
            mode = -n - m - 2 + 2 * h
            contrib, ok = _left_mode(W, um, mode, lbl)
            if not ok:
                ok_all = False
                break
            out = out.add(contrib.scale(sign * factorial_fraction(m)))
        if ok_all:
            action[lbl] = out
        else:
            exact = False
    return GradedOp(W.space, shift, action), exact


def _left_mode(W: ModuleInstance, u: Vec, mode: int, w_label: str):
    out = Vec(W.space)
    exact = True
    for ul, cu in u.entries.items():
        hit, ok = W.YL.basis_entry(ul, mode, w_label)
        if not ok:
            exact = False
            continue
        out = out.add(hit.scale(cu))
    return out, exact


def contragredient_module(W: ModuleInstance, require_grading_restricted: bool = True,
                          certificate=None, suffix: str = "'") -> ModuleInstance:
    """The graded dual of a left module as a left module over the opposite
    algebra, with <Y'(u,x)w', w> = <w', Y^o(u,x)w> and L'(j) the transpose
    of L(-j).

    Grading restriction holds structurally for every representable instance;
    waiving the flag instead requires a strong pole-order certificate (an
    object carrying a finite constant_C).
    """
    if W.side not in (LEFT, "bi"):
        raise ValueError("contragredient is defined for left modules")
    if W.L1 is None or W.algebra.L1 is None:
        raise ValueError("contragredient needs L(1) on both the algebra and the module")
    if not require_grading_restricted:
        if certificate is None or getattr(certificate, "constant_C", None) is None:
            raise ValueError("waiving grading restriction requires a strong "
                             "pole-order certificate with a finite constant")
    algebra_op = opposite_mosva(W.algebra).result
    dual = dual_space(W.space, suffix)
    entries: dict[tuple, Vec] = {}
    absent = set()
    minw, top = W.space.min_weight, W.space.cutoff
    for u_lbl in W.algebra.space.labels():
        u = Vec(W.algebra.space, {u_lbl: 1})
        hu = int(W.algebra.space.weight_of(u_lbl))
        n_lo = math.ceil(hu + minw - 1 - top)
        n_hi = math.floor(hu + top - 1 - minw)
        for n in range(n_lo, n_hi + 1):
            op, _ = opposite_vertex_components(W, u, n)
            for beta in W.space.labels():
                src_weight = W.space.weight_of(beta) + hu - n - 1
                if src_weight > top or src_weight < minw:
                    continue
                row: dict[str, Fraction] = {}
                ok = True
                for gamma in W.space.labels_at(src_weight):
                    img = op.action.get(gamma)
                    if img is None:
                        ok = False
                        break
                    c = img.coefficient(beta)
                    if c:
                        row[gamma + suffix] = c
                key = (u_lbl, n, beta + suffix)
                if not ok:
                    absent.add(key)
                elif row:
                    entries[key] = Vec(dual, row)
    Yp = VertexMap(LEFT, W.algebra.space, dual, dual, entries, absent)
    D_p = transpose_op(W.L1, dual, suffix)
    L1_p = transpose_op(W.D, dual, suffix)
    N0_p = transpose_op(W.N0, dual, suffix) if W.N0 is not None else None
    return ModuleInstance(LEFT, dual, algebra_op, YL=Yp, D=D_p, L1=L1_p,
                          N0=N0_p, meta={**W.meta, "contragredient": True})
