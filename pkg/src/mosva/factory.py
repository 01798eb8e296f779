"""Shipped example generators.

build_matrix_mosva: the weight-zero algebra with Y_{-1}(u)v = uv for an
associative unital multiplication table.  All other modes vanish.

build_heisenberg: the rank-1 free boson at an arbitrary nonzero level,
truncated at a weight cutoff.  Basis states are oscillator monomials
a(-n1)...a(-nk)|0> keyed by partitions; structure constants come from the
normal-ordered product of the generating field's derivative fields, evaluated
by a slot-by-slot dynamic program over the oscillator algebra
[a(m), a(n)] = m * level * delta(m+n).
"""

from __future__ import annotations

from fractions import Fraction

from .graded import GradedOp, GradedSpace, Vec
from .scalars import binomial
from .vertex import (ALGEBRA, LEFT, RIGHT, AlgebraInstance, ModuleInstance,
                     VertexMap)

# -- matrix algebra ----------------------------------------------------------


def build_matrix_mosva(table, unit, labels=None) -> AlgebraInstance:
    """Weight-zero algebra from a multiplication tensor.

    ``table[i][j][c]`` is the coefficient of basis c in (basis i * basis j).
    ``unit`` is either a basis index or a coefficient vector for the unit
    element.  Associativity and unitality are checked exhaustively.
    """
    dim = len(table)
    if labels is None:
        labels = [f"e{i}" for i in range(dim)]
    labels = list(labels)
    if len(labels) != dim or any(len(row) != dim for row in table):
        raise ValueError("table must be dim x dim x dim with matching labels")
    space = GradedSpace({0: labels}, cutoff=0, complete=True)

    def mult(i, j):
        return [Fraction(c) for c in table[i][j]]

    def mult_vec(a, b):
        out = [Fraction(0)] * dim
        for i, ca in enumerate(a):
            if ca == 0:
                continue
            for j, cb in enumerate(b):
                if cb == 0:
                    continue
                for c, coeff in enumerate(mult(i, j)):
                    out[c] += ca * cb * coeff
        return out

    basis = [[Fraction(1) if k == i else Fraction(0) for k in range(dim)]
             for i in range(dim)]
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                left = mult_vec(mult_vec(basis[i], basis[j]), basis[k])
                right = mult_vec(basis[i], mult_vec(basis[j], basis[k]))
                if left != right:
                    raise ValueError(
                        f"table is not associative at ({labels[i]}, {labels[j]}, {labels[k]})")
    if isinstance(unit, int):
        unit_vec = basis[unit]
    else:
        unit_vec = [Fraction(unit.get(lbl, 0)) for lbl in labels] \
            if isinstance(unit, dict) else [Fraction(c) for c in unit]
    for i in range(dim):
        if mult_vec(unit_vec, basis[i]) != basis[i] or mult_vec(basis[i], unit_vec) != basis[i]:
            raise ValueError(f"unit fails on basis {labels[i]}")

    entries = {}
    for i in range(dim):
        for j in range(dim):
            out = {labels[c]: coeff for c, coeff in enumerate(mult(i, j)) if coeff}
            if out:
                entries[(labels[i], -1, labels[j])] = Vec(space, out)
    Y = VertexMap(ALGEBRA, space, space, space, entries)
    zero = GradedOp.zero(space, 1)
    zero_l1 = GradedOp.zero(space, -1)
    vacuum = Vec(space, {labels[c]: v for c, v in enumerate(unit_vec) if v})
    return AlgebraInstance(space, Y, vacuum, zero, zero_l1,
                           meta={"example": "matrix", "dim": dim})


def matrix_units_mosva(k: int = 2) -> AlgebraInstance:
    """The full k x k matrix algebra on the matrix-unit basis E_ij."""
    labels = [f"E{i+1}{j+1}" for i in range(k) for j in range(k)]
    dim = k * k
    table = [[[0] * dim for _ in range(dim)] for _ in range(dim)]
    for a in range(dim):
        i, j = divmod(a, k)
        for b in range(dim):
            p, q = divmod(b, k)
            if j == p:
                table[a][b][i * k + q] = 1
    unit = {f"E{i+1}{i+1}": 1 for i in range(k)}
    inst = build_matrix_mosva(table, unit, labels)
    return inst


# -- rank-1 free boson -------------------------------------------------------


def partitions_up_to(n: int):
    """All partitions of 0..n as descending tuples, by weight then lex."""
    out = [()]
    for total in range(1, n + 1):
        level = []

        def gen(remaining, maxpart, prefix):
            if remaining == 0:
                level.append(tuple(prefix))
                return
            for p in range(min(maxpart, remaining), 0, -1):
                gen(remaining - p, p, prefix + [p])

        gen(total, total, [])
        out.extend(sorted(level, reverse=True))
    return out


def partition_label(part: tuple[int, ...]) -> str:
    return "vac" if not part else ".".join(f"a{p}" for p in part)


def label_partition(label: str) -> tuple[int, ...]:
    if label == "vac":
        return ()
    return tuple(int(piece[1:]) for piece in label.split("."))


def _remove_part(part: tuple[int, ...], p: int) -> tuple[int, ...]:
    lst = list(part)
    lst.remove(p)
    return tuple(lst)


def _add_part(part: tuple[int, ...], p: int) -> tuple[int, ...]:
    return tuple(sorted(part + (p,), reverse=True))


def _field_coeff(n: int, j: int) -> int:
    """Coefficient of a_j x^{-j-n} in (1/(n-1)!) d^{n-1}/dx^{n-1} of the field."""
    return (-1) ** (n - 1) * binomial(j + n - 1, n - 1)


def _mode_table_for_pair(mu, nu, level: Fraction, cutoff: int):
    """All modes of Y(state mu, x)(state nu) with output weight <= cutoff.

    Slot-by-slot dynamic program over the parts of mu: each slot either
    annihilates a part of the descendant of nu or contributes a creation
    operator, kept aside until the end.  States are (descendant, creations).
    """
    states = {(nu, ()): Fraction(1)}
    for n_i in mu:
        nxt: dict[tuple, Fraction] = {}
        for (sigma, gamma), coeff in states.items():
            # annihilate: a_p on sigma for each distinct part p
            for p in set(sigma):
                c = _field_coeff(n_i, p)
                if c == 0:
                    continue
                val = coeff * c * p * level * sigma.count(p)
                key = (_remove_part(sigma, p), gamma)
                nxt[key] = nxt.get(key, Fraction(0)) + val
            # create: a_{-b} with b >= n_i (smaller b have zero coefficient)
            room = cutoff - sum(gamma)
            for b in range(n_i, room + 1):
                c = _field_coeff(n_i, -b)
                if c == 0:
                    continue
                key = (sigma, _add_part(gamma, b))
                nxt[key] = nxt.get(key, Fraction(0)) + coeff * c
        states = {k: v for k, v in nxt.items() if v != 0}
    total_in = sum(mu) + sum(nu)
    table: dict[int, dict[tuple, Fraction]] = {}
    for (sigma, gamma), coeff in states.items():
        final = tuple(sorted(sigma + gamma, reverse=True))
        h = sum(final)
        if h > cutoff:
            continue
        mode = total_in - h - 1
        table.setdefault(mode, {})
        table[mode][final] = table[mode].get(final, Fraction(0)) + coeff
    return {m: {p: c for p, c in v.items() if c != 0} for m, v in table.items()}


def oscillator_apply(m: int, state: dict, level: Fraction) -> dict:
    """a_m on a dict {partition: coeff}: prepend for m<0, commute for m>0."""
    out: dict[tuple, Fraction] = {}
    for part, c in state.items():
        if m < 0:
            key = _add_part(part, -m)
            out[key] = out.get(key, Fraction(0)) + c
        elif m > 0:
            cnt = part.count(m)
            if cnt:
                key = _remove_part(part, m)
                out[key] = out.get(key, Fraction(0)) + c * m * level * cnt
    return {p: c for p, c in out.items() if c != 0}


def build_heisenberg(level=1, cutoff=6):
    """The rank-1 free boson algebra and its Fock space as a left module."""
    level = Fraction(level)
    if level == 0:
        raise ValueError("level must be nonzero")
    cutoff = int(cutoff)
    if cutoff < 2:
        raise ValueError("cutoff must be at least 2")
    parts = partitions_up_to(cutoff)
    comps: dict[int, list[str]] = {}
    for p in parts:
        comps.setdefault(sum(p), []).append(partition_label(p))
    space = GradedSpace(comps, cutoff)

    def vec(d):
        return Vec(space, {partition_label(p): c for p, c in d.items()})

    entries = {}
    for mu in parts:
        for nu in parts:
            table = _mode_table_for_pair(mu, nu, level, cutoff)
            for mode, out in table.items():
                if out:
                    entries[(partition_label(mu), mode, partition_label(nu))] = vec(out)
    Y = VertexMap(ALGEBRA, space, space, space, entries)

    d_action = {}
    l1_action = {}
    for p in parts:
        lbl = partition_label(p)
        if sum(p) < cutoff:
            img: dict[tuple, Fraction] = {}
            for q in set(p):
                key = _add_part(_remove_part(p, q), q + 1)
                img[key] = img.get(key, Fraction(0)) + q * p.count(q)
            d_action[lbl] = vec(img)
        img1: dict[tuple, Fraction] = {}
        for q in set(p):
            if q >= 2:
                key = _add_part(_remove_part(p, q), q - 1)
                img1[key] = img1.get(key, Fraction(0)) + q * p.count(q)
        l1_action[lbl] = vec(img1)
    D = GradedOp(space, 1, d_action)
    L1 = GradedOp(space, -1, l1_action)
    vacuum = Vec(space, {"vac": 1})
    alg = AlgebraInstance(space, Y, vacuum, D, L1,
                          meta={"example": "heisenberg", "level": level,
                                "cutoff": cutoff})
    fock = self_module(alg, LEFT)
    return alg, fock


def self_module(alg: AlgebraInstance, side: str) -> ModuleInstance:
    """The algebra acting on itself: left by Y(u,x)w, right by Y(w,x)u.

    Both reuse the algebra's mode table; only the keying role changes.
    """
    YL = YR = None
    if side in (LEFT, "bi"):
        YL = VertexMap(LEFT, alg.space, alg.space, alg.space, alg.Y.entries)
    if side in (RIGHT, "bi"):
        YR = VertexMap(RIGHT, alg.space, alg.space, alg.space, alg.Y.entries)
    return ModuleInstance(side, alg.space, alg, YL=YL, YR=YR,
                          D=alg.D, L1=alg.L1,
                          meta={"example": alg.meta.get("example", "?") + "-self"})


def with_scaled_entry(inst, key, factor=2):
    """A copy of the instance with one stored vertex entry scaled; the
    standard fault injection for sensitivity tests."""
    factor = Fraction(factor)

    def scaled(vmap: VertexMap) -> VertexMap:
        if key not in vmap.entries:
            raise KeyError(f"no stored entry {key}")
        entries = dict(vmap.entries)
        entries[key] = entries[key].scale(factor)
        return VertexMap(vmap.kind, vmap.first_space, vmap.second_space,
                         vmap.out_space, entries)

    if isinstance(inst, AlgebraInstance):
        return AlgebraInstance(inst.space, scaled(inst.Y), inst.vacuum,
                               inst.D, inst.L1, meta={**inst.meta, "fault": str(key)})
    which = inst.YL if inst.YL and key in inst.YL.entries else inst.YR
    if which is inst.YL:
        return ModuleInstance(inst.side, inst.space, inst.algebra,
                              YL=scaled(inst.YL), YR=inst.YR, D=inst.D,
                              L1=inst.L1, N0=inst.N0,
                              meta={**inst.meta, "fault": str(key)})
    return ModuleInstance(inst.side, inst.space, inst.algebra,
                          YL=inst.YL, YR=scaled(inst.YR), D=inst.D,
                          L1=inst.L1, N0=inst.N0,
                          meta={**inst.meta, "fault": str(key)})
