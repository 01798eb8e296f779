"""Correlation functions, exact on a certified window, and their
reconstruction as rational functions with certified pole divisors.

A product correlator <bra, Y(u1,z1)...Y(un,zn) ket> is computed by composing
stored modes from the ket outward; a coefficient is emitted exactly when the
whole chain of intermediate weights stays under the cutoff, and is provably
zero off the grading hyperplane.  The certified set is decided by weight
arithmetic, so membership can be tested for monomials that were never
computed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .expansion import RationalFn
from .graded import DualVec, Vec, pair
from .laurent import LaurentPoly
from .vertex import AlgebraInstance, LEFT, RIGHT, mode_apply

PRODUCT = "product"
ITERATE = "iterate"
MIXED = "mixed"


@dataclass(frozen=True)
class PoleOrderWitness:
    """Recorded pole orders: p_axis per variable, p_diag per variable pair,
    the search bound that produced them, and (for audits) the minimal
    constant making p1 <= wt u1 + Re(wt w) + C over the sample set."""

    p_axis: dict
    p_diag: dict
    p1_search_bound: int | None = None
    constant_C: Fraction | None = None
    note: str = ""
    pair_bounds: dict = field(default_factory=dict)


class CorrelationSeries:
    """Exact coefficients of a correlator on an arithmetic certified set."""

    __slots__ = ("variables", "coefficients", "certified_window", "provenance",
                 "mode", "_op_weights", "_ket_weight", "_bra_weight",
                 "_chain_cutoffs", "_chain_minw", "_holes", "_trivial")

    def __init__(self, variables, coefficients, mode, op_weights, ket_weight,
                 bra_weight, chain_cutoffs, chain_minw, holes=(),
                 provenance=None, trivially_zero=False):
        object.__setattr__(self, "variables", tuple(variables))
        object.__setattr__(self, "coefficients",
                           {tuple(k): Fraction(v) for k, v in coefficients.items()
                            if v != 0})
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "_op_weights", tuple(op_weights))
        object.__setattr__(self, "_ket_weight", ket_weight)
        object.__setattr__(self, "_bra_weight", bra_weight)
        object.__setattr__(self, "_chain_cutoffs", tuple(chain_cutoffs))
        object.__setattr__(self, "_chain_minw", tuple(chain_minw))
        object.__setattr__(self, "_holes", frozenset(holes))
        object.__setattr__(self, "_trivial", bool(trivially_zero))
        object.__setattr__(self, "provenance", dict(provenance or {}))
        object.__setattr__(self, "certified_window", self._window_box())

    def __setattr__(self, name, value):
        raise AttributeError("CorrelationSeries is immutable")

    @property
    def degree_sum(self) -> Fraction:
        """The grading hyperplane: sum of exponents of any nonzero monomial."""
        return (self._bra_weight - sum(self._op_weights, Fraction(0))
                - self._ket_weight)

    def is_zero(self) -> bool:
        return not self.coefficients

    def coefficient(self, mono) -> Fraction:
        return self.coefficients.get(tuple(mono), Fraction(0))

    def is_certified(self, mono) -> bool:
        """True when the (possibly zero) coefficient at mono is provably exact."""
        mono = tuple(mono)
        n = len(self.variables)
        if len(mono) != n:
            raise ValueError("monomial arity mismatch")
        if self._trivial:
            return True
        for h in self._holes:
            if self.mode in (PRODUCT, MIXED):
                if mono[n - len(h):] == h:
                    return False
            elif mono[: len(h)] == h:
                return False
        if sum(mono) != self.degree_sum:
            return True  # off the grading hyperplane: exactly zero
        if self.mode in (PRODUCT, MIXED):
            w = self._ket_weight
            for j in range(n - 1, -1, -1):
                w = w + self._op_weights[j] + mono[j]
                if w < self._chain_minw[j]:
                    return True  # the chain dies below the lower bound
                if w > self._chain_cutoffs[j]:
                    return False
            return True
        w = self._op_weights[0]
        for j in range(1, n):
            w = w + self._op_weights[j] + mono[j - 1]
            if w < self._chain_minw[j - 1]:
                return True
            if w > self._chain_cutoffs[j - 1]:
                return False
        return True

    def _window_box(self):
        if not self.coefficients:
            return {v: (0, 0) for v in self.variables}
        box = {}
        for i, v in enumerate(self.variables):
            exps = [m[i] for m in self.coefficients]
            box[v] = (min(exps), max(exps))
        return box

    def as_poly(self) -> LaurentPoly:
        return LaurentPoly(self.variables, self.coefficients)

    def __repr__(self):
        return (f"CorrelationSeries({self.variables}, {len(self.coefficients)} "
                f"coefficients, mode={self.mode})")


def _resolve_chain(inst, ops, mode, module_at):
    """Per-position vertex maps, validated against the instance's roles."""
    if isinstance(inst, AlgebraInstance):
        if mode == MIXED:
            raise ValueError("mixed correlators need a bimodule")
        return [inst.Y] * len(ops)
    alg = inst.algebra
    if mode == MIXED:
        if inst.side != "bi":
            raise ValueError("mixed correlators need a bimodule")
        if module_at is None or not 0 <= module_at < len(ops):
            raise ValueError("mixed correlators need the module element's position")
        return ([inst.YL] * module_at + [inst.YR]
                + [alg.Y] * (len(ops) - module_at - 1))
    if inst.side in (LEFT, "bi"):
        return [inst.YL] * len(ops)
    return [inst.YR] + [alg.Y] * (len(ops) - 1)


def correlate(inst, bra: DualVec, ops, ket: Vec, mode: str = PRODUCT,
              module_at: int | None = None) -> CorrelationSeries:
    """Exact correlator coefficients with the certified set they live on.

    ops is a list of (vector, variable name).  mode "product" composes the
    operators at separate variables; "iterate" nests them at successive
    differences (the emitted variables are z1-z2, ..., zn); "mixed" needs a
    bimodule and the position of the module element among the operators.
    Operators must be homogeneous.
    """
    if mode not in (PRODUCT, ITERATE, MIXED):
        raise ValueError(f"unknown correlator mode {mode!r}")
    if not ops:
        raise ValueError("need at least one operator")
    for u, _ in ops:
        if u.weight() is None and not u.is_zero():
            raise ValueError("operators must be homogeneous")
    names = [v for _, v in ops]
    if mode == ITERATE:
        names = [f"{a}-{b}" for a, b in zip(names, names[1:])] + [names[-1]]
    if len(set(names)) != len(names):
        raise ValueError("operator variables must be distinct")
    chain = _resolve_chain(inst, ops, mode, module_at)
    op_weights = [u.weight() or Fraction(0) for u, _ in ops]
    zero_input = (bra.is_zero() or ket.is_zero() or any(u.is_zero() for u, _ in ops))
    if not zero_input and (bra.weight() is None or ket.weight() is None):
        raise ValueError("bra and ket must be homogeneous; decompose and sum")
    if zero_input:
        return CorrelationSeries(names, {}, mode, op_weights,
                                 ket.weight() or Fraction(0),
                                 bra.weight() or Fraction(0),
                                 [Fraction(0)] * len(ops),
                                 [Fraction(0)] * len(ops),
                                 provenance={"mode": mode, "ops": list(names)},
                                 trivially_zero=True)
    bw, kw = bra.weight(), ket.weight()

    coefficients: dict[tuple, Fraction] = {}
    holes: set[tuple] = set()
    if mode in (PRODUCT, MIXED):
        if bra.space != chain[0].out_space:
            raise ValueError("bra lives in the wrong space")
        cutoffs = [vm.out_space.cutoff for vm in chain]
        minws = [vm.out_space.min_weight for vm in chain]
        states: dict[tuple, Vec] = {(): ket}
        for j in range(len(chain) - 1, -1, -1):
            vmap, u = chain[j], ops[j][0]
            nxt: dict[tuple, Vec] = {}
            for suffix, vec in states.items():
                wv = vec.weight()
                n_lo = math.ceil(op_weights[j] + wv - 1 - vmap.out_space.cutoff)
                n_hi = math.floor(op_weights[j] + wv - 1 - vmap.out_space.min_weight)
                for n in range(n_lo, n_hi + 1):
                    out, exact = mode_apply(vmap, u, n, vec)
                    if not exact:
                        holes.add((-n - 1,) + suffix)
                    elif not out.is_zero():
                        nxt[(-n - 1,) + suffix] = out
            states = nxt
        for mono, vec in states.items():
            c = pair(bra, vec)
            if c != 0:
                assert sum(mono) == bw - sum(op_weights) - kw, "degree invariant"
                coefficients[mono] = c
    else:
        cutoffs, minws = [], []
        outer = chain[0]
        inner = inst.Y if isinstance(inst, AlgebraInstance) else (
            inst.algebra.Y if outer is inst.YL else inst.YR)
        states = {(): ops[0][0]}
        for j in range(1, len(ops)):
            cutoffs.append(inner.out_space.cutoff)
            minws.append(inner.out_space.min_weight)
            uj = ops[j][0]
            nxt = {}
            for prefix, vec in states.items():
                wv = vec.weight()
                n_lo = math.ceil(wv + op_weights[j] - 1 - inner.out_space.cutoff)
                n_hi = math.floor(wv + op_weights[j] - 1 - inner.out_space.min_weight)
                for n in range(n_lo, n_hi + 1):
                    out, exact = mode_apply(inner, vec, n, uj)
                    if not exact:
                        holes.add(prefix + (-n - 1,))
                    elif not out.is_zero():
                        nxt[prefix + (-n - 1,)] = out
            states = nxt
        cutoffs.append(outer.out_space.cutoff)
        minws.append(outer.out_space.min_weight)
        if bra.space != outer.out_space:
            raise ValueError("bra lives in the wrong space")
        for prefix, vec in states.items():
            wv = vec.weight()
            n_lo = math.ceil(wv + kw - 1 - outer.out_space.cutoff)
            n_hi = math.floor(wv + kw - 1 - outer.out_space.min_weight)
            for n in range(n_lo, n_hi + 1):
                out, exact = mode_apply(outer, vec, n, ket)
                if not exact:
                    holes.add(prefix + (-n - 1,))
                    continue
                c = pair(bra, out)
                if c != 0:
                    mono = prefix + (-n - 1,)
                    assert sum(mono) == bw - sum(op_weights) - kw, "degree invariant"
                    coefficients[mono] = c
    return CorrelationSeries(names, coefficients, mode, op_weights, kw, bw,
                             cutoffs, minws, holes,
                             provenance={"mode": mode, "ops": list(names)})


@dataclass(frozen=True)
class ReconstructionResult:
    fn: RationalFn | None
    certified: bool
    degree: int | None
    detail: str = ""

    def __iter__(self):
        return iter((self.fn, self.certified))


def _divisor_poly(variables, p_axis, p_diag) -> LaurentPoly:
    out = LaurentPoly.constant(variables, 1)
    for v, p in sorted(p_axis.items()):
        if p:
            out = out * LaurentPoly.monomial(variables, {v: p})
    for (a, b), p in sorted(p_diag.items()):
        if p:
            diff = (LaurentPoly.variable(a, variables)
                    - LaurentPoly.variable(b, variables))
            out = out * diff ** p
    return out


def _normalize_witness(witness: PoleOrderWitness, variables):
    p_axis = {}
    for i, v in enumerate(variables):
        p = witness.p_axis.get(v, witness.p_axis.get(i + 1, 0))
        if p:
            p_axis[v] = int(p)
    p_diag = {}
    n = len(variables)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = variables[i], variables[j]
            p = witness.p_diag.get((a, b), witness.p_diag.get((i + 1, j + 1), 0))
            if p:
                p_diag[(a, b)] = int(p)
    return p_axis, p_diag


def reconstruct_rational(series: CorrelationSeries,
                         witness: PoleOrderWitness) -> ReconstructionResult:
    """Multiply the series by the pole divisor and read off the numerator.

    certified=True iff the certified set covers every monomial of the
    predicted total degree and the remainder vanishes wherever certified.
    """
    vs = series.variables
    n = len(vs)
    p_axis, p_diag = _normalize_witness(witness, vs)
    divisor = _divisor_poly(vs, p_axis, p_diag)
    deg_f = sum(p_axis.values()) + sum(p_diag.values()) + series.degree_sum
    if deg_f != int(deg_f):
        return ReconstructionResult(None, False, None,
                                    f"predicted degree {deg_f} is not an integer")
    deg = int(deg_f)
    if deg < 0:
        if series.is_zero():
            return ReconstructionResult(RationalFn(vs, LaurentPoly.zero(vs)),
                                        True, deg, "zero function")
        return ReconstructionResult(None, False, deg,
                                    "negative predicted degree but nonzero series")

    def monomials_of_degree(d, slots):
        if slots == 1:
            yield (d,)
            return
        for x in range(d + 1):
            for rest in monomials_of_degree(d - x, slots - 1):
                yield (x,) + rest

    def product_coeff(mono):
        total = Fraction(0)
        for t, c in divisor.terms.items():
            shifted = tuple(m - x for m, x in zip(mono, t))
            if not series.is_certified(shifted):
                return None
            total += c * series.coefficient(shifted)
        return total

    numerator_terms = {}
    for mono in monomials_of_degree(deg, n):
        val = product_coeff(mono)
        if val is None:
            return ReconstructionResult(
                None, False, deg,
                f"window does not certify numerator monomial {mono}; "
                f"a larger cutoff is needed")
        if val != 0:
            numerator_terms[mono] = val

    # remainder: the product must vanish away from the numerator support,
    # checked at every certified monomial reachable from the stored series
    for m in series.coefficients:
        for t in divisor.terms:
            cand = tuple(a + b for a, b in zip(m, t))
            if sum(cand) == deg and all(x >= 0 for x in cand):
                continue
            val = product_coeff(cand)
            if val is not None and val != 0:
                return ReconstructionResult(
                    None, False, deg,
                    f"nonzero remainder at {cand}: these pole orders do not "
                    f"reduce the series to a polynomial")
    fn = RationalFn(vs, LaurentPoly(vs, numerator_terms), p_axis, p_diag)
    return ReconstructionResult(fn, True, deg)


def _pair_pole_bound(vmap, first: Vec, second: Vec) -> int:
    """An order bound for the pole between two elements: one past the top
    nonzero nonnegative mode of the map joining them (lower truncation)."""
    top = -1
    firsts = set(first.entries)
    seconds = set(second.entries)
    for (f, m, s), out in vmap.entries.items():
        if m > top and f in firsts and s in seconds and not out.is_zero():
            top = m
    return top + 1 if top >= 0 else 0


def truncation_pole_orders(inst, ops, ket, mode=PRODUCT,
                           module_at: int | None = None):
    """Pole orders readable from lower truncation: every diagonal order and
    the axis order of the innermost variable."""
    chain = _resolve_chain(inst, ops, mode, module_at)
    alg = inst if isinstance(inst, AlgebraInstance) else inst.algebra
    vs = [v for _, v in ops]
    n = len(ops)
    module_pos = None
    if not isinstance(inst, AlgebraInstance):
        if mode == MIXED:
            module_pos = module_at
        elif inst.side == RIGHT:
            module_pos = 0
    p_diag = {}
    for i in range(n):
        for j in range(i + 1, n):
            if module_pos is not None and i == module_pos:
                vmap = inst.YR
                bound = _pair_pole_bound(vmap, ops[i][0], ops[j][0])
            elif module_pos is not None and j == module_pos:
                vmap = inst.YL
                bound = _pair_pole_bound(vmap, ops[i][0], ops[j][0])
            else:
                bound = _pair_pole_bound(alg.Y, ops[i][0], ops[j][0])
            if bound:
                p_diag[(vs[i], vs[j])] = bound
    p_axis = {}
    bound = _pair_pole_bound(chain[-1], ops[-1][0], ket)
    if bound:
        p_axis[vs[-1]] = bound
    return p_axis, p_diag


def _compositions(total, slots):
    if slots == 1:
        yield (total,)
        return
    for x in range(total + 1):
        for rest in _compositions(total - x, slots - 1):
            yield (x,) + rest


def estimate_pole_orders(inst, bra, ops, ket,
                         series: CorrelationSeries | None = None,
                         max_bump: int = 6) -> PoleOrderWitness:
    """A pole-order candidate: diagonal and innermost orders from lower
    truncation, interior axis orders found by searching bump vectors in
    order of total size until a reconstruction certifies.

    Extra poles only raise the predicted degree and never help a
    window-limited case, so the first certifying vector is total-minimal.
    When nothing certifies the first window-limited trial is returned so
    callers can report the honest obstruction."""
    if series is None:
        series = correlate(inst, bra, ops, ket, PRODUCT)
    base_axis, p_diag = truncation_pole_orders(inst, ops, ket)
    interior = series.variables[:-1]
    window_limited = None
    last = None
    for total in range(0, max_bump + 1):
        for bumps in _compositions(total, max(1, len(interior))):
            p_axis = dict(base_axis)
            for v, b in zip(interior, bumps):
                if b:
                    p_axis[v] = p_axis.get(v, 0) + b
            trial = PoleOrderWitness(p_axis, dict(p_diag))
            res = reconstruct_rational(series, trial)
            if res.certified:
                return trial
            if ("remainder" not in res.detail
                    and "negative predicted" not in res.detail
                    and window_limited is None):
                window_limited = trial
            last = trial
    return window_limited or last
