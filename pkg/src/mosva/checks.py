"""Axiom and theorem checkers.

Every checker is a pure function from an instance (plus parameters) to a
Report; identical inputs yield byte-identical reports.  Convergence-style
axioms are checked as exact coefficient identities on certified windows, and
every record names the window it quantified over.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .constructions import contragredient_module, opposite_vertex_components
from .correlators import (ITERATE, PRODUCT, CorrelationSeries, PoleOrderWitness,
                          correlate, estimate_pole_orders, reconstruct_rational)
from .errors import WindowError
from .expansion import Region, expand_rational
from .graded import Vec, basis_dual, pair
from .laurent import LaurentPoly, taylor_shift
from .report import Report
from .scalars import binomial, format_scalar
from .vertex import (LEFT, RIGHT, AlgebraInstance, ModuleInstance, mode_apply,
                     validate_instance, vertex_series)


class _SumOp:
    """d + N0 as one operator with exactness tracking."""

    def __init__(self, d, n0):
        self._d, self._n0 = d, n0

    def apply(self, v):
        out, ok = self._d.apply(v)
        if self._n0 is not None:
            extra, ok2 = self._n0.apply(v)
            out, ok = out.add(extra), ok and ok2
        return out, ok


def _sl2_of(owner):
    """(L(-1), L(0), L(1)) for an algebra or module instance."""
    n0 = getattr(owner, "N0", None)
    return owner.D, _SumOp(owner.d, n0), owner.L1


def _maps_of(inst):
    if isinstance(inst, AlgebraInstance):
        return [("Y", inst.Y)]
    out = []
    if inst.YL is not None:
        out.append(("Y_left", inst.YL))
    if inst.YR is not None:
        out.append(("Y_right", inst.YR))
    return out


def _owners(inst, vmap):
    """Structure owners of (first, second, output) slots of a vertex map."""
    alg = inst if isinstance(inst, AlgebraInstance) else inst.algebra
    if vmap.kind == "algebra":
        return alg, alg, alg
    if vmap.kind == LEFT:
        return alg, inst, inst
    return inst, alg, inst


# -- vacuum ------------------------------------------------------------------


def check_vacuum(inst) -> Report:
    """Identity property on the identity-bearing maps, creation property for
    algebras and right modules, and D(vacuum) = 0 on algebras."""
    rep = Report("vacuum")
    alg = inst if isinstance(inst, AlgebraInstance) else inst.algebra
    vac = alg.vacuum

    def identity_on(vmap, name):
        checked, witness = 0, None
        for lbl in vmap.second_space.labels():
            v = Vec(vmap.second_space, {lbl: 1})
            wv = vmap.second_space.weight_of(lbl)
            n_lo = math.ceil(wv - 1 - vmap.out_space.cutoff)
            n_hi = math.floor(wv - 1 - vmap.out_space.min_weight)
            for n in range(n_lo, n_hi + 1):
                out, exact = mode_apply(vmap, vac, n, v)
                if not exact:
                    continue
                want = v if n == -1 else Vec(vmap.out_space)
                checked += 1
                if out != want:
                    witness = witness or f"mode {n} on {lbl}: got {out!r}"
        rep.record(f"{name}: identity property", "fail" if witness else "pass",
                   inputs=f"{checked} modes", witness=witness or "")

    def creation_on(vmap, name, D):
        checked, witness = 0, None
        for lbl in vmap.first_space.labels():
            u = Vec(vmap.first_space, {lbl: 1})
            coeffs, (lo, hi), _ = vertex_series(vmap, u, vac)
            for e, out in coeffs.items():
                if e < 0 and not out.is_zero():
                    witness = witness or f"{lbl}: negative power {e}"
            if hi >= 0 and coeffs.get(0, Vec(vmap.out_space)) != u:
                witness = witness or f"{lbl}: constant term is not the element"
            current, fact = u, Fraction(1)
            for k in range(0, hi + 1):
                checked += 1
                if coeffs.get(k, Vec(vmap.out_space)) != current.scale(fact):
                    witness = witness or f"{lbl}: power {k} is not exp(xD)"
                    break
                nxt, ok = D.apply(current)
                if not ok:
                    break
                current, fact = nxt, fact / (k + 1)
        rep.record(f"{name}: creation property", "fail" if witness else "pass",
                   inputs=f"{checked} coefficients", witness=witness or "")

    if isinstance(inst, AlgebraInstance):
        identity_on(inst.Y, "Y")
        creation_on(inst.Y, "Y", inst.D)
        dvac, exact = inst.D.apply(vac)
        rep.record("D annihilates the vacuum",
                   "pass" if exact and dvac.is_zero() else "fail",
                   witness="" if dvac.is_zero() else repr(dvac))
    else:
        if inst.side in (LEFT, "bi"):
            identity_on(inst.YL, "Y_left")
        if inst.side in (RIGHT, "bi"):
            creation_on(inst.YR, "Y_right", inst.D)
    return rep


# -- shift operator ----------------------------------------------------------


def check_derivative(inst) -> Report:
    """d/dx Y(u,x) = Y(Du,x) = [D, Y(u,x)] as exact mode identities, plus a
    shift-conjugation spot check through taylor_shift."""
    rep = Report("derivative")
    for name, vmap in _maps_of(inst):
        own_f, own_s, own_o = _owners(inst, vmap)
        checked = skipped = 0
        bad = None
        for f in vmap.first_space.labels():
            fv = Vec(vmap.first_space, {f: 1})
            dfv, df_ok = own_f.D.apply(fv)
            for s in vmap.second_space.labels():
                sv = Vec(vmap.second_space, {s: 1})
                dsv, ds_ok = own_s.D.apply(sv)
                for n in vmap.mode_range(f, s):
                    below, ok0 = vmap.basis_entry(f, n - 1, s)
                    if not ok0:
                        skipped += 1
                        continue
                    lhs = below.scale(-n)
                    if df_ok:
                        rhs, ok1 = mode_apply(vmap, dfv, n, sv)
                        if ok1:
                            checked += 1
                            if lhs != rhs:
                                bad = bad or f"derivative at ({f}, {n}, {s})"
                        else:
                            skipped += 1
                    else:
                        skipped += 1
                    here, ok2 = vmap.basis_entry(f, n, s)
                    if not ok2:
                        skipped += 1
                        continue
                    d_here, ok3 = own_o.D.apply(here)
                    if not (ok3 and ds_ok):
                        skipped += 1
                        continue
                    tail, ok4 = mode_apply(vmap, fv, n, dsv)
                    if not ok4:
                        skipped += 1
                        continue
                    checked += 1
                    if lhs != d_here.add(tail.scale(-1)):
                        bad = bad or f"commutator at ({f}, {n}, {s})"
        rep.record(f"{name}: derivative and commutator",
                   "fail" if bad else "pass", witness=bad or "",
                   inputs=f"{checked} identities",
                   window=f"{skipped} skipped at cutoff")
    _conjugation_spot_check(inst, rep)
    return rep


def _conjugation_spot_check(inst, rep: Report, samples: int = 3):
    """Y(u, x+y) = Y(exp(yD)u, x) checked through taylor_shift on scalar
    series for a few low-weight samples (binomial expansion in y)."""
    name, vmap = _maps_of(inst)[0]
    own_f, _, _ = _owners(inst, vmap)
    checked = 0
    for f in vmap.first_space.labels()[:samples]:
        u = Vec(vmap.first_space, {f: 1})
        for s in vmap.second_space.labels()[:samples]:
            v = Vec(vmap.second_space, {s: 1})
            coeffs, (lo, hi), _ = vertex_series(vmap, u, v)
            for b_lbl in vmap.out_space.labels()[:samples]:
                b = basis_dual(vmap.out_space, b_lbl)
                series = LaurentPoly(("x",), {(e,): pair(b, out)
                                              for e, out in coeffs.items()})
                if series.is_zero():
                    continue
                order = max(0, int(vmap.first_space.cutoff
                                   - vmap.first_space.weight_of(f)))
                lhs = taylor_shift(series, "x", "x", "y", "y", order)
                rhs = LaurentPoly.zero(("x", "y"))
                current, fact = u, Fraction(1)
                for k in range(order + 1):
                    ck, _, _ = vertex_series(vmap, current, v)
                    for e, out in ck.items():
                        c = pair(b, out) * fact
                        if c:
                            rhs = rhs + LaurentPoly(("x", "y"), {(e, k): c})
                    nxt, ok = own_f.D.apply(current)
                    if not ok:
                        order = k
                        break
                    current, fact = nxt, fact / (k + 1)
                window = {"x": (lo, hi), "y": (0, order)}
                if lhs.restricted(window) != rhs.restricted(window):
                    rep.fail("shift conjugation via binomial expansion",
                             inputs=f"({f}, {s}, {b_lbl})")
                    return
                checked += 1
    rep.ok("shift conjugation via binomial expansion", inputs=f"{checked} samples")


# -- grading -----------------------------------------------------------------


def check_grading(inst) -> Report:
    """Structural validation plus the grading commutator
    [d, Y_n(u)] = (wt u - n - 1) Y_n(u) on every stored entry."""
    rep = Report("grading")
    rep.extend(validate_instance(inst))
    for name, vmap in _maps_of(inst):
        own_f, own_s, own_o = _owners(inst, vmap)
        bad, checked = None, 0
        for (f, n, s), entry in sorted(vmap.entries.items()):
            d_out, _ = own_o.d.apply(entry)
            commutator = d_out.add(entry.scale(-vmap.second_space.weight_of(s)))
            want = entry.scale(vmap.first_space.weight_of(f) - n - 1)
            checked += 1
            if commutator != want:
                bad = bad or f"({f}, {n}, {s})"
        rep.record(f"{name}: grading commutator", "fail" if bad else "pass",
                   witness=bad or "", inputs=f"{checked} entries")
    return rep


# -- Mobius structure --------------------------------------------------------


def check_mobius(inst) -> Report:
    """sl(2) brackets on every basis vector, vacuum annihilation on algebras,
    nilpotency of the non-semisimple part, and the L(0)/L(1) commutator
    formulas against the vertex operators at mode level."""
    rep = Report("mobius")
    alg = inst if isinstance(inst, AlgebraInstance) else inst.algebra
    if inst.L1 is None or alg.L1 is None:
        rep.fail("L(1) present", witness="no sl(2) data on the instance")
        return rep
    Lm1, L0, L1 = _sl2_of(inst)

    def bracket(rep_name, A, B, want_fn):
        checked = skipped = 0
        bad = None
        for lbl in inst.space.labels():
            v = Vec(inst.space, {lbl: 1})
            bv, ok1 = B.apply(v)
            abv, ok2 = A.apply(bv)
            av, ok3 = A.apply(v)
            bav, ok4 = B.apply(av)
            want, ok5 = want_fn(v)
            if not (ok1 and ok2 and ok3 and ok4 and ok5):
                skipped += 1
                continue
            checked += 1
            if abv.add(bav.scale(-1)) != want:
                bad = bad or lbl
        rep.record(rep_name, "fail" if bad else "pass", witness=bad or "",
                   inputs=f"{checked} basis vectors",
                   window=f"{skipped} skipped at cutoff")

    bracket("[L(0), L(-1)] = L(-1)", L0, Lm1, lambda v: Lm1.apply(v))
    bracket("[L(0), L(1)] = -L(1)", L0, L1,
            lambda v: (lambda o, k: (o.scale(-1), k))(*L1.apply(v)))
    bracket("[L(-1), L(1)] = -2 L(0)", Lm1, L1,
            lambda v: (lambda o, k: (o.scale(-2), k))(*L0.apply(v)))

    if isinstance(inst, AlgebraInstance):
        for nm, op in (("L(-1)", Lm1), ("L(0)", L0), ("L(1)", L1)):
            out, ok = op.apply(inst.vacuum)
            rep.record(f"{nm} annihilates the vacuum",
                       "pass" if ok and out.is_zero() else "fail",
                       witness="" if out.is_zero() else repr(out))
    n0 = getattr(inst, "N0", None)
    if n0 is not None:
        bound = max(len(ls) for ls in inst.space.components.values()) + 1
        bad = None
        for lbl in inst.space.labels():
            v = Vec(inst.space, {lbl: 1})
            for _ in range(bound):
                v, _ = n0.apply(v)
                if v.is_zero():
                    break
            else:
                bad = bad or lbl
        rep.record("N0 nilpotent", "fail" if bad else "pass", witness=bad or "")

    for name, vmap in _maps_of(inst):
        own_f, own_s, own_o = _owners(inst, vmap)
        f_m1, f_0, f_1 = _sl2_of(own_f)
        s_m1, s_0, s_1 = _sl2_of(own_s)
        o_m1, o_0, o_1 = _sl2_of(own_o)
        for formula, shifts in (("L(0)", ((0, f_0, 1), (1, f_m1, 1))),
                                ("L(1)", ((0, f_1, 1), (1, f_0, 2), (2, f_m1, 1)))):
            out_op = o_0 if formula == "L(0)" else o_1
            sec_op = s_0 if formula == "L(0)" else s_1
            checked = skipped = 0
            bad = None
            for f in vmap.first_space.labels():
                fv = Vec(vmap.first_space, {f: 1})
                firsts = []
                ok_first = True
                for off, op, scale in shifts:
                    img, ok = op.apply(fv)
                    firsts.append((off, img, scale))
                    ok_first = ok_first and ok
                for s in vmap.second_space.labels():
                    sv = Vec(vmap.second_space, {s: 1})
                    s_img, ok_s = sec_op.apply(sv)
                    for n in vmap.mode_range(f, s):
                        here, okh = vmap.basis_entry(f, n, s)
                        if not (okh and ok_first and ok_s):
                            skipped += 1
                            continue
                        out_img, oko = out_op.apply(here)
                        tail, okt = mode_apply(vmap, fv, n, s_img)
                        rhs = Vec(vmap.out_space)
                        ok_rhs = True
                        for off, img, scale in firsts:
                            term, okr = mode_apply(vmap, img, n + off, sv)
                            if not okr:
                                ok_rhs = False
                                break
                            rhs = rhs.add(term.scale(scale))
                        if not (oko and okt and ok_rhs):
                            skipped += 1
                            continue
                        checked += 1
                        if out_img.add(tail.scale(-1)) != rhs:
                            bad = bad or f"({f}, {n}, {s})"
            rep.record(f"{name}: {formula} commutator formula",
                       "fail" if bad else "pass", witness=bad or "",
                       inputs=f"{checked} modes",
                       window=f"{skipped} skipped at cutoff")
    return rep


# -- weak associativity --------------------------------------------------------


@dataclass(frozen=True)
class WeakAssocResult:
    passed: bool
    p1: int | None
    compared: int
    witness: PoleOrderWitness
    window_note: str = ""
    first_difference: str = ""

    def __iter__(self):
        return iter((self.passed, self.witness))


def _assoc_maps(inst, flavor=None):
    """(outer_P, inner_P, inner_I, outer_I) vertex maps for the four shapes
    of the associativity identity."""
    if isinstance(inst, AlgebraInstance):
        return inst.Y, inst.Y, inst.Y, inst.Y
    alg = inst.algebra
    side = flavor or ("left" if inst.side == "bi" else inst.side)
    if side == LEFT:
        return inst.YL, inst.YL, alg.Y, inst.YL
    if side == RIGHT:
        return inst.YR, alg.Y, inst.YR, inst.YR
    if side == "compat":
        if inst.side != "bi":
            raise ValueError("compatibility checks need a bimodule")
        return inst.YL, inst.YR, inst.YL, inst.YR
    raise ValueError(f"unknown associativity flavor {side!r}")


def check_weak_associativity(inst, first: Vec, second: Vec, ket: Vec,
                             p1_max: int | None = None,
                             flavor: str | None = None) -> WeakAssocResult:
    """Search the smallest p1 with
    (x0+x2)^p1 Y(first, x0+x2) Y(second, x2) ket
      = (x0+x2)^p1 Y(Y(first, x0) second, x2) ket
    as an exact identity of vector coefficients on the certified window.

    Negative powers of x0+x2 expand with nonnegative powers of x2.  Raises
    WindowError (naming a sufficient cutoff) when the cutoff certifies no
    comparison window at all.
    """
    w1, w2, wk = first.weight(), second.weight(), ket.weight()
    if None in (w1, w2, wk):
        raise ValueError("weak associativity takes homogeneous arguments")
    outer_P, inner_P, inner_I, outer_I = _assoc_maps(inst, flavor)
    out_space = outer_P.out_space
    if p1_max is None:
        p1_max = max(0, math.floor(w1 + wk + out_space.cutoff))

    b_hi = math.floor(inner_P.out_space.cutoff - w2 - wk)
    b_lo = math.ceil(inner_P.out_space.min_weight - w2 - wk)
    c_hi = math.floor(inner_I.out_space.cutoff - w1 - w2)
    s_lo = math.ceil(out_space.min_weight - w1 - w2 - wk)
    s_hi = math.floor(out_space.cutoff - w1 - w2 - wk)

    if s_lo + 0 - b_hi > c_hi:
        needed = math.ceil(Fraction(s_lo + w1 + 2 * w2 + wk) / 2)
        raise WindowError(
            f"no certified comparison window at this cutoff; cutoff >= {needed} "
            f"would suffice", needed=needed)

    P_memo: dict = {}
    I_memo: dict = {}

    def P(a, b):
        key = (a, b)
        if key not in P_memo:
            innerv, ok = mode_apply(inner_P, second, -b - 1, ket)
            if not ok:
                P_memo[key] = None
            else:
                out, ok2 = mode_apply(outer_P, first, -a - 1, innerv)
                P_memo[key] = out if ok2 else None
        return P_memo[key]

    def I(a, b):
        key = (a, b)
        if key not in I_memo:
            innerv, ok = mode_apply(inner_I, first, -a - 1, second)
            if not ok:
                I_memo[key] = None
            else:
                out, ok2 = mode_apply(outer_I, innerv, -b - 1, ket)
                I_memo[key] = out if ok2 else None
        return I_memo[key]

    def P_shifted(c, d):
        total = Vec(out_space)
        for k in range(0, d - b_lo + 1):
            coeff = binomial(c + k, k)
            if coeff == 0:
                continue
            term = P(c + k, d - k)
            if term is None:
                return None
            total = total.add(term.scale(coeff))
        return total

    found = None
    last_diff = ""
    compared_at_found = 0
    for p1 in range(0, p1_max + 1):
        compared = 0
        diff = None
        for s in range(s_lo, s_hi + 1):
            c_lo = s + p1 - b_hi
            for c in range(c_lo, c_hi + 1):
                d = s + p1 - c
                lhs = Vec(out_space)
                rhs = Vec(out_space)
                ok = True
                for i in range(0, p1 + 1):
                    w = binomial(p1, i)
                    l_term = P_shifted(c - i, d - p1 + i)
                    r_term = I(c - i, d - p1 + i)
                    if l_term is None or r_term is None:
                        ok = False
                        break
                    lhs = lhs.add(l_term.scale(w))
                    rhs = rhs.add(r_term.scale(w))
                if not ok:
                    continue
                compared += 1
                if lhs != rhs and diff is None:
                    diff = f"x0^{c} x2^{d} at p1={p1}"
        if compared and diff is None:
            found = p1
            compared_at_found = compared
            break
        last_diff = diff or last_diff

    window_note = (f"x2-exponent <= {b_hi}, x0-exponent <= {c_hi}, "
                   f"output weights {s_lo + w1 + w2 + wk}..{s_hi + w1 + w2 + wk}")
    if found is None:
        witness = PoleOrderWitness({}, {}, p1_search_bound=p1_max,
                                   note="no p1 within the search bound")
        return WeakAssocResult(False, None, 0, witness, window_note,
                               last_diff or "no certified monomials compared")
    witness = PoleOrderWitness({"z1": found}, {}, p1_search_bound=p1_max,
                               note="minimal p1 on the certified window")
    return WeakAssocResult(True, found, compared_at_found, witness, window_note)


def audit_pole_order(inst, samples, p1_max: int | None = None,
                     flavor: str | None = None):
    """Windowed pole-order evidence over a sample set.

    For each (first, ket) pair the maximal minimal-p1 over the varied middle
    argument, and the minimal constant C with p1 <= wt(first) + wt(ket) + C
    across all samples.  Raises on an empty sample set (never a vacuous
    pass) and when the search bound is exceeded.
    """
    samples = list(samples)
    if not samples:
        raise ValueError("pole-order audit needs a nonempty sample set")
    rep = Report("pole-order-audit")
    pair_bounds: dict = {}
    c_const = None
    bound_used = 0
    for first, second, ket in samples:
        res = check_weak_associativity(inst, first, second, ket, p1_max, flavor)
        bound_used = max(bound_used, res.witness.p1_search_bound or 0)
        name = f"({first!r}, {second!r}, {ket!r})"
        if not res.passed:
            rep.fail("weak associativity", inputs=name,
                     witness=res.first_difference)
            raise WindowError(f"pole-order search bound exceeded at sample {name}")
        key = (repr(first), repr(ket))
        pair_bounds[key] = max(pair_bounds.get(key, 0), res.p1)
        excess = Fraction(res.p1) - first.weight() - ket.weight()
        c_const = excess if c_const is None else max(c_const, excess)
        rep.ok("weak associativity", inputs=name,
               window=f"p1={res.p1}, {res.compared} monomials")
    c_const = max(c_const, Fraction(0))
    witness = PoleOrderWitness(
        {"z1": max(pair_bounds.values())}, {}, p1_search_bound=bound_used,
        constant_C=c_const, pair_bounds=pair_bounds,
        note=(f"windowed evidence from {len(samples)} samples at cutoff "
              f"{inst.space.cutoff}; not a proof over the full structure"))
    rep.note(witness.note)
    rep.note(f"single constant C = {format_scalar(c_const)} bounds every "
             f"minimal p1 by wt(first) + wt(ket) + C")
    return witness, rep


# -- region consistency --------------------------------------------------------


def _match_expansion(expansion, series: CorrelationSeries):
    """Compare an ExpandedSeries against a correlator on the intersection of
    their certifications.  Returns (equal, checked, witness)."""
    checked = 0
    window = expansion.window
    for mono, c in sorted(expansion.poly.terms.items()):
        if series.is_certified(mono):
            checked += 1
            if series.coefficient(mono) != c:
                return False, checked, f"monomial {mono}"
    for mono, c in sorted(series.coefficients.items()):
        inside = all(window[v][0] <= e <= window[v][1]
                     for v, e in zip(expansion.poly.variables, mono))
        if inside:
            checked += 1
            if expansion.poly.coefficient(mono) != c:
                return False, checked, f"monomial {mono}"
    return True, checked, ""


def check_region_consistency(inst, bra, ops, ket, order: int = 6,
                             witness: PoleOrderWitness | None = None) -> Report:
    """Reconstruct the product correlator as a rational function, expand it
    in the product region and the iterate region, and match both expansions
    against the directly computed series on the shared windows."""
    rep = Report("region-consistency")
    prod = correlate(inst, bra, ops, ket, PRODUCT)
    names = ", ".join(v for _, v in ops)
    if prod.is_zero():
        it = correlate(inst, bra, ops, ket, ITERATE)
        if it.is_zero():
            rep.ok("zero correlator in all regions", inputs=names)
        else:
            rep.fail("zero correlator in all regions", inputs=names,
                     witness="iterate series is nonzero")
        return rep
    if witness is None:
        witness = estimate_pole_orders(inst, bra, ops, ket, series=prod)
    rec = reconstruct_rational(prod, witness)
    if not rec.certified:
        if "window" in rec.detail or "cutoff" in rec.detail:
            raise WindowError(f"reconstruction not certified: {rec.detail}")
        rep.fail("rational reconstruction", inputs=names, witness=rec.detail)
        return rep
    rep.ok("rational reconstruction", inputs=f"{names}: {rec.fn}",
           window=f"degree {rec.degree}")

    vs = prod.variables
    prod_exp = expand_rational(rec.fn, Region.product(vs), order)
    ok1, n1, w1 = _match_expansion(prod_exp, prod)
    rep.record("product region expansion matches the direct series",
               "pass" if ok1 and n1 else "fail",
               inputs=names, window=f"{n1} monomials, order {order}",
               witness=w1)

    it = correlate(inst, bra, ops, ket, ITERATE)
    it_exp = expand_rational(rec.fn, Region.iterate(vs, it.variables), order)
    ok2, n2, w2 = _match_expansion(it_exp, it)
    rep.record("iterate region expansion matches the direct series",
               "pass" if ok2 and n2 else "fail",
               inputs=names, window=f"{n2} monomials, order {order}",
               witness=w2)
    return rep


# -- contragredient obligations -------------------------------------------------


def check_contragredient(W: ModuleInstance, max_weight: int = 3,
                         p1_max: int | None = None, order: int = 5) -> Report:
    """Build the contragredient and run the full obligation list on it:
    structural, vacuum, derivative, grading, Mobius, weak associativity over
    the opposite algebra, region consistency, the transposition identity,
    and the double-contragredient round trip."""
    rep = Report("contragredient")
    cg = contragredient_module(W)
    for sub in (check_grading(cg), check_vacuum(cg), check_derivative(cg),
                check_mobius(cg)):
        rep.extend(sub)

    algebra_op = cg.algebra
    vspace = algebra_op.space
    triples = []
    for u1 in vspace.labels():
        for u2 in vspace.labels():
            for w in cg.space.labels():
                if (vspace.weight_of(u1) + vspace.weight_of(u2)
                        + cg.space.weight_of(w)) <= max_weight:
                    triples.append((u1, u2, w))
    bad = None
    worst_p1 = 0
    for u1, u2, w in triples:
        res = check_weak_associativity(
            cg, Vec(vspace, {u1: 1}), Vec(vspace, {u2: 1}),
            Vec(cg.space, {w: 1}), p1_max)
        if not res.passed:
            bad = bad or f"({u1}, {u2}, {w}): {res.first_difference}"
        else:
            worst_p1 = max(worst_p1, res.p1)
    rep.record("weak associativity over the opposite algebra",
               "fail" if bad else "pass", witness=bad or "",
               inputs=f"{len(triples)} triples with weight sum <= {max_weight}",
               window=f"max minimal p1 = {worst_p1}")

    # transposition: <Y'_n(u) w', w> = <w', (Y^o)_n(u) w> on stored entries
    bad = None
    checked = 0
    op_memo: dict = {}
    for (u_lbl, n, bl), out in sorted(cg.YL.entries.items()):
        u = Vec(W.algebra.space, {u_lbl: 1})
        key = (u_lbl, n)
        if key not in op_memo:
            op_memo[key] = opposite_vertex_components(W, u, n)[0]
        op = op_memo[key]
        beta = bl[: -1]
        for gamma in W.space.labels():
            img = op.action.get(gamma)
            if img is None:
                continue
            checked += 1
            if out.coefficient(gamma + "'") != img.coefficient(beta):
                bad = bad or f"({u_lbl}, {n}, {bl}) against {gamma}"
    rep.record("transposition pairing identity", "fail" if bad else "pass",
               witness=bad or "", inputs=f"{checked} pairings")

    # a few region-consistency obligations on the dual side
    count = 0
    for u1 in vspace.labels():
        for u2 in vspace.labels():
            h = vspace.weight_of(u1) + vspace.weight_of(u2)
            if h == 0 or h > max_weight:
                continue
            for bl in cg.space.labels():
                for kl in cg.space.labels():
                    if (cg.space.weight_of(bl) - cg.space.weight_of(kl)) != h - 2:
                        continue
                    bra = basis_dual(cg.space, bl)
                    ops = [(Vec(vspace, {u1: 1}), "z1"), (Vec(vspace, {u2: 1}), "z2")]
                    ketv = Vec(cg.space, {kl: 1})
                    sub = check_region_consistency(cg, bra, ops, ketv, order)
                    if not sub.passed:
                        rep.extend(sub)
                        return rep
                    count += 1
                    if count >= 4:
                        break
                if count >= 4:
                    break
            if count >= 4:
                break
        if count >= 4:
            break
    rep.ok("region consistency on dual correlators", inputs=f"{count} correlators")

    cg2 = contragredient_module(cg)
    bad = None
    stripped = {(u, n, w[: -2]): out for (u, n, w), out in cg2.YL.entries.items()}
    for key, out in stripped.items():
        want, exact = mode_apply(W.YL, Vec(W.algebra.space, {key[0]: 1}), key[1],
                                 Vec(W.space, {key[2]: 1}))
        unprimed = Vec(W.space, {l[: -2]: c for l, c in out.entries.items()})
        if exact and unprimed != want:
            bad = bad or f"{key}"
    for (u, n, w), out in W.YL.entries.items():
        if (u, n, w) not in stripped and not out.is_zero():
            bad = bad or f"missing {(u, n, w)}"
    rep.record("double contragredient restores the module",
               "fail" if bad else "pass", witness=bad or "",
               inputs=f"{len(stripped)} entries")
    return rep


# -- suite runner ----------------------------------------------------------------


def _assoc_suite(inst, max_weight: int, p1_max: int | None) -> Report:
    rep = Report("weak-associativity")
    alg = inst if isinstance(inst, AlgebraInstance) else inst.algebra
    flavors = []
    if isinstance(inst, AlgebraInstance):
        flavors = [(None, alg.space, alg.space, alg.space)]
    else:
        if inst.side in (LEFT, "bi"):
            flavors.append((LEFT, alg.space, alg.space, inst.space))
        if inst.side in (RIGHT, "bi"):
            flavors.append((RIGHT, inst.space, alg.space, alg.space))
        if inst.side == "bi":
            flavors.append(("compat", alg.space, inst.space, alg.space))
    for flavor, sp1, sp2, sp3 in flavors:
        triples = []
        for f in sp1.labels():
            for s in sp2.labels():
                for k in sp3.labels():
                    if (sp1.weight_of(f) + sp2.weight_of(s)
                            + sp3.weight_of(k)) <= max_weight:
                        triples.append((f, s, k))
        bad = None
        worst = 0
        compared = 0
        for f, s, k in triples:
            res = check_weak_associativity(
                inst, Vec(sp1, {f: 1}), Vec(sp2, {s: 1}), Vec(sp3, {k: 1}),
                p1_max, flavor)
            if not res.passed:
                bad = bad or f"({f}, {s}, {k}): {res.first_difference}"
            else:
                worst = max(worst, res.p1)
                compared += res.compared
        label = f" [{flavor}]" if flavor else ""
        rep.record(f"weak associativity{label}", "fail" if bad else "pass",
                   witness=bad or "",
                   inputs=f"{len(triples)} triples with weight sum <= {max_weight}",
                   window=f"max minimal p1 = {worst}, {compared} monomials")
    return rep


SUITES = ("structural", "vacuum", "D", "grading", "assoc", "mobius")


def run_suite(inst, suite: str, max_weight: int = 4,
              p1_max: int | None = None) -> Report:
    """Run one named checker suite, or all of them."""
    if suite == "structural":
        return validate_instance(inst)
    if suite == "vacuum":
        return check_vacuum(inst)
    if suite == "D":
        return check_derivative(inst)
    if suite == "grading":
        return check_grading(inst)
    if suite == "mobius":
        return check_mobius(inst)
    if suite == "assoc":
        return _assoc_suite(inst, max_weight, p1_max)
    if suite == "all":
        rep = Report("all")
        # grading subsumes the structural validation
        for name in ("grading", "vacuum", "D", "mobius", "assoc"):
            rep.extend(run_suite(inst, name, max_weight, p1_max))
        return rep
    raise ValueError(f"unknown suite {suite!r}")
