"""Weight-graded finite-basis linear algebra over exact rationals.

Spaces carry finitely many weight components up to a cutoff.  Operator data
beyond the cutoff is *absent*, never silently zero: applying an operator
reports an exactness flag that goes false as soon as absent data is touched,
so a truncation artifact can never masquerade as a theorem.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

Weight = Fraction


class GradedSpace:
    """Ordered basis labels per weight, bounded below, truncated at a cutoff.

    ``complete=True`` asserts the true object has no components beyond those
    listed: weights above the cutoff read as exactly zero rather than absent.
    """

    __slots__ = ("components", "cutoff", "label_weights", "complete")

    def __init__(self, components: Mapping, cutoff, complete: bool = False):
        cut = Fraction(cutoff)
        comp: dict[Fraction, tuple[str, ...]] = {}
        label_weights: dict[str, Fraction] = {}
        for w, labels in components.items():
            wt = Fraction(w)
            labels = tuple(labels)
            if not labels:
                continue
            if wt > cut:
                raise ValueError(f"component weight {wt} exceeds cutoff {cut}")
            comp[wt] = labels
            for lbl in labels:
                if lbl in label_weights:
                    raise ValueError(f"duplicate basis label {lbl!r}")
                label_weights[lbl] = wt
        object.__setattr__(self, "components", dict(sorted(comp.items())))
        object.__setattr__(self, "cutoff", cut)
        object.__setattr__(self, "label_weights", label_weights)
        object.__setattr__(self, "complete", bool(complete))

    def __setattr__(self, name, value):
        raise AttributeError("GradedSpace is immutable")

    @property
    def min_weight(self) -> Fraction:
        return min(self.components) if self.components else Fraction(0)

    def labels(self) -> tuple[str, ...]:
        return tuple(l for labels in self.components.values() for l in labels)

    def weight_of(self, label: str) -> Fraction:
        try:
            return self.label_weights[label]
        except KeyError:
            raise KeyError(f"label {label!r} not in space") from None

    def labels_at(self, weight) -> tuple[str, ...]:
        return self.components.get(Fraction(weight), ())

    def dim(self, weight) -> int:
        return len(self.labels_at(weight))

    def has_weight(self, weight) -> bool:
        return Fraction(weight) in self.components

    def __eq__(self, other):
        if not isinstance(other, GradedSpace):
            return NotImplemented
        return (self.components == other.components and self.cutoff == other.cutoff
                and self.complete == other.complete)

    def __repr__(self):
        dims = {str(w): len(ls) for w, ls in self.components.items()}
        return f"GradedSpace(dims={dims}, cutoff={self.cutoff})"


class _Entries:
    """Shared behaviour of Vec and DualVec: sparse label -> scalar maps."""

    __slots__ = ("space", "entries")

    def __init__(self, space: GradedSpace, entries: Mapping[str, object] | None = None):
        clean: dict[str, Fraction] = {}
        if entries:
            for lbl, c in entries.items():
                c = Fraction(c)
                if c == 0:
                    continue
                space.weight_of(lbl)
                clean[lbl] = c
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "entries", clean)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def is_zero(self) -> bool:
        return not self.entries

    def coefficient(self, label: str) -> Fraction:
        return self.entries.get(label, Fraction(0))

    def add(self, other):
        if other.space is not self.space and other.space != self.space:
            raise ValueError("space mismatch")
        entries = dict(self.entries)
        for lbl, c in other.entries.items():
            acc = entries.get(lbl, Fraction(0)) + c
            if acc == 0:
                entries.pop(lbl, None)
            else:
                entries[lbl] = acc
        return type(self)(self.space, entries)

    def scale(self, c):
        c = Fraction(c)
        return type(self)(self.space, {l: c * v for l, v in self.entries.items()})

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.add(other)

    def __sub__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.add(other.scale(-1))

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.space == other.space and self.entries == other.entries

    def weight_components(self):
        """Split into homogeneous parts, keyed and sorted by weight."""
        parts: dict[Fraction, dict[str, Fraction]] = {}
        for lbl, c in self.entries.items():
            parts.setdefault(self.space.weight_of(lbl), {})[lbl] = c
        return {w: type(self)(self.space, d) for w, d in sorted(parts.items())}

    def weight(self):
        """The weight if homogeneous (zero counts as any weight), else None."""
        ws = {self.space.weight_of(lbl) for lbl in self.entries}
        if not ws:
            return None
        return ws.pop() if len(ws) == 1 else None

    def __repr__(self):
        from .scalars import format_scalar
        if not self.entries:
            return "0"
        bits = []
        for lbl in sorted(self.entries):
            c = self.entries[lbl]
            bits.append(lbl if c == 1 else f"{format_scalar(c)}*{lbl}")
        return " + ".join(bits)


class Vec(_Entries):
    """An element of a graded space."""


class DualVec(_Entries):
    """An element of the graded dual, expressed in the dual basis."""


def pair(dual: DualVec, vec: Vec) -> Fraction:
    """The bilinear pairing <dual, vec> over the shared basis."""
    if dual.space != vec.space:
        raise ValueError("pairing requires a shared space")
    small, big = (dual.entries, vec.entries)
    if len(big) < len(small):
        small, big = big, small
    return sum((small[l] * big[l] for l in small if l in big), Fraction(0))


class GradedOp:
    """A homogeneous operator given by its action on basis labels.

    Labels missing from ``action`` are absent (unknown beyond the cutoff),
    which is different from an explicitly stored zero vector.
    """

    __slots__ = ("space", "weight_shift", "action")

    def __init__(self, space: GradedSpace, weight_shift, action: Mapping[str, Vec]):
        shift = Fraction(weight_shift)
        act = {}
        for lbl, out in action.items():
            w = space.weight_of(lbl)
            got = out.weight()
            if got is not None and got != w + shift:
                raise ValueError(
                    f"action on {lbl!r} lands in weight {got}, expected {w + shift}")
            act[lbl] = out
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "weight_shift", shift)
        object.__setattr__(self, "action", act)

    def __setattr__(self, name, value):
        raise AttributeError("GradedOp is immutable")

    @classmethod
    def zero(cls, space: GradedSpace, weight_shift=0) -> "GradedOp":
        return cls(space, weight_shift, {l: Vec(space) for l in space.labels()})

    def knows(self, label: str) -> bool:
        return label in self.action

    def apply(self, v: Vec) -> tuple[Vec, bool]:
        """Linear extension to a vector; exact=False if absent data was needed."""
        out = Vec(v.space)
        exact = True
        for lbl, c in v.entries.items():
            hit = self.action.get(lbl)
            if hit is None:
                exact = False
                continue
            out = out.add(hit.scale(c))
        return out, exact

    def __eq__(self, other):
        if not isinstance(other, GradedOp):
            return NotImplemented
        return (self.space == other.space and self.weight_shift == other.weight_shift
                and self.action == other.action)


def apply_op(op: GradedOp, v: Vec) -> tuple[Vec, bool]:
    return op.apply(v)


def weight_diagonal_op(space: GradedSpace) -> GradedOp:
    """The grading operator: each basis label scaled by its weight."""
    return GradedOp(space, 0, {
        l: Vec(space, {l: space.weight_of(l)}) for l in space.labels()})


def exp_op_series(op: GradedOp, v: Vec, var: str):
    """exp(x*T) applied to v: sum_k (1/k!) T^k v x^k.

    Returns (coefficients {k: Vec}, exact).  For negative weight shift the
    series terminates by the lower bound and is exact whenever the stored
    action covers it; for positive shift it may hit the cutoff, flagged
    exact=False.  A zero-shift operator must be nilpotent.
    """
    coeffs: dict[int, Vec] = {}
    current = v
    exact = True
    k = 0
    max_dim = max((len(ls) for ls in op.space.components.values()), default=0)
    while not current.is_zero():
        coeffs[k] = current
        nxt, ok = op.apply(current)
        if not ok:
            exact = False
            if op.weight_shift > 0:
                break
        current = nxt.scale(Fraction(1, k + 1))
        k += 1
        if op.weight_shift == 0 and k > max_dim + 1:
            raise ValueError("zero-shift operator is not nilpotent; series does not terminate")
    return coeffs, exact


def dual_space(space: GradedSpace, suffix: str = "'") -> GradedSpace:
    """The graded dual: same weights and dimensions, primed labels."""
    comps = {w: tuple(l + suffix for l in labels)
             for w, labels in space.components.items()}
    return GradedSpace(comps, space.cutoff, complete=space.complete)


def transpose_op(op: GradedOp, dual: GradedSpace, suffix: str = "'") -> GradedOp:
    """The adjoint on the graded dual: <T' a', b> = <a', T b>.

    Weight shift flips sign.  A dual row is absent when some source hitting
    it is unstored, or when its own image weight overflows the cutoff of an
    incomplete space (the true dual has components up there)."""
    space = op.space
    action: dict[str, dict[str, Fraction]] = {l + suffix: {} for l in space.labels()}
    complete = {l + suffix for l in space.labels()}
    for src, out in op.action.items():
        for dst, c in out.entries.items():
            action[dst + suffix][src + suffix] = c
    for w, labels in space.components.items():
        img_weight = w - op.weight_shift
        if img_weight > space.cutoff and not space.complete:
            for dst in labels:
                complete.discard(dst + suffix)
            continue
        for src in space.labels_at(img_weight):
            if not op.knows(src):
                for dst in labels:
                    complete.discard(dst + suffix)
    return GradedOp(dual, -op.weight_shift,
                    {lbl: Vec(dual, row) for lbl, row in action.items()
                     if lbl in complete})


def as_dual(vec_in_dual_space: Vec, base: GradedSpace, suffix: str = "'") -> DualVec:
    """View a vector of the primed space as a functional on the base space."""
    entries = {}
    for lbl, c in vec_in_dual_space.entries.items():
        if not lbl.endswith(suffix):
            raise ValueError(f"label {lbl!r} does not carry the dual suffix")
        entries[lbl[: -len(suffix)]] = c
    return DualVec(base, entries)


def basis_vec(space: GradedSpace, label: str) -> Vec:
    return Vec(space, {label: 1})


def basis_dual(space: GradedSpace, label: str) -> DualVec:
    return DualVec(space, {label: 1})


def op_power_apply(op: GradedOp, v: Vec, k: int) -> tuple[Vec, bool]:
    """T^k v with exactness tracking."""
    out, exact = v, True
    for _ in range(k):
        out, ok = op.apply(out)
        exact = exact and ok
        if out.is_zero():
            break
    return out, exact
