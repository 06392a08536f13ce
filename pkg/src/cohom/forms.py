r"""Differential forms with Laurent-polynomial coefficients.

A form is a rational combination of monomial terms z^a dz_I on n
variables; the first k variables of a TorusSpec may be inverted (poles
allowed), the rest are polynomial.  The multidegree a + sum_{i in I} e_i
is preserved by the exterior derivative, so the truncated de Rham
complex splits into finite pieces indexed by multidegree; within one
piece the differential is the Koszul map sum m_i dz_i /\ . , which is
exact whenever m != 0 and has zero differential at m = 0, where the
basis consists of the logarithmic generators

    w_I = dz_{i1}/z_{i1} /\ ... /\ dz_{iq}/z_{iq},  I subset {1..k}.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .complexes import CochainComplex
from .linalg import (
    CohomError,
    LabeledSpace,
    LinearMap,
    SpanBuilder,
    rank_of_rows,
    rat_from_str,
    rat_to_str,
)

ZERO = Fraction(0)
ONE = Fraction(1)


class VariableCountMismatch(CohomError):
    pass


class NotClosed(CohomError):
    pass


class PoleOnNonInvertedAxis(CohomError):
    pass


class WindowExhausted(CohomError):
    pass


def _sign_insert(i: int, dI: tuple) -> int:
    """Sign of sorting dz_i into dz_I (i not in I)."""
    return -1 if sum(1 for j in dI if j < i) % 2 else 1


def _sign_remove(i: int, dI: tuple) -> int:
    """Sign of extracting dz_i from the front of dz_I (i in I)."""
    return -1 if dI.index(i) % 2 else 1


@dataclass(frozen=True)
class AlgebraicForm:
    """Homogeneous q-form; terms maps (exponents, dz index set) to coefficients."""

    n: int
    degree: int
    terms: tuple  # sorted tuple of (exps tuple, dI tuple, Fraction), no zeros

    def __post_init__(self):
        for exps, dI, c in self.terms:
            if len(exps) != self.n or len(dI) != self.degree:
                raise ValueError("malformed term")
            if any(dI[i] >= dI[i + 1] for i in range(len(dI) - 1)):
                raise ValueError("dz indices must be strictly increasing")
            if not 0 < min(dI, default=1) or max(dI, default=1) > self.n:
                raise ValueError("dz index out of range")
            if c == 0:
                raise ValueError("zero coefficient stored")

    @staticmethod
    def build(n: int, degree: int, term_map: dict) -> "AlgebraicForm":
        items = tuple(sorted((exps, dI, c) for (exps, dI), c in term_map.items() if c != 0))
        return AlgebraicForm(n, degree, items)

    @staticmethod
    def zero(n: int, degree: int) -> "AlgebraicForm":
        return AlgebraicForm(n, degree, ())

    @staticmethod
    def monomial(n: int, coeff, exps, dI=()) -> "AlgebraicForm":
        c = Fraction(coeff)
        if c == 0:
            return AlgebraicForm.zero(n, len(dI))
        return AlgebraicForm(n, len(dI), ((tuple(exps), tuple(dI), c),))

    def is_zero(self) -> bool:
        return not self.terms

    def term_dict(self) -> dict:
        return {(exps, dI): c for exps, dI, c in self.terms}

    def __add__(self, other: "AlgebraicForm") -> "AlgebraicForm":
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.n != other.n:
            raise VariableCountMismatch("cannot add forms on different variable counts")
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degrees")
        acc = self.term_dict()
        for exps, dI, c in other.terms:
            acc[(exps, dI)] = acc.get((exps, dI), ZERO) + c
        return AlgebraicForm.build(self.n, self.degree, acc)

    def __sub__(self, other: "AlgebraicForm") -> "AlgebraicForm":
        return self + other.scale(-1)

    def scale(self, c) -> "AlgebraicForm":
        c = Fraction(c)
        if c == 0:
            return AlgebraicForm.zero(self.n, self.degree)
        return AlgebraicForm(self.n, self.degree,
                             tuple((e, d, x * c) for e, d, x in self.terms))

    def multidegrees(self) -> set:
        return {term_multidegree(exps, dI) for exps, dI, _ in self.terms}


def term_multidegree(exps: tuple, dI: tuple) -> tuple:
    return tuple(e + (1 if i + 1 in dI else 0) for i, e in enumerate(exps))


def exterior_derivative(w: AlgebraicForm) -> AlgebraicForm:
    """d(z^a dz_I) = sum_i a_i z^{a - e_i} dz_i /\\ dz_I, normalized."""
    acc: dict = {}
    for exps, dI, c in w.terms:
        for i in range(1, w.n + 1):
            e = exps[i - 1]
            if e == 0 or i in dI:
                continue
            new_exps = tuple(x - 1 if j == i - 1 else x for j, x in enumerate(exps))
            new_dI = tuple(sorted(dI + (i,)))
            coeff = c * e * _sign_insert(i, dI)
            key = (new_exps, new_dI)
            acc[key] = acc.get(key, ZERO) + coeff
    return AlgebraicForm.build(w.n, w.degree + 1, acc)


def wedge(a: AlgebraicForm, b: AlgebraicForm) -> AlgebraicForm:
    if a.n != b.n:
        raise VariableCountMismatch("wedge of forms on different variable counts")
    acc: dict = {}
    for e1, I, c1 in a.terms:
        set_I = set(I)
        for e2, J, c2 in b.terms:
            if set_I & set(J):
                continue
            inv = sum(1 for i in I for j in J if i > j)
            sign = -1 if inv % 2 else 1
            key = (tuple(x + y for x, y in zip(e1, e2)), tuple(sorted(I + J)))
            acc[key] = acc.get(key, ZERO) + c1 * c2 * sign
    return AlgebraicForm.build(a.n, a.degree + b.degree, acc)


def log_form(n: int, I) -> AlgebraicForm:
    """w_I = product of dz_i / z_i over i in I."""
    I = tuple(sorted(I))
    exps = tuple(-1 if (i + 1) in I else 0 for i in range(n))
    return AlgebraicForm.monomial(n, 1, exps, I)


@dataclass(frozen=True)
class TorusSpec:
    """Variables 1..k inverted (divisor z_1...z_k = 0), exponent window W."""

    n: int
    k: int
    window: int

    def __post_init__(self):
        if not 0 <= self.k <= self.n:
            raise ValueError("need 0 <= k <= n")
        if self.window < 1:
            raise ValueError("window must be at least 1")

    def inverted(self, i: int) -> bool:
        """1-based axis index."""
        return 1 <= i <= self.k


@dataclass(frozen=True)
class LogClassVector:
    """Coefficients on the classes [w_I], |I| = q, lexicographic subsets."""

    k: int
    q: int
    coeffs: tuple  # Fraction per subset in lex order

    def __post_init__(self):
        if len(self.coeffs) != comb(self.k, self.q) and not (self.q > self.k and not self.coeffs):
            raise ValueError("wrong number of coefficients")

    @staticmethod
    def subsets(k: int, q: int) -> list[tuple]:
        return list(itertools.combinations(range(1, k + 1), q))

    @staticmethod
    def from_dict(k: int, q: int, d: dict) -> "LogClassVector":
        return LogClassVector(k, q, tuple(Fraction(d.get(I, ZERO))
                                          for I in LogClassVector.subsets(k, q)))

    def coefficient(self, I) -> Fraction:
        I = tuple(sorted(I))
        subsets = LogClassVector.subsets(self.k, self.q)
        return self.coeffs[subsets.index(I)]

    def as_dict(self) -> dict:
        return {I: c for I, c in zip(LogClassVector.subsets(self.k, self.q), self.coeffs)
                if c != 0}

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def to_form(self, n: int) -> AlgebraicForm:
        out = AlgebraicForm.zero(n, self.q)
        for I, c in self.as_dict().items():
            out = out + log_form(n, I).scale(c)
        return out


# ---------------------------------------------------------------------------
# Multidegree decomposition


def check_poles(w: AlgebraicForm, spec: TorusSpec) -> None:
    if w.n != spec.n:
        raise VariableCountMismatch("form and spec disagree on variable count")
    for exps, dI, _ in w.terms:
        for i in range(spec.k + 1, spec.n + 1):
            if exps[i - 1] < 0:
                raise PoleOnNonInvertedAxis(
                    f"negative exponent on non-inverted variable z{i}")


def valid_subsets(spec: TorusSpec, m: tuple, q: int) -> list[tuple]:
    """Index sets I with |I| = q for which z^{m - chi_I} dz_I is a legal form."""
    allowed = []
    for i in range(1, spec.n + 1):
        mi = m[i - 1]
        if not spec.inverted(i) and mi < 0:
            return []  # no legal forms at this multidegree at all
        allowed.append(i if (spec.inverted(i) or mi >= 1) else None)
    pool = [i for i in allowed if i is not None]
    return list(itertools.combinations(pool, q))


def component_form(m: tuple, I: tuple, n: int, coeff=ONE) -> AlgebraicForm:
    exps = tuple(mi - (1 if (i + 1) in I else 0) for i, mi in enumerate(m))
    return AlgebraicForm.monomial(n, coeff, exps, I)


def multidegree_complex(spec: TorusSpec, m: tuple) -> CochainComplex:
    """The finite complex of forms of one fixed multidegree.

    Degree-q basis: valid index sets I (lex order); differential is the
    Koszul map determined by m.
    """
    bases = [valid_subsets(spec, m, q) for q in range(spec.n + 1)]
    spaces = tuple(LabeledSpace(tuple((m, I) for I in bases[q]))
                   for q in range(spec.n + 1))
    diffs = []
    for q in range(spec.n):
        src, dst = bases[q], bases[q + 1]
        dst_index = {I: i for i, I in enumerate(dst)}
        rows = [[ZERO] * len(src) for _ in dst]
        for j, I in enumerate(src):
            for i in range(1, spec.n + 1):
                if i in I:
                    continue
                mi = m[i - 1]
                if mi == 0:
                    continue
                J = tuple(sorted(I + (i,)))
                if J not in dst_index:
                    continue
                rows[dst_index[J]][j] += mi * _sign_insert(i, I)
        diffs.append(LinearMap(spaces[q], spaces[q + 1],
                               tuple(tuple(Fraction(x) for x in r) for r in rows)))
    return CochainComplex(0, spec.n, spaces, tuple(diffs))


def multidegree_window(spec: TorusSpec) -> list[tuple]:
    """Multidegrees whose component complex is untruncated by the window.

    Inverted axes range over [-W+1, W], polynomial axes over [0, W]; at
    these multidegrees both index-set choices per admissible axis carry
    in-window exponents, so each component equals its untruncated
    counterpart (boundary components are omitted rather than cut).
    """
    W = spec.window
    ranges = []
    for i in range(1, spec.n + 1):
        if spec.inverted(i):
            ranges.append(range(-W + 1, W + 1))
        else:
            ranges.append(range(0, W + 1))
    return [tuple(m) for m in itertools.product(*ranges)]


def multidegree_split(spec: TorusSpec) -> dict:
    """Component complexes of the truncated de Rham complex, keyed by multidegree."""
    return {m: multidegree_complex(spec, m) for m in multidegree_window(spec)}


def split_by_multidegree(w: AlgebraicForm) -> dict:
    parts: dict = {}
    for exps, dI, c in w.terms:
        m = term_multidegree(exps, dI)
        parts.setdefault(m, {})[(exps, dI)] = c
    return {m: AlgebraicForm.build(w.n, w.degree, t) for m, t in sorted(parts.items())}


def component_coords(spec: TorusSpec, m: tuple, w: AlgebraicForm) -> tuple:
    subsets = valid_subsets(spec, m, w.degree)
    index = {I: i for i, I in enumerate(subsets)}
    coords = [ZERO] * len(subsets)
    for exps, dI, c in w.terms:
        if term_multidegree(exps, dI) != m:
            raise ValueError("form is not concentrated in the given multidegree")
        coords[index[dI]] = c
    return tuple(coords)


def _complex_cohomology_dims(cx: CochainComplex) -> list[int]:
    dims = []
    for q in cx.degrees():
        d_q = rank_of_rows(cx.diff(q).matrix) if cx.space(q + 1).dim else 0
        d_prev = rank_of_rows(cx.diff(q - 1).matrix) if q > cx.lo and cx.space(q).dim else 0
        dims.append(cx.space(q).dim - d_q - d_prev)
    return dims


@dataclass(frozen=True)
class DerhamReport:
    k: int
    dims: tuple           # per form degree q = 0..n
    generators: tuple     # per q: tuple of index sets I with |I| = q

    def log_basis(self, q: int) -> list[LogClassVector]:
        return [LogClassVector.from_dict(self.k, q, {I: ONE})
                for I in self.generators[q]]


def derham_cohomology(spec: TorusSpec) -> DerhamReport:
    """Cohomology of the truncated de Rham complex of the torus model.

    Every nonzero multidegree component must be exact (verified by rank
    counts); the m = 0 component carries the logarithmic classes w_I.
    """
    dims = [0] * (spec.n + 1)
    for m, cx in multidegree_split(spec).items():
        part = _complex_cohomology_dims(cx)
        if any(m):
            if any(part):
                raise WindowExhausted(
                    f"nonzero cohomology at multidegree {m}; enlarge the window")
        else:
            if not all(d.is_zero() for d in cx.diffs):
                raise AssertionError("multidegree-zero differential must vanish")
            for q in range(spec.n + 1):
                dims[q] += part[q]
    generators = tuple(tuple(itertools.combinations(range(1, spec.k + 1), q))
                       for q in range(spec.n + 1))
    expected = tuple(len(g) for g in generators)
    if tuple(dims) != expected:
        raise WindowExhausted(
            f"multidegree-zero dims {tuple(dims)} differ from log-class count {expected}")
    return DerhamReport(spec.k, tuple(dims), generators)


def truncated_de_rham_complex(spec: TorusSpec) -> CochainComplex:
    """Direct sum of all window multidegree components as one complex.

    Degree-q labels are (m, I) pairs, so vectors translate back to forms.
    """
    window = multidegree_window(spec)
    components = [multidegree_complex(spec, m) for m in window]
    spaces = []
    for q in range(spec.n + 1):
        labels = tuple(lab for cx in components for lab in cx.space(q).labels)
        spaces.append(LabeledSpace(labels))
    diffs = []
    for q in range(spec.n):
        rows = []
        offsets_src = []
        total_src = sum(cx.space(q).dim for cx in components)
        pos = 0
        for cx in components:
            offsets_src.append(pos)
            pos += cx.space(q).dim
        for ci, cx in enumerate(components):
            for row in cx.diff(q).matrix:
                full = [ZERO] * total_src
                off = offsets_src[ci]
                for j, x in enumerate(row):
                    full[off + j] = x
                rows.append(tuple(full))
        diffs.append(LinearMap(spaces[q], spaces[q + 1], tuple(rows)))
    return CochainComplex(0, spec.n, tuple(spaces), tuple(diffs))


# ---------------------------------------------------------------------------
# Pole reduction along one axis (the induction step of the log-class result)


def _split_dz_axis(w: AlgebraicForm, axis: int):
    """Write w = dz_axis /\\ alpha + beta with alpha, beta free of dz_axis."""
    alpha: dict = {}
    beta: dict = {}
    for exps, dI, c in w.terms:
        if axis in dI:
            rest = tuple(i for i in dI if i != axis)
            alpha[(exps, rest)] = c * _sign_remove(axis, dI)
        else:
            beta[(exps, dI)] = c
    return (AlgebraicForm.build(w.n, max(w.degree - 1, 0), alpha),
            AlgebraicForm.build(w.n, w.degree, beta))


def _laurent_coefficient(w: AlgebraicForm, axis: int, order: int) -> AlgebraicForm:
    """Coefficient of z_axis^{-order}: terms with that exponent, exponent zeroed."""
    acc: dict = {}
    for exps, dI, c in w.terms:
        if exps[axis - 1] == -order:
            new = tuple(0 if j == axis - 1 else x for j, x in enumerate(exps))
            acc[(new, dI)] = c
    return AlgebraicForm.build(w.n, w.degree, acc)


def _holomorphic_part(w: AlgebraicForm, axis: int) -> AlgebraicForm:
    acc: dict = {}
    for exps, dI, c in w.terms:
        if exps[axis - 1] >= 0:
            acc[(exps, dI)] = c
    return AlgebraicForm.build(w.n, w.degree, acc)


def _shift_axis(w: AlgebraicForm, axis: int, by: int) -> AlgebraicForm:
    acc: dict = {}
    for exps, dI, c in w.terms:
        new = tuple(x + by if j == axis - 1 else x for j, x in enumerate(exps))
        acc[(new, dI)] = c
    return AlgebraicForm.build(w.n, w.degree, acc)


def pole_reduce(w: AlgebraicForm, spec: TorusSpec, axis: int):
    """Split a closed form as w = w0 + (dz_axis / z_axis) /\\ a1 + d(theta).

    w0 and a1 are closed with no pole along the axis; a1 involves neither
    z_axis nor dz_axis; theta collects the higher-order polar part.  The
    exact identity and the closedness bookkeeping are asserted.
    """
    if not spec.inverted(axis):
        raise PoleOnNonInvertedAxis(f"axis {axis} is not inverted")
    check_poles(w, spec)
    if not exterior_derivative(w).is_zero():
        raise NotClosed("pole reduction needs a closed form")

    alpha, beta = _split_dz_axis(w, axis)
    max_order = max((-exps[axis - 1] for exps, _, _ in w.terms), default=0)
    r = max(max_order, 0)

    alpha0 = _holomorphic_part(alpha, axis)
    beta0 = _holomorphic_part(beta, axis)
    alphas = {j: _laurent_coefficient(alpha, axis, j) for j in range(1, r + 1)}
    betas = {j: _laurent_coefficient(beta, axis, j) for j in range(1, r + 1)}

    dz = AlgebraicForm.monomial(w.n, 1, (0,) * w.n, (axis,))
    w0 = wedge(dz, alpha0) + beta0
    a1 = alphas.get(1, AlgebraicForm.zero(w.n, max(w.degree - 1, 0)))

    theta = AlgebraicForm.zero(w.n, max(w.degree - 1, 0))
    for j in range(2, r + 1):
        aj = alphas[j]
        if aj.is_zero():
            continue
        theta = theta - _shift_axis(aj, axis, -(j - 1)).scale(Fraction(1, j - 1))

    # the closedness relations forced by d w = 0
    if not exterior_derivative(a1).is_zero():
        raise AssertionError("a1 is not closed")
    if not exterior_derivative(w0).is_zero():
        raise AssertionError("w0 is not closed")
    for j in range(2, r + 2):
        aj = alphas.get(j, AlgebraicForm.zero(w.n, max(w.degree - 1, 0)))
        bprev = betas.get(j - 1, AlgebraicForm.zero(w.n, w.degree))
        if not (exterior_derivative(aj) + bprev.scale(j - 1)).is_zero():
            raise AssertionError(f"polar relation fails at order {j}")

    log_axis = log_form(w.n, (axis,))
    residue = w - w0 - wedge(log_axis, a1) - exterior_derivative(theta)
    if not residue.is_zero():
        raise AssertionError("pole reduction identity fails")
    return w0, a1, theta


# ---------------------------------------------------------------------------
# Logarithmic representatives via the multidegree homotopy


def _contract(w: AlgebraicForm, axis: int) -> AlgebraicForm:
    """Interior-product style contraction in index-set coordinates.

    Removes dz_axis with its permutation sign and raises the axis
    exponent by one (z^{m - chi_I} dz_I -> z^{m - chi_{I-axis}} dz_{I-axis}).
    """
    acc: dict = {}
    for exps, dI, c in w.terms:
        if axis not in dI:
            continue
        rest = tuple(i for i in dI if i != axis)
        new = tuple(x + 1 if j == axis - 1 else x for j, x in enumerate(exps))
        acc[(new, rest)] = c * _sign_remove(axis, dI)
    return AlgebraicForm.build(w.n, max(w.degree - 1, 0), acc)


def log_representative(w: AlgebraicForm, spec: TorusSpec):
    """Coefficients c_I with w - sum c_I w_I = d(xi), plus the witness xi.

    Works one multidegree at a time: the m = 0 component is literally a
    combination of the w_I; every m != 0 component is killed by the
    Koszul homotopy along the first axis with m_axis != 0.
    """
    check_poles(w, spec)
    if not exterior_derivative(w).is_zero():
        raise NotClosed("log representatives are defined for closed forms")
    q = w.degree
    coeffs: dict = {}
    xi = AlgebraicForm.zero(w.n, max(q - 1, 0))
    for m, part in split_by_multidegree(w).items():
        if not any(m):
            for exps, dI, c in part.terms:
                coeffs[dI] = c
            continue
        axis = next(i for i in range(1, spec.n + 1) if m[i - 1] != 0)
        xi_m = _contract(part, axis).scale(Fraction(1, m[axis - 1]))
        if exterior_derivative(xi_m) != part:
            raise WindowExhausted(
                f"cannot certify exactness of the multidegree {m} component")
        xi = xi + xi_m
    vec = LogClassVector.from_dict(spec.k, q, coeffs) if q <= spec.k \
        else LogClassVector(spec.k, q, ())
    residue = w - vec.to_form(w.n) - exterior_derivative(xi)
    if not residue.is_zero():
        raise AssertionError("log representative identity fails")
    return vec, xi


def cup_table(spec: TorusSpec) -> dict:
    """Products [w_I].[w_J] expressed in the log basis, for I, J subsets of 1..k."""
    table = {}
    for qa in range(spec.k + 1):
        for qb in range(spec.k + 1):
            for I in itertools.combinations(range(1, spec.k + 1), qa):
                for J in itertools.combinations(range(1, spec.k + 1), qb):
                    prod = wedge(log_form(spec.n, I), log_form(spec.n, J))
                    if prod.is_zero():
                        table[(I, J)] = LogClassVector.from_dict(spec.k, qa + qb, {}) \
                            if qa + qb <= spec.k else LogClassVector(spec.k, qa + qb, ())
                    else:
                        table[(I, J)], _ = log_representative(prod, spec)
    return table


# ---------------------------------------------------------------------------
# Pole-order filtration (direct-limit model)


@dataclass(frozen=True)
class PoleFiltrationReport:
    levels: tuple          # per level 0..n_max: dims tuple per form degree
    stabilization: int


def pole_filtration_dims(spec: TorusSpec, n_max: int) -> PoleFiltrationReport:
    """Cohomology of the pole-order levels of the truncated complex.

    Level t is spanned by the forms whose inverted exponents are >= -t,
    completed with their d-images so each level is a subcomplex.  Level 0
    is the polynomial complex; the levels stabilize once the log classes
    are inside (their exponents are -1, so at level 1 for k >= 1).
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    per_level = [[0] * (spec.n + 1) for _ in range(n_max + 1)]
    for m in multidegree_window(spec):
        cx = multidegree_complex(spec, m)
        bases = [list(cx.space(q).labels) for q in range(spec.n + 1)]
        for level in range(n_max + 1):
            # coordinates of the level-t subspace inside each component degree
            stage_vectors: list[list[tuple]] = []
            for q in range(spec.n + 1):
                sel = []
                for idx, (_, I) in enumerate(bases[q]):
                    exps = tuple(mi - (1 if (i + 1) in I else 0) for i, mi in enumerate(m))
                    if all(exps[i] >= -level for i in range(spec.k)):
                        v = [ZERO] * len(bases[q])
                        v[idx] = ONE
                        sel.append(tuple(v))
                stage_vectors.append(sel)
            # complete with d-images so the stages form a subcomplex
            stages: list[list[tuple]] = []
            for q in range(spec.n + 1):
                builder = SpanBuilder(len(bases[q]))
                stage_basis = []
                for v in stage_vectors[q]:
                    if builder.add(v):
                        stage_basis.append(v)
                if q > 0:
                    d = cx.diff(q - 1)
                    for v in stages[q - 1]:
                        img = d.apply(v)
                        if builder.add(img):
                            stage_basis.append(img)
                stages.append(stage_basis)
            # cohomology dims of the little subcomplex by rank counts
            ranks = []
            for q in range(spec.n + 1):
                d = cx.diff(q)
                imgs = [d.apply(v) for v in stages[q]]
                ranks.append(rank_of_rows(imgs) if imgs and cx.space(q + 1).dim else 0)
            for q in range(spec.n + 1):
                h = len(stages[q]) - ranks[q] - (ranks[q - 1] if q > 0 else 0)
                per_level[level][q] += h
    levels = tuple(tuple(l) for l in per_level)
    stabilization = n_max
    for t in range(n_max, -1, -1):
        if levels[t] == levels[n_max]:
            stabilization = t
        else:
            break
    return PoleFiltrationReport(levels, stabilization)


# ---------------------------------------------------------------------------
# Text and JSON syntax


_COEFF_RE = re.compile(r"^[+-]?\d+(/\d+)?$")
_VAR_RE = re.compile(r"^z(\d+)(\^(-?\d+))?$")
_DZ_RE = re.compile(r"^dz(\d+)(\^dz\d+)*$")


def parse_form(text: str, n: int) -> AlgebraicForm:
    """Parse sums of terms like "3/2 * z1^-2 z2^1 dz1^dz3"."""
    text = text.strip()
    if not text:
        raise ValueError("empty form")
    # split into signed terms; '-' after '^' belongs to an exponent
    terms: list[str] = []
    current = []
    prev_significant = ""
    for ch in text:
        if ch in "+-" and prev_significant not in ("", "^", "*"):
            terms.append("".join(current))
            current = [ch]
        else:
            current.append(ch)
        if not ch.isspace():
            prev_significant = ch
    terms.append("".join(current))

    acc: dict = {}
    degree = None
    for raw in terms:
        raw = raw.strip()
        sign = ONE
        while raw and raw[0] in "+-":
            if raw[0] == "-":
                sign = -sign
            raw = raw[1:].strip()
        if not raw:
            raise ValueError("dangling sign in form")
        coeff = sign
        exps = [0] * n
        dI: tuple = ()
        seen_dz = False
        for tok in raw.replace("*", " ").split():
            if _COEFF_RE.match(tok):
                coeff *= Fraction(tok)
            elif _VAR_RE.match(tok):
                mvar = _VAR_RE.match(tok)
                i = int(mvar.group(1))
                if not 1 <= i <= n:
                    raise ValueError(f"variable z{i} out of range for n={n}")
                exps[i - 1] += int(mvar.group(3)) if mvar.group(3) else 1
            elif _DZ_RE.match(tok):
                if seen_dz:
                    raise ValueError("only one dz block per term")
                seen_dz = True
                idx = [int(s[2:]) for s in tok.split("^")]
                if any(not 1 <= i <= n for i in idx):
                    raise ValueError("dz index out of range")
                if len(set(idx)) != len(idx):
                    coeff = ZERO  # repeated wedge factor
                else:
                    inv = sum(1 for a in range(len(idx)) for b in range(a + 1, len(idx))
                              if idx[a] > idx[b])
                    if inv % 2:
                        coeff = -coeff
                    dI = tuple(sorted(idx))
            else:
                raise ValueError(f"cannot parse token {tok!r}")
        if degree is None:
            degree = len(dI)
        elif degree != len(dI) and coeff != 0:
            raise ValueError("terms of mixed form degree")
        if coeff != 0:
            key = (tuple(exps), dI)
            acc[key] = acc.get(key, ZERO) + coeff
    return AlgebraicForm.build(n, degree or 0, acc)


def form_to_text(w: AlgebraicForm) -> str:
    if w.is_zero():
        return "0"
    parts = []
    for exps, dI, c in w.terms:
        factors = []
        for i, e in enumerate(exps):
            if e == 1:
                factors.append(f"z{i + 1}")
            elif e != 0:
                factors.append(f"z{i + 1}^{e}")
        if dI:
            factors.append("^".join(f"dz{i}" for i in dI))
        if not factors:
            body = rat_to_str(c)
        elif c == 1:
            body = " ".join(factors)
        elif c == -1:
            body = "-" + " ".join(factors)
        else:
            body = rat_to_str(c) + " " + " ".join(factors)
        parts.append(body)
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def form_to_json(w: AlgebraicForm) -> dict:
    return {
        "n": w.n,
        "degree": w.degree,
        "terms": [{"coef": rat_to_str(c), "exps": list(exps), "dI": list(dI)}
                  for exps, dI, c in w.terms],
    }


def form_from_json(data: dict) -> AlgebraicForm:
    n = int(data["n"])
    acc: dict = {}
    for t in data["terms"]:
        key = (tuple(int(e) for e in t["exps"]), tuple(int(i) for i in t["dI"]))
        acc[key] = acc.get(key, ZERO) + rat_from_str(t["coef"])
    return AlgebraicForm.build(n, int(data["degree"]), acc)
