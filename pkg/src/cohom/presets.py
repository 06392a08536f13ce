"""Preset builders: the 3-arc circle cover, affine torus models, and the
weight-truncated projective line.

The projective-line preset covers P^1 by two affine charts with
coordinate rings Q[z] and Q[w], glued over Q[z, 1/z] by w -> 1/z and
dw -> -dz/z^2.  All section spaces are truncated to weights in [-W, W]
under wt(z) = wt(dz) = 1, wt(w) = wt(dw) = -1; truncation stability
under W -> W + 2 is the correctness guard.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cech import CoverNerve, HyperResult, SheafOnCover, cech_hyper
from .forms import TorusSpec, WindowExhausted, truncated_de_rham_complex
from .linalg import CohomError, LabeledSpace, LinearMap, solve

ZERO = Fraction(0)
ONE = Fraction(1)


class ParameterOutOfRange(CohomError):
    pass


@dataclass(frozen=True)
class Preset:
    name: str
    params: tuple
    weights: tuple  # (generator name, weight) pairs; structure maps are homogeneous


def build_circle():
    """Three arcs covering a circle: pairwise overlaps, no triple overlap."""
    faces = frozenset({(0,), (1,), (2,), (0, 1), (0, 2), (1, 2)})
    nerve = CoverNerve(3, faces)
    line = {f: LabeledSpace(((f, "c"),)) for f in faces}
    restrictions = {}
    for f in faces:
        if len(f) == 2:
            for i in range(2):
                sub = f[:i] + f[i + 1:]
                restrictions[(f, i)] = LinearMap(line[sub], line[f], ((ONE,),))
    return nerve, SheafOnCover(nerve, line, restrictions)


CIRCLE_PRESET = Preset("circle", (), ())


def build_torus(k: int, n: int) -> TorusSpec:
    if not 0 <= k <= n <= 3:
        raise ParameterOutOfRange("torus presets need 0 <= k <= n <= 3")
    return TorusSpec(n, k, 4)


def torus_preset(k: int, n: int) -> Preset:
    weights = tuple((f"z{i}", tuple(1 if j == i - 1 else 0 for j in range(n)))
                    for i in range(1, n + 1))
    return Preset(f"torus({k},{n})", (k, n), weights)


P1_PRESET = Preset("p1", (), (("z", 1), ("dz", 1), ("w", -1), ("dw", -1)))


def _mono_space(face, kind: str, exponents) -> LabeledSpace:
    return LabeledSpace(tuple((face, kind, j) for j in exponents))


def build_p1(weight_window: int):
    """Cech data of the projective line truncated to weights [-W, W].

    Returns (nerve, [level-0 sheaf, level-1 sheaf], level maps) ready for
    cech_hyper.  Labels: ("z", j) is z^j, ("w", j) is w^j, ("zdz", j) is
    z^j dz, ("wdw", j) is w^j dw.
    """
    W = weight_window
    if W < 3:
        raise ParameterOutOfRange("p1 window must be at least 3")
    faces = frozenset({(0,), (1,), (0, 1)})
    nerve = CoverNerve(2, faces)

    U0, U1, U01 = (0,), (1,), (0, 1)
    s0 = {
        U0: _mono_space(U0, "z", range(0, W + 1)),
        U1: _mono_space(U1, "w", range(0, W + 1)),
        U01: _mono_space(U01, "z", range(-W, W + 1)),
    }
    s1 = {
        U0: _mono_space(U0, "zdz", range(0, W)),
        U1: _mono_space(U1, "wdw", range(0, W)),
        U01: _mono_space(U01, "zdz", range(-W - 1, W)),
    }

    def matrix(dom: LabeledSpace, cod: LabeledSpace, images: dict) -> LinearMap:
        """images: domain label -> list of (codomain label, coefficient)."""
        index = {lab: i for i, lab in enumerate(cod.labels)}
        cols = []
        for lab in dom.labels:
            col = [ZERO] * cod.dim
            for tgt, c in images.get(lab, []):
                col[index[tgt]] += c
            cols.append(tuple(col))
        return LinearMap.from_columns(dom, cod, cols)

    r0 = {
        (U01, 1): matrix(s0[U0], s0[U01],
                         {(U0, "z", j): [((U01, "z", j), ONE)] for j in range(0, W + 1)}),
        (U01, 0): matrix(s0[U1], s0[U01],
                         {(U1, "w", j): [((U01, "z", -j), ONE)] for j in range(0, W + 1)}),
    }
    r1 = {
        (U01, 1): matrix(s1[U0], s1[U01],
                         {(U0, "zdz", j): [((U01, "zdz", j), ONE)] for j in range(0, W)}),
        (U01, 0): matrix(s1[U1], s1[U01],
                         {(U1, "wdw", j): [((U01, "zdz", -j - 2), -ONE)] for j in range(0, W)}),
    }
    sheaf0 = SheafOnCover(nerve, s0, r0)
    sheaf1 = SheafOnCover(nerve, s1, r1)

    d_maps = {
        U0: matrix(s0[U0], s1[U0],
                   {(U0, "z", j): [((U0, "zdz", j - 1), Fraction(j))]
                    for j in range(1, W + 1)}),
        U1: matrix(s0[U1], s1[U1],
                   {(U1, "w", j): [((U1, "wdw", j - 1), Fraction(j))]
                    for j in range(1, W + 1)}),
        U01: matrix(s0[U01], s1[U01],
                    {(U01, "z", j): [((U01, "zdz", j - 1), Fraction(j))]
                     for j in range(-W, W + 1) if j != 0}),
    }
    return nerve, [sheaf0, sheaf1], [d_maps]


_W_DEFAULT = 4


@dataclass(frozen=True)
class P1Report:
    window: int
    dims: tuple                    # hypercohomology dims (degree 0..2)
    e1_second: dict                # (p, q) -> dim, page coordinates of second_pages
    h2_representative: str         # label of the generating 1-cochain
    hyper: HyperResult


def p1_report(weight_window: int = _W_DEFAULT) -> P1Report:
    """Hypercohomology of the p1 preset with the stability guard."""
    dims_by_window = {}
    results = {}
    for W in (weight_window, weight_window + 2):
        nerve, sheaves, maps = build_p1(W)
        res = cech_hyper(nerve, sheaves, maps)
        dims_by_window[W] = tuple(res.report.dims)
        results[W] = res
    if dims_by_window[weight_window] != dims_by_window[weight_window + 2]:
        raise WindowExhausted(
            f"p1 dims changed between windows {weight_window} and {weight_window + 2}")
    res = results[weight_window]
    e1 = {pq: e.dim for pq, e in sorted(res.second[0].entries.items())}

    # the degree-2 class is generated by the 1-cochain z^-1 dz on the overlap
    tot2 = res.report.representatives[2].ambient
    label = ((0, 1), ((0, 1), "zdz", -1))
    idx = tot2.labels.index((1, 1, label))
    candidate = tuple(ONE if i == idx else ZERO for i in range(tot2.dim))
    from .grid import total

    tot = total(res.double)
    if solve(tot.diff(1), candidate) is not None:
        raise AssertionError("z^-1 dz bounds on the truncated cover")
    return P1Report(weight_window, tuple(res.report.dims), e1,
                    "z^-1 dz on U_01 (Cech degree 1, form level 1)", res)


@dataclass(frozen=True)
class TorusReport:
    k: int
    n: int
    derham_dims: tuple
    hyper_dims: tuple
    log_generators: tuple


def torus_report(k: int, n: int) -> TorusReport:
    """Affine-torus dims from the form complex and from the trivial cover.

    The single-open Cech route must reproduce the de Rham dims: with one
    open set hypercohomology is just the cohomology of the section
    complex.  The cross-check runs at window 1; the dims cannot depend on
    the window because derham_cohomology verifies that every nonzero
    multidegree component of the preset window is exact.
    """
    from .forms import derham_cohomology

    spec = build_torus(k, n)
    report = derham_cohomology(spec)
    hyper = trivial_cover_hyper(TorusSpec(spec.n, spec.k, 1))
    return TorusReport(k, n, report.dims, tuple(hyper.report.dims), report.generators)


def trivial_cover_hyper(spec: TorusSpec) -> HyperResult:
    """cech_hyper of the truncated de Rham complex on a single-open cover."""
    nerve = CoverNerve(1, frozenset({(0,)}))
    cx = truncated_de_rham_complex(spec)
    face = (0,)
    sheaves = []
    for q in range(spec.n + 1):
        space = LabeledSpace(tuple((face, lab) for lab in cx.space(q).labels))
        sheaves.append(SheafOnCover(nerve, {face: space}, {}))
    maps = []
    for q in range(spec.n):
        dom, cod = sheaves[q].space(face), sheaves[q + 1].space(face)
        maps.append({face: LinearMap(dom, cod, cx.diff(q).matrix)})
    return cech_hyper(nerve, sheaves, maps)
