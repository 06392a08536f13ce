"""Spectral sequences of a bounded first-quadrant double complex.

Pages are computed from the filtration of the total complex by columns
(first filtration) or rows (second filtration) using approximate cycles

    Z_r^{p,q} = { x in F_p Tot^{p+q} : D x in F_{p+r} },
    E_r^{p,q} = Z_r^{p,q} / ( Z_{r-1}^{p+1,q-1} + D Z_{r-1}^{p-r+1,q+r-2} ),

with d_r induced by D on representatives.  Representatives are carried
as explicit vectors of the total complex, so every page is reproducible
and d_r is literally "apply D and project".

Second-filtration pages are computed on the transposed grid: entry
(p, q) of a second page refers to cell (q, p) of the input complex, so
that d_r always has bidegree (r, 1-r) in page coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .complexes import cohomology
from .grid import DoubleComplex, total
from .linalg import (
    CohomError,
    LabeledSpace,
    LinearMap,
    SpanBuilder,
    Subspace,
    Vector,
    rank,
    solve_in_span,
)

ZERO = Fraction(0)


class ConvergenceFailure(CohomError):
    pass


@dataclass(frozen=True)
class PageEntry:
    dim: int
    representatives: Subspace  # subspace of Tot^{p+q}


@dataclass(frozen=True)
class SpectralPage:
    r: int
    entries: dict  # (p, q) -> PageEntry, all cells of [0,P] x [0,Q]
    differentials: dict  # (p, q) -> LinearMap in page coordinates

    def dim(self, p: int, q: int) -> int:
        e = self.entries.get((p, q))
        return e.dim if e else 0

    def dims(self) -> dict:
        return {pq: e.dim for pq, e in sorted(self.entries.items()) if e.dim}


@dataclass(frozen=True)
class ConvergenceCertificate:
    total_dims: tuple[int, ...]
    first_einf: dict    # k -> tuple of ((p, q), dim)
    second_einf: dict
    first_degeneration: int
    second_degeneration: int


def _dot(pairs, vec) -> Fraction:
    return sum((c * vec[i] for i, c in pairs if vec[i] != 0), ZERO)


class _Filtration:
    """Column filtration data of one total complex."""

    def __init__(self, dc: DoubleComplex):
        self.dc = dc
        self.tot = total(dc)
        self.P, self.Q = dc.P, dc.Q
        self.n_max = dc.P + dc.Q
        # per degree: antidiagonal cells and the start offset of each block
        self.cells = {}
        self.block_start = {}
        for n in range(self.n_max + 1):
            cells = dc.antidiagonal(n)
            self.cells[n] = cells
            starts, off = {}, 0
            for (p, q) in cells:
                starts[p] = off
                off += dc.cell(p, q).dim
            self.block_start[n] = starts
        self._zcache: dict = {}

    def degree_dim(self, n: int) -> int:
        if 0 <= n <= self.n_max:
            return self.tot.space(n).dim
        return 0

    def filtration_offset(self, p: int, n: int) -> int:
        """Start coordinate of F_p inside Tot^n."""
        dim_n = self.degree_dim(n)
        for (pp, qq) in self.cells.get(n, []):
            if pp >= p:
                return self.block_start[n][pp]
        return dim_n

    def z_spaces(self, p: int, n: int) -> list[list[Vector]]:
        """Bases of {x in F_p Tot^n : D x in F_t Tot^{n+1}} for t = 0..P+1.

        Entry t of the returned list is the basis for target filtration
        level t; level P+1 means D x = 0.
        """
        key = (p, n)
        if key in self._zcache:
            return self._zcache[key]
        dim_n = self.degree_dim(n)
        start = self.filtration_offset(p, n)
        basis: list[Vector] = []
        for i in range(start, dim_n):
            v = [ZERO] * dim_n
            v[i] = Fraction(1)
            basis.append(tuple(v))
        snapshots = [list(basis)]
        d = self.tot.diff(n) if n < self.n_max else None
        rows_by_block: dict[int, list] = {}
        if d is not None and n + 1 <= self.n_max:
            labels = self.tot.space(n + 1).labels
            for i, row in enumerate(d.matrix):
                blk = labels[i][0]
                rows_by_block.setdefault(blk, []).append(
                    [(j, c) for j, c in enumerate(row) if c != 0])
        for t in range(0, self.P + 1):
            for pairs in rows_by_block.get(t, []):
                vals = [_dot(pairs, b) for b in basis]
                piv = next((i for i, v in enumerate(vals) if v != 0), None)
                if piv is None:
                    continue
                pv = vals[piv]
                pb = basis[piv]
                new_basis = []
                for i, b in enumerate(basis):
                    if i == piv:
                        continue
                    if vals[i] == 0:
                        new_basis.append(b)
                    else:
                        f = vals[i] / pv
                        new_basis.append(tuple(x - f * y for x, y in zip(b, pb)))
                basis = new_basis
            snapshots.append(list(basis))
        self._zcache[key] = snapshots
        return snapshots

    def z_basis(self, p: int, t: int, n: int) -> list[Vector]:
        """Basis of {x in F_max(p,0) Tot^n : D x in F_min(t,P+1)}."""
        if n < 0 or n > self.n_max:
            return []
        p = max(p, 0)
        t = max(min(t, self.P + 1), 0)
        if p > self.P:
            return []
        return self.z_spaces(p, n)[t]

    def apply_d(self, n: int, v: Vector) -> Vector:
        if n >= self.n_max:
            return ()
        return self.tot.diff(n).apply(v)


def _compute_pages(filt: _Filtration, r_max: int) -> list[SpectralPage]:
    P, Q = filt.P, filt.Q
    pages = []
    for r in range(1, r_max + 1):
        entries = {}
        data = {}
        for p in range(P + 1):
            for q in range(Q + 1):
                n = p + q
                znum = filt.z_basis(p, p + r, n)
                den_vectors = list(filt.z_basis(p + 1, p + r, n))
                for v in filt.z_basis(p - r + 1, p, n - 1):
                    den_vectors.append(filt.apply_d(n - 1, v))
                dim_n = filt.degree_dim(n)
                builder = SpanBuilder(dim_n)
                den_basis = []
                for v in den_vectors:
                    if builder.add(v):
                        den_basis.append(v)
                reps = []
                for v in znum:
                    if builder.add(v):
                        reps.append(v)
                amb = filt.tot.space(n)
                rep_dom = LabeledSpace(tuple(("E", r, p, q, i) for i in range(len(reps))))
                rep_map = LinearMap.from_columns(rep_dom, amb, reps)
                entries[(p, q)] = PageEntry(len(reps), Subspace(amb, rep_map))
                data[(p, q)] = (den_basis, reps, dim_n)
        diffs = {}
        for p in range(P + 1):
            for q in range(Q + 1):
                tp, tq = p + r, q - r + 1
                if not (0 <= tp <= P and 0 <= tq <= Q):
                    continue
                den_t, reps_t, dim_t = data[(tp, tq)]
                src_reps = data[(p, q)][1]
                cols = []
                for x in src_reps:
                    v = filt.apply_d(p + q, x)
                    coeffs = solve_in_span(den_t + reps_t, dim_t, v)
                    if coeffs is None:
                        raise AssertionError("d_r image escapes the target page entry")
                    cols.append(tuple(coeffs[len(den_t):]))
                dom = entries[(p, q)].representatives.basis.domain
                cod = entries[(tp, tq)].representatives.basis.domain
                diffs[(p, q)] = LinearMap.from_columns(dom, cod, cols)
        page = SpectralPage(r, entries, diffs)
        _check_page(page, pages[-1] if pages else None)
        pages.append(page)
    return pages


def _check_page(page: SpectralPage, prev: Optional[SpectralPage]) -> None:
    # d_r . d_r = 0 wherever composable
    for (p, q), d in page.differentials.items():
        nxt = page.differentials.get((p + page.r, q - page.r + 1))
        if nxt is not None and not nxt.compose(d).is_zero():
            raise AssertionError(f"d_{page.r} squared is nonzero at {(p, q)}")
    # dim E_{r+1} = dim ker d_r - dim im d_r, checked against the previous page
    if prev is not None:
        r = prev.r
        for (p, q), entry in page.entries.items():
            out = prev.differentials.get((p, q))
            ker = prev.dim(p, q) - (rank(out) if out else 0)
            inc = prev.differentials.get((p - r, q + r - 1))
            im = rank(inc) if inc else 0
            if entry.dim != ker - im:
                raise AssertionError(
                    f"page {page.r} entry {(p, q)} dims disagree with ker/im of d_{r}")


def first_pages(k: DoubleComplex, r_max: int) -> list[SpectralPage]:
    """Pages E_1..E_r_max of the column filtration (E_1 = vertical cohomology)."""
    if not 1 <= r_max <= k.P + k.Q + 2:
        raise ValueError("r_max out of range")
    return _compute_pages(_Filtration(k), r_max)


def second_pages(k: DoubleComplex, r_max: int) -> list[SpectralPage]:
    """Pages of the row filtration (E_1 = horizontal cohomology).

    Computed on the transposed grid: page entry (p, q) refers to cell
    (q, p) of the input double complex.
    """
    if not 1 <= r_max <= k.P + k.Q + 2:
        raise ValueError("r_max out of range")
    return _compute_pages(_Filtration(k.transpose()), r_max)


def _einf_sums(pages: list[SpectralPage], P: int, Q: int) -> dict:
    last = pages[-1]
    out = {}
    for k in range(P + Q + 1):
        out[k] = tuple(((p, k - p), last.dim(p, k - p))
                       for p in range(max(0, k - Q), min(P, k) + 1))
    return out


def _degeneration_page(pages: list[SpectralPage]) -> int:
    r0 = len(pages) + 1
    for page in reversed(pages):
        if all(d.is_zero() for d in page.differentials.values()):
            r0 = page.r
        else:
            break
    return r0


def certify_convergence(k: DoubleComplex) -> ConvergenceCertificate:
    """Check both filtrations' E_infinity against the total cohomology."""
    r_inf = max(k.P, k.Q) + 2
    tot_report = cohomology(total(k))
    first = _compute_pages(_Filtration(k), r_inf)
    second = _compute_pages(_Filtration(k.transpose()), r_inf)
    first_sums = _einf_sums(first, k.P, k.Q)
    second_sums = _einf_sums(second, k.Q, k.P)
    for deg in range(k.P + k.Q + 1):
        h = tot_report.dim(deg)
        s1 = sum(d for _, d in first_sums[deg])
        s2 = sum(d for _, d in second_sums[deg])
        if s1 != h:
            raise ConvergenceFailure(
                f"first filtration E_inf sum {s1} != dim H^{deg} = {h}")
        if s2 != h:
            raise ConvergenceFailure(
                f"second filtration E_inf sum {s2} != dim H^{deg} = {h}")
    return ConvergenceCertificate(
        total_dims=tuple(tot_report.dims),
        first_einf=first_sums,
        second_einf=second_sums,
        first_degeneration=_degeneration_page(first),
        second_degeneration=_degeneration_page(second),
    )


def page_to_json(page: SpectralPage) -> dict:
    dims = [{"p": p, "q": q, "dim": e.dim}
            for (p, q), e in sorted(page.entries.items())]
    ranks = [{"p": p, "q": q, "rank": rank(d)}
             for (p, q), d in sorted(page.differentials.items())]
    return {"r": page.r, "dims": dims, "d_r_ranks": ranks}
