"""Bounded double and triple complexes and their total complexes.

Conventions: both differentials of a double complex commute (the sign
lives in the total differential, never in the stored maps); the total
differential restricted to cell (p, q) is horiz + (-1)^p vert; cells
inside a total degree are ordered by ascending first index.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .complexes import CochainComplex, validate as validate_complex
from .linalg import (
    CohomError,
    LabeledSpace,
    LinearMap,
    matrix_from_json_shaped,
    matrix_to_json,
)

MAX_BOUND = 16

ZERO = Fraction(0)


class InvariantViolation(CohomError):
    def __init__(self, cell, law: str):
        self.cell = cell
        self.law = law
        super().__init__(f"{law} fails at cell {cell}")


class GridTooLarge(CohomError):
    pass


@dataclass(frozen=True)
class DoubleComplex:
    """First-quadrant grid K^{p,q}, 0 <= p <= P, 0 <= q <= Q.

    horiz[p][q] : K^{p,q} -> K^{p+1,q}  (p < P)
    vert[p][q]  : K^{p,q} -> K^{p,q+1}  (q < Q)
    """

    P: int
    Q: int
    cells: tuple[tuple[LabeledSpace, ...], ...]
    horiz: tuple[tuple[LinearMap, ...], ...]
    vert: tuple[tuple[LinearMap, ...], ...]

    def __post_init__(self):
        if self.P < 0 or self.Q < 0:
            raise ValueError("negative bounds")
        if self.P > MAX_BOUND or self.Q > MAX_BOUND:
            raise GridTooLarge(f"bounds ({self.P}, {self.Q}) exceed {MAX_BOUND}")
        if len(self.cells) != self.P + 1 or any(len(col) != self.Q + 1 for col in self.cells):
            raise ValueError("cells shape does not match bounds")
        if len(self.horiz) != self.P or any(len(col) != self.Q + 1 for col in self.horiz):
            raise ValueError("horiz shape does not match bounds")
        if len(self.vert) != self.P + 1 or any(len(col) != self.Q for col in self.vert):
            raise ValueError("vert shape does not match bounds")
        for p in range(self.P):
            for q in range(self.Q + 1):
                m = self.horiz[p][q]
                if m.domain != self.cells[p][q] or m.codomain != self.cells[p + 1][q]:
                    raise ValueError(f"horiz map at {(p, q)} has wrong spaces")
        for p in range(self.P + 1):
            for q in range(self.Q):
                m = self.vert[p][q]
                if m.domain != self.cells[p][q] or m.codomain != self.cells[p][q + 1]:
                    raise ValueError(f"vert map at {(p, q)} has wrong spaces")

    def cell(self, p: int, q: int) -> LabeledSpace:
        return self.cells[p][q]

    def validate(self) -> None:
        """delta.delta = 0, d.d = 0 and commutation on every cell."""
        for p in range(self.P - 1):
            for q in range(self.Q + 1):
                if not self.horiz[p + 1][q].compose(self.horiz[p][q]).is_zero():
                    raise InvariantViolation((p, q), "horizontal differential squares to zero")
        for p in range(self.P + 1):
            for q in range(self.Q - 1):
                if not self.vert[p][q + 1].compose(self.vert[p][q]).is_zero():
                    raise InvariantViolation((p, q), "vertical differential squares to zero")
        for p in range(self.P):
            for q in range(self.Q):
                a = self.vert[p + 1][q].compose(self.horiz[p][q])
                b = self.horiz[p][q + 1].compose(self.vert[p][q])
                if a.matrix != b.matrix:
                    raise InvariantViolation((p, q), "horizontal and vertical differentials commute")

    def antidiagonal(self, n: int) -> list[tuple[int, int]]:
        """Cells with p + q = n, ascending p."""
        return [(p, n - p) for p in range(max(0, n - self.Q), min(self.P, n) + 1)]

    def transpose(self) -> "DoubleComplex":
        cells = tuple(tuple(self.cells[p][q] for p in range(self.P + 1))
                      for q in range(self.Q + 1))
        horiz = tuple(tuple(self.vert[p][q] for p in range(self.P + 1))
                      for q in range(self.Q))
        vert = tuple(tuple(self.horiz[p][q] for p in range(self.P))
                     for q in range(self.Q + 1))
        return DoubleComplex(self.Q, self.P, cells, horiz, vert)


def _assemble_block_matrix(src_dims, dst_dims, blocks):
    """Block matrix rows from a dict {(i, j): LinearMap (src j -> dst i)}."""
    src_offsets, n = [], 0
    for d in src_dims:
        src_offsets.append(n)
        n += d
    dst_offsets, m = [], 0
    for d in dst_dims:
        dst_offsets.append(m)
        m += d
    rows = [[ZERO] * n for _ in range(m)]
    for (i, j), bm in blocks.items():
        r0, c0 = dst_offsets[i], src_offsets[j]
        for r, row in enumerate(bm.matrix):
            target = rows[r0 + r]
            for c, x in enumerate(row):
                if x != 0:
                    target[c0 + c] = x
    return tuple(tuple(r) for r in rows)


def total(k: DoubleComplex) -> CochainComplex:
    """Total complex with differential delta + (-1)^p d on cell (p, q)."""
    k.validate()
    n_max = k.P + k.Q
    spaces = []
    cell_lists = []
    for n in range(n_max + 1):
        cells = k.antidiagonal(n)
        cell_lists.append(cells)
        labels = tuple((p, q, lab) for (p, q) in cells for lab in k.cells[p][q].labels)
        spaces.append(LabeledSpace(labels))
    diffs = []
    for n in range(n_max):
        src = cell_lists[n]
        dst = cell_lists[n + 1]
        dst_index = {cell: i for i, cell in enumerate(dst)}
        blocks = {}
        for j, (p, q) in enumerate(src):
            if p < k.P:
                blocks[(dst_index[(p + 1, q)], j)] = k.horiz[p][q]
            if q < k.Q:
                sign = 1 if p % 2 == 0 else -1
                vm = k.vert[p][q]
                blocks[(dst_index[(p, q + 1)], j)] = vm if sign == 1 else vm.scale(-1)
        mat = _assemble_block_matrix([k.cells[p][q].dim for (p, q) in src],
                                     [k.cells[p][q].dim for (p, q) in dst], blocks)
        diffs.append(LinearMap(spaces[n], spaces[n + 1], mat))
    tot = CochainComplex(0, n_max, tuple(spaces), tuple(diffs))
    validate_complex(tot)
    return tot


@dataclass(frozen=True)
class TripleComplex:
    """Trigraded grid with three commuting differentials d1, d2, d3."""

    P: int
    Q: int
    R: int
    cells: tuple[tuple[tuple[LabeledSpace, ...], ...], ...]
    d1: dict  # (p,q,r) -> LinearMap to (p+1,q,r), present for p < P
    d2: dict
    d3: dict

    def __post_init__(self):
        for bound in (self.P, self.Q, self.R):
            if bound < 0:
                raise ValueError("negative bounds")
            if bound > MAX_BOUND:
                raise GridTooLarge(f"bound {bound} exceeds {MAX_BOUND}")

    def cell(self, p, q, r) -> LabeledSpace:
        if 0 <= p <= self.P and 0 <= q <= self.Q and 0 <= r <= self.R:
            return self.cells[p][q][r]
        return LabeledSpace(())

    def map1(self, p, q, r) -> LinearMap:
        return self.d1.get((p, q, r)) or LinearMap.zero(self.cell(p, q, r), self.cell(p + 1, q, r))

    def map2(self, p, q, r) -> LinearMap:
        return self.d2.get((p, q, r)) or LinearMap.zero(self.cell(p, q, r), self.cell(p, q + 1, r))

    def map3(self, p, q, r) -> LinearMap:
        return self.d3.get((p, q, r)) or LinearMap.zero(self.cell(p, q, r), self.cell(p, q, r + 1))

    def validate(self) -> None:
        rng = [(p, q, r) for p in range(self.P + 1) for q in range(self.Q + 1)
               for r in range(self.R + 1)]
        for (p, q, r) in rng:
            if p + 2 <= self.P:
                if not self.map1(p + 1, q, r).compose(self.map1(p, q, r)).is_zero():
                    raise InvariantViolation((p, q, r), "d1 squares to zero")
            if q + 2 <= self.Q:
                if not self.map2(p, q + 1, r).compose(self.map2(p, q, r)).is_zero():
                    raise InvariantViolation((p, q, r), "d2 squares to zero")
            if r + 2 <= self.R:
                if not self.map3(p, q, r + 1).compose(self.map3(p, q, r)).is_zero():
                    raise InvariantViolation((p, q, r), "d3 squares to zero")
            if p < self.P and q < self.Q:
                a = self.map2(p + 1, q, r).compose(self.map1(p, q, r))
                b = self.map1(p, q + 1, r).compose(self.map2(p, q, r))
                if a.matrix != b.matrix:
                    raise InvariantViolation((p, q, r), "d1 and d2 commute")
            if p < self.P and r < self.R:
                a = self.map3(p + 1, q, r).compose(self.map1(p, q, r))
                b = self.map1(p, q, r + 1).compose(self.map3(p, q, r))
                if a.matrix != b.matrix:
                    raise InvariantViolation((p, q, r), "d1 and d3 commute")
            if q < self.Q and r < self.R:
                a = self.map3(p, q + 1, r).compose(self.map2(p, q, r))
                b = self.map2(p, q, r + 1).compose(self.map3(p, q, r))
                if a.matrix != b.matrix:
                    raise InvariantViolation((p, q, r), "d2 and d3 commute")


def _triple_cell_labels(n: TripleComplex, p, q, r):
    return tuple(((p, q, r), lab) for lab in n.cell(p, q, r).labels)


def flatten_fix_r(n: TripleComplex) -> DoubleComplex:
    """Group p+q = k on the horizontal axis, keep r vertical.

    Horizontal differential d1 + (-1)^p d2, vertical differential d3.
    """
    n.validate()
    P2, Q2 = n.P + n.Q, n.R
    groups = {}
    for k in range(P2 + 1):
        groups[k] = [(p, k - p) for p in range(max(0, k - n.Q), min(n.P, k) + 1)]

    def cell_space(k, r):
        labels = tuple(lab for (p, q) in groups[k]
                       for lab in _triple_cell_labels(n, p, q, r))
        return LabeledSpace(labels)

    cells = tuple(tuple(cell_space(k, r) for r in range(Q2 + 1)) for k in range(P2 + 1))

    horiz = []
    for k in range(P2):
        col = []
        for r in range(Q2 + 1):
            src, dst = groups[k], groups[k + 1]
            dst_index = {c: i for i, c in enumerate(dst)}
            blocks = {}
            for j, (p, q) in enumerate(src):
                if p < n.P:
                    blocks[(dst_index[(p + 1, q)], j)] = n.map1(p, q, r)
                if q < n.Q:
                    m = n.map2(p, q, r)
                    blocks[(dst_index[(p, q + 1)], j)] = m if p % 2 == 0 else m.scale(-1)
            mat = _assemble_block_matrix([n.cell(p, q, r).dim for (p, q) in src],
                                         [n.cell(p, q, r).dim for (p, q) in dst], blocks)
            col.append(LinearMap(cells[k][r], cells[k + 1][r], mat))
        horiz.append(tuple(col))

    vert = []
    for k in range(P2 + 1):
        col = []
        for r in range(Q2):
            src = groups[k]
            blocks = {(i, i): n.map3(p, q, r) for i, (p, q) in enumerate(src)}
            mat = _assemble_block_matrix([n.cell(p, q, r).dim for (p, q) in src],
                                         [n.cell(p, q, r + 1).dim for (p, q) in src], blocks)
            col.append(LinearMap(cells[k][r], cells[k][r + 1], mat))
        vert.append(tuple(col))

    dc = DoubleComplex(P2, Q2, cells, tuple(horiz), tuple(vert))
    dc.validate()
    return dc


def flatten_fix_p(n: TripleComplex) -> DoubleComplex:
    """Keep p horizontal, group q+r = l on the vertical axis.

    Horizontal differential d1, vertical differential d2 + (-1)^q d3.
    """
    n.validate()
    P2, Q2 = n.P, n.Q + n.R
    groups = {}
    for l in range(Q2 + 1):
        groups[l] = [(q, l - q) for q in range(max(0, l - n.R), min(n.Q, l) + 1)]

    def cell_space(p, l):
        labels = tuple(lab for (q, r) in groups[l]
                       for lab in _triple_cell_labels(n, p, q, r))
        return LabeledSpace(labels)

    cells = tuple(tuple(cell_space(p, l) for l in range(Q2 + 1)) for p in range(P2 + 1))

    horiz = []
    for p in range(P2):
        col = []
        for l in range(Q2 + 1):
            src = groups[l]
            blocks = {(i, i): n.map1(p, q, r) for i, (q, r) in enumerate(src)}
            mat = _assemble_block_matrix([n.cell(p, q, r).dim for (q, r) in src],
                                         [n.cell(p + 1, q, r).dim for (q, r) in src], blocks)
            col.append(LinearMap(cells[p][l], cells[p + 1][l], mat))
        horiz.append(tuple(col))

    vert = []
    for p in range(P2 + 1):
        col = []
        for l in range(Q2):
            src, dst = groups[l], groups[l + 1]
            dst_index = {c: i for i, c in enumerate(dst)}
            blocks = {}
            for j, (q, r) in enumerate(src):
                if q < n.Q:
                    blocks[(dst_index[(q + 1, r)], j)] = n.map2(p, q, r)
                if r < n.R:
                    m = n.map3(p, q, r)
                    blocks[(dst_index[(q, r + 1)], j)] = m if q % 2 == 0 else m.scale(-1)
            mat = _assemble_block_matrix([n.cell(p, q, r).dim for (q, r) in src],
                                         [n.cell(p, q, r).dim for (q, r) in dst], blocks)
            col.append(LinearMap(cells[p][l], cells[p][l + 1], mat))
        vert.append(tuple(col))

    dc = DoubleComplex(P2, Q2, cells, tuple(horiz), tuple(vert))
    dc.validate()
    return dc


@dataclass(frozen=True)
class TotalsComparison:
    agree: bool
    first_mismatch_degree: Optional[int]

    def __bool__(self) -> bool:
        return self.agree


def totals_agree(n: TripleComplex) -> TotalsComparison:
    """Compare the single complexes of the two flattenings bit-exactly.

    Both totals are permuted to the canonical ordering of the underlying
    (p, q, r) cells (lexicographic) before the matrices are compared, so
    the result is independent of the grouping order of each flattening.
    """
    ta = total(flatten_fix_r(n))
    tb = total(flatten_fix_p(n))
    if ta.dims() != tb.dims():
        for deg in ta.degrees():
            if ta.space(deg).dim != tb.space(deg).dim:
                return TotalsComparison(False, deg)
    perms_a = [_canonical_permutation(ta.space(d)) for d in ta.degrees()]
    perms_b = [_canonical_permutation(tb.space(d)) for d in tb.degrees()]
    for i, deg in enumerate(range(ta.lo, ta.hi)):
        ma = _permute_matrix(ta.diffs[i].matrix, perms_a[i + 1], perms_a[i])
        mb = _permute_matrix(tb.diffs[i].matrix, perms_b[i + 1], perms_b[i])
        if ma != mb:
            return TotalsComparison(False, deg)
    return TotalsComparison(True, None)


def _canonical_permutation(space: LabeledSpace) -> list[int]:
    """Indices sorted by the flattened ((p,q,r), label) cell labels."""
    def key(i):
        lab = space.labels[i]
        # total() wraps flattening labels as (x, y, ((p,q,r), inner))
        return lab[2]
    return sorted(range(space.dim), key=key)


def _permute_matrix(matrix, row_perm, col_perm):
    return tuple(tuple(matrix[i][j] for j in col_perm) for i in row_perm)


def double_complex_to_json(k: DoubleComplex) -> dict:
    return {
        "P": k.P,
        "Q": k.Q,
        "dims": [[k.cells[p][q].dim for q in range(k.Q + 1)] for p in range(k.P + 1)],
        "horiz": [[matrix_to_json(k.horiz[p][q].matrix) for q in range(k.Q + 1)]
                  for p in range(k.P)],
        "vert": [[matrix_to_json(k.vert[p][q].matrix) for q in range(k.Q)]
                 for p in range(k.P + 1)],
    }


def double_complex_from_json(data: dict) -> DoubleComplex:
    P, Q = int(data["P"]), int(data["Q"])
    dims = data["dims"]
    if len(dims) != P + 1 or any(len(col) != Q + 1 for col in dims):
        raise ValueError("dims shape does not match bounds")
    cells = tuple(tuple(LabeledSpace(tuple(((p, q), j) for j in range(int(dims[p][q]))))
                        for q in range(Q + 1)) for p in range(P + 1))
    horiz = tuple(tuple(LinearMap(cells[p][q], cells[p + 1][q],
                                  matrix_from_json_shaped(data["horiz"][p][q],
                                                          cells[p + 1][q].dim,
                                                          cells[p][q].dim))
                        for q in range(Q + 1)) for p in range(P))
    vert = tuple(tuple(LinearMap(cells[p][q], cells[p][q + 1],
                                 matrix_from_json_shaped(data["vert"][p][q],
                                                         cells[p][q + 1].dim,
                                                         cells[p][q].dim))
                       for q in range(Q)) for p in range(P + 1))
    return DoubleComplex(P, Q, cells, horiz, vert)


def tensor_double_complex(a: CochainComplex, b: CochainComplex) -> DoubleComplex:
    """K^{p,q} = A^p (x) B^q with commuting differentials dA(x)1 and 1(x)dB."""
    if a.lo != 0 or b.lo != 0:
        raise ValueError("tensor factors must start in degree 0")
    P, Q = a.hi, b.hi

    def tensor_space(p, q):
        labels = tuple((la, lb) for la in a.space(p).labels for lb in b.space(q).labels)
        return LabeledSpace(labels)

    cells = tuple(tuple(tensor_space(p, q) for q in range(Q + 1)) for p in range(P + 1))

    def kron(m1: LinearMap, m2: LinearMap, dom, cod) -> LinearMap:
        rows = []
        for r1 in m1.matrix:
            for r2 in m2.matrix:
                rows.append(tuple(x * y for x in r1 for y in r2))
        return LinearMap(dom, cod, tuple(rows))

    horiz = tuple(tuple(kron(a.diff(p), LinearMap.identity(b.space(q)),
                             cells[p][q], cells[p + 1][q])
                        for q in range(Q + 1)) for p in range(P))
    vert = tuple(tuple(kron(LinearMap.identity(a.space(p)), b.diff(q),
                            cells[p][q], cells[p][q + 1])
                       for q in range(Q)) for p in range(P + 1))
    return DoubleComplex(P, Q, cells, horiz, vert)


def tensor_triple_complex(a: CochainComplex, b: CochainComplex,
                          c: CochainComplex) -> TripleComplex:
    """N^{p,q,r} = A^p (x) B^q (x) C^r with the three factor differentials."""
    for f in (a, b, c):
        if f.lo != 0:
            raise ValueError("tensor factors must start in degree 0")
    P, Q, R = a.hi, b.hi, c.hi

    def space(p, q, r):
        labels = tuple((la, lb, lc)
                       for la in a.space(p).labels
                       for lb in b.space(q).labels
                       for lc in c.space(r).labels)
        return LabeledSpace(labels)

    cells = tuple(tuple(tuple(space(p, q, r) for r in range(R + 1))
                        for q in range(Q + 1)) for p in range(P + 1))

    def kron3(m1, m2, m3, dom, cod):
        rows = []
        for r1 in m1.matrix:
            for r2 in m2.matrix:
                for r3 in m3.matrix:
                    rows.append(tuple(x * y * z for x in r1 for y in r2 for z in r3))
        return LinearMap(dom, cod, tuple(rows))

    d1, d2, d3 = {}, {}, {}
    for p in range(P + 1):
        for q in range(Q + 1):
            for r in range(R + 1):
                ia = LinearMap.identity(a.space(p))
                ib = LinearMap.identity(b.space(q))
                ic = LinearMap.identity(c.space(r))
                if p < P:
                    d1[(p, q, r)] = kron3(a.diff(p), ib, ic,
                                          cells[p][q][r], cells[p + 1][q][r])
                if q < Q:
                    d2[(p, q, r)] = kron3(ia, b.diff(q), ic,
                                          cells[p][q][r], cells[p][q + 1][r])
                if r < R:
                    d3[(p, q, r)] = kron3(ia, ib, c.diff(r),
                                          cells[p][q][r], cells[p][q][r + 1])
    return TripleComplex(P, Q, R, cells, d1, d2, d3)
