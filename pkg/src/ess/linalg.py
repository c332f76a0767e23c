"""Exact Gaussian elimination helpers over any FieldDescriptor.

Vectors are lists of FieldElem; matrices are lists of row lists.  All routines
use the deterministic first-nonzero pivot rule so downstream bases are
reproducible bit-for-bit.
"""

from __future__ import annotations

from .errors import CoefficientError


def zeros(field, n):
    return [field.zero() for _ in range(n)]


def mat_vec(field, matrix, vec):
    out = []
    for row in matrix:
        acc = field.zero()
        for a, x in zip(row, vec):
            if not a.is_zero() and not x.is_zero():
                acc = acc + a * x
        out.append(acc)
    return out


def mat_mul(field, a, b):
    if not a or not b:
        return []
    n, k, m = len(a), len(b), len(b[0])
    out = [[field.zero() for _ in range(m)] for _ in range(n)]
    for i in range(n):
        for l in range(k):
            x = a[i][l]
            if x.is_zero():
                continue
            brow = b[l]
            orow = out[i]
            for j in range(m):
                if not brow[j].is_zero():
                    orow[j] = orow[j] + x * brow[j]
    return out


def transpose(matrix):
    return [list(col) for col in zip(*matrix)] if matrix else []


def rref(field, rows):
    """Reduced row echelon form.  Returns (new_rows, pivot_columns)."""
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    pr = 0
    for pc in range(ncols):
        piv = None
        for i in range(pr, nrows):
            if not m[i][pc].is_zero():
                piv = i
                break
        if piv is None:
            continue
        if piv != pr:
            m[pr], m[piv] = m[piv], m[pr]
        inv = m[pr][pc].inverse()
        m[pr] = [x * inv for x in m[pr]]
        for i in range(nrows):
            if i != pr and not m[i][pc].is_zero():
                f = m[i][pc]
                m[i] = [a - f * b for a, b in zip(m[i], m[pr])]
        pivots.append(pc)
        pr += 1
        if pr == nrows:
            break
    return m, pivots


def rank_of(field, rows) -> int:
    if not rows or not rows[0]:
        return 0
    _, pivots = rref(field, rows)
    return len(pivots)


def kernel_basis(field, matrix, ncols=None):
    """Basis of the right kernel of `matrix` (vectors of length ncols)."""
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    if ncols == 0:
        return []
    if not matrix:
        return [unit_vector(field, ncols, j) for j in range(ncols)]
    r, pivots = rref(field, matrix)
    pivset = set(pivots)
    free = [j for j in range(ncols) if j not in pivset]
    basis = []
    for j in free:
        v = zeros(field, ncols)
        v[j] = field.one()
        for i, pc in enumerate(pivots):
            v[pc] = -r[i][j]
        basis.append(v)
    return basis


def unit_vector(field, n, j):
    v = zeros(field, n)
    v[j] = field.one()
    return v


def span_rank(field, vectors) -> int:
    return rank_of(field, vectors)


def in_span(field, vectors, target) -> bool:
    if all(x.is_zero() for x in target):
        return True
    if not vectors:
        return False
    base = rank_of(field, vectors)
    return rank_of(field, vectors + [target]) == base


def solve_coords(field, vectors, target):
    """Coordinates of `target` in the span of `vectors`, or None.

    Solves sum_i c_i vectors[i] = target by eliminating the matrix whose
    columns are the vectors, augmented with the target.
    """
    n = len(target)
    k = len(vectors)
    if k == 0:
        return [] if all(x.is_zero() for x in target) else None
    aug = [[vectors[i][row] for i in range(k)] + [target[row]] for row in range(n)]
    m, pivots = rref(field, aug)
    coords = zeros(field, k)
    for i, pc in enumerate(pivots):
        if pc == k:
            return None  # target column has a pivot: inconsistent
        coords[pc] = m[i][k]
    return coords


def solve_mod_subspace(field, gens, subspace, target):
    """Write target = sum c_i gens[i] modulo span(subspace); return the c_i.

    Requires the gens to be independent modulo the subspace, so the
    coordinates are unique.  Raises CoefficientError otherwise.
    """
    k = len(gens)
    if span_rank(field, subspace + gens) != span_rank(field, subspace) + k:
        raise CoefficientError("generators dependent modulo subspace")
    coords = solve_coords(field, gens + subspace, target)
    if coords is None:
        raise CoefficientError("target not in span of generators + subspace")
    return coords[:k]
