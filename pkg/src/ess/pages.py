"""The spectral-sequence engine.

Pages E^r_{-s,t} of the J-adic filtration on C_*(X, kG) are computed exactly
by truncating the filtered complex at F^M with M = S_max + R_max and running
kernel/sum/quotient dimension arithmetic over the coefficient field.  This is
sound on the window: quotienting by F^M changes no entry E^r_{-s} with
s + r <= M, because d preserves F^M and F^M lies inside every denominator in
that range (checked as the window-stability invariant in the test suite, not
assumed).

Also here: the closed-form d^1 (lift a homology basis, apply the equivariant
boundary once, read the gr^1 component), and the Reznikov-case full collapse.
"""

from __future__ import annotations

import json
import math

from . import linalg
from .coeffs import FieldDescriptor
from .errors import CrossCheckError, UnsupportedCoefficients, ValidationError
from .groupring import (GroupDescriptor, GroupRingElem, cyclic_filtration,
                        monomials_of_degree)

INF = math.inf


class FiltrationModel:
    """A finite-dimensional k-model of kG adapted to the J-adic filtration.

    The basis is ordered with valuations nondecreasing, so J^s corresponds to
    a suffix of the coordinates.  For Z^n this is kG/J^M with monomial basis
    x^alpha = prod (t_i - 1)^{a_i}, |alpha| < M; for Z_m it is all of kG with
    the adapted basis of the (stabilized) subspace chain.
    """

    def __init__(self, group: GroupDescriptor, field: FieldDescriptor, M: int):
        self.group = group
        self.field = field
        self.M = M
        if group.kind == "free_abelian":
            self.monomials = []
            for deg in range(M):
                self.monomials.extend(monomials_of_degree(group.n, deg))
            self.index = {m: i for i, m in enumerate(self.monomials)}
            self.vals = [sum(m) for m in self.monomials]
            self.dim = len(self.monomials)
            self._filt = None
        else:
            self._filt = cyclic_filtration(group.m, field)
            self.vals = list(self._filt.vals)
            self.dim = group.m
            self._adapted_cols = [
                [self._filt.adapted[b][j] for b in range(self.dim)]
                for j in range(self.dim)
            ]  # row j of change-of-basis: monomial coord j of each adapted vec
            self._adapted_inv = self._invert_adapted()

    def _invert_adapted(self):
        # solve P X = I where columns of P are the adapted vectors
        field = self.field
        m = self.dim
        P = [[self._filt.adapted[b][i] for b in range(m)] for i in range(m)]
        aug = [P[i] + linalg.unit_vector(field, m, i) for i in range(m)]
        red, pivots = linalg.rref(field, aug)
        if len(pivots) != m:
            raise CrossCheckError("adapted basis is singular")
        return [row[m:] for row in red]

    def offset(self, s: int) -> int:
        """First basis index with valuation >= s."""
        if s <= 0:
            return 0
        lo, hi = 0, self.dim
        while lo < hi:
            mid = (lo + hi) // 2
            if self.vals[mid] < s:
                lo = mid + 1
            else:
                hi = mid
        return lo

    def reduce(self, elem: GroupRingElem):
        """Adapted coordinates of the image of elem in the model."""
        field = self.field
        if self.group.kind == "free_abelian":
            out = linalg.zeros(field, self.dim)
            for key, coeff in elem.terms.items():
                for i, beta in enumerate(self.monomials):
                    c = 1
                    for a, b in zip(key, beta):
                        c *= _binom(a, b)
                        if c == 0:
                            break
                    if c:
                        out[i] = out[i] + coeff * field.from_int(c)
            return out
        mono = linalg.zeros(field, self.dim)
        for key, coeff in elem.terms.items():
            mono[key] = mono[key] + coeff
        return linalg.mat_vec(field, self._adapted_inv, mono)

    def mult_matrix(self, elem: GroupRingElem):
        """Matrix of v -> v * elem in adapted coordinates (columns = images
        of basis vectors)."""
        field = self.field
        n = self.dim
        out = [[field.zero() for _ in range(n)] for _ in range(n)]
        if self.group.kind == "free_abelian":
            red = self.reduce(elem)
            for col, alpha in enumerate(self.monomials):
                da = sum(alpha)
                for i, beta in enumerate(self.monomials):
                    if self.vals[i] + da >= self.M:
                        continue
                    gamma = tuple(a + b for a, b in zip(alpha, beta))
                    out[self.index[gamma]][col] = red[i]
            return out
        # cyclic: multiply in monomial coordinates, conjugate by the basis
        m = self.group.m
        for col in range(n):
            vec_mono = [self._filt.adapted[col][j] for j in range(m)]
            prod = linalg.zeros(field, m)
            for key, coeff in elem.terms.items():
                for j in range(m):
                    if not vec_mono[j].is_zero():
                        prod[(j + key) % m] = prod[(j + key) % m] + vec_mono[j] * coeff
            img = linalg.mat_vec(field, self._adapted_inv, prod)
            for i in range(n):
                out[i][col] = img[i]
        return out

    def label(self, i: int) -> str:
        if self.group.kind == "free_abelian":
            mono = self.monomials[i]
            if not any(mono):
                return "1"
            names = (
                ["x"] if self.group.n == 1 else [f"x{j + 1}" for j in range(self.group.n)]
            )
            return "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(names, mono) if e
            )
        return f"v{i}"


def _binom(a: int, k: int) -> int:
    num = 1
    for j in range(k):
        num *= a - j
    return num // math.factorial(k)


class PageTable:
    """Dimensions and d^r ranks of one page over a window of (s, q)."""

    def __init__(self, r, entries, d_ranks, window):
        self.r = r
        self.entries = entries  # (s, q) -> dim
        self.d_ranks = d_ranks  # (s, q) -> rank of d^r out of that spot
        self.window = window    # (S_max, Q_max)

    def dim(self, s, q):
        return self.entries.get((s, q), 0)

    def row(self, q):
        return [self.dim(s, q) for s in range(self.window[0] + 1)]

    def to_json(self):
        S, Q = self.window
        return {
            "page": self.r,
            "entries": [
                {"s": s, "q": q, "dim": self.dim(s, q), "d_rank": self.d_ranks.get((s, q), 0)}
                for q in range(Q + 1)
                for s in range(S + 1)
            ],
        }

    def to_text(self):
        S, Q = self.window
        lines = [f"page E^{self.r}  (rows q, columns filtration s; dim/d-rank)"]
        header = "q\\s " + " ".join(f"{s:>7}" for s in range(S + 1))
        lines.append(header)
        for q in range(Q, -1, -1):
            cells = []
            for s in range(S + 1):
                d = self.dim(s, q)
                rk = self.d_ranks.get((s, q), 0)
                cells.append(f"{d}/{rk}" if rk else f"{d}  ")
            lines.append(f"{q:>3} " + " ".join(f"{c:>7}" for c in cells))
        return "\n".join(lines)


class PageComputation:
    """Shared state for computing pages of one complex over one window."""

    def __init__(self, C, R_max: int, S_max: int):
        if not C.field.is_field:
            raise UnsupportedCoefficients(
                "spectral sequence needs field coefficients; reduce Z "
                "coefficients to a field first"
            )
        if R_max < 1 or S_max < 0:
            raise ValidationError("window needs R_max >= 1 and S_max >= 0")
        self.C = C
        self.field = C.field
        self.R_max = R_max
        self.S_max = S_max
        self.M = S_max + R_max
        self.model = FiltrationModel(C.group, C.field, self.M)
        self.Q = C.top
        self._bt = {}
        self._z = {}

    # -- truncated complex ----------------------------------------------------

    def vdim(self, q: int) -> int:
        if 0 <= q <= self.Q:
            return self.model.dim * self.C.dims[q]
        return 0

    def boundary_matrix(self, q: int):
        """Truncated boundary V_q -> V_{q-1}; global index b * ncells + c."""
        if q in self._bt:
            return self._bt[q]
        field = self.field
        rows, cols = self.vdim(q - 1), self.vdim(q)
        mat = [[field.zero() for _ in range(cols)] for _ in range(rows)]
        if rows and cols:
            nsrc = self.C.dims[q]
            ndst = self.C.dims[q - 1]
            bd = self.C.boundary(q)
            for i in range(ndst):
                for j in range(nsrc):
                    a = bd[i][j]
                    if a.is_zero():
                        continue
                    mult = self.model.mult_matrix(a)
                    for bp in range(self.model.dim):
                        for b in range(self.model.dim):
                            x = mult[bp][b]
                            if not x.is_zero():
                                mat[bp * ndst + i][b * nsrc + j] = x
        self._bt[q] = mat
        return mat

    def _suffix_indices(self, q: int, s: int):
        ncells = self.C.dims[q] if 0 <= q <= self.Q else 0
        start = self.model.offset(s) * ncells
        return range(start, self.model.dim * ncells)

    def apply_boundary(self, q: int, vec):
        if self.vdim(q - 1) == 0:
            return []
        return linalg.mat_vec(self.field, self.boundary_matrix(q), vec)

    def z_space(self, q: int, s: int, r: int):
        """Basis of Z^r_{-s}[q] = {z in F^s V_q : dz in F^{s+r} V_{q-1}}.

        The filtration is bounded above by F^0 = C, so a negative index s
        means F^0 while the target index s + r stays absolute.
        """
        src = max(s, 0)
        tgt = s + r
        key = (q, src, tgt)
        if key in self._z:
            return self._z[key]
        field = self.field
        n = self.vdim(q)
        if n == 0:
            basis = []
        elif tgt <= src:
            # d preserves the filtration, so the condition is vacuous
            basis = [linalg.unit_vector(field, n, g) for g in self._suffix_indices(q, src)]
        else:
            cols = list(self._suffix_indices(q, src))
            if not cols:
                basis = []
            else:
                constraint = []
                if self.vdim(q - 1):
                    bt = self.boundary_matrix(q)
                    row_stop = self.model.offset(tgt) * self.C.dims[q - 1]
                    constraint = [[bt[i][g] for g in cols] for i in range(row_stop)]
                small = linalg.kernel_basis(field, constraint, ncols=len(cols))
                basis = []
                for sv in small:
                    v = linalg.zeros(field, n)
                    for g, x in zip(cols, sv):
                        v[g] = x
                    basis.append(v)
        self._z[key] = basis
        return basis

    def _denominator(self, q: int, s: int, r: int):
        """Spanning set of Z^{r-1}_{-(s+1)}[q] + d Z^{r-1}_{-(s+1-r)}[q+1]."""
        out = list(self.z_space(q, s + 1, r - 1))
        for w in self.z_space(q + 1, s + 1 - r, r - 1):
            out.append(self.apply_boundary(q + 1, w))
        return out

    def entry_dim(self, r: int, s: int, q: int) -> int:
        if q < 0 or q > self.Q or s < 0:
            return 0
        num = self.z_space(q, s, r)
        if not num:
            return 0
        den = self._denominator(q, s, r)
        return len(num) - linalg.span_rank(self.field, den)

    def d_rank(self, r: int, s: int, q: int) -> int:
        """Rank of d^r out of position (-s, s+q)."""
        if q <= 0 or q > self.Q or s < 0:
            return 0
        src = self.z_space(q, s, r)
        if not src:
            return 0
        imgs = [self.apply_boundary(q, v) for v in src]
        den = self._denominator(q - 1, s + r, r)
        base = linalg.span_rank(self.field, den)
        return linalg.span_rank(self.field, den + imgs) - base

    # -- pages -----------------------------------------------------------------

    def page(self, r: int) -> PageTable:
        entries = {}
        d_ranks = {}
        for q in range(self.Q + 1):
            for s in range(self.S_max + 1):
                d = self.entry_dim(r, s, q)
                if d:
                    entries[(s, q)] = d
                rk = self.d_rank(r, s, q)
                if rk:
                    d_ranks[(s, q)] = rk
        return PageTable(r, entries, d_ranks, (self.S_max, self.Q))

    def pages(self) -> list[PageTable]:
        tables = [self.page(r) for r in range(1, self.R_max + 1)]
        self._check_bookkeeping(tables)
        return tables

    def _check_bookkeeping(self, tables):
        # dim E^{r+1} = dim E^r - rank(in) - rank(out) on the window interior
        for idx in range(len(tables) - 1):
            cur, nxt = tables[idx], tables[idx + 1]
            r = cur.r
            for q in range(self.Q + 1):
                for s in range(self.S_max + 1):
                    out_rk = cur.d_ranks.get((s, q), 0)
                    in_rk = cur.d_ranks.get((s - r, q + 1), 0) if s - r >= 0 else 0
                    expect = cur.dim(s, q) - out_rk - in_rk
                    if nxt.dim(s, q) != expect:
                        raise CrossCheckError(
                            f"page bookkeeping failed at r={r}, s={s}, q={q}: "
                            f"{nxt.dim(s, q)} != {expect}"
                        )

    # -- canonical d^1 ----------------------------------------------------------

    def gr_indices(self, s: int):
        return range(self.model.offset(s), self.model.offset(s + 1))

    def canonical_e1_vectors(self, q: int, s: int, hreps):
        """Vectors representing (gr^s basis) x (homology basis) in V_q."""
        ncells = self.C.dims[q]
        out = []
        for b in self.gr_indices(s):
            for h in hreps:
                v = linalg.zeros(self.field, self.vdim(q))
                for c in range(ncells):
                    v[b * ncells + c] = h[c]
                out.append(v)
        return out

    def d1_matrix(self, q: int, s: int = 0):
        """Matrix of d^1: E^1_{-s,s+q} -> E^1_{-s-1,s+q} in the canonical
        bases (gr^s basis x H_q basis) -> (gr^{s+1} basis x H_{q-1} basis).
        Rows ordered gr-index-major."""
        if q < 1 or q > self.Q:
            return []
        hsrc, _ = homology_data(self.C, q)
        htgt, _ = homology_data(self.C, q - 1)
        src = self.canonical_e1_vectors(q, s, hsrc)
        tgt = self.canonical_e1_vectors(q - 1, s + 1, htgt)
        den = self._denominator(q - 1, s + 1, 1)
        cols = []
        for v in src:
            w = self.apply_boundary(q, v)
            coords = linalg.solve_mod_subspace(self.field, tgt, den, w)
            cols.append(coords)
        return [[cols[j][i] for j in range(len(cols))] for i in range(len(tgt))]

    def entry_basis(self, r: int, s: int, q: int):
        """Representative vectors (in V_q coordinates) for a basis of
        E^r_{-s, s+q}: numerator basis vectors extending the denominator."""
        num = self.z_space(q, s, r)
        den = self._denominator(q, s, r)
        span = list(den)
        out = []
        for v in num:
            if not linalg.in_span(self.field, span, v):
                span.append(v)
                out.append(v)
        return out

    def einf_row_dims(self, q: int) -> list[int]:
        """Window dims of the last computed page in degree q."""
        last = self.page(self.R_max)
        return [last.dim(s, q) for s in range(self.S_max + 1)]


def compute_pages(C, R_max: int, S_max: int) -> list[PageTable]:
    """Pages E^1..E^{R_max} with entries exact for all s <= S_max."""
    return PageComputation(C, R_max, S_max).pages()


def window_collapse_page(tables: list[PageTable]):
    """First page index r such that from r on, all windowed differentials
    vanish and the entries stay constant (necessary-only evidence for E^oo;
    the authoritative answer for G = Z is the SNF route)."""
    for i, tab in enumerate(tables):
        stable = all(
            not later.d_ranks and later.entries == tab.entries
            for later in tables[i:]
        )
        if stable:
            return tab.r
    return None


# ---------------------------------------------------------------------------
# Homology bases over k (canonical, shared by the engine and the closed form)
# ---------------------------------------------------------------------------


def homology_data(C, q: int):
    """(homology representative cycles, boundary-space basis) for H_q(X, k).

    Representatives are kernel vectors of the epsilon boundary chosen by
    deterministic greedy extension of the boundary space.
    """
    if q < 0 or q > C.top:
        return [], []
    field = C.field
    ncells = C.dims[q]
    eps = C.epsilon_boundary(q)
    cycles = linalg.kernel_basis(field, eps, ncols=ncells)
    bcols = []
    if q < C.top:
        nxt = C.epsilon_boundary(q + 1)
        for j in range(C.dims[q + 1]):
            bcols.append([nxt[i][j] for i in range(ncells)])
    bbasis = []
    for v in bcols:
        if not linalg.in_span(field, bbasis, v):
            bbasis.append(v)
    hreps = []
    span = list(bbasis)
    for v in cycles:
        if not linalg.in_span(field, span, v):
            span.append(v)
            hreps.append(v)
    return hreps, bbasis


def d1_closed_form(C):
    """The d^1 differential gr^0 x H_q -> gr^1 x H_{q-1} per degree, computed
    without the page engine: lift each homology basis cycle to C_q(X, kG),
    apply the equivariant boundary once, reduce entries mod J^2, and express
    the gr^1 components back in the homology basis.

    Returns {q: matrix over k}, rows ordered gr^1-index-major, matching
    PageComputation.d1_matrix(q, 0).
    """
    if not C.field.is_field:
        raise UnsupportedCoefficients("closed-form d1 needs field coefficients")
    field = C.field
    model = FiltrationModel(C.group, C.field, 2)
    gr1 = list(range(model.offset(1), model.offset(2)))
    out = {}
    for q in range(1, C.top + 1):
        hsrc, _ = homology_data(C, q)
        htgt, btgt = homology_data(C, q - 1)
        bd = C.boundary(q)
        ncells_tgt = C.dims[q - 1]
        matrix = [[field.zero() for _ in hsrc] for _ in range(len(gr1) * len(htgt))]
        for j, h in enumerate(hsrc):
            # w_i = sum_c bd[i][c] * h[c] in kG, one entry per target cell
            images = []
            for i in range(ncells_tgt):
                w = GroupRingElem.zero(C.group, field)
                for c in range(C.dims[q]):
                    if not h[c].is_zero() and not bd[i][c].is_zero():
                        w = w + bd[i][c].scale(h[c])
                if not w.augmentation().is_zero():
                    raise CrossCheckError("boundary of a cycle lift not in J")
                images.append(model.reduce(w))
            for gi, b in enumerate(gr1):
                yvec = [images[i][b] for i in range(ncells_tgt)]
                coords = linalg.solve_mod_subspace(field, htgt, btgt, yvec)
                for l, cval in enumerate(coords):
                    matrix[gi * len(htgt) + l][j] = cval
        out[q] = matrix
    return out


# ---------------------------------------------------------------------------
# Reznikov case: full collapse for G = Z_{p^r}, char k = p
# ---------------------------------------------------------------------------


def reznikov_collapse(C, S_max: int | None = None):
    """All pages up to E^{p^r} = E^oo for G = Z_{p^r} over characteristic p,
    with total graded dimensions checked against dim_k H_q(X, kZ_{p^r})
    computed independently by plain k-linear rank arithmetic.

    Returns (tables, homology_dims).
    """
    group = C.group
    if group.kind != "cyclic" or group.prime_power is None:
        raise ValidationError("Reznikov collapse needs G = Z_{p^r}")
    p, r = group.prime_power
    if C.field.characteristic != p:
        raise ValidationError(
            f"field characteristic {C.field.characteristic} != p = {p}"
        )
    n = group.m  # p^r; J^n = 0
    if S_max is None:
        S_max = n - 1
    comp = PageComputation(C, R_max=n, S_max=S_max)
    tables = comp.pages()
    hom_dims = []
    for q in range(C.top + 1):
        rk_q = _k_rank(comp, q)
        rk_q1 = _k_rank(comp, q + 1)
        hom_dims.append(comp.vdim(q) - rk_q - rk_q1)
    last = tables[-1]
    for q in range(C.top + 1):
        total = sum(last.dim(s, q) for s in range(S_max + 1))
        if total != hom_dims[q]:
            raise CrossCheckError(
                f"E^infinity total {total} != dim H_{q} = {hom_dims[q]}"
            )
    return tables, hom_dims


def _k_rank(comp: PageComputation, q: int) -> int:
    if q < 1 or q > comp.Q:
        return 0
    mat = comp.boundary_matrix(q)
    if not mat or not mat[0]:
        return 0
    return linalg.rank_of(comp.field, mat)


def jordan_square_annihilates(C, q: int) -> bool:
    """Whether J^2 kills H_q(X, (kZ_{p^r})_nu): the action of (t-1)^2 on every
    cycle representative lands in the boundary space."""
    group = C.group
    if group.kind != "cyclic":
        raise ValidationError("J^2 check is for cyclic groups")
    comp = PageComputation(C, R_max=2, S_max=max(group.m - 1, 1))
    field = C.field
    bt_q = comp.boundary_matrix(q)
    cycles = linalg.kernel_basis(field, bt_q if comp.vdim(q - 1) else [], ncols=comp.vdim(q))
    boundary_vecs = []
    if q + 1 <= comp.Q:
        bt_q1 = comp.boundary_matrix(q + 1)
        for j in range(comp.vdim(q + 1)):
            boundary_vecs.append([bt_q1[i][j] for i in range(comp.vdim(q))])
    t = GroupRingElem.monomial(group, field, 1)
    one = GroupRingElem.one(group, field)
    sq = (t - one) * (t - one)
    mult = comp.model.mult_matrix(sq)
    ncells = C.dims[q]
    for v in cycles:
        w = linalg.zeros(field, comp.vdim(q))
        for b in range(comp.model.dim):
            for c in range(ncells):
                x = v[b * ncells + c]
                if x.is_zero():
                    continue
                for bp in range(comp.model.dim):
                    if not mult[bp][b].is_zero():
                        w[bp * ncells + c] = w[bp * ncells + c] + mult[bp][b] * x
        if not linalg.in_span(field, boundary_vecs, w):
            return False
    return True
