"""Module theory over the PID Lambda = k[t^{+-1}] and over Z: Smith normal
form, decomposition of H_q(X, kZ_nu) into free and primary parts, the
associated-graded module of the (t-1)-adic filtration, and the
monodromy-triviality report.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .coeffs import FieldDescriptor
from .errors import (CoefficientError, CrossCheckError, UnsupportedCoefficients,
                     ValidationError)
from .groupring import GroupDescriptor, GroupRingElem

_Z1 = GroupDescriptor.free_abelian(1)


# ---------------------------------------------------------------------------
# Euclidean contexts: Z with |.|, Lambda with degree span
# ---------------------------------------------------------------------------


class _IntCtx:
    """Z as a Euclidean domain for the SNF engine (plain Python ints)."""

    @staticmethod
    def is_zero(a):
        return a == 0

    @staticmethod
    def norm(a):
        return abs(a)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    one = 1
    zero = 0

    @staticmethod
    def divstep(pivot, entry):
        """(scale, q) with scale*entry - q*pivot of norm < |pivot|; the scale
        is always the unit 1 over Z (floor division suffices)."""
        q = entry // pivot if pivot > 0 else -(entry // -pivot)
        return 1, q

    @staticmethod
    def exact_div(a, b):
        q, r = divmod(a, b)
        if r != 0:
            raise CoefficientError("not divisible")
        return q

    @staticmethod
    def gcd_bezout(a, b):
        """(g, sigma, tau, alpha, beta): sigma a + tau b = g = gcd >= 0,
        alpha = a/g, beta = b/g, sigma alpha + tau beta = 1.

        When a divides b, tau is guaranteed to be 0 (the pivot row/column is
        only unit-rescaled), which is what makes the block-clearing loop
        terminate."""
        if b % a == 0:
            g = abs(a)
            sigma = 1 if a > 0 else -1
            return g, sigma, 0, a // g, b // g
        old_r, r = a, b
        old_s, s = 1, 0
        old_t, t = 0, 1
        while r != 0:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        g, sigma, tau = old_r, old_s, old_t
        if g < 0:
            g, sigma, tau = -g, -sigma, -tau
        return g, sigma, tau, a // g, b // g

    @staticmethod
    def unit_normalize(a):
        """(unit u, canonical a') with a = u * a'; canonical is nonnegative."""
        return (-1, -a) if a < 0 else (1, a)

    @staticmethod
    def unit_inverse(u):
        return u

    @staticmethod
    def is_unit(a):
        return a in (1, -1)

    @staticmethod
    def content_unit(entries):
        # content is not a unit in Z, so no rescaling is allowed
        return None


class _LaurentCtx:
    """Lambda = k[t^{+-1}] with degree span as Euclidean norm after stripping
    the unit part t^{lowest exponent}."""

    def __init__(self, field: FieldDescriptor):
        if not field.is_field:
            raise UnsupportedCoefficients("Laurent SNF needs field coefficients")
        self.field = field
        self.zero = GroupRingElem.zero(_Z1, field)
        self.one = GroupRingElem.one(_Z1, field)

    @staticmethod
    def is_zero(a):
        return a.is_zero()

    @staticmethod
    def span(a):
        exps = [k[0] for k in a.terms]
        return min(exps), max(exps)

    def norm(self, a):
        lo, hi = self.span(a)
        return hi - lo

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    def divstep(self, pivot, entry):
        """Pseudo-division: (scale, q) with scale*entry - q*pivot of norm
        < norm(pivot), where scale is a power of the pivot's leading
        coefficient (a unit scalar).  No coefficient division happens."""
        one = self.field.one()
        unit_one = GroupRingElem.monomial(_Z1, self.field, (0,), one)
        if entry.is_zero():
            return unit_one, self.zero
        plo, phi = self.span(pivot)
        pd = phi - plo
        plead = pivot.terms[(phi,)]
        q = self.zero
        rem = entry
        scale = one
        while not rem.is_zero():
            rlo, rhi = self.span(rem)
            if rhi - rlo < pd:
                break
            c = rem.terms[(rhi,)]
            mono = GroupRingElem.monomial(_Z1, self.field, (rhi - phi,), c)
            q = q.scale(plead) + mono
            rem = rem.scale(plead) - mono * pivot
            scale = scale * plead
        return GroupRingElem.monomial(_Z1, self.field, (0,), scale), q

    def exact_div(self, a, b):
        scale, q = self.divstep(b, a)
        if not (a * scale - q * b).is_zero():
            raise CoefficientError("not divisible in Lambda")
        inv = self.unit_inverse(scale)
        return inv * q

    def _strip(self, a):
        """Unit making a canonical (monomial part, sign/lead, content)."""
        if a.is_zero():
            return None
        unit, canon = self.unit_normalize(a)
        total = self.unit_inverse(unit)
        c = self.content_unit([canon])
        if c is not None:
            total = c * total
        return total

    def gcd_bezout(self, a, b):
        """(g, sigma, tau, alpha, beta) with sigma a + tau b = g, a = alpha g,
        b = beta g, and sigma alpha + tau beta = 1.

        Primitive pseudo-Euclid: every remainder is stripped to a primitive
        canonical polynomial (a unit rescaling), which is what keeps the
        coefficient growth of the chain polynomial.  When a divides b, tau is
        guaranteed to be 0 so the pivot row/column is only unit-rescaled."""
        one = GroupRingElem.monomial(_Z1, self.field, (0,), self.field.one())
        try:
            beta = self.exact_div(b, a)
        except CoefficientError:
            beta = None
        if beta is not None:
            unit = self._strip(a) or one
            g = unit * a
            inv = self.unit_inverse(unit)
            return g, unit, self.zero, inv, inv * beta
        r0, s0, t0 = a, one, self.zero
        r1, s1, t1 = b, self.zero, one
        u = self._strip(r0)
        if u is not None:
            r0, s0, t0 = u * r0, u * s0, u * t0
        u = self._strip(r1)
        if u is not None:
            r1, s1, t1 = u * r1, u * s1, u * t1
        while not r1.is_zero():
            scale, q = self.divstep(r1, r0)
            r2 = scale * r0 - q * r1
            s2 = scale * s0 - q * s1
            t2 = scale * t0 - q * t1
            u = self._strip(r2)
            if u is not None:
                r2, s2, t2 = u * r2, u * s2, u * t2
            r0, s0, t0 = r1, s1, t1
            r1, s1, t1 = r2, s2, t2
        g, sigma, tau = r0, s0, t0
        alpha = self.exact_div(a, g)
        beta = self.exact_div(b, g)
        return g, sigma, tau, alpha, beta

    def unit_normalize(self, a):
        """(unit, canonical) with a = unit * canonical; canonical is a monic
        polynomial with nonzero constant term (lowest exponent 0)."""
        if a.is_zero():
            return self.one, a
        lo, hi = self.span(a)
        lead = a.terms[(hi,)]
        unit = GroupRingElem.monomial(_Z1, self.field, (lo,), lead)
        return unit, self.unit_inverse(unit) * a

    def unit_inverse(self, u):
        lo = next(iter(u.terms))[0]
        return GroupRingElem.monomial(_Z1, self.field, (-lo,), u.terms[(lo,)].inverse())

    def is_unit(self, a):
        return len(a.terms) == 1

    def content_unit(self, entries):
        """Scalar unit making the coefficient content of a row/column 1.

        Over Q this is lcm(denominators)/gcd(numerators): content extraction
        is what keeps coefficient growth in check during elimination.  Over
        other coefficient fields there is nothing to gain."""
        if self.field.kind != "Q":
            return None
        num_gcd, den_lcm = 0, 1
        for e in entries:
            for c in e.terms.values():
                v = c.value
                num_gcd = math.gcd(num_gcd, v.numerator)
                den_lcm = den_lcm * v.denominator // math.gcd(den_lcm, v.denominator)
        if num_gcd == 0:
            return None
        scale = Fraction(den_lcm, num_gcd)
        if scale == 1:
            return None
        return GroupRingElem.monomial(_Z1, self.field, (0,), self.field.from_fraction(scale))


class SNFResult:
    """Diagonal entries plus transforms with U A V = D; each diagonal entry
    divides the next, and U, V are invertible over the ring."""

    def __init__(self, diagonal, U, V, shape):
        self.diagonal = diagonal
        self.U = U
        self.V = V
        self.shape = shape

    def nonzero(self):
        return [d for d in self.diagonal if not _is_zero_entry(d)]

    def __repr__(self):
        return f"SNF(diagonal={self.diagonal})"


def _is_zero_entry(d):
    return d == 0 if isinstance(d, int) else d.is_zero()


def _identity(ctx, n):
    return [[ctx.one if i == j else ctx.zero for j in range(n)] for i in range(n)]


def _mat_mul_ctx(ctx, a, b):
    if not a or not b:
        return []
    n, k, m = len(a), len(b), len(b[0])
    out = [[ctx.zero for _ in range(m)] for _ in range(n)]
    for i in range(n):
        for l in range(k):
            x = a[i][l]
            if ctx.is_zero(x):
                continue
            for j in range(m):
                if not ctx.is_zero(b[l][j]):
                    out[i][j] = ctx.add(out[i][j], ctx.mul(x, b[l][j]))
    return out


def _snf_engine(ctx, matrix):
    """Generic SNF over a Euclidean domain.  Deterministic: pivot = entry of
    minimal norm, ties broken by lowest row then column index."""
    A = [list(row) for row in matrix]
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    U = _identity(ctx, nrows)
    V = _identity(ctx, ncols)

    def swap_rows(i, j):
        if i != j:
            A[i], A[j] = A[j], A[i]
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for row in A:
                row[i], row[j] = row[j], row[i]
            for row in V:
                row[i], row[j] = row[j], row[i]

    def content_fix_row(i):
        c = ctx.content_unit(A[i])
        if c is not None:
            A[i] = [ctx.mul(c, x) for x in A[i]]
            U[i] = [ctx.mul(c, x) for x in U[i]]

    def content_fix_col(j):
        c = ctx.content_unit([row[j] for row in A])
        if c is not None:
            for row in A:
                row[j] = ctx.mul(c, row[j])
            for row in V:
                row[j] = ctx.mul(c, row[j])

    def row_block(i):
        # determinant-1 transform on rows (t, i) putting gcd(A[t][t], A[i][t])
        # in the pivot and 0 below it
        g, sg, tu, al, be = ctx.gcd_bezout(A[t][t], A[i][t])
        new_t = [ctx.add(ctx.mul(sg, x), ctx.mul(tu, y)) for x, y in zip(A[t], A[i])]
        new_i = [ctx.sub(ctx.mul(al, y), ctx.mul(be, x)) for x, y in zip(A[t], A[i])]
        A[t], A[i] = new_t, new_i
        new_tu = [ctx.add(ctx.mul(sg, x), ctx.mul(tu, y)) for x, y in zip(U[t], U[i])]
        new_iu = [ctx.sub(ctx.mul(al, y), ctx.mul(be, x)) for x, y in zip(U[t], U[i])]
        U[t], U[i] = new_tu, new_iu
        content_fix_row(t)
        content_fix_row(i)

    def col_block(j):
        g, sg, tu, al, be = ctx.gcd_bezout(A[t][t], A[t][j])
        for row in A:
            x, y = row[t], row[j]
            row[t] = ctx.add(ctx.mul(sg, x), ctx.mul(tu, y))
            row[j] = ctx.sub(ctx.mul(al, y), ctx.mul(be, x))
        for row in V:
            x, y = row[t], row[j]
            row[t] = ctx.add(ctx.mul(sg, x), ctx.mul(tu, y))
            row[j] = ctx.sub(ctx.mul(al, y), ctx.mul(be, x))
        content_fix_col(t)
        content_fix_col(j)

    t = 0
    while t < min(nrows, ncols):
        # find minimal-norm nonzero entry in the remaining block
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if not ctx.is_zero(A[i][j]):
                    nm = ctx.norm(A[i][j])
                    if best is None or nm < best[0]:
                        best = (nm, i, j)
        if best is None:
            break
        _, bi, bj = best
        swap_rows(t, bi)
        swap_cols(t, bj)
        # alternate clearing column t and row t; each col_block may disturb
        # the column, so iterate until both are clear
        while True:
            for i in range(t + 1, nrows):
                if not ctx.is_zero(A[i][t]):
                    row_block(i)
            row_dirty = False
            for j in range(t + 1, ncols):
                if not ctx.is_zero(A[t][j]):
                    col_block(j)
                    row_dirty = True
            if not row_dirty:
                break
        # enforce divisibility: pivot must divide every remaining entry
        fixed = False
        for i in range(t + 1, nrows):
            if fixed:
                break
            for j in range(t + 1, ncols):
                if ctx.is_zero(A[i][j]):
                    continue
                try:
                    ctx.exact_div(A[i][j], A[t][t])
                except CoefficientError:
                    # add offending row to row t and restart this pivot
                    A[t] = [ctx.add(a, b) for a, b in zip(A[t], A[i])]
                    U[t] = [ctx.add(a, b) for a, b in zip(U[t], U[i])]
                    fixed = True
                    break
        if fixed:
            continue
        t += 1

    # normalize diagonal entries; absorb units into U rows
    for i in range(min(nrows, ncols)):
        if ctx.is_zero(A[i][i]):
            continue
        unit, canon = ctx.unit_normalize(A[i][i])
        if not ctx.is_zero(ctx.sub(A[i][i], canon)):
            inv = ctx.unit_inverse(unit)
            A[i] = [ctx.mul(inv, x) for x in A[i]]
            U[i] = [ctx.mul(inv, x) for x in U[i]]
    diag = [A[i][i] for i in range(min(nrows, ncols))]
    return diag, U, V, A


def smith_normal_form(matrix) -> SNFResult:
    """SNF of a matrix over Z (int entries) or Lambda (GroupRingElem over kZ).

    Postconditions U.A.V = D and the divisibility chain are verified by
    multiplication before returning.
    """
    rows = [list(r) for r in matrix]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    if nrows and ncols and isinstance(rows[0][0], GroupRingElem):
        ctx = _LaurentCtx(rows[0][0].field)
    else:
        ctx = _IntCtx()
    diag, U, V, _ = _snf_engine(ctx, rows)
    result = SNFResult(diag, U, V, (nrows, ncols))
    _verify_snf(ctx, matrix, result)
    return result


def _verify_snf(ctx, original, result: SNFResult):
    A = [list(r) for r in original]
    prod = _mat_mul_ctx(ctx, _mat_mul_ctx(ctx, result.U, A), result.V)
    nrows, ncols = result.shape
    for i in range(nrows):
        for j in range(ncols):
            expect = result.diagonal[i] if i == j and i < len(result.diagonal) else ctx.zero
            if not ctx.is_zero(ctx.sub(prod[i][j], expect)):
                raise CrossCheckError("SNF verification failed: U A V != D")
    nz = [d for d in result.diagonal if not ctx.is_zero(d)]
    for a, b in zip(nz, nz[1:]):
        try:
            ctx.exact_div(b, a)
        except CoefficientError:
            raise CrossCheckError("SNF divisibility chain violated") from None


# ---------------------------------------------------------------------------
# Kernels, presentation matrices, homology decomposition
# ---------------------------------------------------------------------------


def _kernel_basis_pid(matrix, ctx, ncols: int) -> list[list]:
    """Basis of the kernel of `matrix` over the PID, via the SNF transforms:
    the columns of V matching zero diagonal entries."""
    nrows = len(matrix)
    if ncols == 0:
        return []
    if nrows == 0:
        return [[ctx.one if i == j else ctx.zero for i in range(ncols)] for j in range(ncols)]
    diag, U, V, _ = _snf_engine(ctx, matrix)
    kernel_cols = [j for j in range(ncols) if j >= len(diag) or ctx.is_zero(diag[j])]
    return [[V[i][j] for i in range(ncols)] for j in kernel_cols]


def _solve_in_column_span(K_cols, target, ctx):
    """Solve K y = target where the columns K_cols are independent; exact
    divisions must succeed (target must lie in the span)."""
    n = len(target)
    k = len(K_cols)
    if k == 0:
        if any(not ctx.is_zero(x) for x in target):
            raise CoefficientError("target outside zero span")
        return []
    matrix = [[K_cols[j][i] for j in range(k)] for i in range(n)]
    diag, U, V, _ = _snf_engine(ctx, matrix)
    rhs = [_dot(ctx, U[i], target) for i in range(n)]
    z = []
    for i in range(n):
        if i < len(diag) and not ctx.is_zero(diag[i]):
            z.append(ctx.exact_div(rhs[i], diag[i]))
        elif not ctx.is_zero(rhs[i]):
            raise CoefficientError("target outside column span")
    z += [ctx.zero] * (k - len(z))
    return [_dot(ctx, V[i], z) for i in range(k)]


def _dot(ctx, row, vec):
    acc = ctx.zero
    for a, b in zip(row, vec):
        if not ctx.is_zero(a) and not ctx.is_zero(b):
            acc = ctx.add(acc, ctx.mul(a, b))
    return acc


class LaurentModuleDecomp:
    """Free rank plus primary-part data of a f.g. k[t^{+-1}]-module.

    tminus1_blocks lists the sizes of (t-1)-primary Jordan blocks; the
    other_primary entries (f, exponent, multiplicity) all satisfy f(1) != 0
    and are left unfactored beyond separating the (t-1) part.
    """

    def __init__(self, free_rank, invariant_factors, tminus1_blocks, other_primary, field):
        self.free_rank = free_rank
        self.invariant_factors = invariant_factors
        self.tminus1_blocks = sorted(tminus1_blocks)
        self.other_primary = other_primary
        self.field = field

    @property
    def separated(self) -> bool:
        """The J-adic filtration is separated iff there is no f(1) != 0 part."""
        return not self.other_primary

    def einf_dims(self, s_max: int) -> list[int]:
        return [
            self.free_rank + sum(1 for b in self.tminus1_blocks if b > s)
            for s in range(s_max + 1)
        ]

    def to_json(self, q=None):
        doc = {
            "free_rank": self.free_rank,
            "t_minus_1_blocks": list(self.tminus1_blocks),
            "other_primary": [
                {"poly": str(f), "exp": e, "mult": m} for f, e, m in self.other_primary
            ],
            "separated": self.separated,
        }
        if q is not None:
            doc["q"] = q
        return doc

    def __repr__(self):
        return (
            f"LaurentModuleDecomp(free={self.free_rank}, "
            f"blocks={self.tminus1_blocks}, other={self.other_primary})"
        )


def presentation_matrix(C, q: int):
    """Presentation matrix of H_q = ker d_q / im d_{q+1} over Lambda: kernel
    basis via SNF transforms, then the image expressed in that basis."""
    if C.group != _Z1:
        raise ValidationError("homology decomposition requires group Z")
    if not C.field.is_field:
        raise UnsupportedCoefficients("field coefficients required")
    ctx = _LaurentCtx(C.field)
    dq = C.boundary(q)
    K = _kernel_basis_pid(dq, ctx, C.dims[q] if q <= C.top else 0)
    if q >= C.top:
        image_cols = []
    else:
        dq1 = C.boundary(q + 1)
        image_cols = [[dq1[i][j] for i in range(len(dq1))] for j in range(C.dims[q + 1])]
    Y = [
        _solve_in_column_span(K, col, ctx) for col in image_cols
    ]  # rows of Y = coordinates of each image column
    # presentation matrix: len(K) x #image-columns
    return [[Y[j][i] for j in range(len(Y))] for i in range(len(K))], len(K)


def homology_decomposition(C, q: int) -> LaurentModuleDecomp:
    """Eq-style structure data of H_q(X, kZ_nu): run SNF on a presentation
    matrix, strip units, and split each invariant factor into its (t-1)-adic
    part and an f(1) != 0 cofactor."""
    P, k = presentation_matrix(C, q)
    ctx = _LaurentCtx(C.field)
    field = C.field
    if not P or not P[0]:
        diag = []
    else:
        diag = smith_normal_form(P).diagonal
    tm1 = GroupRingElem.monomial(_Z1, field, (1,)) - GroupRingElem.one(_Z1, field)
    invariant_factors = []
    blocks = []
    others = {}
    nonzero = 0
    for d in diag:
        if ctx.is_zero(d):
            continue
        nonzero += 1
        _, canon = ctx.unit_normalize(d)
        if ctx.is_unit(canon):
            continue
        invariant_factors.append(canon)
        e = 0
        rem = canon
        while True:
            if rem.augmentation().is_zero():  # (t-1) | rem  iff  rem(1) = 0
                rem = ctx.exact_div(rem, tm1)
                e += 1
            else:
                break
        if e:
            blocks.append(e)
        _, rem = ctx.unit_normalize(rem)
        if not ctx.is_unit(rem):
            key = str(rem)
            if key in others:
                f, exp, mult = others[key]
                others[key] = (f, exp, mult + 1)
            else:
                others[key] = (rem, 1, 1)
    free_rank = k - nonzero
    return LaurentModuleDecomp(
        free_rank, invariant_factors, blocks, sorted(others.values(), key=lambda t: str(t[0])), field
    )


class GrModule:
    """The k[x]-module k[x]^r + sum (k[x]/x^i)^{e_i} (Einfinity shape)."""

    def __init__(self, free_rank: int, block_sizes: list[int]):
        self.free_rank = free_rank
        self.block_sizes = sorted(block_sizes)

    def dims(self, s_max: int) -> list[int]:
        return [
            self.free_rank + sum(1 for b in self.block_sizes if b > s)
            for s in range(s_max + 1)
        ]

    def __repr__(self):
        return f"GrModule(free={self.free_rank}, blocks={self.block_sizes})"


def einf_gr_module(decomp: LaurentModuleDecomp) -> GrModule:
    """gr_J H_q as a k[x]-module: the free rank survives in every degree and
    each (t-1)-block of size i contributes k[x]/x^i."""
    return GrModule(decomp.free_rank, decomp.tminus1_blocks)


def integral_torsion_check(C) -> list[bool]:
    """Torsion-freeness of H_q(X, Z) per degree, from SNF over Z of the
    epsilon-specialized shadow boundaries: torsion-free iff all invariant
    factors of d_{q+1} are 0 or +-1."""
    if C.integral_boundaries is None:
        raise UnsupportedCoefficients("integral shadow required for torsion check")
    flags = []
    for q in range(C.top + 1):
        mat = C.epsilon_boundary_int(q + 1)
        if not mat or not mat[0]:
            flags.append(True)
            continue
        diag = smith_normal_form(mat).diagonal
        flags.append(all(d in (0, 1) for d in diag))
    return flags


class MonodromyReport:
    """Per-degree decomposition data plus the three equivalent
    trivial-monodromy conditions, cross-checked against each other."""

    def __init__(self, rows, verdicts):
        self.rows = rows          # q -> dict
        self.verdicts = verdicts  # k -> bool (cumulative through degree k)

    def to_json(self):
        return {
            "degrees": self.rows,
            "trivial_through_degree": self.verdicts,
        }


def monodromy_report(C, k_max: int) -> MonodromyReport:
    """Report free/(t-1)-primary structure, Aomoto Betti numbers, and the
    equivalence of the three trivial-monodromy conditions; any disagreement
    between the SNF pipeline and the spectral-sequence pipeline is fatal."""
    from .aomoto import aomoto_betti

    if C.group != _Z1:
        raise ValidationError("monodromy report requires group Z")
    betti = aomoto_betti(C).beta
    rows = []
    cond1_all = True
    cond2_all = True
    verdicts = []
    for q in range(k_max + 1):
        if q <= C.top:
            decomp = homology_decomposition(C, q)
            gr = einf_gr_module(decomp)
            cond1 = decomp.free_rank == 0 and all(b <= 1 for b in decomp.tminus1_blocks)
            cond2 = gr.dims(1)[1] == 0  # J-action trivial iff gr^1 vanishes
        else:
            decomp = LaurentModuleDecomp(0, [], [], [], C.field)
            cond1 = cond2 = True
        beta_q = betti[q] if q < len(betti) else 0
        rows.append(
            {
                "q": q,
                "free_rank": decomp.free_rank,
                "t_minus_1_blocks": list(decomp.tminus1_blocks),
                "other_primary": [
                    {"poly": str(f), "exp": e, "mult": m} for f, e, m in decomp.other_primary
                ],
                "beta": beta_q,
                "condition_no_large_blocks": cond1,
                "condition_trivial_action": cond2,
            }
        )
        cond1_all = cond1_all and cond1
        cond2_all = cond2_all and cond2
        cond3_all = all(r["beta"] == 0 for r in rows)
        if not (cond1_all == cond2_all == cond3_all):
            raise CrossCheckError(
                f"trivial-monodromy conditions disagree through degree {q}: "
                f"(1)={cond1_all} (2)={cond2_all} (3)={cond3_all}"
            )
        verdicts.append(cond1_all)
    return MonodromyReport(rows, verdicts)
