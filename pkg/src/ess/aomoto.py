"""Aomoto complexes and their Betti numbers.

beta_q(X, nu_k) is computed as dim E^2_{-1, q+1} of the equivariant spectral
sequence with kZ coefficients, so no cup products are ever required as input.
For minimal complexes over the universal abelian cover, the universal Aomoto
complex over S = Sym(H_1) is extracted by linearizing the equivariant cochain
complex (transpose of the mod-J^2 boundary matrices).
"""

from __future__ import annotations

from .coeffs import FieldElem, rank_exact
from .errors import (InputError, MinimalityError, UnsupportedCoefficients,
                     ValidationError)
from .groupring import GroupDescriptor, GroupRingElem
from .pages import FiltrationModel, PageComputation

_Z1 = GroupDescriptor.free_abelian(1)


class AomotoData:
    """Per-degree Aomoto Betti numbers with the route that produced them."""

    def __init__(self, beta, diff_ranks, route):
        self.beta = list(beta)
        self.diff_ranks = list(diff_ranks)
        self.route = route

    def to_json(self):
        return {"beta": self.beta, "diff_ranks": self.diff_ranks, "route": self.route}

    def __repr__(self):
        return f"AomotoData(beta={self.beta}, route={self.route!r})"


def aomoto_betti(C, q_max: int | None = None) -> AomotoData:
    """Aomoto Betti numbers of (H^*(X,k), .nu_k) via the E^2 page.

    C must be the complex over kZ (base change along nu first).  Degrees past
    the complex dimension are zero-padded rather than an error.
    """
    if C.group != _Z1:
        raise ValidationError("aomoto_betti expects a complex over kZ")
    if not C.field.is_field:
        raise UnsupportedCoefficients("field coefficients required")
    comp = PageComputation(C, R_max=2, S_max=2)
    page2 = comp.page(2)
    top = C.top
    beta = [page2.dim(1, q) for q in range(top + 1)]
    page1 = comp.page(1)
    ranks = [page1.d_ranks.get((1, q), 0) for q in range(top + 1)]
    if q_max is not None and q_max + 1 > len(beta):
        beta += [0] * (q_max + 1 - len(beta))
        ranks += [0] * (q_max + 1 - len(ranks))
    return AomotoData(beta, ranks, route="E2")


class UniversalAomoto:
    """The universal Aomoto complex: free S-modules H^q x S with entrywise
    linear differentials D^q, D o D = 0 verified symbolically.

    Linear forms in e_1..e_n are represented as degree-one elements of the
    polynomial subring of k[e_1^{+-1}..], reusing the sparse group-ring type.
    """

    def __init__(self, n, field, matrices, dims):
        self.n = n
        self.field = field
        self.matrices = matrices  # q -> matrix of D^q: H^q -> H^{q+1}
        self.dims = dims          # dims[q] = dim H^q
        self.sym = GroupDescriptor.free_abelian(n)
        self._check_dd()

    def _check_dd(self):
        for q in range(len(self.matrices) - 1):
            a, b = self.matrices[q + 1], self.matrices[q]
            if not a or not b:
                continue
            for i in range(len(a)):
                for j in range(len(b[0])):
                    acc = GroupRingElem.zero(self.sym, self.field)
                    for l in range(len(b)):
                        acc = acc + a[i][l] * b[l][j]
                    if not acc.is_zero():
                        raise ValidationError(
                            f"universal Aomoto differential fails D o D = 0 at q={q}"
                        )

    def entry_strings(self, q: int):
        return [[_format_linear(e, self.n) for e in row] for row in self.matrices[q]]

    def to_json(self):
        return {
            "variables": [f"e{i + 1}" for i in range(self.n)],
            "dims": self.dims,
            "differentials": [self.entry_strings(q) for q in range(len(self.matrices))],
        }


def _format_linear(elem: GroupRingElem, n: int) -> str:
    if elem.is_zero():
        return "0"
    parts = []
    for key, coeff in elem.sorted_terms():
        idx = [i for i, e in enumerate(key) if e]
        if len(idx) != 1 or key[idx[0]] != 1:
            raise ValidationError("entry is not a homogeneous linear form")
        name = f"e{idx[0] + 1}"
        cs = str(coeff)
        neg = cs.startswith("-")
        mag = cs[1:] if neg else cs
        body = name if mag == "1" else f"{mag}*{name}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)


def universal_aomoto(C) -> UniversalAomoto:
    """Linearize the equivariant cochain complex of a minimal complex over
    kZ^n (the universal abelian cover): D^{q-1} is the transpose of the
    mod-J^2 boundary matrix, rewritten as linear forms via x_i = t_i - 1.
    """
    if C.group.kind != "free_abelian":
        raise ValidationError("universal Aomoto needs the abelian-cover complex over kZ^n")
    if not C.field.is_field:
        raise UnsupportedCoefficients("field coefficients required")
    if not C.is_minimal():
        offenders = C.nonminimal_entries()
        raise MinimalityError(
            "complex is not minimal; nonzero specialized entries at "
            + ", ".join(f"(q={q}, row={i}, col={j}): {v}" for q, i, j, v in offenders[:8])
        )
    n = C.group.n
    field = C.field
    model = FiltrationModel(C.group, field, 2)
    sym = GroupDescriptor.free_abelian(n)
    off1 = model.offset(1)

    def linear_form(elem: GroupRingElem) -> GroupRingElem:
        coords = model.reduce(elem)
        if not coords[0].is_zero():
            raise MinimalityError("entry does not lie in J")
        terms = {}
        for idx in range(off1, model.offset(2)):
            c = coords[idx]
            if not c.is_zero():
                # the degree-1 monomial tuple for x_i is the exponent key of e_i
                terms[model.monomials[idx]] = c
        return GroupRingElem(sym, field, terms)

    matrices = []
    for q in range(1, C.top + 1):
        bd = C.boundary(q)  # dims[q-1] x dims[q]
        D = [[linear_form(bd[i][j]) for i in range(C.dims[q - 1])] for j in range(C.dims[q])]
        matrices.append(D)  # D^{q-1}: H^{q-1} -> H^q, shape dims[q] x dims[q-1]
    return UniversalAomoto(n, field, matrices, list(C.dims))


def aomoto_specialize(U: UniversalAomoto, z) -> AomotoData:
    """Evaluate the universal complex at e_i -> z_i and take Betti numbers."""
    if len(z) != U.n:
        raise InputError(f"direction vector needs length {U.n}")
    field = U.field
    zvals = [x if isinstance(x, FieldElem) else field.from_int(x) for x in z]
    ranks = []
    for D in U.matrices:
        if not D or not D[0]:
            ranks.append(0)
            continue
        mat = [[_eval_linear(e, zvals, field) for e in row] for row in D]
        ranks.append(rank_exact(mat))
    beta = []
    for q in range(len(U.dims)):
        r_in = ranks[q - 1] if q >= 1 else 0
        r_out = ranks[q] if q < len(ranks) else 0
        beta.append(U.dims[q] - r_in - r_out)
    return AomotoData(beta, ranks, route="linearization")


def _eval_linear(elem: GroupRingElem, zvals, field) -> FieldElem:
    acc = field.zero()
    for key, coeff in elem.terms.items():
        term = coeff
        for v, e in zip(zvals, key):
            for _ in range(e):
                term = term * v
        acc = acc + term
    return acc


def monomial_variables(n: int, field) -> list[GroupRingElem]:
    """The generators e_1..e_n of S as ring elements (for tests)."""
    sym = GroupDescriptor.free_abelian(n)
    out = []
    for i in range(n):
        key = tuple(1 if j == i else 0 for j in range(n))
        out.append(GroupRingElem.monomial(sym, field, key))
    return out
