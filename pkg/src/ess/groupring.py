"""Group-ring arithmetic for G = Z^n (Laurent polynomials) and G = Z_m.

Elements are sparse maps from exponent keys to nonzero coefficients; keys are
length-n integer tuples for Z^n and residues in [0, m) for Z_m.  Iteration is
always over sorted keys so every downstream matrix is reproducible.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .coeffs import FieldDescriptor, FieldElem, prime_power
from .errors import DescriptorMismatch, InputError

INFINITY = math.inf


class GroupDescriptor:
    """Either FreeAbelian(n), n >= 0, or Cyclic(m), m >= 2.

    Cyclic descriptors record whether m is a prime power (used by the
    Reznikov-case shortcuts).
    """

    __slots__ = ("kind", "n", "m", "prime_power")

    def __init__(self, kind, n=None, m=None):
        self.kind = kind
        self.n = n
        self.m = m
        self.prime_power = prime_power(m) if kind == "cyclic" else None

    @classmethod
    def free_abelian(cls, n: int):
        if n < 0:
            raise InputError("rank must be >= 0")
        return cls("free_abelian", n=n)

    @classmethod
    def cyclic(cls, m: int):
        if m < 2:
            raise InputError("cyclic order must be >= 2")
        return cls("cyclic", m=m)

    @classmethod
    def parse(cls, text: str) -> "GroupDescriptor":
        if text == "Z":
            return cls.free_abelian(1)
        mt = re.fullmatch(r"Z\^(\d+)", text)
        if mt:
            return cls.free_abelian(int(mt.group(1)))
        mt = re.fullmatch(r"Zmod:(\d+)", text)
        if mt:
            return cls.cyclic(int(mt.group(1)))
        raise InputError(f"unknown group descriptor {text!r}")

    def __str__(self):
        if self.kind == "cyclic":
            return f"Zmod:{self.m}"
        return "Z" if self.n == 1 else f"Z^{self.n}"

    __repr__ = __str__

    def __eq__(self, other):
        return (
            isinstance(other, GroupDescriptor)
            and (self.kind, self.n, self.m) == (other.kind, other.n, other.m)
        )

    def __hash__(self):
        return hash((self.kind, self.n, self.m))

    @property
    def num_generators(self) -> int:
        return self.n if self.kind == "free_abelian" else 1

    def identity_key(self):
        return (0,) * self.n if self.kind == "free_abelian" else 0

    def reduce_key(self, key):
        if self.kind == "cyclic":
            return key % self.m
        return tuple(key)

    def add_keys(self, a, b):
        if self.kind == "cyclic":
            return (a + b) % self.m
        return tuple(x + y for x, y in zip(a, b))

    def variable_names(self) -> list[str]:
        if self.kind == "cyclic" or self.n == 1:
            return ["t"]
        return [f"t{i + 1}" for i in range(self.n)]


class GroupRingElem:
    """Element of kG in canonical sparse form (no zero coefficients stored)."""

    __slots__ = ("group", "field", "terms")

    def __init__(self, group, field, terms):
        self.group = group
        self.field = field
        clean = {}
        for key, coeff in terms.items():
            key = group.reduce_key(key)
            if key in clean:
                coeff = clean[key] + coeff
            if coeff.is_zero():
                clean.pop(key, None)
            else:
                clean[key] = coeff
        self.terms = clean

    @classmethod
    def zero(cls, group, field):
        return cls(group, field, {})

    @classmethod
    def one(cls, group, field):
        return cls(group, field, {group.identity_key(): field.one()})

    @classmethod
    def monomial(cls, group, field, key, coeff=1):
        if isinstance(coeff, int):
            coeff = field.from_int(coeff)
        return cls(group, field, {group.reduce_key(key): coeff})

    def _check(self, other):
        if self.group != other.group or self.field != other.field:
            raise DescriptorMismatch("group-ring operands over different rings")

    def __add__(self, other):
        if isinstance(other, int):
            other = GroupRingElem.monomial(self.group, self.field, self.group.identity_key(), other)
        self._check(other)
        out = dict(self.terms)
        for key, coeff in other.terms.items():
            out[key] = out.get(key, self.field.zero()) + coeff
        return GroupRingElem(self.group, self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElem(self.group, self.field, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = GroupRingElem.monomial(self.group, self.field, self.group.identity_key(), other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, FieldElem)):
            return self.scale(other)
        self._check(other)
        out = {}
        zero = self.field.zero()
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key = self.group.add_keys(k1, k2)
                out[key] = out.get(key, zero) + c1 * c2
        return GroupRingElem(self.group, self.field, out)

    def __rmul__(self, other):
        if isinstance(other, (int, FieldElem)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c):
        if isinstance(c, int):
            c = self.field.from_int(c)
        return GroupRingElem(self.group, self.field, {k: v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, int):
            if other == 0:
                return self.is_zero()
            other = GroupRingElem.monomial(self.group, self.field, self.group.identity_key(), other)
        if not isinstance(other, GroupRingElem):
            return NotImplemented
        return (
            self.group == other.group
            and self.field == other.field
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.group, self.field, tuple(sorted(self.terms.items()))))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items())

    def augmentation(self) -> FieldElem:
        acc = self.field.zero()
        for coeff in self.terms.values():
            acc = acc + coeff
        return acc

    def map_coefficients(self, fn, new_field):
        return GroupRingElem(self.group, new_field, {k: fn(v) for k, v in self.terms.items()})

    def map_exponents(self, fn, new_group):
        out = GroupRingElem.zero(new_group, self.field)
        for key, coeff in self.terms.items():
            out = out + GroupRingElem.monomial(new_group, self.field, fn(key), coeff)
        return out

    def evaluate(self, values: list[FieldElem]) -> FieldElem:
        """Evaluate at invertible field elements (t_i -> values[i])."""
        field = values[0].field if values else self.field
        acc = field.zero()
        for key, coeff in self.sorted_terms():
            exps = (key,) if self.group.kind == "cyclic" else key
            term = field.from_fraction(coeff.as_fraction()) if coeff.field != field else coeff
            for v, e in zip(values, exps):
                term = term * v**e
            acc = acc + term
        return acc

    def __str__(self):
        return format_element(self)

    __repr__ = __str__


def augmentation(a: GroupRingElem) -> FieldElem:
    """Sum of coefficients: the ring map kG -> k killing every g - 1."""
    return a.augmentation()


# ---------------------------------------------------------------------------
# Monomial text syntax
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*([+-]|\d+|[A-Za-z]\w*|\^|\*)")


def parse_element(text: str, group: GroupDescriptor, field: FieldDescriptor) -> GroupRingElem:
    """Parse "t1^-2*t2^3" style syntax (coefficient prefixes allowed)."""
    names = group.variable_names()
    name_index = {name: i for i, name in enumerate(names)}
    pos = 0
    tokens = []
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt:
            raise InputError(f"bad character in element {text!r} at {pos}")
        tokens.append(mt.group(1))
        pos = mt.end()
    result = GroupRingElem.zero(group, field)
    i = 0
    nvars = group.num_generators

    def parse_exponent(i):
        if i < len(tokens) and tokens[i] == "^":
            i += 1
            sign = 1
            if i < len(tokens) and tokens[i] == "-":
                sign = -1
                i += 1
            if i >= len(tokens) or not tokens[i].isdigit():
                raise InputError(f"missing exponent in {text!r}")
            return sign * int(tokens[i]), i + 1
        return 1, i

    while i < len(tokens):
        sign = 1
        saw_sign = False
        while i < len(tokens) and tokens[i] in "+-":
            if tokens[i] == "-":
                sign = -sign
            saw_sign = True
            i += 1
        if i >= len(tokens):
            if saw_sign:
                raise InputError(f"dangling sign in {text!r}")
            break
        coeff = Fraction(sign)
        exps = [0] * nvars
        expect_factor = True
        while i < len(tokens) and (expect_factor or tokens[i] == "*"):
            if tokens[i] == "*":
                i += 1
                continue
            tok = tokens[i]
            if tok.isdigit():
                num = int(tok)
                i += 1
                if i < len(tokens) and tokens[i] == "*" and i + 1 < len(tokens) and tokens[i + 1] == "*":
                    raise InputError(f"bad token sequence in {text!r}")
                coeff *= num
            elif tok in name_index:
                i += 1
                e, i = parse_exponent(i)
                exps[name_index[tok]] += e
            else:
                raise InputError(f"unknown variable {tok!r} in {text!r}")
            expect_factor = False
            if i < len(tokens) and tokens[i] == "*":
                i += 1
                expect_factor = True
        key = exps[0] if group.kind == "cyclic" else tuple(exps)
        term = GroupRingElem.monomial(group, field, key, field.from_fraction(coeff))
        result = result + term
    return result


def format_element(a: GroupRingElem) -> str:
    if a.is_zero():
        return "0"
    names = a.group.variable_names()
    parts = []
    for key, coeff in a.sorted_terms():
        exps = (key,) if a.group.kind == "cyclic" else key
        monos = []
        for name, e in zip(names, exps):
            if e == 0:
                continue
            monos.append(name if e == 1 else f"{name}^{e}")
        cs = str(coeff)
        negative = cs.startswith("-")
        mag = cs[1:] if negative else cs
        if monos and mag == "1":
            body = "*".join(monos)
        elif monos:
            body = "*".join([mag] + monos)
        else:
            body = mag
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# J-adic valuation and graded pieces
# ---------------------------------------------------------------------------


def _binomial(a: int, k: int) -> int:
    """Generalized binomial C(a, k) for any integer a, k >= 0."""
    if k < 0:
        return 0
    num = 1
    for j in range(k):
        num *= a - j
    return num // math.factorial(k)


def monomials_of_degree(n: int, s: int) -> list[tuple]:
    """Exponent tuples of total degree s in n variables, lexicographic."""
    if n == 0:
        return [()] if s == 0 else []
    out = []
    for first in range(s, -1, -1):
        for rest in monomials_of_degree(n - 1, s - first):
            out.append((first,) + rest)
    return sorted(out)


def _expansion_coefficient(a: GroupRingElem, beta: tuple) -> FieldElem:
    """Coefficient of x^beta in the image of a under t_i -> 1 + x_i."""
    field = a.field
    acc = field.zero()
    for key, coeff in a.terms.items():
        c = 1
        for ai, bi in zip(key, beta):
            c *= _binomial(ai, bi)
            if c == 0:
                break
        if c:
            acc = acc + coeff * field.from_int(c)
    return acc


class _CyclicFiltration:
    """The chain J^0 >= J^1 >= ... inside kZ_m, as explicit subspaces of k^m.

    Computed until stabilization (dimension can only drop m times).  Exposes
    an adapted basis: vectors listed val-ascending, where the tail from
    offset(s) on spans J^s.
    """

    def __init__(self, m: int, field: FieldDescriptor):
        self.m = m
        self.field = field
        # J^1 spanned by (t-1) t^j
        spaces = [[linalg.unit_vector(field, m, j) for j in range(m)]]
        current = []
        for j in range(m):
            v = linalg.zeros(field, m)
            v[(j + 1) % m] = v[(j + 1) % m] + field.one()
            v[j] = v[j] - field.one()
            current.append(v)
        while True:
            basis = self._reduce(current)
            spaces.append(basis)
            if len(basis) == len(spaces[-2]):
                spaces.pop()  # stabilized: J^s = J^{s-1}
                break
            if not basis:
                break
            current = [self._mult_by_tminus1(v) for v in basis]
        self.spaces = spaces  # spaces[s] = basis of J^s, s <= stab
        self.stab = len(spaces) - 1
        self._build_adapted()

    def _is_stable(self) -> bool:
        # loop exits either by reaching zero or by two equal dimensions;
        # a nonzero deepest space means the chain stabilized there.
        return bool(self.spaces[self.stab])

    def _mult_by_tminus1(self, v):
        out = linalg.zeros(self.field, self.m)
        for j in range(self.m):
            if not v[j].is_zero():
                out[(j + 1) % self.m] = out[(j + 1) % self.m] + v[j]
                out[j] = out[j] - v[j]
        return out

    def _reduce(self, vectors):
        reduced, pivots = linalg.rref(self.field, vectors)
        return [row for row in reduced if any(not x.is_zero() for x in row)]

    def _build_adapted(self):
        # Extend a basis of the deepest space upward through the chain; the
        # vectors added at stage s get valuation s (INFINITY for a stabilized
        # nonzero core).  Sorted val-ascending so J^s is a suffix.
        field = self.field
        adapted = list(self.spaces[self.stab])
        vals = [INFINITY if self._is_stable() else self.stab] * len(adapted)
        for s in range(self.stab - 1, -1, -1):
            for v in self.spaces[s]:
                if not linalg.in_span(field, adapted, v):
                    adapted.append(v)
                    vals.append(s)
        pairs = sorted(zip(vals, range(len(adapted))), key=lambda p: (p[0], p[1]))
        self.adapted = [adapted[i] for _, i in pairs]
        self.vals = [v for v, _ in pairs]
        # normalize the unique val-0 vector to augmentation 1, so its class
        # in gr^0 = kG/J is the unit
        if self.vals and self.vals[0] == 0:
            aug = self.adapted[0][0]
            for x in self.adapted[0][1:]:
                aug = aug + x
            scale = aug.inverse()
            self.adapted[0] = [x * scale for x in self.adapted[0]]

    def dim(self, s: int) -> int:
        s = min(s, self.stab)
        return len(self.spaces[s])

    def offset(self, s: int) -> int:
        """Index into the adapted basis where J^s starts."""
        target = self.dim(s)
        return len(self.adapted) - target

    def membership_val(self, vec) -> float:
        if all(x.is_zero() for x in vec):
            return INFINITY
        lo = 0
        for s in range(1, self.stab + 1):
            if linalg.in_span(self.field, self.spaces[s], vec):
                lo = s
            else:
                return lo
        if self._is_stable():
            return INFINITY
        return lo


@lru_cache(maxsize=None)
def cyclic_filtration(m: int, field: FieldDescriptor) -> _CyclicFiltration:
    return _CyclicFiltration(m, field)


def _cyclic_vector(a: GroupRingElem):
    v = linalg.zeros(a.field, a.group.m)
    for key, coeff in a.terms.items():
        v[key] = coeff
    return v


def j_valuation(a: GroupRingElem):
    """Largest s with a in J^s (INFINITY for 0 and for stabilized-core
    elements of non-nilpotent cyclic group rings)."""
    if a.is_zero():
        return INFINITY
    if a.group.kind == "free_abelian":
        # substitute t_i = x_i + 1; the valuation is the lowest total degree.
        # Shift by a unit monomial first so all exponents are nonnegative.
        n = a.group.n
        shift = tuple(-min((k[i] for k in a.terms), default=0) for i in range(n))
        shifted = a.map_exponents(lambda k: tuple(x + s for x, s in zip(k, shift)), a.group)
        bound = max(sum(k) for k in shifted.terms)
        for deg in range(bound + 1):
            for beta in monomials_of_degree(n, deg):
                if not _expansion_coefficient(shifted, beta).is_zero():
                    return deg
        return INFINITY
    if not a.field.is_field:
        raise DescriptorMismatch("cyclic j_valuation needs field coefficients")
    filt = cyclic_filtration(a.group.m, a.field)
    return filt.membership_val(_cyclic_vector(a))


def gr_dimension(group: GroupDescriptor, field: FieldDescriptor, s: int) -> int:
    """dim_k J^s / J^{s+1} for kG."""
    if s < 0:
        return 0
    if group.kind == "free_abelian":
        n = group.n
        if n == 0:
            return 1 if s == 0 else 0
        return math.comb(s + n - 1, n - 1)
    pp = group.prime_power
    if pp and field.characteristic == pp[0]:
        return 1 if s < group.m else 0
    filt = cyclic_filtration(group.m, field)
    return filt.dim(s) - filt.dim(s + 1)


class GrPiece:
    """gr^s_J(kG): dimension plus an ordered list of representatives."""

    def __init__(self, group, field, s):
        self.group = group
        self.field = field
        self.s = s
        if group.kind == "free_abelian":
            self.monomials = monomials_of_degree(group.n, s)
            self.basis = [_x_power(group, field, alpha) for alpha in self.monomials]
        else:
            filt = cyclic_filtration(group.m, field)
            off_hi = filt.offset(s)
            off_lo = filt.offset(s + 1)
            self.monomials = None
            self.basis = [
                _from_vector(group, field, filt.adapted[i]) for i in range(off_hi, off_lo)
            ]
        self.dimension = len(self.basis)
        assert self.dimension == gr_dimension(group, field, s)


def _x_power(group, field, alpha):
    """The product (t_1 - 1)^a_1 ... (t_n - 1)^a_n as a GroupRingElem."""
    out = GroupRingElem.one(group, field)
    for i, a in enumerate(alpha):
        ti = [0] * group.n
        ti[i] = 1
        base = GroupRingElem.monomial(group, field, tuple(ti)) - GroupRingElem.one(group, field)
        for _ in range(a):
            out = out * base
    return out


def _from_vector(group, field, vec):
    return GroupRingElem(group, field, {j: vec[j] for j in range(group.m) if not vec[j].is_zero()})
