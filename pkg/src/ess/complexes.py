"""Equivariant chain complexes over kG: construction from group presentations
via Fox calculus or from explicit boundary matrices, base change along
epimorphisms, and ordinary Betti numbers via the augmentation specialization.
"""

from __future__ import annotations

import itertools
import math
import re

from .coeffs import FieldDescriptor, rank_exact
from .errors import InputError, UnsupportedCoefficients, ValidationError
from .groupring import GroupDescriptor, GroupRingElem, parse_element

_WORD_TOKEN = re.compile(r"([A-Za-z])(\d*)")


class FreeWord:
    """A word in a free group: sequence of signed 1-based generator indices."""

    __slots__ = ("letters",)

    def __init__(self, letters):
        self.letters = tuple(letters)
        if any(l == 0 for l in self.letters):
            raise InputError("letters are nonzero signed indices")

    @classmethod
    def parse(cls, text: str, generators: list[str]) -> "FreeWord":
        """Compact letter syntax: lowercase = generator, uppercase = inverse
        ("abAB" = a b a^-1 b^-1); "x3"/"X3" tokens for wide alphabets."""
        index = {name: i + 1 for i, name in enumerate(generators)}
        letters = []
        pos = 0
        while pos < len(text):
            mt = _WORD_TOKEN.match(text, pos)
            if not mt:
                raise InputError(f"bad word token at {text[pos:]!r} in {text!r}")
            ch, digits = mt.group(1), mt.group(2)
            if digits:
                i = int(digits)
                if ch not in ("x", "X"):
                    raise InputError(f"numbered letters use x<k>/X<k>, got {mt.group(0)!r}")
                if not 1 <= i <= len(generators):
                    raise InputError(f"generator index {i} out of range in {text!r}")
                letters.append(i if ch == "x" else -i)
            else:
                name = ch.lower()
                if name not in index:
                    raise InputError(f"unknown generator {ch!r} in word {text!r}")
                letters.append(index[name] if ch.islower() else -index[name])
            pos = mt.end()
        return cls(letters)

    def __len__(self):
        return len(self.letters)

    def __eq__(self, other):
        return isinstance(other, FreeWord) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def exponent_sum(self, i: int) -> int:
        return sum(1 if l == i else -1 if l == -i else 0 for l in self.letters)

    def __repr__(self):
        return f"FreeWord{self.letters}"


class Presentation:
    """A finite group presentation <x_1..x_n | r_1..r_m>."""

    def __init__(self, generators: list[str], relators: list[FreeWord]):
        self.generators = list(generators)
        self.relators = list(relators)
        n = len(self.generators)
        for r in self.relators:
            for l in r.letters:
                if not 1 <= abs(l) <= n:
                    raise InputError("relator letter outside declared generators")

    def __repr__(self):
        return f"<{','.join(self.generators)} | {len(self.relators)} relators>"


def fox_derivative(word: FreeWord, i: int, arity: int | None = None):
    """Fox derivative d(word)/d(x_i) as a list of (sign, prefix FreeWord).

    Satisfies dx_j/dx_i = delta_ij, d(x_i^-1)/dx_i = -x_i^-1, and the product
    rule d(uv)/dx_i = du/dx_i + u dv/dx_i.  No simplification is performed.
    """
    if i < 1 or (arity is not None and i > arity):
        raise InputError(f"generator index {i} out of range")
    out = []
    for pos, letter in enumerate(word.letters):
        if letter == i:
            out.append((1, FreeWord(word.letters[:pos])))
        elif letter == -i:
            out.append((-1, FreeWord(word.letters[: pos + 1])))
    return out


class Epimorphism:
    """An epimorphism from the presented group onto G, given by generator
    images (exponent vectors for Z^n, residues for Z_m)."""

    def __init__(self, target: GroupDescriptor, images):
        self.target = target
        if target.kind == "free_abelian":
            self.images = [tuple(int(x) for x in img) for img in images]
            for img in self.images:
                if len(img) != target.n:
                    raise InputError("image vector length != target rank")
        else:
            self.images = [int(img) % target.m for img in images]

    def word_key(self, word: FreeWord):
        """Image of a word in G, as an exponent key."""
        key = self.target.identity_key()
        for letter in word.letters:
            img = self.images[abs(letter) - 1]
            if self.target.kind == "cyclic":
                key = (key + (img if letter > 0 else -img)) % self.target.m
            else:
                sign = 1 if letter > 0 else -1
                key = tuple(k + sign * x for k, x in zip(key, img))
        return key

    def monomial(self, word: FreeWord, field) -> GroupRingElem:
        return GroupRingElem.monomial(self.target, field, self.word_key(word))

    def validate(self, presentation: Presentation):
        if len(self.images) != len(presentation.generators):
            raise ValidationError("one image per generator required")
        for r in presentation.relators:
            if self.word_key(r) != self.target.identity_key():
                raise ValidationError(f"relator {r!r} does not map to the identity")
        if not self.is_surjective():
            raise ValidationError("images do not generate the target group")

    def is_surjective(self) -> bool:
        if self.target.kind == "cyclic":
            return math.gcd(self.target.m, *self.images) == 1 if self.images else False
        n = self.target.n
        if n == 0:
            return True
        rows = [list(img) for img in self.images]
        return _integer_minor_gcd(rows, n) == 1


def _integer_minor_gcd(rows, k):
    """gcd of all k x k minors of an integer matrix (0 if none exist)."""
    m = len(rows)
    ncols = len(rows[0]) if rows else 0
    if m < k or ncols < k:
        return 0
    g = 0
    for rsel in itertools.combinations(range(m), k):
        for csel in itertools.combinations(range(ncols), k):
            sub = [[rows[i][j] for j in csel] for i in rsel]
            g = math.gcd(g, _int_det(sub))
            if g == 1:
                return 1
    return g


def _int_det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    det = 0
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        det += (-1) ** j * m[0][j] * _int_det(minor)
    return det


class GroupHom:
    """A surjection G -> G' given by images of G's standard generators."""

    def __init__(self, source: GroupDescriptor, target: GroupDescriptor, images):
        self.source = source
        self.target = target
        if target.kind == "free_abelian":
            self.images = [tuple(int(x) for x in img) for img in images]
        else:
            self.images = [int(img) % target.m for img in images]
        if len(self.images) != source.num_generators:
            raise ValidationError("one image per source generator required")
        if source.kind == "cyclic":
            # image of t must have order dividing m
            img = self.images[0]
            if target.kind == "free_abelian":
                if any(x != 0 for x in img):
                    raise ValidationError("no nontrivial map from a finite cyclic group to Z^n")
            elif (source.m * img) % target.m != 0:
                raise ValidationError("map not well-defined on Z_m")
        if not Epimorphism(target, self.images).is_surjective():
            raise ValidationError("group map is not surjective")

    def map_key(self, key):
        if self.source.kind == "cyclic":
            exps = (key,)
        else:
            exps = key
        out = self.target.identity_key()
        for e, img in zip(exps, self.images):
            if self.target.kind == "cyclic":
                out = (out + e * img) % self.target.m
            else:
                out = tuple(o + e * x for o, x in zip(out, img))
        return out

    def compose_epi(self, nu: Epimorphism) -> Epimorphism:
        return Epimorphism(self.target, [self.map_key(img) for img in nu.images])


class EquivariantComplex:
    """A finite chain complex of free kG-modules given by boundary matrices.

    boundaries[q] (for q = 1..top) has shape dims[q-1] x dims[q] with
    GroupRingElem entries; d o d = 0 is validated at construction.  When the
    input coefficients are integral, the same matrices over Z are retained as
    the integral shadow (used for torsion checks).
    """

    def __init__(self, field, group, dims, boundaries, provenance="matrices",
                 presentation=None, nu=None, integral_boundaries=None):
        self.field = field
        self.group = group
        self.dims = list(dims)
        self.boundaries = boundaries
        self.provenance = provenance
        self.presentation = presentation
        self.nu = nu
        self.integral_boundaries = integral_boundaries
        self._validate()

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def boundary(self, q: int):
        """Boundary matrix in degree q (dims[q-1] x dims[q]); zero-shaped
        outside 1..top."""
        if 1 <= q <= self.top:
            return self.boundaries[q - 1]
        rows = self.dims[q - 1] if 0 < q <= self.top + 1 else 0
        cols = self.dims[q] if 0 <= q <= self.top else 0
        zero = GroupRingElem.zero(self.group, self.field)
        return [[zero for _ in range(cols)] for _ in range(rows)]

    def _validate(self):
        if not self.dims or self.dims[0] != 1:
            raise ValidationError("complex must have a single 0-cell")
        if len(self.boundaries) != self.top:
            raise ValidationError("need one boundary matrix per degree 1..top")
        for q in range(1, self.top + 1):
            mat = self.boundaries[q - 1]
            if len(mat) != self.dims[q - 1] or any(len(row) != self.dims[q] for row in mat):
                raise ValidationError(f"boundary {q} has wrong shape")
            for row in mat:
                for entry in row:
                    if entry.group != self.group or entry.field != self.field:
                        raise ValidationError(f"boundary {q} entry over wrong ring")
        for q in range(1, self.top):
            prod = _groupring_matmul(self.boundary(q), self.boundary(q + 1))
            if any(not e.is_zero() for row in prod for e in row):
                raise ValidationError(
                    f"composition d_{q} o d_{q + 1} != 0: not a chain complex"
                )
        for entry in (self.boundaries[0][0] if self.top >= 1 else []):
            if not entry.augmentation().is_zero():
                raise ValidationError("degree-1 boundary entries must augment to 0")

    # -- specializations ------------------------------------------------------

    def epsilon_boundary(self, q: int):
        """The augmentation specialization of the boundary matrix, over k."""
        return [[e.augmentation() for e in row] for row in self.boundary(q)]

    def epsilon_boundary_int(self, q: int):
        """Integral specialization from the shadow, as plain int matrix."""
        if self.integral_boundaries is None:
            raise UnsupportedCoefficients("complex has no integral shadow")
        if 1 <= q <= self.top:
            mat = self.integral_boundaries[q - 1]
            return [[e.augmentation().as_int() for e in row] for row in mat]
        rows = self.dims[q - 1] if 0 < q <= self.top + 1 else 0
        cols = self.dims[q] if 0 <= q <= self.top else 0
        return [[0] * cols for _ in range(rows)]

    def is_minimal(self) -> bool:
        """Minimal = every epsilon-specialized boundary vanishes, checked on
        the integral shadow when present (a mod-p accident is not minimality)."""
        for q in range(1, self.top + 1):
            if self.integral_boundaries is not None:
                mat = self.epsilon_boundary_int(q)
                if any(x != 0 for row in mat for x in row):
                    return False
            else:
                mat = self.epsilon_boundary(q)
                if any(not x.is_zero() for row in mat for x in row):
                    return False
        return True

    def nonminimal_entries(self):
        out = []
        for q in range(1, self.top + 1):
            mat = (
                self.epsilon_boundary_int(q)
                if self.integral_boundaries is not None
                else [[x.as_int() if x.field.kind == "Z" else x for x in row] for row in self.epsilon_boundary(q)]
            )
            for i, row in enumerate(mat):
                for j, x in enumerate(row):
                    nz = (x != 0) if isinstance(x, int) else (not x.is_zero())
                    if nz:
                        out.append((q, i, j, x))
        return out


def _groupring_matmul(a, b):
    if not a or not b:
        return []
    if not b[0]:
        return [[] for _ in a]
    n, k, m = len(a), len(b), len(b[0])
    sample = b[0][0]
    zero = GroupRingElem.zero(sample.group, sample.field)
    out = [[zero for _ in range(m)] for _ in range(n)]
    for i in range(n):
        for l in range(k):
            x = a[i][l]
            if x.is_zero():
                continue
            for j in range(m):
                if not b[l][j].is_zero():
                    out[i][j] = out[i][j] + x * b[l][j]
    return out


def _fox_image(word: FreeWord, i: int, nu: Epimorphism, field) -> GroupRingElem:
    out = GroupRingElem.zero(nu.target, field)
    for sign, prefix in fox_derivative(word, i):
        out = out + nu.monomial(prefix, field).scale(sign)
    return out


def presentation_complex(presentation: Presentation, nu: Epimorphism,
                         field: FieldDescriptor) -> EquivariantComplex:
    """The equivariant chain complex of the presentation 2-complex, base
    changed along nu.  d1 column entries are nu(x_i) - 1; d2 entries are Fox
    derivatives pushed to kG."""
    nu.validate(presentation)
    group = nu.target
    ZZ = FieldDescriptor.integers()
    ngens = len(presentation.generators)
    nrels = len(presentation.relators)

    one = GroupRingElem.one(group, ZZ)
    d1 = [[
        GroupRingElem.monomial(group, ZZ, nu.word_key(FreeWord((i + 1,)))) - one
        for i in range(ngens)
    ]]
    int_mats = [d1]
    dims = [1, ngens]
    if nrels:
        d2 = [
            [_fox_image(r, i + 1, nu, ZZ) for r in presentation.relators]
            for i in range(ngens)
        ]
        int_mats.append(d2)
        dims.append(nrels)
    if ngens == 0:
        dims, int_mats = [1], []

    if field == ZZ:
        mats = int_mats
    else:
        mats = [
            [[e.map_coefficients(lambda c: field.from_int(c.as_int()), field) for e in row] for row in mat]
            for mat in int_mats
        ]
    return EquivariantComplex(
        field, group, dims, mats, provenance="presentation",
        presentation=presentation, nu=nu, integral_boundaries=int_mats,
    )


def complex_from_matrices(field, group, dims, boundaries,
                          provenance="matrices") -> EquivariantComplex:
    """Validated complex from explicit boundary matrices over kG."""
    integral = None
    if _entries_integral(boundaries):
        ZZ = FieldDescriptor.integers()
        integral = [
            [[e.map_coefficients(lambda c: ZZ.from_int(_as_integer(c)), ZZ) for e in row] for row in mat]
            for mat in boundaries
        ]
    return EquivariantComplex(field, group, dims, boundaries,
                              provenance=provenance, integral_boundaries=integral)


def _as_integer(c):
    if c.field.kind == "Z":
        return c.value
    return c.value.numerator if c.value.denominator == 1 else None


def _entries_integral(boundaries):
    for mat in boundaries:
        for row in mat:
            for e in row:
                if e.field.kind == "Z":
                    continue
                if e.field.kind == "Q" and all(c.value.denominator == 1 for c in e.terms.values()):
                    continue
                return False
    return True


def extend_with_cells(C: EquivariantComplex, degree: int, matrix_rows) -> EquivariantComplex:
    """Attach extra cells in `degree` (>= top) with the given boundary matrix
    into degree-1 cells; composition is re-validated."""
    if degree != C.top + 1:
        raise ValidationError(
            f"extra cells must extend the top degree ({C.top + 1}), got {degree}"
        )
    if len(matrix_rows) != C.dims[C.top]:
        raise ValidationError(
            f"extra-cell matrix needs {C.dims[C.top]} rows, got {len(matrix_rows)}"
        )
    ncells = len(matrix_rows[0]) if matrix_rows else 0
    dims = C.dims + [ncells]
    boundaries = list(C.boundaries) + [matrix_rows]
    integral = None
    if C.integral_boundaries is not None and _entries_integral([matrix_rows]):
        ZZ = FieldDescriptor.integers()
        shadow_mat = [
            [e.map_coefficients(lambda c: ZZ.from_int(_as_integer(c)), ZZ) for e in row]
            for row in matrix_rows
        ]
        integral = C.integral_boundaries + [shadow_mat]
    return EquivariantComplex(
        C.field, C.group, dims, boundaries, provenance="hybrid",
        presentation=C.presentation, nu=C.nu, integral_boundaries=integral,
    )


def base_change(C: EquivariantComplex, f: GroupHom,
                new_field: FieldDescriptor | None = None) -> EquivariantComplex:
    """Apply the ring map induced by the group surjection f (and optionally a
    coefficient change) to every boundary matrix; d o d = 0 is re-validated."""
    if f.source != C.group:
        raise ValidationError("hom source does not match complex group")
    field = new_field if new_field is not None else C.field
    coeff = _coefficient_map(C.field, field)

    def convert(e):
        out = e.map_exponents(f.map_key, f.target)
        if field != C.field:
            out = out.map_coefficients(coeff, field)
        return out

    boundaries = [[[convert(e) for e in row] for row in mat] for mat in C.boundaries]
    integral = None
    if C.integral_boundaries is not None:
        integral = [
            [[e.map_exponents(f.map_key, f.target) for e in row] for row in mat]
            for mat in C.integral_boundaries
        ]
    nu = f.compose_epi(C.nu) if C.nu is not None else None
    return EquivariantComplex(
        field, f.target, C.dims, boundaries, provenance=C.provenance,
        presentation=C.presentation, nu=nu, integral_boundaries=integral,
    )


def change_field(C: EquivariantComplex, new_field: FieldDescriptor) -> EquivariantComplex:
    """Coefficient change (Z -> k, Q -> Q(zeta), ...) leaving the group fixed."""
    if new_field == C.field:
        return C
    coeff = _coefficient_map(C.field, new_field)
    boundaries = [
        [[e.map_coefficients(coeff, new_field) for e in row] for row in mat]
        for mat in C.boundaries
    ]
    return EquivariantComplex(
        new_field, C.group, C.dims, boundaries, provenance=C.provenance,
        presentation=C.presentation, nu=C.nu,
        integral_boundaries=C.integral_boundaries,
    )


def _coefficient_map(old: FieldDescriptor, new: FieldDescriptor):
    if old == new:
        return lambda c: c
    if old.kind == "Z":
        return lambda c: new.from_int(c.value)
    if old.kind == "Q":
        return lambda c: new.from_fraction(c.value)
    raise UnsupportedCoefficients(f"no coefficient map {old} -> {new}")


def betti_numbers(C: EquivariantComplex) -> list[int]:
    """Ordinary Betti numbers b_q = dim C_q - rank d_q^eps - rank d_{q+1}^eps."""
    if not C.field.is_field:
        raise UnsupportedCoefficients(
            "betti_numbers needs field coefficients; use the modz module for Z"
        )
    ranks = [0] * (C.top + 2)
    for q in range(1, C.top + 1):
        mat = C.epsilon_boundary(q)
        ranks[q] = rank_exact(mat) if mat and mat[0] else 0
    return [C.dims[q] - ranks[q] - ranks[q + 1] for q in range(C.top + 1)]


# ---------------------------------------------------------------------------
# JSON input documents
# ---------------------------------------------------------------------------


def parse_document(doc: dict) -> EquivariantComplex:
    """Build a validated complex from the JSON input schema.

    Exactly one of "presentation"/"matrices"; "extra_cells" only with
    "presentation".
    """
    if not isinstance(doc, dict):
        raise InputError("input document must be a JSON object")
    try:
        field = FieldDescriptor.parse(doc["field"])
        group = GroupDescriptor.parse(doc["group"])
    except KeyError as missing:
        raise InputError(f"missing required key {missing}") from None
    has_pres = "presentation" in doc
    has_mats = "matrices" in doc
    if has_pres == has_mats:
        raise InputError('exactly one of "presentation"/"matrices" is required')
    if "extra_cells" in doc and not has_pres:
        raise InputError('"extra_cells" only allowed with "presentation"')

    if has_pres:
        pres = doc["presentation"]
        gens = list(pres.get("generators", []))
        if not gens:
            raise InputError("presentation needs at least one generator")
        relators = [FreeWord.parse(w, gens) for w in pres.get("relators", [])]
        presentation = Presentation(gens, relators)
        nu_spec = pres.get("nu")
        if nu_spec is None:
            raise InputError('presentation requires "nu" generator images')
        images = []
        for g in gens:
            if g not in nu_spec:
                raise InputError(f"nu missing image for generator {g!r}")
            images.append(nu_spec[g])
        if group.kind == "free_abelian":
            images = [img if isinstance(img, (list, tuple)) else [img] for img in images]
        else:
            images = [img if isinstance(img, int) else img[0] for img in images]
        nu = Epimorphism(group, images)
        C = presentation_complex(presentation, nu, field)
        for cell_spec in doc.get("extra_cells", []):
            degree = cell_spec["degree"]
            rows = [
                [parse_element(s, group, field) for s in row]
                for row in cell_spec["matrix"]
            ]
            C = extend_with_cells(C, degree, rows)
        return C

    mats = doc["matrices"]
    dims = [int(x) for x in mats["dims"]]
    boundaries = []
    for mat in mats["boundaries"]:
        boundaries.append([[parse_element(s, group, field) for s in row] for row in mat])
    return complex_from_matrices(field, group, dims, boundaries)
