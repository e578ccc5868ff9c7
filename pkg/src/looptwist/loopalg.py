"""Exact graded structure-constants algebras and the built-in loop models.

Scalars are exact: residues modulo a prime, or rationals via Fraction.  An
algebra is a finite basis with degrees, a sparse product table, a designated
unit, an optional point class and an Euler characteristic; all structural
axioms (unit laws, associativity, degree additivity, optional graded
commutativity) are checked exhaustively at construction time.

Elements are sparse dicts {basis index: scalar} with no stored zeros.  The
same convention is reused for tensors, whose keys are pairs of keys.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import fingroup


class WindowOverflowError(ArithmeticError):
    """A truncated Laurent product left the representable exponent window."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class ScalarField:
    """Exact coefficient field: the rationals (p=None) or F_p for prime p.

    Values are plain ints in 0..p-1 for F_p and Fractions for Q, so ordinary
    ==, hashing and printing behave exactly.
    """

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None and not _is_prime(p):
            raise ValueError(f"modular scalars need a prime modulus, got {p}")
        self.p = p

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    @property
    def zero(self):
        return Fraction(0) if self.p is None else 0

    @property
    def one(self):
        return Fraction(1) if self.p is None else 1

    def coerce(self, x):
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ValueError(f"denominator of {x} vanishes mod {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p if self.p is not None else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p is not None else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.p is not None else a * b

    def neg(self, a):
        return (-a) % self.p if self.p is not None else -a

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("scalar inverse of zero")
        return pow(a, -1, self.p) if self.p is not None else 1 / a

    def parse(self, text: str):
        try:
            return self.coerce(Fraction(text.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"invalid scalar {text!r}: {exc}") from None

    def format(self, a) -> str:
        return str(a)

    def __eq__(self, other):
        return isinstance(other, ScalarField) and other.p == self.p

    def __hash__(self):
        return hash(("ScalarField", self.p))

    def __repr__(self):
        return "Q" if self.p is None else f"F{self.p}"


def field_from_spec(spec: str) -> ScalarField:
    """Parse a scalar-field spec: "Q" or "Fp:<p>"."""
    spec = spec.strip()
    if spec == "Q":
        return ScalarField(None)
    if spec.startswith("Fp:"):
        try:
            return ScalarField(int(spec[3:]))
        except ValueError as exc:
            raise ValueError(f"invalid scalar spec {spec!r}: {exc}") from None
    raise ValueError(f"unrecognized scalar spec {spec!r} (expected 'Q' or 'Fp:<p>')")


# ---------------------------------------------------------------------------
# Sparse linear combinations.  Keys are arbitrary hashables; values are field
# scalars; zeros are never stored, so dict equality is linear equality.

def vec_iadd(fld: ScalarField, acc: dict, key, coeff) -> None:
    cur = acc.get(key)
    if cur is None:
        if coeff != fld.zero:
            acc[key] = coeff
        return
    new = fld.add(cur, coeff)
    if new == fld.zero:
        del acc[key]
    else:
        acc[key] = new


def vec_add(fld: ScalarField, u: dict, v: dict) -> dict:
    out = dict(u)
    for key, coeff in v.items():
        vec_iadd(fld, out, key, coeff)
    return out


def vec_sub(fld: ScalarField, u: dict, v: dict) -> dict:
    out = dict(u)
    for key, coeff in v.items():
        vec_iadd(fld, out, key, fld.neg(coeff))
    return out


def vec_scale(fld: ScalarField, s, u: dict) -> dict:
    if s == fld.zero:
        return {}
    return {key: fld.mul(s, coeff) for key, coeff in u.items()}


@dataclass(frozen=True, eq=False)
class GradedBasisAlgebra:
    """Finite-basis graded algebra with an exact sparse multiplication table.

    ``products`` maps a basis pair (i, j) to {k: coefficient}; absent pairs
    multiply to zero.  Pairs listed in ``overflow`` have no representable
    product (truncated models) and raise WindowOverflowError when multiplied.
    ``weights`` is bookkeeping for truncated models (the Laurent exponent of
    each basis element); it is zero elsewhere and never serialized.
    """

    name: str
    field: ScalarField
    basis_names: tuple[str, ...]
    degrees: tuple[int, ...]
    unit: int
    point_class: int | None
    euler_char: int
    graded_commutative: bool
    products: dict
    overflow: frozenset = frozenset()
    weights: tuple[int, ...] = ()

    @property
    def dim(self) -> int:
        return len(self.basis_names)

    def basis_vec(self, i: int) -> dict:
        return {i: self.field.one}

    def unit_vec(self) -> dict:
        return {self.unit: self.field.one}

    def point_class_vec(self) -> dict:
        if self.point_class is None:
            raise ValueError(f"algebra {self.name} has no point class")
        return {self.point_class: self.field.one}

    def basis_product(self, i: int, j: int) -> dict:
        if (i, j) in self.overflow:
            raise WindowOverflowError(
                f"product {self.basis_names[i]} * {self.basis_names[j]} leaves the "
                f"window of {self.name}"
            )
        return self.products.get((i, j), {})

    def mul(self, x: dict, y: dict) -> dict:
        fld = self.field
        out: dict = {}
        for i, si in x.items():
            for j, sj in y.items():
                s = fld.mul(si, sj)
                if s == fld.zero:
                    continue
                for k, coeff in self.basis_product(i, j).items():
                    vec_iadd(fld, out, k, fld.mul(s, coeff))
        return out

    def power(self, x: dict, k: int) -> dict:
        acc = self.unit_vec()
        for _ in range(k):
            acc = self.mul(acc, x)
        return acc

    def element(self, mapping) -> dict:
        """Coerce and validate a {basis index: scalar-ish} mapping."""
        out: dict = {}
        for i, coeff in mapping.items():
            i = int(i)
            if not 0 <= i < self.dim:
                raise ValueError(f"basis index {i} out of range for {self.name}")
            vec_iadd(self.field, out, i, self.field.coerce(coeff))
        return out

    def degrees_of(self, x: dict) -> set[int]:
        return {self.degrees[i] for i in x}

    def coproduct(self, x: dict) -> dict:
        """Point-class coproduct: x maps to chi * (pt * x) (x) pt.

        Returns a sparse tensor {(i, j): coefficient}.  Identically zero when
        the Euler characteristic vanishes in the scalar field; otherwise the
        point class must be present (no silent zero default).
        """
        chi = self.field.coerce(self.euler_char)
        if chi == self.field.zero:
            return {}
        if self.point_class is None:
            raise ValueError(
                f"coproduct on {self.name} needs a point class: the Euler "
                f"characteristic {self.euler_char} does not vanish in {self.field!r}"
            )
        c0 = self.point_class
        fld = self.field
        out: dict = {}
        for i, s in self.mul(self.point_class_vec(), x).items():
            vec_iadd(fld, out, (i, c0), fld.mul(chi, s))
        return out

    def format_element(self, x: dict) -> str:
        if not x:
            return "0"
        parts = []
        for i in sorted(x):
            coeff = x[i]
            name = self.basis_names[i]
            parts.append(name if coeff == self.field.one else f"{self.field.format(coeff)}*{name}")
        return " + ".join(parts)

    def parse_element(self, text: str) -> dict:
        """Parse "t^1 + 2*eps"-style element names over this basis.

        Terms are joined by '+'; a term may carry a leading '-' or an
        explicit "<coef>*" prefix.  '0' is the zero element.  A bare '-' that
        is part of a basis name (t^-1) is fine because only a leading '-'
        negates.
        """
        index = {name: i for i, name in enumerate(self.basis_names)}
        out: dict = {}
        if text.strip() == "0":
            return out
        for raw in text.split("+"):
            term = raw.strip()
            if not term:
                raise ValueError(f"empty term in element {text!r}")
            coeff = self.field.one
            if term.startswith("-"):
                coeff = self.field.neg(coeff)
                term = term[1:].strip()
            if "*" in term:
                coeff_text, name = term.split("*", 1)
                coeff = self.field.mul(coeff, self.field.parse(coeff_text))
                name = name.strip()
            else:
                name = term
            if name not in index:
                raise ValueError(f"unknown basis element {name!r} in {text!r}")
            vec_iadd(self.field, out, index[name], coeff)
        return out

    def __repr__(self):
        return f"GradedBasisAlgebra({self.name}, dim={self.dim}, field={self.field!r})"


def _normalize_products(fld: ScalarField, dim: int, products) -> dict:
    table: dict = {}
    for (i, j), combo in products.items():
        i, j = int(i), int(j)
        if not (0 <= i < dim and 0 <= j < dim):
            raise ValueError(f"product key ({i}, {j}) out of basis range")
        entry: dict = {}
        for k, coeff in combo.items():
            k = int(k)
            if not 0 <= k < dim:
                raise ValueError(f"product ({i}, {j}) targets invalid basis index {k}")
            vec_iadd(fld, entry, k, fld.coerce(coeff))
        if entry:
            table[(i, j)] = entry
    return table


def make_algebra(
    name: str,
    fld: ScalarField,
    basis: list[tuple[str, int]],
    unit: int,
    products,
    point_class: int | None = None,
    euler_char: int = 0,
    graded_commutative: bool = True,
    overflow=frozenset(),
    weights: tuple[int, ...] | None = None,
) -> GradedBasisAlgebra:
    """Build and exhaustively validate a graded structure-constants algebra."""
    dim = len(basis)
    if dim == 0:
        raise ValueError("algebra needs at least one basis element")
    if dim > 128:
        raise ValueError(f"basis size {dim} exceeds the supported maximum 128")
    names = tuple(str(b[0]) for b in basis)
    if len(set(names)) != dim:
        raise ValueError("basis names must be distinct")
    degrees = tuple(int(b[1]) for b in basis)
    if not 0 <= unit < dim:
        raise ValueError(f"unit index {unit} out of range")
    if point_class is not None and not 0 <= point_class < dim:
        raise ValueError(f"point-class index {point_class} out of range")
    if weights is None:
        weights = (0,) * dim

    overflow = frozenset((int(i), int(j)) for i, j in overflow)
    table = _normalize_products(fld, dim, products)
    alg = GradedBasisAlgebra(
        name=name,
        field=fld,
        basis_names=names,
        degrees=degrees,
        unit=unit,
        point_class=point_class,
        euler_char=int(euler_char),
        graded_commutative=bool(graded_commutative),
        products=table,
        overflow=overflow,
        weights=weights,
    )
    _validate_algebra(alg)
    return alg


def _validate_algebra(alg: GradedBasisAlgebra) -> None:
    dim = alg.dim
    fld = alg.field

    for (i, j), combo in alg.products.items():
        if (i, j) in alg.overflow:
            raise ValueError(f"product ({i}, {j}) is both tabulated and marked overflow")
        want = alg.degrees[i] + alg.degrees[j]
        for k in combo:
            if alg.degrees[k] != want:
                raise ValueError(
                    f"degree additivity fails at ({alg.basis_names[i]}, {alg.basis_names[j]}): "
                    f"term {alg.basis_names[k]} has degree {alg.degrees[k]}, expected {want}"
                )

    e = alg.unit
    for b in range(dim):
        if (e, b) in alg.overflow or (b, e) in alg.overflow:
            raise ValueError(f"unit products may not overflow (basis {alg.basis_names[b]})")
        if alg.basis_product(e, b) != alg.basis_vec(b) or alg.basis_product(b, e) != alg.basis_vec(b):
            raise ValueError(f"unit law fails at basis element {alg.basis_names[b]}")

    if alg.graded_commutative:
        for i in range(dim):
            for j in range(i, dim):
                lhs_over = (i, j) in alg.overflow
                rhs_over = (j, i) in alg.overflow
                if lhs_over != rhs_over:
                    raise ValueError(
                        f"window is asymmetric at ({alg.basis_names[i]}, {alg.basis_names[j]})"
                    )
                if lhs_over:
                    continue
                sign = -1 if (alg.degrees[i] % 2) and (alg.degrees[j] % 2) else 1
                rhs = alg.basis_product(j, i)
                if sign == -1:
                    rhs = vec_scale(fld, fld.coerce(-1), rhs)
                if alg.basis_product(i, j) != rhs:
                    raise ValueError(
                        f"graded commutativity fails at "
                        f"({alg.basis_names[i]}, {alg.basis_names[j]})"
                    )

    for i in range(dim):
        for j in range(dim):
            try:
                ij = alg.basis_product(i, j)
            except WindowOverflowError:
                continue
            for k in range(dim):
                try:
                    left = alg.mul(ij, alg.basis_vec(k))
                    right = alg.mul(alg.basis_vec(i), alg.basis_product(j, k))
                except WindowOverflowError:
                    continue  # truncated models: skip triples that leave the window
                if left != right:
                    raise ValueError(
                        f"associativity fails at triple ({alg.basis_names[i]}, "
                        f"{alg.basis_names[j]}, {alg.basis_names[k]})"
                    )


def circle_model(characteristic: int, window: int) -> GradedBasisAlgebra:
    """Truncated loop-homology model of the circle: Lambda(a) (x) k[t, t^-1].

    Basis: t^n and a*t^n for |n| <= window; products add Laurent exponents
    and a^2 = 0.  Exponents leaving the window raise WindowOverflowError,
    never truncate.  Euler characteristic 0, unit t^0, point class a*t^0.

    Grading note: the free loop space of the circle has classes in two
    adjacent degrees, so a single flat degree cannot be additive under the
    product; this model takes deg t^n = 0 and deg a*t^n = -1 (the point class
    one degree below the unit).  Presentation files own their grading and may
    choose differently.
    """
    if window < 1:
        raise ValueError(f"window must be at least 1, got {window}")
    fld = ScalarField(None if characteristic == 0 else characteristic)
    w = window
    span = 2 * w + 1

    def t_idx(n):
        return n + w

    def a_idx(n):
        return span + n + w

    basis = [(f"t^{n}", 0) for n in range(-w, w + 1)]
    basis += [(f"a*t^{n}", -1) for n in range(-w, w + 1)]
    weights = tuple(list(range(-w, w + 1)) * 2)

    products = {}
    overflow = set()
    one = fld.one
    for m in range(-w, w + 1):
        for n in range(-w, w + 1):
            s = m + n
            if -w <= s <= w:
                products[(t_idx(m), t_idx(n))] = {t_idx(s): one}
                products[(t_idx(m), a_idx(n))] = {a_idx(s): one}
                products[(a_idx(m), t_idx(n))] = {a_idx(s): one}
            else:
                overflow.add((t_idx(m), t_idx(n)))
                overflow.add((t_idx(m), a_idx(n)))
                overflow.add((a_idx(m), t_idx(n)))
            # a^2 = 0 exactly, representable regardless of the window

    return make_algebra(
        name=f"circle[p={characteristic},w={w}]",
        fld=fld,
        basis=basis,
        unit=t_idx(0),
        products=products,
        point_class=a_idx(0),
        euler_char=0,
        graded_commutative=True,
        overflow=overflow,
        weights=weights,
    )


def cpl_minimal_model(l: int, p: int) -> GradedBasisAlgebra:
    """Minimal top-degree model of the free loop homology of CP^l over F_p.

    When gcd(p, l+1) > 1 the basis is {[CP^l], eps} with eps^2 = 0, both in
    degree 0 of the shifted grading; then (1 + eps)^(l+1) = 1 + (l+1) eps = 1,
    so {[CP^l] + i*eps} is a cyclic group of order gcd(p, l+1) under the
    product.  When gcd(p, l+1) = 1 the torsion summand carrying eps dies over
    F_p and the model is the one-dimensional unit algebra.
    """
    if l < 1:
        raise ValueError(f"projective-space dimension must be at least 1, got {l}")
    fld = ScalarField(p)
    unit_name = f"[CP^{l}]"
    if (l + 1) % p != 0:  # gcd(p, l+1) = 1 for prime p
        return make_algebra(
            name=f"cpl[l={l},p={p}]",
            fld=fld,
            basis=[(unit_name, 0)],
            unit=0,
            products={(0, 0): {0: 1}},
            point_class=None,
            euler_char=l + 1,
        )
    return make_algebra(
        name=f"cpl[l={l},p={p}]",
        fld=fld,
        basis=[(unit_name, 0), ("eps", 0)],
        unit=0,
        products={(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}},
        point_class=None,
        euler_char=l + 1,
    )


def load_presentation(source) -> GradedBasisAlgebra:
    """Load a presentation file (path or already-parsed dict) into an algebra.

    Format: {"name", "scalar": "Q"|"Fp:<p>", "basis": [{"name", "degree"}],
    "unit": int, "point_class": int|null, "euler_char": int,
    "graded_commutative": bool, "products": [[i, j, [[coef, k], ...]], ...]};
    absent (i, j) pairs multiply to zero.
    """
    if isinstance(source, (str, Path)):
        path = Path(source)
        try:
            data = json.loads(path.read_text())
        except OSError as exc:
            raise ValueError(f"cannot read presentation {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed JSON in presentation {path}: {exc}") from None
    else:
        data = source
    if not isinstance(data, dict):
        raise ValueError("presentation must be a JSON object")

    def need(key, types, what):
        if key not in data:
            raise ValueError(f"presentation is missing {key!r}")
        value = data[key]
        if not isinstance(value, types):
            raise ValueError(f"presentation field {key!r} must be {what}")
        return value

    fld = field_from_spec(need("scalar", str, "a scalar spec string"))
    raw_basis = need("basis", list, "a list of basis entries")
    basis = []
    for pos, entry in enumerate(raw_basis):
        if not isinstance(entry, dict) or "name" not in entry or "degree" not in entry:
            raise ValueError(f"basis[{pos}] must be an object with 'name' and 'degree'")
        basis.append((str(entry["name"]), int(entry["degree"])))

    raw_products = need("products", list, "a list of [i, j, terms] triples")
    products: dict = {}
    for pos, item in enumerate(raw_products):
        if not (isinstance(item, list) and len(item) == 3 and isinstance(item[2], list)):
            raise ValueError(f"products[{pos}] must be [i, j, [[coef, k], ...]]")
        i, j, terms = item
        key = (int(i), int(j))
        if key in products:
            raise ValueError(f"products[{pos}] repeats the pair {key}")
        combo: dict = {}
        for tpos, term in enumerate(terms):
            if not (isinstance(term, list) and len(term) == 2):
                raise ValueError(f"products[{pos}][2][{tpos}] must be [coef, k]")
            coeff, k = term
            vec_iadd(fld, combo, int(k), fld.parse(str(coeff)))
        products[key] = combo

    point_class = data.get("point_class")
    return make_algebra(
        name=str(data.get("name", "presentation")),
        fld=fld,
        basis=basis,
        unit=int(need("unit", int, "a basis index")),
        products=products,
        point_class=None if point_class is None else int(point_class),
        euler_char=int(need("euler_char", int, "an integer")),
        graded_commutative=bool(need("graded_commutative", bool, "a boolean")),
    )


def unit_group(alg: GradedBasisAlgebra, candidates: list[dict]):
    """Multiplication table of a product-closed set of elements, as a group.

    Returns (FiniteGroup, elements); the algebra unit must be among the
    candidates and every candidate must have its inverse in the set.
    """
    elements = [alg.element(x) for x in candidates]
    for pos, elt in enumerate(elements):
        if elt in elements[:pos]:
            raise ValueError(f"candidate {pos} repeats an earlier element")
    if alg.unit_vec() not in elements:
        raise ValueError("the algebra unit is not among the candidates")

    n = len(elements)
    table = []
    for i in range(n):
        row = []
        for j in range(n):
            product = alg.mul(elements[i], elements[j])
            try:
                row.append(elements.index(product))
            except ValueError:
                raise ValueError(
                    f"candidate set is not closed: {alg.format_element(elements[i])} * "
                    f"{alg.format_element(elements[j])} = {alg.format_element(product)} "
                    f"is not a candidate"
                ) from None
        table.append(row)
    group = fingroup.make_from_table(table, name=f"U({alg.name})")
    return group, elements
