"""Multivectors in the exterior powers of a Lie algebra (degree <= 3).

Basis of the degree-k part: strictly increasing index tuples, ordered
lexicographically (``itertools.combinations`` order).  All sign bookkeeping
goes through :func:`canonical`.

Covectors share the storage of degree-1 multivectors: the coefficient at
index ``i`` is the coefficient of the dual basis element ``e^i``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import TYPE_CHECKING, Iterable, Mapping

from .errors import AlgebraMismatch, DegreeOverflow, DegreeUnderflow, DimensionMismatch, NotGraded
from .scalar import Poly, Scalar, format_scalar, parse_scalar, simplify, substitute, variables_of

if TYPE_CHECKING:
    from .lie import LieAlgebra

MAX_DEGREE = 3


def canonical(indices: Iterable[int]) -> tuple[int, tuple]:
    """Sort ``indices``; return (permutation sign, sorted tuple), sign 0 on repeats."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    # insertion sort counting transpositions
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(idx)


@lru_cache(maxsize=None)
def basis_tuples(n: int, k: int) -> tuple:
    return tuple(combinations(range(n), k))


@lru_cache(maxsize=None)
def basis_index(n: int, k: int) -> dict:
    return {t: i for i, t in enumerate(basis_tuples(n, k))}


def exterior_dim(n: int, k: int) -> int:
    return comb(n, k)


class MultiVector:
    """Element of Lambda^k g stored as ``{sorted index tuple: scalar}``.

    Immutable by convention; arithmetic returns new instances.  ``u ^ v`` is
    the wedge product, ``s * u`` scalar multiplication.
    """

    __slots__ = ("algebra", "degree", "_coeffs")

    def __init__(self, algebra: "LieAlgebra", degree: int, coeffs: Mapping | None = None):
        if not 0 <= degree <= MAX_DEGREE:
            raise DegreeOverflow(f"degree {degree} outside 0..{MAX_DEGREE}")
        self.algebra = algebra
        self.degree = degree
        clean = {}
        if coeffs:
            for idx, c in coeffs.items():
                sign, key = canonical(idx)
                if len(idx) != degree:
                    raise DimensionMismatch(f"index tuple {idx} has wrong length for degree {degree}")
                if key and max(key) >= algebra.dim:
                    raise DimensionMismatch(f"index {max(key)} out of range")
                if sign == 0:
                    continue
                c = simplify(c)
                s = simplify(clean.get(key, 0) + sign * c) if key in clean else sign * c
                if s != 0:
                    clean[key] = s
                else:
                    clean.pop(key, None)
        self._coeffs = clean

    @classmethod
    def _raw(cls, algebra, degree, coeffs: dict) -> "MultiVector":
        mv = cls.__new__(cls)
        mv.algebra = algebra
        mv.degree = degree
        mv._coeffs = coeffs
        return mv

    @classmethod
    def zero(cls, algebra, degree: int) -> "MultiVector":
        return cls._raw(algebra, degree, {})

    @classmethod
    def basis(cls, algebra, *indices: int) -> "MultiVector":
        return cls(algebra, len(indices), {tuple(indices): Fraction(1)})

    @classmethod
    def scalar(cls, algebra, value=1) -> "MultiVector":
        return cls(algebra, 0, {(): value})

    @classmethod
    def from_vector(cls, algebra, degree: int, vec) -> "MultiVector":
        tuples = basis_tuples(algebra.dim, degree)
        if len(vec) != len(tuples):
            raise DimensionMismatch("coordinate vector has wrong length")
        return cls._raw(algebra, degree,
                        {t: simplify(c) for t, c in zip(tuples, vec) if c != 0})

    # access ---------------------------------------------------------------

    @property
    def coeffs(self) -> dict:
        return dict(self._coeffs)

    def items(self):
        return self._coeffs.items()

    def __getitem__(self, idx) -> Scalar:
        sign, key = canonical(idx)
        if sign == 0:
            return Fraction(0)
        return sign * self._coeffs.get(key, Fraction(0))

    def __len__(self):
        return len(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def to_vector(self) -> list:
        return [self._coeffs.get(t, Fraction(0)) for t in basis_tuples(self.algebra.dim, self.degree)]

    def to_sparse(self) -> dict:
        idx = basis_index(self.algebra.dim, self.degree)
        return {idx[t]: c for t, c in self._coeffs.items()}

    def parameters(self) -> set[str]:
        out = set()
        for c in self._coeffs.values():
            out |= variables_of(c)
        return out

    def is_rational(self) -> bool:
        return not any(isinstance(c, Poly) for c in self._coeffs.values())

    def subs(self, bindings: Mapping[str, object]) -> "MultiVector":
        return MultiVector(self.algebra, self.degree,
                           {t: substitute(c, bindings) for t, c in self._coeffs.items()})

    def map_coeffs(self, fn) -> "MultiVector":
        return MultiVector(self.algebra, self.degree, {t: fn(c) for t, c in self._coeffs.items()})

    # arithmetic -----------------------------------------------------------

    def _check(self, other: "MultiVector"):
        if not isinstance(other, MultiVector):
            raise TypeError(f"expected MultiVector, got {type(other).__name__}")
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise AlgebraMismatch("multivectors belong to different algebras")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return self
        self._check(other)
        if other.degree != self.degree:
            raise DimensionMismatch("cannot add multivectors of different degree")
        out = dict(self._coeffs)
        for t, c in other._coeffs.items():
            s = simplify(out[t] + c) if t in out else c
            if s != 0:
                out[t] = s
            else:
                out.pop(t, None)
        return MultiVector._raw(self.algebra, self.degree, out)

    def __radd__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return self
        return NotImplemented

    def __neg__(self):
        return MultiVector._raw(self.algebra, self.degree, {t: -c for t, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, s):
        if isinstance(s, MultiVector):
            return NotImplemented
        s = simplify(s)
        if s == 0:
            return MultiVector.zero(self.algebra, self.degree)
        out = {}
        for t, c in self._coeffs.items():
            v = simplify(c * s)
            if v != 0:
                out[t] = v
        return MultiVector._raw(self.algebra, self.degree, out)

    __rmul__ = __mul__

    def __truediv__(self, s):
        return self * (Fraction(1) / Fraction(s))

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, MultiVector):
            return NotImplemented
        return (self.degree == other.degree and self._coeffs == other._coeffs
                and (self.algebra is other.algebra or self.algebra == other.algebra))

    __hash__ = None

    def __repr__(self):
        return f"MultiVector({format_multivector(self)})"

    def __str__(self):
        return format_multivector(self)


# ---------------------------------------------------------------------------
# products

def wedge(u: MultiVector, v: MultiVector) -> MultiVector:
    u._check(v)
    if u.degree + v.degree > MAX_DEGREE:
        raise DegreeOverflow(f"wedge would have degree {u.degree + v.degree} > {MAX_DEGREE}")
    out: dict = {}
    for t1, c1 in u._coeffs.items():
        for t2, c2 in v._coeffs.items():
            sign, key = canonical(t1 + t2)
            if sign == 0:
                continue
            s = simplify(out.get(key, 0) + sign * c1 * c2)
            if s != 0:
                out[key] = s
            else:
                out.pop(key, None)
    return MultiVector._raw(u.algebra, u.degree + v.degree, out)


def pairing(xi: MultiVector, u: MultiVector) -> Scalar:
    """<u, xi> for a covector (or dual multivector) ``xi`` of the same degree as ``u``.

    Determinant convention: <e_i ^ e_j, e^i ^ e^j> = 1.
    """
    xi._check(u)
    if xi.degree != u.degree:
        raise DimensionMismatch("pairing needs equal degrees")
    total: Scalar = Fraction(0)
    for t, c in u._coeffs.items():
        d = xi._coeffs.get(t)
        if d is not None:
            total = total + c * d
    return simplify(total)


def _contract1(alpha: MultiVector, u: MultiVector) -> MultiVector:
    out: dict = {}
    for t, c in u._coeffs.items():
        for pos, i in enumerate(t):
            a = alpha._coeffs.get((i,))
            if a is None:
                continue
            key = t[:pos] + t[pos + 1:]
            val = c * a if pos % 2 == 0 else -(c * a)
            s = simplify(out.get(key, 0) + val)
            if s != 0:
                out[key] = s
            else:
                out.pop(key, None)
    return MultiVector._raw(u.algebra, u.degree - 1, out)


def contract(xi: MultiVector, u: MultiVector) -> MultiVector:
    """Left contraction ``xi _| u``.

    For a covector: alpha _| (x ^ y) = <alpha,x> y - <alpha,y> x, extended as a
    graded derivation.  For a dual multivector,
    (alpha_1 ^ ... ^ alpha_d) _| u = alpha_d _| (... (alpha_1 _| u)), which makes
    full contraction equal to the determinant pairing.
    """
    xi._check(u)
    if xi.degree > u.degree:
        raise DegreeUnderflow(f"cannot contract degree {xi.degree} into degree {u.degree}")
    if xi.degree == 1:
        return _contract1(xi, u)
    total = MultiVector.zero(u.algebra, u.degree - xi.degree)
    for t, c in xi._coeffs.items():
        w = u
        for i in t:
            w = _contract1(MultiVector.basis(u.algebra, i), w)
        total = total + w * c
    return total


# ---------------------------------------------------------------------------
# graded blocks

@dataclass(frozen=True)
class GradedComponents2:
    a: MultiVector  # Lambda^2 V
    b: MultiVector  # V ^ h
    c: MultiVector  # Lambda^2 h

    def total(self) -> MultiVector:
        return self.a + self.b + self.c


@dataclass(frozen=True)
class GradedComponents3:
    vvv: MultiVector  # Lambda^3 V
    vvh: MultiVector  # Lambda^2 V ^ h
    vhh: MultiVector  # V ^ Lambda^2 h
    hhh: MultiVector  # Lambda^3 h

    def total(self) -> MultiVector:
        return self.vvv + self.vvh + self.vhh + self.hhh

    def nonzero_blocks(self) -> list[str]:
        return [name for name in ("vvv", "vvh", "vhh", "hhh") if not getattr(self, name).is_zero()]


def v_count(algebra, idx: tuple) -> int:
    vset = algebra.grading.V_set
    return sum(1 for i in idx if i in vset)


def split_by_v_count(u: MultiVector) -> list[MultiVector]:
    """Blocks of ``u`` indexed by the number of translation factors."""
    if u.algebra.grading is None:
        raise NotGraded("algebra has no V + h grading")
    parts: list[dict] = [{} for _ in range(u.degree + 1)]
    for t, c in u._coeffs.items():
        parts[v_count(u.algebra, t)][t] = c
    return [MultiVector._raw(u.algebra, u.degree, p) for p in parts]


def split2(r: MultiVector) -> GradedComponents2:
    if r.degree != 2:
        raise DimensionMismatch("split2 needs a bivector")
    hh, vh, vv = split_by_v_count(r)
    return GradedComponents2(a=vv, b=vh, c=hh)


def split3(w: MultiVector) -> GradedComponents3:
    if w.degree != 3:
        raise DimensionMismatch("split3 needs a trivector")
    hhh, vhh, vvh, vvv = split_by_v_count(w)
    return GradedComponents3(vvv=vvv, vvh=vvh, vhh=vhh, hhh=hhh)


# ---------------------------------------------------------------------------
# text format

def format_multivector(u: MultiVector, labels: Iterable[str] | None = None) -> str:
    names = list(labels) if labels is not None else list(u.algebra.labels)
    if u.is_zero():
        return "0"
    parts = []
    for t in sorted(u._coeffs):
        c = u._coeffs[t]
        coeff = format_scalar(c)
        body = "^".join(names[i] for i in t) if t else "1"
        if isinstance(c, Poly) and len(c.terms) > 1:
            parts.append(f"({coeff})*{body}")
        elif coeff == "1":
            parts.append(body)
        elif coeff == "-1":
            parts.append(f"-{body}")
        else:
            parts.append(f"{coeff}*{body}")
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def multivector_to_doc(u: MultiVector, params: Iterable[str] | None = None) -> dict:
    """Text-format document: ``{"degree": k, "params": [...], "terms": [...]}``."""
    ps = sorted(set(params) | u.parameters()) if params is not None else sorted(u.parameters())
    return {
        "degree": u.degree,
        "params": ps,
        "terms": [{"indices": list(t), "coeff": format_scalar(u._coeffs[t])}
                  for t in sorted(u._coeffs)],
    }


def multivector_from_doc(algebra, doc: Mapping, params: Iterable[str] | None = None) -> MultiVector:
    """Parse the text format.  Terms give ``indices`` or basis ``labels``."""
    declared = list(doc.get("params", [])) + list(params or [])
    degree = int(doc["degree"])
    coeffs: dict = {}
    for n, term in enumerate(doc.get("terms", [])):
        if "indices" in term:
            idx = tuple(int(i) for i in term["indices"])
        elif "labels" in term:
            idx = tuple(algebra.index(lbl) for lbl in term["labels"])
        else:
            raise KeyError(f"term {n} has neither 'indices' nor 'labels'")
        if len(idx) != degree:
            raise DimensionMismatch(f"term {n} has {len(idx)} indices, degree is {degree}")
        c = parse_scalar(term.get("coeff", "1"), declared)
        sign, key = canonical(idx)
        if sign == 0:
            continue
        coeffs[key] = simplify(coeffs.get(key, 0) + sign * c)
    return MultiVector(algebra, degree, coeffs)
