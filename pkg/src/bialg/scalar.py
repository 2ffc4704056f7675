"""Exact scalars: rationals and sparse multivariate polynomials over Q.

A scalar is either a :class:`fractions.Fraction` or a :class:`Poly`.  Every
operation that produces a polynomial without variables collapses it back to a
``Fraction`` (see :func:`simplify`), so parameter-free computations never pay
for the polynomial machinery.
"""
from __future__ import annotations

import ast
import numbers
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import ScalarParseError

# A monomial is a tuple of (variable, exponent) pairs sorted by variable name,
# exponents strictly positive.  The empty tuple is the constant monomial.
Monomial = tuple


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    exps = dict(m1)
    for v, e in m2:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _grlex_key(m: Monomial):
    # graded lexicographic: higher total degree first, then lex on names
    # (earlier name with higher exponent first)
    return (-_mono_degree(m), [(v, -e) for v, e in m])


class Poly:
    """Polynomial with Fraction coefficients in named variables.

    The term map is canonical (no zero coefficients, sorted monomials), so
    equality is structural.  Instances are treated as immutable.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c:
                    clean[m] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def var(cls, name: str) -> "Poly":
        if not name.isidentifier():
            raise ScalarParseError(f"bad variable name {name!r}")
        return cls({((name, 1),): 1})

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(): c})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def variables(self) -> set[str]:
        return {v for m in self._terms for v, _ in m}

    def is_constant(self) -> bool:
        return all(m == () for m in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial has variables")
        return self._terms.get((), Fraction(0))

    def degree(self) -> int:
        return max((_mono_degree(m) for m in self._terms), default=0)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self._terms == other._terms
        if isinstance(other, numbers.Rational):
            if other == 0:
                return not self._terms
            return self._terms == {(): Fraction(other)}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # arithmetic -----------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "Poly | None":
        if isinstance(other, Poly):
            return other
        if isinstance(other, numbers.Rational):
            return Poly({(): other})
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for m, c in o._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return _wrap(out)

    __radd__ = __add__

    def __neg__(self):
        return _wrap({m: -c for m, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, numbers.Rational):
            if other == 0:
                return Fraction(0)
            return _wrap({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return _wrap(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Poly):
            if not other.is_constant():
                raise ZeroDivisionError("division by a non-constant polynomial")
            other = other.constant_value()
        if not isinstance(other, numbers.Rational):
            return NotImplemented
        if other == 0:
            raise ZeroDivisionError("polynomial division by zero")
        inv = Fraction(1) / Fraction(other)
        return self * inv

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result: Scalar = Fraction(1)
        base: Scalar = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # evaluation -----------------------------------------------------------

    def subs(self, bindings: Mapping[str, object]) -> "Scalar":
        """Substitute scalars for variables; unbound variables are kept."""
        total: Scalar = Fraction(0)
        for m, c in self._terms.items():
            term: Scalar = c
            for v, e in m:
                if v in bindings:
                    term = term * (to_scalar(bindings[v]) ** e)
                else:
                    term = term * Poly({((v, e),): 1})
            total = total + term
        return simplify(total)

    # printing -------------------------------------------------------------

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda mc: _grlex_key(mc[0]))

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"Poly({format_scalar(self)!r})"


Scalar = Union[Fraction, Poly]


def _wrap(terms: dict) -> Scalar:
    p = Poly.__new__(Poly)
    p._terms = terms
    p._hash = None
    return simplify(p)


def simplify(x) -> Scalar:
    """Collapse a variable-free polynomial (or int) to a Fraction."""
    if isinstance(x, Poly):
        if x.is_constant():
            return x.constant_value()
        return x
    if isinstance(x, Fraction):
        return x
    if isinstance(x, numbers.Rational):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def to_scalar(x) -> Scalar:
    if isinstance(x, str):
        return parse_scalar(x)
    return simplify(x)


def is_rational(x) -> bool:
    return not isinstance(x, Poly)


def variables_of(x) -> set[str]:
    return x.variables() if isinstance(x, Poly) else set()


def substitute(x: Scalar, bindings: Mapping[str, object]) -> Scalar:
    if isinstance(x, Poly):
        return x.subs(bindings)
    return x


# ---------------------------------------------------------------------------
# text form

def _format_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_monomial(m: Monomial) -> str:
    return "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)


def format_scalar(x) -> str:
    """Canonical string, e.g. ``"-b^2 + 3/2*a1"``; parses back with :func:`parse_scalar`."""
    x = simplify(x)
    if isinstance(x, Fraction):
        return _format_fraction(x)
    pieces = []
    for m, c in x.sorted_terms():
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if m == ():
            body = _format_fraction(a)
        elif a == 1:
            body = _format_monomial(m)
        else:
            body = f"{_format_fraction(a)}*{_format_monomial(m)}"
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)


def parse_scalar(text: str, params: Iterable[str] | None = None) -> Scalar:
    """Parse ``"3/2*a1 - b^2"`` style text.

    If ``params`` is given, every variable must be declared there.
    """
    if isinstance(text, numbers.Rational):
        return Fraction(text)
    allowed = None if params is None else set(params)
    src = str(text).strip().replace("^", "**")
    if not src:
        raise ScalarParseError("empty scalar")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ScalarParseError(f"cannot parse scalar {text!r}: {exc.msg}") from None

    def ev(node) -> Scalar:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                raise ScalarParseError(f"only integer literals allowed in {text!r}")
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            if allowed is not None and node.id not in allowed:
                raise ScalarParseError(f"undeclared parameter {node.id!r} in {text!r}")
            return Poly.var(node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and isinstance(node.op, _BINOPS):
            left = ev(node.left)
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and type(node.right.value) is int
                        and node.right.value >= 0):
                    raise ScalarParseError(f"exponent must be a non-negative integer in {text!r}")
                return simplify(left ** node.right.value) if isinstance(left, Poly) \
                    else left ** node.right.value
            right = ev(node.right)
            if isinstance(node.op, ast.Add):
                return simplify(left + right)
            if isinstance(node.op, ast.Sub):
                return simplify(left - right)
            if isinstance(node.op, ast.Mult):
                return simplify(left * right)
            if isinstance(right, Poly):
                raise ScalarParseError(f"division by a parameter in {text!r}")
            if right == 0:
                raise ScalarParseError(f"division by zero in {text!r}")
            return simplify(left / right)
        raise ScalarParseError(f"unsupported syntax in scalar {text!r}")

    return ev(tree)
