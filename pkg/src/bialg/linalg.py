"""Fraction-free sparse Gaussian elimination over Q and canonical subspaces.

Rows are sparse ``{column: value}`` dicts.  Elimination runs on primitive
integer rows (cross-multiplication followed by content removal), so no
Fraction arithmetic happens inside the inner loop; the output is the unique
reduced row echelon form with unit pivots.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .errors import DimensionMismatch, ParameterizedInput
from .scalar import Poly, Scalar, simplify

SparseRow = dict


def _primitive(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        row = {c: v // g for c, v in row.items()}
    lead = row[min(row)]
    if lead < 0:
        row = {c: -v for c, v in row.items()}
    return row


def _integer_row(row: Mapping[int, object]) -> dict:
    den = 1
    clean = {}
    for c, v in row.items():
        if isinstance(v, Poly):
            v = simplify(v)
            if isinstance(v, Poly):
                raise ParameterizedInput("linear algebra needs rational entries")
        if v:
            v = Fraction(v)
            clean[c] = v
            den = lcm(den, v.denominator)
    if not clean:
        return {}
    return _primitive({c: int(v * den) for c, v in clean.items()})


def _combine(a: int, r: dict, b: int, p: dict) -> dict:
    """Return the primitive form of ``a*r - b*p`` (zeros dropped)."""
    out = {c: a * v for c, v in r.items()} if a != 1 else dict(r)
    for c, v in p.items():
        s = out.get(c, 0) - b * v
        if s:
            out[c] = s
        else:
            out.pop(c, None)
    return _primitive(out) if out else out


def _echelon(rows: Iterable[Mapping[int, object]]) -> dict:
    pivots: dict = {}
    for raw in rows:
        r = _integer_row(raw)
        while r:
            lead = min(r)
            p = pivots.get(lead)
            if p is None:
                pivots[lead] = r
                break
            a, b = p[lead], r[lead]
            g = gcd(a, b)
            r = _combine(a // g, r, b // g, p)
    return pivots


def rref(rows: Iterable[Mapping[int, object]]) -> list[dict]:
    """Reduced row echelon form of a sparse row list, pivots normalised to 1."""
    pivots = _echelon(rows)
    cols = sorted(pivots)
    # back substitution, fraction free
    for idx in range(len(cols) - 1, -1, -1):
        pc = cols[idx]
        p = pivots[pc]
        for qc in cols[:idx]:
            q = pivots[qc]
            if pc in q:
                a, b = p[pc], q[pc]
                g = gcd(a, b)
                pivots[qc] = _combine(a // g, q, b // g, p)
    out = []
    for pc in cols:
        p = pivots[pc]
        lead = p[pc]
        out.append({c: Fraction(v, lead) for c, v in sorted(p.items())})
    return out


def rank(rows: Iterable[Mapping[int, object]]) -> int:
    return len(_echelon(rows))


def _as_sparse(vec) -> dict:
    if isinstance(vec, Mapping):
        return {c: v for c, v in vec.items() if v != 0}
    return {i: v for i, v in enumerate(vec) if v != 0}


@dataclass(frozen=True)
class Subspace:
    """Subspace of Q^ambient held as a canonical reduced echelon basis."""

    ambient: int
    rows: tuple

    @classmethod
    def span(cls, vectors: Iterable, ambient: int) -> "Subspace":
        return cls(ambient, tuple(rref(_as_sparse(v) for v in vectors)))

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls(ambient, ())

    @classmethod
    def full(cls, ambient: int) -> "Subspace":
        return cls(ambient, tuple({i: Fraction(1)} for i in range(ambient)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> tuple:
        return tuple(min(r) for r in self.rows)

    def basis(self) -> list[list[Fraction]]:
        out = []
        for r in self.rows:
            v = [Fraction(0)] * self.ambient
            for c, x in r.items():
                v[c] = x
            out.append(v)
        return out

    def coordinates(self, vec) -> tuple[list, dict]:
        """Coordinates of ``vec`` along the echelon basis and the leftover residual.

        Entries of ``vec`` may be polynomials; the basis is rational, so the
        coordinates are read off the pivot columns and the residual is exact.
        """
        v = _as_sparse(vec)
        if v and max(v) >= self.ambient:
            raise DimensionMismatch("vector longer than ambient space")
        coords = []
        resid = dict(v)
        for r in self.rows:
            a = resid.get(min(r), 0)
            coords.append(simplify(a))
            if a:
                for c, x in r.items():
                    s = simplify(resid.get(c, 0) - a * x)
                    if s != 0:
                        resid[c] = s
                    else:
                        resid.pop(c, None)
        return coords, resid

    def contains(self, vec) -> bool:
        return not self.coordinates(vec)[1]

    def __contains__(self, vec) -> bool:
        return self.contains(vec)

    def issubset(self, other: "Subspace") -> bool:
        if self.ambient != other.ambient:
            raise DimensionMismatch("subspaces live in different spaces")
        return all(other.contains(r) for r in self.rows)

    def __le__(self, other):
        return self.issubset(other)

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient != other.ambient:
            raise DimensionMismatch("subspaces live in different spaces")
        return Subspace(self.ambient, tuple(rref(list(self.rows) + list(other.rows))))

    def intersection(self, other: "Subspace") -> "Subspace":
        if self.ambient != other.ambient:
            raise DimensionMismatch("subspaces live in different spaces")
        # x in both  <=>  x satisfies the annihilator equations of each
        eqs = annihilator(self) + annihilator(other)
        return nullspace(eqs, self.ambient)

    def __and__(self, other):
        return self.intersection(other)


def annihilator(space: Subspace) -> list[dict]:
    """Equations (as sparse rows) whose common solution set is ``space``."""
    pivots = set(space.pivots)
    eqs = []
    for f in range(space.ambient):
        if f in pivots:
            continue
        # coordinate f is determined by the pivot coordinates
        row = {f: Fraction(1)}
        for r in space.rows:
            x = r.get(f)
            if x:
                row[min(r)] = -x
        eqs.append(row)
    return eqs


def nullspace(equations: Iterable[Mapping[int, object]], ncols: int) -> Subspace:
    """Solution space of the homogeneous system given by sparse equation rows."""
    red = rref(equations)
    pivot_cols = [min(r) for r in red]
    if pivot_cols and max(max(r) for r in red) >= ncols:
        raise DimensionMismatch("equation refers to a column beyond ncols")
    piv = set(pivot_cols)
    vecs = []
    for f in range(ncols):
        if f in piv:
            continue
        v = {f: Fraction(1)}
        for pc, r in zip(pivot_cols, red):
            x = r.get(f)
            if x:
                v[pc] = -x
        vecs.append(v)
    return Subspace(ncols, tuple(rref(vecs)))


def solve(equations: Sequence[Mapping[int, object]], rhs: Sequence, ncols: int):
    """One rational solution of ``A x = rhs`` or ``None`` if inconsistent."""
    aug = []
    for row, b in zip(equations, rhs):
        r = dict(row)
        if b:
            r[ncols] = b
        aug.append(r)
    red = rref(aug)
    x = [Fraction(0)] * ncols
    for r in red:
        pc = min(r)
        if pc == ncols:
            return None
        x[pc] = r.get(ncols, Fraction(0))
    return x


class Frame:
    """Coordinates relative to a fixed list of independent rational vectors.

    Unlike :meth:`Subspace.coordinates` the coordinates refer to the given
    vectors themselves, not to the echelon basis.  Vectors being expressed may
    carry polynomial entries.
    """

    def __init__(self, vectors: Sequence, ambient: int):
        self.ambient = ambient
        self.size = len(vectors)
        aug = []
        for k, v in enumerate(vectors):
            row = _as_sparse(v)
            row[ambient + k] = Fraction(1)
            aug.append(row)
        red = rref(aug)
        if len(red) != self.size or any(min(r) >= ambient for r in red):
            raise ValueError("frame vectors are linearly dependent")
        self._rows = red

    def coordinates(self, vec) -> tuple[list, dict]:
        """``(coords, residual)`` with ``vec = sum coords[i] * vectors[i] + residual``."""
        n = self.ambient
        resid = _as_sparse(vec)
        coords: list = [Fraction(0)] * self.size
        for r in self._rows:
            a = resid.get(min(r), 0)
            if a == 0:
                continue
            for c, x in r.items():
                if c < n:
                    s = simplify(resid.get(c, 0) - a * x)
                    if s != 0:
                        resid[c] = s
                    else:
                        resid.pop(c, None)
                else:
                    coords[c - n] = simplify(coords[c - n] + a * x)
        return coords, resid
