"""Catalog of normal forms r = a + b + c and their verification.

Entries are JSON documents shipped under ``bialg/data/catalog`` (or the
directory named by ``BIALG_CATALOG_DIR``).  Each document gives the
parameter names, the three graded pieces as light-cone terms with
polynomial coefficients, the expected multiple t of Omega and a short
provenance formula.
"""
from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .errors import (CatalogParseError, MissingParameter, NotMixedBlock, ParameterizedInput,
                     ScalarParseError, UnknownEntry, UnknownVariant)
from .exterior import MultiVector, multivector_from_doc, split2, wedge
from .lie import bracket
from .linalg import Subspace
from .poincare import InhomogeneousAlgebra, poincare
from .scalar import Poly, Scalar, parse_scalar, simplify, to_scalar
from .schouten import schouten_bracket, span_coordinates

ENV_VAR = "BIALG_CATALOG_DIR"
EQUATIONS = ("cc", "bc", "bb", "ab")
_REQUIRED = ("id", "params", "a", "b", "c", "expected_t")


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    order: int
    params: tuple
    a: Mapping
    b: Mapping
    c: Mapping
    expected_t: str
    row: int | None = None
    family: str = "table"
    discrete: Mapping = field(default_factory=dict)
    param_notes: Mapping = field(default_factory=dict)
    essential_params: int | None = None
    reduction: str | None = None
    provenance: str = ""
    source: str = ""

    @property
    def variants(self) -> list[dict]:
        """All assignments of the discrete parameters (one empty dict if none)."""
        out = [{}]
        for name, values in self.discrete.items():
            out = [dict(v, **{name: x}) for v in out for x in values]
        return out


def default_catalog_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(str(resources.files("bialg") / "data" / "catalog"))


def parse_entry(doc: Mapping, source: str = "<doc>") -> CatalogEntry:
    if not isinstance(doc, Mapping):
        raise CatalogParseError(f"{source}: top level must be an object")
    missing = [k for k in _REQUIRED if k not in doc]
    if missing:
        raise CatalogParseError(f"{source}: missing field(s) {', '.join(missing)}")
    params = tuple(doc["params"])
    discrete = {k: tuple(str(x) for x in v) for k, v in dict(doc.get("discrete") or {}).items()}
    declared = params + tuple(discrete)
    for part in ("a", "b", "c"):
        d = doc[part]
        if not isinstance(d, Mapping) or int(d.get("degree", -1)) != 2:
            raise CatalogParseError(f"{source}: field {part!r} must be a degree-2 document")
        for n, term in enumerate(d.get("terms", [])):
            coeff = term[1] if isinstance(term, (list, tuple)) else term.get("coeff", "1")
            try:
                parse_scalar(coeff, declared)
            except ScalarParseError as exc:
                raise CatalogParseError(f"{source}: {part}.terms[{n}]: {exc}") from None
    try:
        parse_scalar(doc["expected_t"], declared)
    except ScalarParseError as exc:
        raise CatalogParseError(f"{source}: expected_t: {exc}") from None
    return CatalogEntry(
        id=str(doc["id"]), order=int(doc.get("order", 0)), params=params,
        a=doc["a"], b=doc["b"], c=doc["c"], expected_t=str(doc["expected_t"]),
        row=doc.get("row"), family=doc.get("family", "table"), discrete=discrete,
        param_notes=dict(doc.get("param_notes") or {}),
        essential_params=doc.get("essential_params"), reduction=doc.get("reduction"),
        provenance=doc.get("provenance", ""), source=source,
    )


def load_catalog(path: str | Path | None = None) -> dict[str, CatalogEntry]:
    """Read every ``*.json`` document in ``path``; entries come back ordered."""
    root = Path(path) if path is not None else default_catalog_dir()
    if not root.is_dir():
        raise CatalogParseError(f"{root}: catalog directory not found")
    entries = []
    for f in sorted(root.glob("*.json")):
        try:
            doc = json.loads(f.read_text())
        except json.JSONDecodeError as exc:
            raise CatalogParseError(f"{f}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
        except OSError as exc:
            raise CatalogParseError(f"{f}: {exc}") from None
        entries.append(parse_entry(doc, str(f)))
    out: dict = {}
    for e in sorted(entries, key=lambda e: (e.order, e.id)):
        if e.id in out:
            raise CatalogParseError(f"{e.source}: duplicate id {e.id!r}")
        out[e.id] = e
    return out


# ---------------------------------------------------------------------------
# building

@dataclass(frozen=True)
class BuiltEntry:
    id: str
    a: MultiVector
    b: MultiVector
    c: MultiVector
    expected_t: Scalar
    bindings: tuple  # sorted (name, value) pairs actually substituted

    @property
    def r(self) -> MultiVector:
        return self.a + self.b + self.c


def _lightcone_multivector(A: InhomogeneousAlgebra, doc: Mapping, declared) -> MultiVector:
    out = MultiVector.zero(A.algebra, int(doc["degree"]))
    for term in doc.get("terms", []):
        if isinstance(term, (list, tuple)):
            labels, coeff = str(term[0]).split("^"), term[1]
        else:
            labels, coeff = list(term["labels"]), term.get("coeff", "1")
        piece = reduce(wedge, (A[lbl] for lbl in labels))
        out = out + piece * parse_scalar(coeff, declared)
    return out


def document_multivector(A: InhomogeneousAlgebra, doc: Mapping, declared=None) -> MultiVector:
    """Parse a multivector document; ``basis: lightcone`` terms use element names like e+^X+."""
    if doc.get("basis", "algebra") == "lightcone":
        if not A.is_poincare:
            raise CatalogParseError("light-cone terms need the (1,3) algebra")
        declared = list(declared or []) + list(doc.get("params", []))
        return _lightcone_multivector(A, doc, declared)
    return multivector_from_doc(A.algebra, doc, declared)


def _coerce(value) -> Scalar:
    if isinstance(value, str):
        return parse_scalar(value)
    return to_scalar(value)


def _lookup(catalog, entry_id: str) -> CatalogEntry:
    cat = catalog if catalog is not None else load_catalog()
    if entry_id not in cat:
        raise UnknownEntry(entry_id)
    return cat[entry_id]


def build_entry(entry_id: str, bindings: Mapping | None = None,
                catalog: Mapping | None = None) -> BuiltEntry:
    """Build (a, b, c) for an entry.

    ``bindings=None`` keeps every continuous parameter symbolic.  Otherwise
    ``bindings`` must name every parameter; a value of ``None`` keeps that
    one symbolic.  Discrete parameters always need a value.
    """
    entry = _lookup(catalog, entry_id)
    A = poincare()
    declared = entry.params + tuple(entry.discrete)
    given = dict(bindings or {})
    need = list(entry.discrete) + (list(entry.params) if bindings is not None else [])
    for name in need:
        if name not in given:
            raise MissingParameter(f"{entry_id}: no value for parameter {name!r}")
    subs = {}
    for name, allowed in entry.discrete.items():
        v = _coerce(given[name])
        if v not in [parse_scalar(x) for x in allowed]:
            raise UnknownVariant(f"{entry_id}: {name}={v} not among {list(allowed)}")
        subs[name] = v
    for name in entry.params:
        if given.get(name) is not None:
            subs[name] = _coerce(given[name])
    pieces = [document_multivector(A, getattr(entry, part), declared).subs(subs)
              for part in ("a", "b", "c")]
    a, b, c = pieces
    parts = split2(a + b + c)
    if parts.a != a or parts.b != b or parts.c != c:
        raise CatalogParseError(f"{entry.source}: a, b, c are not in the blocks L2V, V^h, L2h")
    t = parse_scalar(entry.expected_t, declared)
    if isinstance(t, Poly):
        t = t.subs(subs)
    return BuiltEntry(entry.id, a, b, c, simplify(t), tuple(sorted(subs.items())))


# ---------------------------------------------------------------------------
# verification

@dataclass(frozen=True)
class VerificationReport:
    id: str
    residuals: Mapping  # equation name -> trivector residual
    t_solved: Scalar | None
    expected_t: Scalar
    passed: bool
    bindings: tuple = ()
    variants: tuple = ()  # per-variant reports when discrete parameters were enumerated

    @property
    def failing(self) -> list[str]:
        return [k for k in EQUATIONS if not self.residuals[k].is_zero()]

    @property
    def t_matches(self) -> bool:
        return self.t_solved is not None and simplify(self.t_solved - self.expected_t) == 0


def _bracket(u: MultiVector, v: MultiVector) -> MultiVector:
    return schouten_bracket(u, v)


def check_equations(a: MultiVector, b: MultiVector, c: MultiVector, t) -> tuple[dict, Scalar | None]:
    """Residuals of [c,c], [b,c], 2[a,c]+[b,b]-t Omega and [a,b]; also the solved t."""
    A = poincare()
    omega = A["Omega"]
    w = _bracket(a, c) * 2 + _bracket(b, b)
    coords, resid = span_coordinates(w, [omega])
    t_solved = coords[0] if resid.is_zero() else None
    res = {
        "cc": _bracket(c, c),
        "bc": _bracket(b, c),
        "bb": w - omega * t,
        "ab": _bracket(a, b),
    }
    return res, t_solved


def _verify_built(built: BuiltEntry) -> VerificationReport:
    res, t_solved = check_equations(built.a, built.b, built.c, built.expected_t)
    ok = all(x.is_zero() for x in res.values())
    return VerificationReport(built.id, res, t_solved, built.expected_t, ok, built.bindings)


def verify_entry(entry_id: str, bindings: Mapping | None = None,
                 catalog: Mapping | None = None) -> VerificationReport:
    """Verify the four defining equations; failures are reported, not raised.

    Unbound discrete parameters are enumerated; the combined report passes
    when every variant does and carries the first failing variant's data.
    """
    entry = _lookup(catalog, entry_id)
    given = dict(bindings or {})
    open_discrete = [d for d in entry.discrete if d not in given]
    if not open_discrete:
        return _verify_built(build_entry(entry_id, bindings, catalog={entry_id: entry}))
    subs = []
    for variant in entry.variants:
        if any(k in given and parse_scalar(given[k]) != parse_scalar(v)
               for k, v in variant.items()):
            continue
        if bindings is None:
            built = _build_with_discrete(entry, variant)
        else:
            built = build_entry(entry_id, dict(given, **variant), catalog={entry_id: entry})
        subs.append(_verify_built(built))
    lead = next((s for s in subs if not s.passed), subs[-1])
    return VerificationReport(entry.id, lead.residuals, lead.t_solved, lead.expected_t,
                              all(s.passed for s in subs), lead.bindings, tuple(subs))


def _build_with_discrete(entry: CatalogEntry, discrete: Mapping) -> BuiltEntry:
    bindings = {p: None for p in entry.params}
    bindings.update(discrete)
    return build_entry(entry.id, bindings, catalog={entry.id: entry})


@dataclass(frozen=True)
class CatalogSummary:
    mode: str
    reports: tuple  # ordered like the catalog
    samples: int = 0
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    @property
    def pass_count(self) -> int:
        return sum(r.passed for r in self.reports)

    @property
    def failures(self) -> list[str]:
        return [r.id for r in self.reports if not r.passed]


def sample_bindings(entry: CatalogEntry, rng: random.Random) -> dict:
    """Random nonzero rationals for the continuous parameters."""
    out = {}
    for p in entry.params:
        num = rng.choice([x for x in range(-9, 10) if x])
        out[p] = Fraction(num, rng.randint(1, 7))
    return out


def _sampled_report(entry: CatalogEntry, samples: int, seed: int, catalog) -> VerificationReport:
    # per-entry stream so that a single entry reproduces its line of a full run
    rng = random.Random(f"{seed}:{entry.id}")
    subs = []
    for _ in range(samples):
        bindings = sample_bindings(entry, rng)
        for variant in entry.variants:
            subs.append(verify_entry(entry.id, dict(bindings, **variant), catalog))
    if not subs:
        return verify_entry(entry.id, None, catalog)
    lead = next((s for s in subs if not s.passed), subs[-1])
    return VerificationReport(entry.id, lead.residuals, lead.t_solved, lead.expected_t,
                              all(s.passed for s in subs), lead.bindings, tuple(subs))


def verify_all(mode: str = "symbolic", samples: int = 5, seed: int = 0,
               catalog: Mapping | None = None,
               entries: Iterable[str] | None = None) -> CatalogSummary:
    cat = catalog if catalog is not None else load_catalog()
    ids = list(cat) if entries is None else list(entries)
    for i in ids:
        if i not in cat:
            raise UnknownEntry(i)
    if mode == "symbolic":
        reports = tuple(verify_entry(i, None, cat) for i in ids)
        return CatalogSummary(mode, reports)
    if mode == "sampled":
        reports = tuple(_sampled_report(cat[i], samples, seed, cat) for i in ids)
        return CatalogSummary(mode, reports, samples, seed)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# triangular decomposition  b(g*) = V0 + h0

@dataclass(frozen=True)
class TriangularDecomposition:
    V0: Subspace  # inside V (coordinates e0..e_{n-1})
    h0: Subspace  # inside h (coordinates of the h basis)
    is_subalgebra: bool

    def V0_elements(self, A: InhomogeneousAlgebra) -> list[MultiVector]:
        return [A.vector(v) for v in self.V0.basis()]

    def h0_elements(self, A: InhomogeneousAlgebra) -> list[MultiVector]:
        n = A.n
        return [MultiVector(A.algebra, 1, {(n + k,): x for k, x in enumerate(v) if x})
                for v in self.h0.basis()]


def triangular_decomposition(b: MultiVector,
                             A: InhomogeneousAlgebra | None = None) -> TriangularDecomposition:
    """V0 = b(h*), h0 = b(V*), and whether V0 + h0 is a subalgebra."""
    A = A if A is not None else poincare()
    g = b.algebra
    if g is not A.algebra and g != A.algebra:
        raise NotMixedBlock("b does not live in the given inhomogeneous algebra")
    if b.degree != 2:
        raise NotMixedBlock("b must be a bivector")
    n, dh = A.n, g.dim - A.n
    vcols: dict = {}
    hrows: dict = {}
    for (i, k), x in b.items():
        if isinstance(x, Poly):
            raise ParameterizedInput("triangular_decomposition needs rational coefficients")
        if not (i < n <= k):
            raise NotMixedBlock(f"term {g.labels[i]}^{g.labels[k]} is not in V^h")
        vcols.setdefault(k - n, {})[i] = x
        hrows.setdefault(i, {})[k - n] = x
    V0 = Subspace.span(vcols.values(), n)
    h0 = Subspace.span(hrows.values(), dh)
    tri = TriangularDecomposition(V0, h0, False)
    Vs, hs = tri.V0_elements(A), tri.h0_elements(A)

    def in_h0(x: MultiVector) -> bool:
        return h0.contains({k - n: c for (k,), c in x.items() if k >= n}) and \
            all(k >= n for (k,), _ in x.items())

    def in_V0(x: MultiVector) -> bool:
        return V0.contains({k: c for (k,), c in x.items()}) and all(k < n for (k,), _ in x.items())

    closed = all(in_h0(bracket(g, X, Y)) for X in hs for Y in hs) and \
        all(in_V0(bracket(g, X, v)) for X in hs for v in Vs)
    return TriangularDecomposition(V0, h0, closed)


# ---------------------------------------------------------------------------
# parameter counts

@dataclass(frozen=True)
class ReductionReport:
    id: str
    declared: int | None  # the documented number of essential parameters
    params: tuple
    moves: str | None  # "dilation", "H+dilation" or None
    removable: int | None  # None when the scaling analysis does not apply

    @property
    def realized(self) -> bool | None:
        if self.declared is None or self.removable is None:
            return None
        return len(self.params) - self.removable == self.declared


def parameter_reduction(entry_id: str, catalog: Mapping | None = None) -> ReductionReport:
    """Realize the documented parameter count with dilations (and H-flows).

    Only entries that name a scaling reduction are analysed; the others
    report ``removable=None``.
    """
    from .automorphisms import scaling_reduction
    entry = _lookup(catalog, entry_id)
    removable = None
    if entry.reduction in ("dilation", "H+dilation") and not entry.discrete:
        A = poincare()
        built = build_entry(entry_id, None, catalog={entry_id: entry})
        red = scaling_reduction(A, built.r, entry.params, entry.reduction == "H+dilation")
        removable = None if red is None else red.reduction
    return ReductionReport(entry.id, entry.essential_params, entry.params, entry.reduction,
                           removable)
