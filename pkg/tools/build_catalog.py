"""Regenerate the shipped catalog documents under src/bialg/data/catalog.

Every entry is written from its normal-form formula, expanded in the
light-cone basis e+, e-, e1, e2, H, JH, X+, JX+, X-, JX-.  Run

    python3 tools/build_catalog.py [--check] [--out DIR]

``--check`` compares against the files on disk instead of writing.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from bialg.exterior import MultiVector, wedge
from bialg.poincare import be0_plus, be1_plus, be1_plus_a, lightcone_terms, poincare
from bialg.scalar import Poly, format_scalar

OUT = Path(__file__).resolve().parents[1] / "src" / "bialg" / "data" / "catalog"

A = poincare()
P = Poly.var
ZERO = MultiVector.zero(A.algebra, 2)


def E(name):
    return A[name]


def W(x, y):
    return wedge(E(x) if isinstance(x, str) else x, E(y) if isinstance(y, str) else y)


al, alt, a1, a2 = P("alpha"), P("alpha_t"), P("alpha1"), P("alpha2")
be, b1, b2, ga, sg, lam = P("beta"), P("beta1"), P("beta2"), P("gamma"), P("sigma"), P("lam")

COMMON_A = W("e0", "e3") * a1 + W("e1", "e2") * a2

# id -> (c, b, a, params, expected_t, essential, reduction, provenance)
TABLE = {
    1: (W("JH", "H") * ga, ZERO, W("e+", "e-") * al + W("e1", "e2") * alt,
        ["gamma", "alpha", "alpha_t"], "0", 2, "dilation",
        "c = gamma JH^H ; b = 0 ; a = alpha e+^e- + alpha~ e1^e2"),
    2: (W("JX+", "X+"), E("b_e+") * b1 + W("e+", "JH") * b2, ZERO,
        ["beta1", "beta2"], "0", 1, "dilation",
        "c = JX+^X+ ; b = beta1 b_{e+} + beta2 e+^JH ; a = 0"),
    3: (W("JX+", "X+"), E("b_e+") * be, W("e+", "e1") * al,
        ["beta", "alpha"], "0", 1, "dilation",
        "c = JX+^X+ ; b = beta b_{e+} ; a = alpha e+^e1"),
    4: (W("JX+", "X+"), (W("e1", "X+") + W("e2", "JX+")) * be,
        W("e+", "e1") * a1 + W("e+", "e2") * a2 - W("e1", "e2") * be * be,
        ["beta", "alpha1", "alpha2"], "0", 2, "dilation",
        "c = JX+^X+ ; b = beta (e1^X+ + e2^JX+) ; a = e+^(alpha1 e1 + alpha2 e2) - beta^2 e1^e2"),
    5: (W("H", "X+") - W("JH", "JX+") + W("JX+", "X+") * ga, ZERO, ZERO,
        ["gamma"], "0", 1, None,
        "c = H^X+ - JH^JX+ + gamma JX+^X+ ; b = 0 ; a = 0"),
    6: (W("H", "X+"), E("b_e2") * b1 + W("e2", "X+") * b2, ZERO,
        ["beta1", "beta2"], "beta1^2", 1, "dilation",
        "c = H^X+ ; b = beta1 b_{e2} + beta2 e2^X+ ; a = 0"),
    7: (ZERO, E("b_e+") + W("e+", "JH") * be, ZERO,
        ["beta"], "0", 1, None, "c = 0 ; b = b_{e+} + beta e+^JH ; a = 0"),
    8: (ZERO, E("b_e+") + W("e+", "X+") * be, ZERO,
        ["beta"], "0", 1, None, "c = 0 ; b = b_{e+} + beta e+^X+ ; a = 0"),
    9: (ZERO, wedge(E("e1"), E("X+") + E("JX+") * be) + wedge(E("e+"), E("H") + E("X+") * sg),
        W("e+", "e2") * al,
        ["beta", "alpha"], "0", 2, None,
        "c = 0 ; b = e1^(X+ + beta JX+) + e+^(H + sigma X+), sigma = 0, +-1 ; a = alpha e+^e2"),
    10: (ZERO, W("e1", "JX+") + W("e+", "X+"), W("e-", "e1") * a1 + W("e+", "e2") * a2,
         ["alpha1", "alpha2"], "0", 2, None,
         "c = 0 ; b = e1^JX+ + e+^X+ ; a = alpha1 e-^e1 + alpha2 e+^e2"),
    11: (ZERO, W("e2", "X+"), W("e+", "e1") * a1 + W("e-", "e2") * a2,
         ["alpha1", "alpha2"], "0", 1, "H+dilation",
         "c = 0 ; b = e2^X+ ; a = alpha1 e+^e1 + alpha2 e-^e2"),
    12: (ZERO, W("e+", "X+"),
         wedge(E("e-"), E("e+") * al + E("e1") * a1 + E("e2") * a2) + W("e+", "e2") * alt,
         ["alpha", "alpha1", "alpha2", "alpha_t"], "0", 3, "H+dilation",
         "c = 0 ; b = e+^X+ ; a = e-^(alpha e+ + alpha1 e1 + alpha2 e2) + alpha~ e+^e2"),
    13: (ZERO, W("e0", "JH"), COMMON_A, ["alpha1", "alpha2"], "0", 2, None,
         "c = 0 ; b = e0^JH ; a = alpha1 e0^e3 + alpha2 e1^e2"),
    14: (ZERO, W("e3", "JH"), COMMON_A, ["alpha1", "alpha2"], "0", 2, None,
         "c = 0 ; b = e3^JH ; a = alpha1 e0^e3 + alpha2 e1^e2"),
    15: (ZERO, W("e+", "JH"), COMMON_A, ["alpha1", "alpha2"], "0", 1, "H+dilation",
         "c = 0 ; b = e+^JH ; a = alpha1 e0^e3 + alpha2 e1^e2"),
    16: (ZERO, W("e1", "H"), COMMON_A, ["alpha1", "alpha2"], "0", 2, None,
         "c = 0 ; b = e1^H ; a = alpha1 e0^e3 + alpha2 e1^e2"),
    17: (ZERO, W("e+", "H"), W("e1", "e2") * al + W("e+", "e1") * a1,
         ["alpha", "alpha1"], "0", 1, "H+dilation",
         "c = 0 ; b = e+^H ; a = alpha e1^e2 + alpha1 e+^e1"),
    18: (ZERO, wedge(E("e+"), E("H") + E("JH") * be), W("e1", "e2") * al,
         ["beta", "alpha"], "0", 1, "H+dilation",
         "c = 0 ; b = e+^(H + beta JH) ; a = alpha e1^e2"),
    19: (ZERO, ZERO, W("e1", "e+"), [], "0", 0, None, "c = 0 ; b = 0 ; a = e1^e+"),
    20: (ZERO, ZERO, W("e1", "e2"), [], "0", 0, None, "c = 0 ; b = 0 ; a = e1^e2"),
    21: (ZERO, ZERO, W("e0", "e3") + W("e1", "e2") * al, ["alpha"], "0", 1, None,
         "c = 0 ; b = 0 ; a = e0^e3 + alpha e1^e2"),
}

NOTES = {
    "alpha_t": "second independent a-coefficient (alpha-tilde)",
    "lam": "free real parameter of the kappa-type family",
}


def kappa_entries():
    out = []
    out.append(("be0+", ZERO, be0_plus(A, lam), ZERO, ["lam"], "-1",
                "c = 0 ; b = b_{e0} + lam e0^M3 ; a = 0 ; t = -g(e0,e0)"))
    for Y in ("M1", "M1+L3", "H"):
        out.append((f"be1+:{Y}", ZERO, be1_plus(A, lam, Y), ZERO, ["lam"], "1",
                    f"c = 0 ; b = b_{{e1}} + lam e1^({Y}) ; a = 0 ; t = -g(e1,e1)"))
    for k in (1, 2):
        for sign, s in ((1, "+"), (-1, "-")):
            r = be1_plus_a(A, k, sign, al)
            a = MultiVector(A.algebra, 2, {t: c for t, c in r.items()
                                           if all(i < A.n for i in t)})
            out.append((f"be1+a:k={k}:{s}", ZERO, r - a, a, ["alpha"], "1",
                        f"c = 0 ; b = b_{{e1}} {s} {k} e1^H ; a = alpha e{k}^e{s} ; t = -g(e1,e1)"))
    return out


def lc_doc(u: MultiVector) -> dict:
    return {
        "degree": u.degree,
        "basis": "lightcone",
        "terms": [["^".join(lbl), format_scalar(c)] for lbl, c in lightcone_terms(A, u)],
    }


def documents() -> list[dict]:
    docs = []
    order = 0
    for row, (c, b, a, params, t, ess, red, prov) in TABLE.items():
        order += 1
        doc = {
            "id": f"row{row}", "order": order, "row": row, "family": "table",
            "params": params,
            "param_notes": {p: NOTES[p] for p in params if p in NOTES},
            "discrete": {"sigma": ["0", "1", "-1"]} if row == 9 else {},
            "c": lc_doc(c), "b": lc_doc(b), "a": lc_doc(a),
            "expected_t": t, "essential_params": ess, "reduction": red,
            "provenance": prov,
        }
        docs.append(doc)
    for eid, c, b, a, params, t, prov in kappa_entries():
        order += 1
        docs.append({
            "id": eid, "order": order, "row": None, "family": "kappa",
            "params": params, "param_notes": {p: NOTES[p] for p in params if p in NOTES},
            "discrete": {}, "c": lc_doc(c), "b": lc_doc(b), "a": lc_doc(a),
            "expected_t": t, "essential_params": None, "reduction": None,
            "provenance": prov,
        })
    return docs


def filename(eid: str) -> str:
    return eid.replace(":", "_").replace("+", "p").replace("-", "m").replace("=", "") + ".json"


def render(doc: dict) -> str:
    # one term per line keeps diffs readable
    lines = ["{"]
    items = list(doc.items())
    for n, (k, v) in enumerate(items):
        end = "," if n < len(items) - 1 else ""
        if k in ("a", "b", "c"):
            terms = ",\n".join("      " + json.dumps(t) for t in v["terms"])
            body = f'"degree": {v["degree"]}, "basis": "{v["basis"]}", "terms": ['
            body += f"\n{terms}\n    ]" if terms else "]"
            lines.append(f'  "{k}": {{{body}}}{end}')
        else:
            lines.append(f"  {json.dumps(k)}: {json.dumps(v)}{end}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=OUT)
    ap.add_argument("--check", action="store_true")
    args = ap.parse_args(argv)
    docs = documents()
    stale = []
    if not args.check:
        args.out.mkdir(parents=True, exist_ok=True)
    for doc in docs:
        path = args.out / filename(doc["id"])
        text = render(doc)
        if args.check:
            if not path.exists() or path.read_text() != text:
                stale.append(path.name)
        else:
            path.write_text(text)
    if stale:
        print("stale: " + ", ".join(stale), file=sys.stderr)
        return 1
    print(f"{len(docs)} entries {'checked' if args.check else 'written'} in {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
