import io
import json
import random
import shutil
import subprocess
import sys
from itertools import combinations
from pathlib import Path

import pytest

from bialg.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from bialg.exterior import MultiVector, multivector_from_doc, multivector_to_doc
from bialg.catalog import document_multivector
from bialg.poincare import format_lightcone, make_inhomogeneous, poincare, special3
from bialg.schouten import schouten_bracket

ROOT = Path(__file__).resolve().parents[1]
DATA = Path(__file__).resolve().parent / "data"
A = poincare()


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def test_default_run_reports_every_entry():
    code, out, _ = run("verify-catalog")
    lines = out.splitlines()
    assert lines[-1] == "28/29 pass (mode=symbolic)"
    assert code == EXIT_FAIL
    fail = [ln for ln in lines if " FAIL " in ln]
    assert len(fail) == 1 and fail[0].startswith("row12")
    assert "    ab: 2*alpha2*e+^e1^e2" in lines


def test_single_entry_sampled_is_deterministic():
    args = ("verify-catalog", "--entry", "row4", "--mode", "sampled", "--samples", 5, "--seed", 7)
    first = run(*args)
    assert first[0] == EXIT_OK
    assert first[1].splitlines()[-1] == "1/1 pass (mode=sampled samples=5 seed=7)"
    assert run(*args) == first


def test_jsonl_byte_identical_and_round_trips():
    args = ("verify-catalog", "--mode", "sampled", "--samples", 2, "--seed", 11, "--format", "jsonl")
    code, out, _ = run(*args)
    assert (code, out) == run(*args)[:2]
    rows = [json.loads(x) for x in out.splitlines()]
    assert rows[-1]["summary"]["failures"] == ["row12"]
    for row in rows[:-1]:
        for doc in row["residuals"].values():
            u = multivector_from_doc(A.algebra, doc)
            assert multivector_to_doc(u) == doc


def test_bound_verification():
    code, out, _ = run("verify-catalog", "--entry", "row12", "--bind", "alpha2=0")
    assert code == EXIT_OK and out.splitlines()[-1] == "1/1 pass (mode=bound)"


def test_corrupted_catalog(tmp_path, monkeypatch):
    dst = tmp_path / "cat"
    shutil.copytree(ROOT / "src/bialg/data/catalog", dst)
    (dst / "row7.json").write_text('{"id": "row7", "params": [\n')
    code, out, err = run("verify-catalog", "--catalog", dst)
    assert code == EXIT_USAGE and out == ""
    assert "row7.json:2:1" in err
    monkeypatch.setenv("BIALG_CATALOG_DIR", str(dst))
    assert run("verify-catalog")[0] == EXIT_USAGE


def test_usage_errors():
    assert run("verify-catalog", "--entry", "row99")[0] == EXIT_USAGE
    assert run("verify-catalog", "--mode", "fuzzy")[0] == EXIT_USAGE
    assert run("verify-catalog", "--samples", 0, "--mode", "sampled")[0] == EXIT_USAGE
    assert run("verify-catalog", "--bind", "alpha")[0] == EXIT_USAGE
    assert run()[0] == EXIT_USAGE
    assert run("cohomology", "--module", "L4g")[0] == EXIT_USAGE
    assert run("cohomology", "--algebra", "x")[0] == EXIT_USAGE
    assert run("gcybe", DATA / "missing.json")[0] == EXIT_USAGE
    assert run("gcybe", DATA / "b_e0.json", "--algebra", "2,2")[0] == EXIT_USAGE


def test_malformed_input_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"degree": 2,\n "terms": [oops]}')
    code, _, err = run("gcybe", bad)
    assert code == EXIT_USAGE and "bad.json:2:12" in err


def test_gcybe_kappa():
    code, out, _ = run("gcybe", DATA / "b_e0.json")
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "GCYBE holds, t = -1"


def test_gcybe_zero():
    code, out, _ = run("gcybe", DATA / "zero.json")
    assert code == EXIT_OK and out.splitlines() == ["[r,r] = 0", "GCYBE holds, t = 0, [r,r]=0"]


def test_gcybe_random_dense_fails(tmp_path):
    rng = random.Random(5)
    pairs = list(combinations(range(10), 2))
    r = MultiVector(A.algebra, 2, {t: rng.randint(1, 9) for t in pairs})
    path = tmp_path / "dense.json"
    path.write_text(json.dumps(multivector_to_doc(r)))
    code, out, _ = run("gcybe", path)
    assert code == EXIT_FAIL
    assert out.splitlines()[-1].startswith("Fails: [r,r] is not invariant; residual has ")


def test_gcybe_symbolic_with_binding():
    code, out, _ = run("gcybe", DATA / "row4_b.json")
    assert code == EXIT_FAIL
    code, out, _ = run("gcybe", DATA / "row4_b.json", "--bind", "beta=0")
    assert code == EXIT_OK and out.endswith("GCYBE holds, t = 0, [r,r]=0\n")


def test_cohomology_outputs():
    code, out, _ = run("cohomology")
    assert code == EXIT_OK
    assert out == "(1,3) module L2g acting g: Z=45 B=45 H=0 invariants dim = 0\n"
    code, out, _ = run("cohomology", "--module", "L3g", "--invariants", "--emit-basis")
    lines = out.splitlines()
    assert lines[0] == "(1,3) module L3g acting g: invariants dim = 1"
    assert len(lines) == 2


def test_cohomology_s_invariant_at_1_2():
    code, out, _ = run("cohomology", "--algebra", "1,2", "--module", "L2g", "--acting", "h",
                       "--invariants", "--emit-basis", "--format", "jsonl")
    obj = json.loads(out)
    assert code == EXIT_OK and obj["invariants"] == 1
    B = make_inhomogeneous(1, 2)
    (u,) = [multivector_from_doc(B.algebra, d) for d in obj["basis"]]
    s = special3(B).s
    k = next(iter(s.coeffs))
    assert u * s[k] == s * u[k]


def test_schouten_dump():
    code, out, _ = run("schouten", DATA / "b_e2.json", DATA / "b_e2.json")
    lines = out.splitlines()
    assert code == EXIT_OK
    assert lines[0] == "[r,s] = " + format_lightcone(A, A["Omega"])
    assert lines[1].startswith("  vvv: ") and lines[2].startswith("  vvh: ")
    code, out, _ = run("schouten", DATA / "b_e0.json", DATA / "zero.json")
    assert out.splitlines()[0] == "[r,s] = 0"


def test_schouten_symbolic_row4():
    code, out, _ = run("schouten", DATA / "row4_b.json", DATA / "row4_b.json", "--format", "jsonl")
    obj = json.loads(out)
    b = document_multivector(A, json.loads((DATA / "row4_b.json").read_text()))
    w = multivector_from_doc(A.algebra, obj["bracket"])
    assert code == EXIT_OK and obj["bracket"]["params"] == ["beta"]
    assert w == schouten_bracket(b, b)
    # 2[a,c] + [b,b] = 0 on row 4, with a's beta^2 part against c = JX+^X+
    assert format_lightcone(A, w) == "-2*beta^2*e+^e1^X+ + 2*beta^2*e+^e2^JX+"


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "bialg", "--version"], capture_output=True,
                         text=True)
    assert out.returncode == 0 and out.stdout.startswith("bialg ")
