import copy
import json
from fractions import Fraction
from pathlib import Path

import pytest
from jsonschema import Draft202012Validator

from cracklat import catalog
from cracklat import report as R
from cracklat.cli import run_pipeline
from cracklat.errors import CracklatError, ScaffoldingError, TheoremViolation

ROOT = Path(__file__).parent.parent
FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="module")
def validator():
    schema = json.loads((ROOT / "schema" / "cracklat.report-1.json").read_text())
    Draft202012Validator.check_schema(schema)
    return Draft202012Validator(schema)


def pipeline(doc, shape_name=None):
    prob = R.problem_from_json(doc)
    prob["shape_name"] = shape_name or doc.get("problem", doc).get("shape")
    return json.loads(R.dumps(run_pipeline(prob)))


def pentagon_doc():
    S = catalog.pentagon_scaffolding()
    return R.problem_to_json(catalog.pentagon(), S.shape, "p2", S)


@pytest.fixture(scope="module")
def reports():
    mm = json.loads((FIXTURES / "mm2-18.json").read_text())
    return {
        "mm2-18": pipeline(mm),
        "pentagon": pipeline(pentagon_doc()),
        "square": pipeline({"polytope": {"vertices": [[1, 1], [1, -1], [-1, 1], [-1, -1]]}, "shape": "p2"}),
        "bare": pipeline({"polytope": {"vertices": [list(v) for v in catalog.triangle_m().vertices]}}),
    }


def test_reports_validate(validator, reports):
    for name, rep in reports.items():
        errors = list(validator.iter_errors(rep))
        assert not errors, (name, errors[0].message)


def test_schema_rejects_broken_reports(validator, reports):
    rep = copy.deepcopy(reports["pentagon"])
    rep["schema"] = "cracklat.report/0"
    assert not validator.is_valid(rep)
    rep = copy.deepcopy(reports["pentagon"])
    rep["stages"]["ambient"]["rays"][0][0] = 1.5
    assert not validator.is_valid(rep)
    rep = copy.deepcopy(reports["pentagon"])
    del rep["stages"]["positivity"]["positive"]
    assert not validator.is_valid(rep)
    rep = copy.deepcopy(reports["pentagon"])
    rep["stages"]["ci"] = {"status": "error"}
    assert not validator.is_valid(rep)


def test_pentagon_report(reports):
    st = reports["pentagon"]["stages"]
    assert len(st["ambient"]["rays"]) == 5
    assert st["ci"]["multidegrees"] == [[2, 1]]
    assert st["positivity"] == {"status": "ok", "positive": True}
    assert st["ambient"]["smooth"] and st["ambient"]["cracked"] and st["ambient"]["full"]


def test_mm2_18_report(reports):
    st = reports["mm2-18"]["stages"]
    assert st["ci"]["exponents"] == [[2, 2, 0]]
    assert st["positivity"]["positive"] is True
    slabs = st["slabs"]["slabs"]
    assert len(slabs) == 3 and all(s["basepoint_free"] for s in slabs)
    (f1,) = [s for s in slabs if s["stratum"].get("type") == "F1"]
    assert f1["stratum"]["divisor_class_hE"] == [2, 0] and f1["h0"] == 6


def test_partial_reports_mark_skipped(reports):
    st = reports["square"]["stages"]
    assert st["cracked"]["status"] == "ok" and st["cracked"]["cracked"] is False
    for k in ("scaffolding", "ambient", "ci", "slabs", "positivity", "anticanonical"):
        assert st[k] == {"status": "skipped"}, k
    st = reports["bare"]["stages"]
    assert st["census"]["status"] == "ok"
    assert all(st[k] == {"status": "skipped"} for k in R.STAGES if k != "census")


def test_report_round_trip(reports):
    for name, rep in reports.items():
        text = R.dumps(rep)
        again = pipeline(R.load_report(text))
        assert R.dumps(again) == text, name


def test_digest_is_order_independent():
    V = [(1, 0), (0, 1), (-1, -1)]
    assert R.digest(V) == R.digest(V[::-1])
    assert R.digest(V) != R.digest([(1, 0), (0, 1), (-1, -2)])


def test_big_integers_and_fractions():
    assert R.jsonable(2**53 - 1) == 2**53 - 1
    assert R.jsonable(2**60) == str(2**60)
    assert R.jsonable(-(2**60)) == str(-(2**60))
    assert R.jsonable(Fraction(-3, 4)) == "-3/4"
    assert R.jsonable(Fraction(6, 3)) == 2
    assert R.jsonable(True) is True
    for x in (2**60, -(2**70) - 1, Fraction(5, 7), 12):
        assert R.parse_int(json.loads(json.dumps(R.jsonable(x)))) == x
    with pytest.raises(TypeError):
        R.jsonable(object())


def test_big_vertices_survive_a_round_trip():
    big = 2**60
    V = [(big, 0), (0, 1), (-big, -1)]
    doc = json.loads(R.dumps({"polytope": {"vertices": V}}))
    assert doc["polytope"]["vertices"][0] == [str(big), 0]
    prob = R.problem_from_json(doc)
    assert set(prob["polytope"].vertices) == set(V)


def test_error_json():
    e = R.error_json(ScaffoldingError("HullMismatch", "missing vertex", (1, 0)))
    assert (e["status"], e["error"], e["code"], e["witness"]) == ("error", "ScaffoldingError", "HullMismatch", [1, 0])
    t = R.error_json(TheoremViolation("disagree", {"a": True, "b": False}))
    assert t["certificates"] == {"a": True, "b": False}


def test_problem_documents():
    with pytest.raises(CracklatError):
        R.problem_from_json({"polytope": {}})
    with pytest.raises(CracklatError):
        R.problem_from_json({"polytope": {"vertices": []}})
    with pytest.raises(CracklatError):
        R.problem_from_json({"polytope": {"vertices": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]]}, "shape": "p2"})
    with pytest.raises(CracklatError):
        R.shape_spec_fan("p7x")
    assert R.shape_spec_fan("pk:2,1").n_rays == 5
    with pytest.raises(CracklatError):
        R.load_report('{"schema": "other"}')
