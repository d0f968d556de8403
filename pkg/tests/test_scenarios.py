import copy
import io
import json
from fractions import Fraction

import pytest

from delpezzo_delta import scenarios
from delpezzo_delta.errors import ParseError, UnknownCase, ValidationError
from delpezzo_delta.lattice import check_decomposition

EXPECTED = {
    "cubic-line": "5/9",
    "eckardt-Q-on-line": "17/9",
    "eckardt-Q-general": "5/3",
    "twoline-Q-on-line": "49/27",
    "twoline-general-conic": "59/36",
    "twoline-general-eckardt": "5/3",
    "twoline-general-generic": "5/3",
    "lineconic-Q-on-L": "9/5",
    "lineconic-Q-on-C": "5/3",
    "tangential": "17/9",
    "irreducible-Q-on-C": "5/3",
    "irreducible-general-cubic": "49/30",
    "irreducible-general-conic": "59/36",
    "irreducible-general-eckardt": "5/3",
    "irreducible-general-generic": "5/3",
    "oneline-general-cubic": "103/63",
    "oneline-general-conic": "89/54",
    "oneline-general-threelines": "5/3",
    "dp1-ordinary": "2/3",
    "dp1-singular": "5/6",
    "dp1-Q-on-C": "11/9",
    "dp1-Q-off-C": "1",
}


def test_catalog_contents(catalog):
    ids = [s.id for s in catalog]
    assert ids == sorted(ids)
    assert len(ids) >= 18
    assert {k: Fraction(v) for k, v in EXPECTED.items()} == {s.id: s.expected_bound for s in catalog}
    eck = scenarios.get("eckardt-Q-on-line")
    assert eck.lemma == "lines passing through P"
    with pytest.raises(UnknownCase):
        scenarios.get("nope")


def test_catalog_invariants(catalog):
    for s in catalog:
        assert s.problems() == []
        assert s.expected_bound > 0
        if s.mode == "full":
            assert s.declared_tau is not None
        else:
            assert s.truncation is not None
        for lhs, rhs in s.relations:
            assert check_decomposition(s.system, lhs, rhs)


def test_every_scenario_matches(catalog):
    for s in catalog:
        report = scenarios.run(s)
        assert report.matches_expected, (s.id, report.checks, report.error)
        assert report.error is None


def test_run_examples(by_id):
    r = scenarios.run(by_id["eckardt-Q-on-line"])
    assert r.computed_bound == Fraction(17, 9) and r.tau == 4 and r.matches_expected
    r = scenarios.run(by_id["oneline-general-threelines"])
    assert (r.head, r.tail, r.computed_bound) == (Fraction(89, 54), Fraction(1, 54), Fraction(5, 3))
    assert r.errata == ()
    assert scenarios.run(by_id["irreducible-general-cubic"]).computed_bound == Fraction(49, 30)


def test_errata_flagged(by_id):
    r = scenarios.run(by_id["oneline-general-conic"])
    assert r.head == Fraction(709, 432) and r.tail == Fraction(1, 144)
    assert r.computed_bound == Fraction(89, 54)
    assert any("printed 1/48" in e for e in r.errata)
    assert any("printed 1/96" in e for e in r.errata)
    r = scenarios.run(by_id["irreducible-general-generic"])
    assert any("nef class" in e for e in r.errata)
    assert scenarios.run(by_id["twoline-general-generic"]).errata == ()
    r = scenarios.run(by_id["dp1-ordinary"])
    assert r.matches_expected
    assert r.errata == ("integrand: printed 1 - 2*x^2 + x^4, computed 1 - x^2",)
    for sid in ("dp1-Q-on-C", "dp1-Q-off-C"):
        r = scenarios.run(by_id[sid])
        assert r.matches_expected and any("printed E1, computed with E2" in e for e in r.errata)
    assert scenarios.run(by_id["dp1-singular"]).errata == ()


def test_round_trip(catalog):
    for s in catalog:
        text = scenarios.dumps(s)
        again = scenarios.loads(text)
        assert again == s
        assert again.printed == s.printed
        assert scenarios.dumps(again) == text


def test_committed_files_equal_serialization(catalog):
    from importlib import resources

    root = resources.files("delpezzo_delta") / "data" / "scenarios"
    for s in catalog:
        committed = json.loads((root / f"{s.id}.json").read_text(encoding="utf-8"))
        assert committed == scenarios.to_document(s)


def _doc(sid="eckardt-Q-on-line"):
    return copy.deepcopy(scenarios.to_document(scenarios.get(sid)))


def test_asymmetric_gram_rejected():
    doc = _doc()
    doc["gram"][0][1] = "1"
    with pytest.raises(ValidationError):
        scenarios.from_document(doc)


def test_float_and_parse_errors():
    doc = _doc()
    doc["degree"] = 3.0
    with pytest.raises(ParseError) as info:
        scenarios.from_document(doc)
    assert info.value.field == "degree"
    doc = _doc()
    doc["gram"][0][0] = "-3.0"
    with pytest.raises(ParseError):
        scenarios.from_document(doc)
    with pytest.raises(ParseError) as info:
        scenarios.loads('{\n  "id": "x",\n  oops\n}')
    assert info.value.line == 3
    doc = _doc()
    del doc["F"]
    with pytest.raises(ParseError):
        scenarios.from_document(doc)


def test_broken_relation_rejected():
    doc = _doc()
    doc["relations"][0]["rhs"]["E2"] = "3"
    with pytest.raises(ValidationError):
        scenarios.from_document(doc)


def test_mismatched_expectation_fails_report():
    doc = _doc()
    doc["expected_bound"] = "5/3"
    report = scenarios.run(scenarios.from_document(doc))
    assert not report.matches_expected
    assert report.computed_bound == Fraction(17, 9)
    doc = _doc()
    doc["declared_vol"][0]["c2"] = "-1"
    doc["declared_vol"][1]["c0"] = "3"
    doc["declared_vol"][1]["c1"] = "0"
    doc["declared_vol"][1]["c2"] = "-1"
    report = scenarios.run(scenarios.from_document(doc))
    assert dict(report.checks)["table"] is False and not report.matches_expected


def test_engine_error_becomes_failed_report():
    doc = {
        "id": "root-three", "lemma": "toy", "degree": "3", "curves": ["F"], "gram": [["-1"]],
        "a_dot": ["0"], "F": "F", "declared_tau": None, "declared_vol": None, "relations": [],
        "mode": "full", "truncation": None, "expected_bound": "1", "comment": "",
    }
    report = scenarios.run(scenarios.from_document(doc))
    assert not report.matches_expected
    assert report.error.startswith("IrrationalThreshold")


def test_custom_two_curve_system_end_to_end():
    # G is disjoint from F and A, so it never enters the support and
    # vol(A - xF) = 3 - 2x - x^2 by hand, vanishing at x = 1.
    doc = {
        "id": "toy", "lemma": "toy", "degree": "3", "curves": ["F", "G"],
        "gram": [["-1", "0"], ["0", "-2"]], "a_dot": ["1", "0"], "F": "F",
        "declared_tau": "1", "declared_vol": [{"from": "0", "to": "1", "c0": "3", "c1": "-2", "c2": "-1"}],
        "relations": [], "mode": "full", "truncation": None, "expected_bound": "5/9", "comment": "",
    }
    s = scenarios.load(io.StringIO(json.dumps(doc)))
    report = scenarios.run(s)
    assert report.matches_expected and report.computed_bound == Fraction(5, 9)


def test_report_round_trip(catalog):
    for s in catalog:
        r = scenarios.run(s)
        text = json.dumps(r.to_dict(), indent=2)
        again = scenarios.Report.from_dict(json.loads(text))
        assert again == r
        assert json.dumps(again.to_dict(), indent=2) == text


def test_aggregates(catalog):
    reports = scenarios.run_all(catalog)
    cubic = scenarios.cubic_aggregate(reports, catalog)
    assert cubic.passed and cubic.value == Fraction(18, 17)
    point_bounds = [r.computed_bound for r, s in zip(reports, catalog) if scenarios.is_cubic_point_scenario(s)]
    assert max(point_bounds) == Fraction(17, 9)
    dp1 = scenarios.dp1_aggregate(reports, catalog)
    assert dp1.passed and dp1.value == Fraction(18, 11) >= Fraction(3, 2)
