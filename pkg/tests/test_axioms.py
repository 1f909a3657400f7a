import json

import pytest

from dtcalc import axioms, bivariant, codec
from dtcalc.constructible import pullback_cf


def test_all_checks_pass():
    report = axioms.check_axioms(seed=7, count=200)
    assert report["checks"]["total"] == 200
    assert report["checks"]["passed"] == 200
    assert set(report["checks"]["byAxiom"]) == set(axioms.KINDS)
    assert report["failures"] == []
    assert len(report["seeds"]) == 200


def test_locally_closed_generators_pass():
    report = axioms.check_axioms(seed=3, count=100, locally_closed=True)
    assert report["checks"]["failed"] == 0
    assert report["checks"]["locallyClosedGenerators"] is True


def test_deterministic():
    a = axioms.check_axioms(seed=11, count=60)
    b = axioms.check_axioms(seed=11, count=60)
    a["checks"].pop("seconds"), b["checks"].pop("seconds")
    assert a == b


def test_parallel_matches_serial():
    serial = axioms.check_axioms(seed=5, count=80)
    parallel = axioms.check_axioms(seed=5, count=80, workers=2)
    serial["checks"].pop("seconds"), parallel["checks"].pop("seconds")
    assert serial == parallel


@pytest.mark.parametrize("kind", axioms.KINDS)
def test_instances_survive_serialization(kind):
    inst = axioms.generate(kind, 1234)
    doc = json.loads(json.dumps(axioms.instance_to_doc(inst)))
    again = axioms.instance_from_doc(doc)
    assert axioms.instance_to_doc(again) == axioms.instance_to_doc(inst)
    assert axioms.run_check(kind, again) is None


def _broken_product(a, b):
    # drops the pullback: a . b instead of a . f^* b whenever the shapes allow it
    good = _original_product(a, b)
    return bivariant.BivariantElement(good.morphism, good.value * 2) if len(good.value.space) > 1 else good


_original_product = bivariant.biv_product


def test_injected_fault_is_caught_and_replays(monkeypatch, tmp_path):
    monkeypatch.setattr(bivariant, "biv_product", _broken_product)
    report = axioms.check_axioms(seed=42, count=100)
    assert report["failures"], "a broken product must be detected"
    failed_axioms = {f["axiom"] for f in report["failures"]}
    assert "B1" in failed_axioms or "B4" in failed_axioms

    path = tmp_path / "report.json"
    path.write_text(codec.dumps(report))
    replayed = axioms.replay_report(json.loads(path.read_text()))
    assert [(f["axiom"], f["seed"]) for f in replayed["failures"]] == \
        [(f["axiom"], f["seed"]) for f in report["failures"]]

    # with the fault removed, the same counterexamples pass
    monkeypatch.setattr(bivariant, "biv_product", _original_product)
    fixed = axioms.replay_report(report)
    assert fixed["failures"] == [] and fixed["checks"]["total"] == len(report["failures"])


def test_injected_pullback_fault(monkeypatch):
    monkeypatch.setattr(bivariant, "pullback_cf", lambda f, b: pullback_cf(f, b) * -1)
    report = axioms.check_axioms(seed=1, count=100)
    assert report["checks"]["failed"] > 0


def test_replay_without_failures_reruns_seeds():
    report = axioms.check_axioms(seed=99, count=30)
    again = axioms.replay_report(report)
    assert again["seeds"] == report["seeds"]
    assert again["checks"]["byAxiom"] == report["checks"]["byAxiom"]
