import json

import numpy as np
import pytest

from ringlab.algebras import matrix_algebra, truncated_poly
from ringlab.audit import (
    ALL_THEOREM_IDS,
    AlgebraFacts,
    audit_theorem,
    run_corpus_audit,
)
from ringlab.corpus import CorpusEntry, corpus_by_id, default_corpus
from ringlab.errors import Budgets
from ringlab.io import report_to_json, strip_timing
from ringlab.samplers import SubspaceSampler
from ringlab.subspaces import (
    Subspace,
    bracket_space,
    commutator_subspace,
    is_fully_noncentral,
    is_lie_ideal,
    is_rr_submodule,
    leq,
    whole_space,
)

SAMPLER = SubspaceSampler(seed=0, count=4)


def test_unknown_theorem_raises(m2f3):
    with pytest.raises(KeyError):
        audit_theorem("T9.9", m2f3, SAMPLER)


def test_empty_corpus():
    report = run_corpus_audit([], sampler=SAMPLER)
    assert report.verdicts == [] and report.summary()["checks"] == 0


def test_commutative_algebra_vacuous():
    entry = CorpusEntry("f3t3", truncated_poly(3, 3, aid="f3t3"))
    report = run_corpus_audit([entry], sampler=SubspaceSampler(seed=0, count=6))
    assert not report.counterexamples()
    # no fully noncentral subspace exists, so the section 4/5 equivalences
    # are vacuous (skipped) or trivially verified
    t52 = [v for v in report.verdicts if v.theorem_id == "T5.2"]
    assert all(
        v.hypothesis_status.startswith("skipped") or v.conclusion_status == "verified"
        for v in t52
    )


def test_samples_zero_means_hypothesis_checks_only(m2f3):
    entry = CorpusEntry("m2_f3", m2f3)
    report = run_corpus_audit([entry], sampler=SubspaceSampler(seed=0, count=0))
    sample_modes = {"T2.3", "C2.5", "L2.6", "C2.8", "L3.4", "T3.5", "C3.6", "T4.5",
                    "C4.6", "T4.8", "L5.1", "T5.2", "T5.6", "C5.8", "L5.3", "L4.4"}
    for v in report.verdicts:
        if v.theorem_id in sample_modes:
            assert v.sample_index is None


def test_canonical_m2f2_regression():
    corpus = corpus_by_id()
    entry = corpus["m2_f2"]
    verdicts, _ = audit_theorem(
        "T4.5", entry.algebra, SAMPLER, algebra_id="m2_f2",
        distinguished=sorted(entry.distinguished.items()),
    )
    canon = [v for v in verdicts if v.sample_kind == "distinguished:swap_plane"]
    assert len(canon) == 1
    v = canon[0]
    assert v.hypothesis_status == "fails:nonexceptional-cofinal"
    assert v.conclusion_status == "counterexample"
    conds = v.details["conditions"]
    assert conds["fully_noncentral"] is True
    assert conds["contains_commutators"] is False
    # the witness is replayable
    sample = Subspace(entry.algebra, np.asarray(v.witnesses["sample"], dtype=np.int64))
    assert is_fully_noncentral(sample)
    assert is_lie_ideal(sample) and is_rr_submodule(sample)
    assert not leq(commutator_subspace(entry.algebra), sample)


def test_t2f2_gated_out():
    corpus = corpus_by_id()
    entry = corpus["t2_f2"]
    verdicts, _ = audit_theorem("T4.5", entry.algebra, SAMPLER, algebra_id="t2_f2")
    assert all(v.hypothesis_status == "fails:nonexceptional-cofinal" for v in verdicts)


def test_determinism_and_parallel(monkeypatch):
    small = [corpus_by_id()[k] for k in ("m2_f2", "m2_f3", "t2_f3")]

    def run():
        rep = run_corpus_audit(small, sampler=SubspaceSampler(seed=0, count=3))
        return report_to_json(strip_timing(rep.to_json_dict()))

    monkeypatch.setenv("RINGLAB_THREADS", "1")
    first = run()
    second = run()
    assert first == second
    monkeypatch.setenv("RINGLAB_THREADS", "4")
    third = run()
    assert first == third


def test_no_holding_counterexamples_on_default_corpus_smoke():
    report = run_corpus_audit(default_corpus(), sampler=SubspaceSampler(seed=1, count=3))
    assert report.counterexamples() == []
    summary = report.summary()
    assert summary["checks"] == len(report.verdicts)
    assert summary["verified"] > 0


def test_counterexample_witnesses_replay():
    # hypothesis-failing counterexamples still carry replayable witnesses
    report = run_corpus_audit(
        [corpus_by_id()["m2_f2"]], theorem_ids=("T4.5",),
        sampler=SubspaceSampler(seed=0, count=6),
    )
    cexs = [v for v in report.verdicts if v.conclusion_status == "counterexample"]
    assert cexs
    a = corpus_by_id()["m2_f2"].algebra
    for v in cexs:
        sample = Subspace(a, np.asarray(v.witnesses["sample"], dtype=np.int64))
        conds = v.details["conditions"]
        assert conds["fully_noncentral"] == is_fully_noncentral(sample)
        assert conds["contains_commutators"] == leq(commutator_subspace(a), sample)


def test_facts_cached(m2f3):
    budgets = Budgets()
    f1 = AlgebraFacts(m2f3, budgets)
    f2 = AlgebraFacts(m2f3, budgets)
    assert f1.comm is f2.comm
    assert f1.spectrum is f2.spectrum


def test_theorem_filter():
    report = run_corpus_audit(
        [corpus_by_id()["m2_f3"]], theorem_ids=("P3.2", "C3.7"), sampler=SAMPLER
    )
    assert {v.theorem_id for v in report.verdicts} == {"P3.2", "C3.7"}
    with pytest.raises(KeyError):
        run_corpus_audit([corpus_by_id()["m2_f3"]], theorem_ids=("NOPE",), sampler=SAMPLER)


def test_report_shape():
    report = run_corpus_audit([corpus_by_id()["m2_f3"]], theorem_ids=("T3.5",), sampler=SAMPLER)
    payload = report.to_json_dict()
    assert payload["kind"] == "ringlab-audit-report"
    assert payload["schema_version"] == 1
    assert payload["corpus"][0]["id"] == "m2_f3"
    assert all("hypothesis_status" in v for v in payload["verdicts"])
    json.dumps(payload)  # serializable


def test_expected_hypothesis_failing_counterexamples():
    # without prime-cofinality the section-6 equivalence genuinely fails on
    # the zero-multiplication algebra: N2 spans everything (and is full) but
    # nothing is orthogonally factorizable
    report = run_corpus_audit(
        [corpus_by_id()["zero2_f3"]], theorem_ids=("L6.1",),
        sampler=SubspaceSampler(seed=0, count=1),
    )
    (v,) = report.verdicts
    assert v.hypothesis_status == "fails:prime-cofinal"
    assert v.conclusion_status == "counterexample"
    conds = v.details["conditions"]
    assert conds == {"n2_full": True, "fn2_full": False, "fn2_fully_noncentral": False}
    assert v.witnesses["n2_span"] and v.witnesses["fn2_span"] == []

    # on the char-2 s4-vanishing 2x2 matrix algebra the derived tower
    # collapses to zero, so the higher-derived fullness conditions split
    report = run_corpus_audit(
        [corpus_by_id()["m2_f2"]], theorem_ids=("C4.7",),
        sampler=SubspaceSampler(seed=0, count=1),
    )
    (v,) = report.verdicts
    assert v.hypothesis_status == "fails:nonexceptional-cofinal"
    assert v.conclusion_status == "counterexample"
    conds = v.details["conditions"]
    assert conds["commutators_full"] and conds["derived2_full"]
    assert not conds["derived3_full"]  # third derived stage is already zero
    assert "derived_stages" in v.witnesses


def test_sampling_stats_track_rejection():
    report = run_corpus_audit(
        [corpus_by_id()["trunc_f3_k2"]], theorem_ids=("C4.6",),
        sampler=SubspaceSampler(seed=0, count=5),
    )
    stats = [s for s in report.sampling_stats if s["theorem_id"] == "C4.6"]
    assert stats and stats[0]["requested"] == 5 and stats[0]["qualified"] == 0
    skips = [v for v in report.verdicts if v.hypothesis_status == "skipped:no-qualifying-sample"]
    assert len(skips) == 1


def test_worker_count_env(monkeypatch):
    from ringlab.audit import _worker_count

    monkeypatch.setenv("RINGLAB_THREADS", "3")
    assert _worker_count() == 3
    monkeypatch.setenv("RINGLAB_THREADS", "1")
    assert _worker_count() == 1
    monkeypatch.setenv("RINGLAB_THREADS", "0")
    assert _worker_count() >= 1  # auto
    monkeypatch.setenv("RINGLAB_THREADS", "junk")
    assert _worker_count() >= 1
