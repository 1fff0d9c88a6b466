import json

import pytest

from ringlab import cli
from ringlab.io import load_algebra, save_subspace
from ringlab.subspaces import span, whole_space, zero_space


def run_cli(*argv):
    return cli.main(list(argv))


@pytest.fixture()
def m2f2_file(tmp_path):
    path = tmp_path / "m2f2.alg.json"
    assert run_cli("gen", "--family", "mat", "--n", "2", "--p", "2", "-o", str(path)) == 0
    return path


def test_gen_families(tmp_path):
    for family, n, p in (("mat", "2", "3"), ("tri", "2", "2"), ("trunc", "3", "3")):
        out = tmp_path / f"{family}.alg.json"
        assert run_cli("gen", "--family", family, "--n", n, "--p", p, "-o", str(out)) == 0
        a = load_algebra(out)
        assert a.p == int(p)


def test_gen_dsum(tmp_path, m2f2_file):
    other = tmp_path / "f2.alg.json"
    assert run_cli("gen", "--family", "trunc", "--n", "1", "--p", "2", "-o", str(other)) == 0
    out = tmp_path / "dsum.alg.json"
    assert (
        run_cli("gen", "--family", "dsum", "--inputs", str(m2f2_file), str(other), "-o", str(out))
        == 0
    )
    assert load_algebra(out).dim == 5


def test_gen_rejects_bad_prime(tmp_path):
    assert run_cli("gen", "--family", "mat", "--n", "2", "--p", "4") == 2


def test_show(capsys, m2f2_file):
    assert run_cli("show", str(m2f2_file)) == 0
    out = capsys.readouterr().out
    assert "center_dim: 1" in out
    assert "commutator_dim: 3" in out
    assert "primes: 1 (1 exceptional)" in out


def test_show_parse_failure(tmp_path):
    bad = tmp_path / "bad.alg.json"
    bad.write_text("{}")
    assert run_cli("show", str(bad)) == 2


def test_compute_derived_tower(capsys, tmp_path, m2f2_file):
    a = load_algebra(m2f2_file)
    sub = tmp_path / "full.sub.json"
    save_subspace(whole_space(a), sub)
    capsys.readouterr()
    assert run_cli(
        "compute", "--alg", str(m2f2_file), "--op", "derived-tower",
        "--subspace", str(sub), "--json",
    ) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["dims"] == [4, 3, 1, 0]
    assert data["stabilized_at"] == 3


def test_compute_t_of_zero_is_center(capsys, tmp_path, m2f2_file):
    a = load_algebra(m2f2_file)
    sub = tmp_path / "zero.sub.json"
    save_subspace(zero_space(a), sub)
    capsys.readouterr()
    assert run_cli(
        "compute", "--alg", str(m2f2_file), "--op", "t", "--subspace", str(sub), "--json"
    ) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["generators"] == [[1, 0, 0, 1]]


def test_compute_fn2span_m2f3(capsys, tmp_path):
    alg = tmp_path / "m2f3.alg.json"
    assert run_cli("gen", "--family", "mat", "--n", "2", "--p", "3", "-o", str(alg)) == 0
    capsys.readouterr()
    assert run_cli("compute", "--alg", str(alg), "--op", "fn2span", "--json") == 0
    data = json.loads(capsys.readouterr().out)
    assert data["dim"] == 3 and data["exhaustive"] is True
    assert len(data["witness_pairs"]) == 3


def test_compute_unknown_op(m2f2_file):
    assert run_cli("compute", "--alg", str(m2f2_file), "--op", "frobnicate") == 2


def test_compute_missing_subspace(m2f2_file):
    assert run_cli("compute", "--alg", str(m2f2_file), "--op", "t") == 2


def test_compute_budget_exit(capsys, m2f2_file):
    capsys.readouterr()
    assert run_cli(
        "compute", "--alg", str(m2f2_file), "--op", "n2span", "--budget", "3", "--json"
    ) == 3
    data = json.loads(capsys.readouterr().out)
    assert data["exhaustive"] is False


def test_audit_default_small(capsys, tmp_path):
    out = tmp_path / "report.json"
    code = run_cli(
        "audit", "--samples", "2", "--seed", "0", "--theorem", "P3.2", "--theorem", "L6.1",
        "-o", str(out),
    )
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["kind"] == "ringlab-audit-report"
    assert payload["summary"]["counterexamples_hypothesis_holding"] == 0


def test_audit_corpus_dir(tmp_path, m2f2_file, capsys):
    code = run_cli("audit", "--corpus", str(tmp_path), "--samples", "2", "--theorem", "C3.7")
    assert code == 0


def test_audit_bad_corpus(tmp_path):
    empty = tmp_path / "empty"
    empty.mkdir()
    assert run_cli("audit", "--corpus", str(empty)) == 2


def test_audit_unknown_theorem():
    assert run_cli("audit", "--theorem", "T0.0", "--samples", "1") == 2


def test_audit_counterexample_exit(monkeypatch, capsys):
    # force the exit-1 path with a doctored report
    from ringlab.audit import AuditReport, TheoremVerdict
    from ringlab.errors import Budgets

    fake = AuditReport(
        seed=0, samples=1, kinds=("raw",), budgets=Budgets(), theorem_ids=("T3.5",),
        corpus_manifest=[], sampling_stats=[],
        verdicts=[
            TheoremVerdict(
                theorem_id="T3.5", algebra_id="x", hypothesis_status="holds",
                conclusion_status="counterexample",
            )
        ],
    )
    monkeypatch.setattr(cli, "run_corpus_audit", lambda *a, **k: fake)
    assert run_cli("audit", "--samples", "1", "--theorem", "T3.5") == 1


def test_main_usage_error():
    assert cli.main(["compute"]) == 2  # missing required args
