import json

import numpy as np
import pytest

from eqptomo.cli import EXIT_OK, EXIT_PARSE, EXIT_PIPELINE, EXIT_USAGE, main
from eqptomo.counts import format_counts_csv, parse_counts_csv, parse_counts_json, read_counts, write_counts
from eqptomo.errors import CountsFormatError
from eqptomo.synthgen import SimulationConfig, expected_counts, sample_counts, singlet, werner


@pytest.fixture
def counts():
    return np.random.default_rng(0).poisson(expected_counts(werner(0.9), 5000)).astype(float)


def test_csv_round_trip(tmp_path, counts):
    path = tmp_path / "c.csv"
    write_counts(path, counts)
    assert np.array_equal(read_counts(path), counts)
    assert format_counts_csv(counts).startswith(",H,V,D,A,R,L\nH,")


def test_json_round_trip_and_label_order(tmp_path, counts):
    path = tmp_path / "c.json"
    write_counts(path, counts)
    assert np.array_equal(read_counts(path), counts)
    order = ["V", "H", "A", "D", "L", "R"]
    idx = [["H", "V", "D", "A", "R", "L"].index(s) for s in order]
    shuffled = counts[np.ix_(idx, idx)]
    text = json.dumps({"counts": shuffled.tolist(), "label_order": order})
    assert np.array_equal(parse_counts_json(text), counts)


@pytest.mark.parametrize(
    "text",
    [
        "",
        ",H,V,D,A,R,L\nH,1,2,3\n",
        ",H,V,X,A,R,L\n" + "\n".join(f"{s},1,1,1,1,1,1" for s in "HVDARL"),
        ",H,V,D,A,R,L\n" + "\n".join(f"{s},1,1,1,1,-1,1" for s in "HVDARL"),
        ",H,V,D,A,R,L\n" + "\n".join(f"{s},1,1,1,1,abc,1" for s in "HVDARL"),
        ",H,V,D,A,R,L\n" + "\n".join(f"{s},1,1,1,1,nan,1" for s in "HVDARL"),
    ],
)
def test_malformed_csv(text):
    with pytest.raises(CountsFormatError):
        parse_counts_csv(text)


@pytest.mark.parametrize(
    "text",
    ["{", "[]", '{"counts": [[1]]}', '{"counts": ' + json.dumps([[1] * 6] * 6) + ', "label_order": ["H"]}'],
)
def test_malformed_json(text):
    with pytest.raises(CountsFormatError):
        parse_counts_json(text)


def test_cli_malformed_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("not,a,counts,file\n")
    assert main(["reconstruct", "--counts", str(bad), "--mc-samples", "0"]) == EXIT_PARSE
    assert "parse" in capsys.readouterr().err
    assert main(["reconstruct", "--counts", str(tmp_path / "missing.csv")]) == EXIT_PARSE


def test_cli_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["reconstruct"])
    assert exc.value.code == EXIT_USAGE
    assert main(["simulate", "--preset", "werner"]) == EXIT_USAGE
    assert main(["simulate", "--preset", "ghz"]) == EXIT_USAGE


def test_cli_pipeline_failure(tmp_path):
    E = np.ones((6, 6))
    E[:2, :2] = 0
    path = tmp_path / "empty_block.csv"
    write_counts(path, E)
    assert main(["reconstruct", "--counts", str(path), "--mc-samples", "0"]) == EXIT_PIPELINE


def test_cli_simulate_matches_library(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["simulate", "--preset", "werner", "--p", "0.7", "--seed", "9", "--out", str(out)]) == EXIT_OK
    want = sample_counts(SimulationConfig(werner(0.7), 30_000, seed=9))
    assert np.array_equal(read_counts(out), want)


def _reconstruct(tmp_path, counts_path, name, *extra):
    out = tmp_path / name
    code = main(
        ["reconstruct", "--counts", str(counts_path), "--out", str(out), "--mc-samples", "300",
         "--seed", "11", "--reproducible", *extra]
    )
    assert code == EXIT_OK
    return out


def test_cli_reconstruct_report_and_determinism(tmp_path, counts):
    path = tmp_path / "c.csv"
    write_counts(path, counts)
    a = _reconstruct(tmp_path, path, "a.json", "--plot", str(tmp_path / "p.svg"),
                     "--weights-csv", str(tmp_path / "w.csv"))
    b = _reconstruct(tmp_path, path, "b.json")
    assert a.read_bytes() == b.read_bytes()
    report = json.loads(a.read_text())
    assert report["verdict"]["overall"] == "entangled"
    assert len(report["eqp"]["weights"]) == 12
    assert abs(sum(report["eqp"]["weights"]) - 1) < 1e-10
    assert "created" not in report["provenance"]
    assert (tmp_path / "p.svg").read_text().lstrip().startswith("<?xml")
    assert len((tmp_path / "w.csv").read_text().splitlines()) == 13


def test_cli_custom_target(tmp_path, counts):
    path = tmp_path / "c.csv"
    write_counts(path, counts)
    target = tmp_path / "t.json"
    target.write_text(json.dumps({"real": [0, 1, -1, 0]}))
    a = json.loads(_reconstruct(tmp_path, path, "a.json").read_text())
    b = json.loads(_reconstruct(tmp_path, path, "b.json", "--target", str(target)).read_text())
    assert a["diagnostics"]["fidelity"]["value"] == pytest.approx(b["diagnostics"]["fidelity"]["value"])
    target.write_text(json.dumps({"real": [1, 0, 0, 0]}))
    c = json.loads(_reconstruct(tmp_path, path, "c.json", "--target", str(target)).read_text())
    assert c["diagnostics"]["fidelity"]["value"] == pytest.approx(0.25 * (1 - 0.9), abs=0.01)


def test_cli_verify_paper(capsys):
    assert main(["verify-paper"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "FAIL" not in out and "8/8" in out


def test_noise_free_singlet_counts_are_valid(tmp_path):
    out = tmp_path / "n.json"
    assert main(["simulate", "--preset", "singlet", "--noise-free", "--pairs-per-setting", "100", "--out", str(out)]) == 0
    assert np.allclose(read_counts(out), expected_counts(singlet(), 100))


def test_report_is_self_contained(tmp_path, counts):
    from eqptomo.pipeline import reconstruct

    path = tmp_path / "c.csv"
    write_counts(path, counts)
    report = json.loads(_reconstruct(tmp_path, path, "r.json").read_text())
    rec = reconstruct(np.array(report["correlations"]["C"]))
    assert np.allclose(rec.standard_form.diagonal, report["standard_form"]["diagonal"], atol=1e-12)
    assert np.allclose(rec.decomposition.weights, report["eqp"]["weights"], atol=1e-12)
    assert np.allclose(rec.density.real, report["density"]["real"], atol=1e-12)


def test_published_coefficient_table_soft_match():
    from eqptomo.cli import coefficient_overlaps

    ov = coefficient_overlaps()
    assert ov["bob"][2].min() > 0.98
    assert ov["alice"][2].min() > 0.8
