import json

import pytest

from bent.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_measure_json(capsys):
    code, out, _ = run(capsys, "measure", "--schmidt", "0.1,0.3,0.6",
                       "--ids", "es,ea,esgen:4,ef,neg,geo")
    assert code == 0
    doc = json.loads(out)
    assert doc["state"] == [0.6, 0.3, 0.1]
    assert doc["values"]["es"] == pytest.approx(0.63, abs=1e-12)
    assert doc["values"]["ea"] == pytest.approx(0.36, abs=1e-12)
    assert set(doc["values"]) == {"es", "ea", "esgen4", "ef", "neg", "geo"}


def test_psucc_pair_json(capsys):
    third = "," .join(["0.3333333333333333"] * 3)
    code, out, _ = run(capsys, "psucc", "--from", "0.52,0.28,0.2", "--to", third)
    assert code == 0
    doc = json.loads(out)
    assert doc["p"] == pytest.approx(0.6, abs=1e-9)
    assert doc["k0"] == 3


def test_psucc_field_csv(capsys):
    code, out, _ = run(capsys, "psucc", "--phi", "0.52,0.28,0.2",
                       "--direction", "from", "--samples", "50", "--seed", "1")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "lambda_1,lambda_2,lambda_3,psucc"
    assert len(lines) == 51


def test_volume_exact_json(capsys):
    code, out, _ = run(capsys, "volume", "--phi", "0.5,0.37,0.13",
                       "--which", "accessible", "--exact")
    assert code == 0
    doc = json.loads(out)
    assert doc["ratio"] == pytest.approx(0.5772, abs=1e-12)
    assert len(doc["vertices"]) == 4


def test_volume_mc_json(capsys):
    code, out, _ = run(capsys, "volume", "--phi", "0.6,0.3,0.1",
                       "--which", "source", "--samples", "20000", "--seed", "7")
    assert code == 0
    doc = json.loads(out)
    assert abs(doc["fraction"] - 0.63) < 4 * doc["std_error"]
    assert doc["samples"] == 20000


def test_scan_csv_deterministic(capsys):
    args = ("scan", "--dim", "3", "--ids", "es,esgen4", "--samples", "20", "--seed", "3")
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2
    header = out1.splitlines()[0]
    assert header == "lambda_1,lambda_2,lambda_3,es,esgen4,label"
    assert len(out1.splitlines()) == 21


def test_boundary_csv(capsys):
    code, out, _ = run(capsys, "boundary", "--dim", "3", "--family", "lam2=lam3",
                       "--steps", "10", "--ids", "es,esgen4")
    assert code == 0
    assert len(out.splitlines()) == 12


def test_image_csv(capsys):
    code, out, _ = run(capsys, "image", "--phi", "0.52,0.28,0.2",
                       "--ids", "es,ea", "--steps", "10")
    assert code == 0
    assert out.splitlines()[0] == "curve,t,lambda_1,lambda_2,lambda_3,es,ea"


def test_split_reconstruct_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "split", "--lambda", "0.6,0.3,0.1")
    assert code == 0
    doc = json.loads(out)
    assert doc["n"] == 2 and set(doc["table"]) == {"01", "10", "11"}
    table = tmp_path / "table.json"
    table.write_text(out)
    code, out2, _ = run(capsys, "reconstruct", "--table", str(table))
    assert code == 0
    vals = [float(x) for x in out2.strip().split(",")]
    assert vals[:3] == pytest.approx([0.6, 0.3, 0.1], abs=1e-12)


def test_reconstruct_accepts_bare_table(capsys, tmp_path):
    table = tmp_path / "t.json"
    table.write_text('{"1": 0.4}')
    code, out, _ = run(capsys, "reconstruct", "--table", str(table))
    assert code == 0
    assert [float(x) for x in out.strip().split(",")] == pytest.approx([0.6, 0.4], abs=1e-12)


def test_certify_found_and_saved(capsys, tmp_path):
    cert = tmp_path / "cert.json"
    code, out, _ = run(capsys, "certify", "--dim", "3",
                       "--targets", "es=0.2,esgen4=0.9", "--degree", "6",
                       "--out", str(cert))
    assert code == 0
    assert "verified" in out
    doc = json.loads(cert.read_text())
    assert doc["verification"]["ok"] is True


def test_certify_not_found_exit_code(capsys):
    # exact measure values of the state (0.5, 0.25, 0.25) are attainable
    code, _, err = run(capsys, "certify", "--dim", "3",
                       "--targets", "es=0.9375,esgen4=0.7139423076923077",
                       "--degree", "6")
    assert code == 3
    assert "inconclusive" in err


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["scan", "--dim", "3"])  # missing required --ids
    assert exc.value.code == 2


def test_bad_state_exit_code(capsys):
    code, _, err = run(capsys, "measure", "--schmidt", "0.6,0.37,0.13", "--ids", "es")
    assert code == 2
    assert "error" in err
