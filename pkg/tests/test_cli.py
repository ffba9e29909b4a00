import json
from fractions import Fraction

import pytest

from ergolab.cli import main


def run(args):
    return main(args)


def test_tower_example(tmp_path):
    out = tmp_path / "tower.json"
    assert run(["tower", "--n", "12", "--h", "11", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["residual"] == [11]
    assert payload["base"] == [0]
    assert payload["valid"] is True
    manifest = json.loads((tmp_path / "tower.json.manifest.json").read_text())
    assert manifest["subcommand"] == "tower"
    assert manifest["outputs"] == [str(out)]


def test_tower_prescribed_roof(tmp_path):
    out = tmp_path / "lw.json"
    assert run(["tower", "--n", "8", "--h", "3", "--y", "0,4", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["residual"] == [0, 4]
    # infeasible target set is a domain error
    assert run(["tower", "--n", "8", "--h", "3", "--y", "0", "--out", str(out)]) == 1


def test_involutions_command(tmp_path):
    out = tmp_path / "inv.json"
    assert run(["involutions", "--n", "100", "--seed", "5", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["verified"] is True


def test_rankone_correlate_contains_halving_entry(tmp_path):
    out = tmp_path / "corr.csv"
    code = run(
        [
            "rankone", "correlate", "--h1", "1", "--spacers", "auto",
            "--intervals", "100:200", "--A", "level:5", "--n-max", "1000",
            "--out", str(out),
        ]
    )
    assert code == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "n,numerator,denominator"
    by_n = {int(r.split(",")[0]): (int(r.split(",")[1]), int(r.split(",")[2])) for r in rows[1:]}
    # A is one level of the stage the single interval designs (height 150)
    assert Fraction(*by_n[150]) == Fraction(1, 4)
    assert Fraction(*by_n[0]) == Fraction(1, 2)


def test_rankone_design_and_decompose(tmp_path):
    out = tmp_path / "design.json"
    intervals = ",".join(f"{10**j}:{2 * 10**j}" for j in range(2, 7))
    assert run(["rankone", "design", "--intervals", intervals, "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["heights"][1] == 150

    out2 = tmp_path / "dec.json"
    assert run(
        [
            "rankone", "decompose", "--intervals", intervals,
            "--times", "150,1650,777", "--out", str(out2),
        ]
    ) == 0
    rows = json.loads(out2.read_text())
    assert rows[0]["decomposition"] == [{"sign": 1, "stage": 2, "height": 150}]
    assert rows[1]["decomposition"] is not None
    assert rows[2]["decomposition"] is None


def test_rankone_gaps(tmp_path):
    out = tmp_path / "gaps.json"
    seq = ",".join(str(k * k) for k in range(1, 40))
    assert run(["rankone", "gaps", "--sequence", seq, "--count", "3", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert len(payload) == 3


def test_recurrence_commands(tmp_path):
    out = tmp_path / "avg.json"
    assert run(
        ["recurrence", "average", "--n", "5", "--A", "0", "--N", "5", "--out", str(out)]
    ) == 0
    payload = json.loads(out.read_text())
    assert payload["value"] == {"num": 1, "den": 25}

    out2 = tmp_path / "wit.json"
    assert run(
        ["recurrence", "witness", "--n", "9", "--A", "0,1,2", "--N", "9", "--out", str(out2)]
    ) == 0
    assert json.loads(out2.read_text())["witness"] == 1

    out3 = tmp_path / "prof.csv"
    assert run(
        ["recurrence", "profile", "--n", "9", "--A", "0,1", "--N", "9", "--out", str(out3)]
    ) == 0
    assert out3.read_text().splitlines()[0] == "i,numerator,denominator"


def test_ledrappier_commands(tmp_path):
    img = tmp_path / "f.pgm"
    assert run(
        ["ledrappier", "sample", "--n", "32", "--m", "16", "--seed", "3", "--out", str(img)]
    ) == 0
    assert img.read_bytes().startswith(b"P5\n32 16\n255\n")

    rep = tmp_path / "verify.json"
    assert run(
        ["ledrappier", "verify", "--n", "64", "--m", "64", "--seed", "3", "--out", str(rep)]
    ) == 0
    payload = json.loads(rep.read_text())
    assert payload["harmonic"] is True
    assert all(payload["power_checks"].values())

    st = tmp_path / "stats.json"
    assert run(
        ["ledrappier", "stats", "--n", "64", "--m", "64", "--seed", "9", "--out", str(st)]
    ) == 0
    assert json.loads(st.read_text())["seed"] == 9


def test_mosaic_commands(tmp_path):
    img = tmp_path / "m.ppm"
    assert run(
        ["mosaic", "generate", "--w", "12", "--h", "9", "--k", "3", "--seed", "1",
         "--out", str(img)]
    ) == 0
    assert img.read_bytes().startswith(b"P6\n12 9\n255\n")

    cnt = tmp_path / "c.json"
    assert run(["mosaic", "count", "--w", "6", "--h", "6", "--k", "3", "--out", str(cnt)]) == 0
    assert json.loads(cnt.read_text())["count"] == "1"

    ent = tmp_path / "e.csv"
    assert run(
        ["mosaic", "entropy", "--widths", "3,6", "--h", "6", "--k", "3", "--out", str(ent)]
    ) == 0
    assert ent.read_text().splitlines()[0] == "w,h,entropy_per_site"

    assert run(
        ["mosaic", "generate", "--w", "4", "--h", "4", "--k", "3", "--seed", "1",
         "--out", str(img)]
    ) == 1  # Infeasible is a domain error


def test_f2_commands(tmp_path):
    out = tmp_path / "cert.json"
    assert run(["f2", "search", "--radius", "2", "--budget", "500", "--seed", "7",
                "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["verdict"] is True
    assert Fraction(payload["measure"]["num"], payload["measure"]["den"]) >= Fraction(1, 2**17)

    base = tmp_path / "base.json"
    assert run(["f2", "verify", "--radius", "2", "--out", str(base)]) == 0
    payload = json.loads(base.read_text())
    assert payload["measure"] == {"num": 1, "den": 131072}


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["tower", "--n", "12", "--out", "x.json"])  # missing --h
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["tower", "--n", "12", "--h", "3", "--bogus", "1", "--out", "x.json"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["f2", "search", "--radius", "2", "--out", "x.json"])  # no seed
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2


def test_seeded_reruns_are_byte_identical(tmp_path):
    for args, name in [
        (["ledrappier", "sample", "--n", "48", "--m", "48", "--seed", "5"], "f.pgm"),
        (["mosaic", "generate", "--w", "12", "--h", "12", "--k", "3", "--seed", "2"], "m.ppm"),
        (["f2", "search", "--radius", "2", "--budget", "300", "--seed", "4"], "c.json"),
        (["involutions", "--n", "500", "--seed", "1"], "i.json"),
    ]:
        out1 = tmp_path / ("a_" + name)
        out2 = tmp_path / ("b_" + name)
        assert run(args + ["--out", str(out1)]) == 0
        assert run(args + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
