import json
import shutil
from importlib import resources

import pytest

from vknot.cli import main

K1 = "O2+ U4+ O3- U2+ O1- U3- O4+ U1-"
K2 = "O2+ O4- U3+ U2+ O1- O3+ U4- U1-"


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_pt(capsys, write):
    f = write("k.txt", "# two knots\nU1+ U2+ O3+ O1+ O2+ U3+\nO1+ U2+ O3+ U1+ O2+ U3+\n")
    code, out, _ = run(capsys, "pt", f)
    assert code == 0 and out.splitlines() == ["-2 + 2*t^2", "0"]
    code, out, _ = run(capsys, "pt", f, "--mod2")
    assert out.splitlines() == ["0", "0"]


def test_json_and_seed_anywhere(capsys, write):
    f = write("k.txt", "U1+ U2+ O3+ O1+ O2+ U3+\n")
    for argv in (["--json", "pt", f], ["pt", f, "--json", "--seed", "4"]):
        code, out, _ = run(capsys, *argv)
        data = json.loads(out)
        assert code == 0 and data["ok"] and data["command"] == "pt"
        assert data["results"][0]["polynomial"]["coefficients"] == {"0": -2, "2": 2}
    assert data["seed"] == 4


def test_parse_error(capsys, write):
    f = write("bad.txt", "O1+ U2+\n")
    code, _, err = run(capsys, "pt", f)
    assert code == 2 and "error" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "pt", str(tmp_path / "nope.txt"))
    assert code == 2 and "cannot read" in err


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["fuzz", "--suite", "nope"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_basedmatrix(capsys, write):
    f = write("s.txt", "3t 1h 2h 1t 2t 4h 3h 4t\n")
    code, out, _ = run(capsys, "basedmatrix", f, "--reduce")
    assert code == 0 and "#(G) = 5" in out


def test_sbm(capsys, write):
    from vknot import corpus

    f = write("s.txt", corpus.read("k1_glued_3"))
    code, out, _ = run(capsys, "sbm", f)
    rows = [line for line in out.splitlines() if line.strip()]
    assert code == 0 and rows == corpus.matrix("b3").to_text().splitlines()
    g = write("plain.txt", "1t 1h\n")
    assert run(capsys, "sbm", g)[0] == 2


def test_smooth(capsys, write):
    f = write("s.txt", "1t 2t 1h 2h\n")
    code, out, _ = run(capsys, "smooth", f, "--arrow", "1")
    assert code == 0 and out.strip() == "2t / 2h    # index 1"
    assert run(capsys, "smooth", f, "--arrow", "9")[0] == 2


def test_glue(capsys, write):
    f = write("k.txt", K1 + "\n")
    code, out, _ = run(capsys, "glue", f, "--crossing", "3")
    assert code == 0 and "*3" in out
    code, out, _ = run(capsys, "glue", f, "--kink")
    assert code == 0 and out.startswith("*5t *5h")
    assert run(capsys, "glue", f)[0] == 2
    assert run(capsys, "glue", f, "--kink", "--crossing", "1")[0] == 2


def test_compare(capsys):
    code, out, _ = run(capsys, "compare", "--text", K1, K2)
    assert code == 0 and out.splitlines()[0] == "Distinct"
    code, out, _ = run(capsys, "compare", "--text", K1, K2, "--level", "S")
    assert out.splitlines()[0] == "EqualAtFingerprint"
    assert run(capsys, "compare", "--text", K1, K2, "--level", "S", "--expect", "distinct")[0] == 1
    assert run(capsys, "compare", "--text", K1, K2, "--expect", "distinct")[0] == 0
    assert run(capsys, "compare", "--text", "1t 1h", K2, "--level", "G")[0] == 2


def test_compare_strings(capsys):
    code, out, _ = run(capsys, "compare", "--text", "1t 2h 1h 2t", ".", "--level", "flat")
    assert code == 0 and out.strip() == "EqualAtFingerprint"


def test_fuzz(capsys, tmp_path):
    code, out, _ = run(capsys, "fuzz", "--trials", "0", "--out", str(tmp_path))
    assert code == 0 and out.startswith("pt: pass")
    code, out, _ = run(capsys, "--json", "fuzz", "--trials", "2", "--moves", "5", "--suite", "all")
    data = json.loads(out)
    assert code == 0 and [r["suite"] for r in data["results"]] == [
        "pt", "mod2", "flat", "singular", "degree1"
    ]
    assert run(capsys, "fuzz", "--trials", "-1")[0] == 2


def test_demo(capsys):
    code, out, _ = run(capsys, "demo")
    assert code == 0 and "FAIL" not in out


def test_demo_negative_control(capsys, tmp_path):
    data = resources.files("vknot") / "data"
    for entry in data.iterdir():
        if entry.name.endswith(".txt"):
            shutil.copy(str(entry), tmp_path / entry.name)
    b3 = tmp_path / "b3.txt"
    lines = b3.read_text().splitlines()
    # perturb b3[1,3] and its mirror so the file stays skew-symmetric
    row1 = lines[2].split()
    row3 = lines[4].split()
    row1[3] = str(int(row1[3]) + 1)
    row3[1] = str(int(row3[1]) - 1)
    lines[2], lines[4] = " ".join(row1), " ".join(row3)
    b3.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "demo", "--corpus", str(tmp_path))
    assert code == 1
    assert "b3[1,3]" in out


def test_demo_missing_corpus(capsys, tmp_path):
    assert run(capsys, "demo", "--corpus", str(tmp_path))[0] == 2


def test_report_stable_under_rerun(capsys):
    argv = ["--json", "--seed", "7", "fuzz", "--trials", "3", "--moves", "8", "--suite", "singular"]
    reports = []
    for _ in range(2):
        code, out, _ = run(capsys, *argv)
        data = json.loads(out)
        data.pop("elapsed")
        reports.append(data)
    assert code == 0 and reports[0] == reports[1]
