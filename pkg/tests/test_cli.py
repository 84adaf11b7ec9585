import pytest

from ncatrees.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_sizes_binary_basic(capsys):
    code, out, _ = run(capsys, "sizes", "--profile", "binary-basic", "--n", "5")
    rows = out.splitlines()
    assert code == 0
    assert rows[0] == "n,size_plain,size_marked,bits,bound"
    assert [int(r.split(",")[1]) for r in rows[1:6]] == [1, 3, 5, 9, 13]
    assert rows[-1].startswith("# bound") and "holds" in rows[-1]


def test_sizes_binary_opt_and_general(capsys):
    code, out, _ = run(capsys, "sizes", "--profile", "binary-opt", "--n", "2")
    assert code == 0
    row = out.splitlines()[2].split(",")
    assert row[:2] == ["2", "3"] and float(row[4]) == pytest.approx(2**1.894, abs=1e-6)
    code, out, _ = run(capsys, "sizes", "--profile", "general-opt", "--n", "1")
    assert code == 0 and out.splitlines()[1].startswith("1,1,1,0,")


def test_sizes_to_file(capsys, tmp_path):
    path = tmp_path / "s.csv"
    code, out, _ = run(capsys, "sizes", "--profile", "binary-basic", "--n", "3", "--out", str(path))
    assert code == 0 and path.read_text().startswith("n,size_plain")
    assert "holds" in out


def test_encode(capsys, tmp_path):
    code, out, _ = run(capsys, "encode", "--profile", "binary-basic", "--n", "3", "((()))")
    assert code == 0
    assert [ln.split()[1] for ln in out.splitlines()[1:]] == ["0", "1", "3"]
    f = tmp_path / "t.txt"
    f.write_text("()\n", encoding="utf-8")
    for prof in ("binary-basic", "binary-opt", "general-opt"):
        code, out, _ = run(capsys, "encode", "--profile", prof, "--n", "1", str(f))
        assert code == 0 and out.splitlines()[1] == "0 0"


def test_encode_errors(capsys, tmp_path):
    code, _, err = run(capsys, "encode", "--profile", "binary-basic", "--n", "2", "(()()())")
    assert code == 2 and "children" in err
    code, _, err = run(capsys, "encode", "--profile", "general-opt", "--n", "2", "(()()())")
    assert code == 2 and "capacity" in err
    code, _, _ = run(capsys, "encode", "--profile", "general-opt", "(()")
    assert code == 2
    code, _, _ = run(capsys, "encode", "--profile", "general-opt", str(tmp_path / "missing.txt"))
    assert code == 2


def test_nca(capsys):
    assert run(capsys, "nca", "--profile", "binary-basic", "--n", "3", "3", "4")[1] == "1\n"
    assert run(capsys, "nca", "--profile", "binary-basic", "--n", "3", "0", "0")[1] == "0\n"
    assert run(capsys, "nca", "--profile", "binary-basic", "--n", "3", "2", "4")[1] == "0\n"
    code, out, _ = run(capsys, "nca", "--profile", "binary-basic", "--n", "3", "3", "4", "--stats")
    assert code == 0 and out.splitlines()[1].startswith("probes ") and out.splitlines()[2].startswith("depth ")
    assert run(capsys, "nca", "--profile", "binary-basic", "--n", "3", "0", "5")[0] == 2


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--profile", "binary-basic", "exhaustive", "--max-n", "10")
    assert code == 0
    assert out.splitlines() == ["trees 398", f"pairs {_pair_total(10)}", "structural_failures 0",
                                "commutation_failures 0"]
    code, out, _ = run(capsys, "verify", "--profile", "general-opt", "exhaustive", "--max-n", "8")
    assert code == 0 and "trees 200" in out
    code, out, _ = run(capsys, "verify", "--profile", "binary-opt", "random", "--count", "20", "--size", "300")
    assert code == 0 and "commutation_failures 0" in out


def _pair_total(upto):
    from ncatrees.tree_model import FamilyKind, enumerate_trees
    return sum(len(enumerate_trees(k, FamilyKind.BINARY)) * k * (k + 1) // 2 for k in range(1, upto + 1))


def test_bench(capsys):
    code, out, err = run(capsys, "bench", "--profile", "general-opt", "--n", "1", "--queries", "50")
    assert code == 0
    assert "size 1" in out and "max_probes 0" in out and "bounds pass" in out
    code, out, _ = run(capsys, "bench", "--profile", "binary-opt", "--n", "10000", "--queries", "500")
    assert code == 0 and "bounds pass" in out
    assert "mean_time_us" in err


def test_materialize(capsys):
    code, out, _ = run(capsys, "materialize", "--profile", "binary-basic", "--n", "3")
    assert code == 0 and out == "(()(()()))\n"
    code, out, _ = run(capsys, "materialize", "--profile", "binary-basic", "--n", "2", "--kind", "marked")
    assert out == "((*)())\n"


def test_check_consistency(capsys, tmp_path):
    good = tmp_path / "good.txt"
    good.write_text("3\n0 0 0\n0 1 0\n0 0 2\n")
    code, out, _ = run(capsys, "check-consistency", str(good), "--tree")
    assert code == 0 and "consistent" in out.splitlines() and out.splitlines()[-1] == "(()())"
    bad = tmp_path / "bad.txt"
    bad.write_text("2\n0 1\n0 1\n")
    code, out, _ = run(capsys, "check-consistency", str(bad))
    assert code == 1 and "inconsistent" in out
    bad.write_text("2\n0 1\n")
    assert run(capsys, "check-consistency", str(bad))[0] == 2


def test_solve_and_optimize(capsys):
    code, out, _ = run(capsys, "solve", "--profile", "binary-opt")
    assert code == 0 and out.startswith("beta 1.8931")
    code, out, _ = run(capsys, "solve", "--family", "general", "--lambda", "0.341395")
    assert out.startswith("beta 2.3175")
    code, out, _ = run(capsys, "optimize", "--family", "binary")
    lam = float(out.splitlines()[0].split()[1])
    assert code == 0 and abs(lam - 0.296149) < 5e-3


def test_custom_lambda_reports_beta(capsys):
    code, out, err = run(capsys, "sizes", "--family", "binary", "--lambda", "0.4", "--n", "50")
    assert code == 0 and "beta=" in err and "holds" in out


def test_usage_errors(capsys):
    assert run(capsys, "sizes", "--n", "5")[0] == 2
    assert run(capsys, "sizes", "--profile", "binary-basic", "--family", "binary", "--n", "5")[0] == 2
    assert run(capsys, "sizes", "--family", "binary", "--lambda", "0.9", "--n", "5")[0] == 2
    assert run(capsys, "sizes", "--profile", "binary-basic", "--n", "0")[0] == 2
    with pytest.raises(SystemExit):
        main(["sizes", "--profile", "no-such-profile", "--n", "3"])


def test_enumeration_limit_exit_code(capsys):
    code, _, err = run(capsys, "verify", "--profile", "binary-basic", "exhaustive", "--max-n", "13")
    assert code == 2 and "limit" in err


def test_outputs_are_byte_identical(capsys):
    for argv in (["bench", "--profile", "binary-opt", "--n", "5000", "--queries", "300"],
                 ["verify", "--profile", "general-opt", "random", "--count", "3", "--size", "200"],
                 ["sizes", "--profile", "general-opt", "--n", "30"]):
        first = run(capsys, *argv)[1]
        assert run(capsys, *argv)[1] == first
