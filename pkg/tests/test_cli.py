"""The command-line surface: grammars, exit codes, round trips."""

import pytest

from fockarith.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out.strip().splitlines(), captured.err


def test_succ_worked_example(capsys):
    code, out, _ = run(capsys, "succ", "--base", "10", "--j", "7", "364")
    assert code == 0
    assert out == ["1000364"]


def test_succ_trace_shows_pad_stage(capsys):
    code, out, _ = run(capsys, "succ", "--base", "10", "--j", "7", "--trace", "364")
    assert code == 0
    assert "stage=pad word=000364" in out
    assert "stage=succ word=1000364" in out
    assert any(line.startswith("event=") for line in out)
    assert out[-1] == "1000364"


def test_sub_desk_check(capsys):
    code, out, _ = run(capsys, "sub", "--base", "10", "--flavor", "nat", "10", "10000")
    assert code == 0
    assert out == ["9990"]


def test_mul_rational(capsys):
    code, out, _ = run(capsys, "mul", "--base", "10", "--flavor", "rat",
                       "+0.5", "+0.5")
    assert code == 0
    assert out == ["+0.25"]


def test_oracle_flag_prints_both(capsys):
    code, out, _ = run(capsys, "add", "--base", "2", "--flavor", "int",
                       "--stats", "f", "--oracle", "-101", "+11")
    assert code == 0
    assert out == ["-10", "oracle=-10"]


def test_succ_iterations(capsys):
    code, out, _ = run(capsys, "succ", "--base", "10", "--j", "1",
                       "--iterations", "12", "995")
    assert code == 0
    assert out == ["1007"]


def test_rational_negative_site(capsys):
    code, out, _ = run(capsys, "succ", "--base", "10", "--flavor", "rat",
                       "--j", "-7", "+63.04")
    assert code == 0
    assert out == ["+63.0400001"]


def test_encode_decode_roundtrip(capsys):
    code, out, _ = run(capsys, "encode", "--base", "10", "--flavor", "rat", "-6.25")
    assert code == 0
    dump = "\n".join(out)
    import io
    import sys
    stdin = sys.stdin
    sys.stdin = io.StringIO(dump)
    try:
        code2, out2, _ = run(capsys, "decode", "--base", "10", "--flavor", "rat")
    finally:
        sys.stdin = stdin
    assert code2 == 0
    assert out2 == ["-6.25"]


def test_domain_error_exit_code(capsys):
    code, out, err = run(capsys, "sub", "--base", "10", "--flavor", "nat",
                         "10000", "10")
    assert code == 1
    assert "domain error" in err


def test_usage_error_exit_code(capsys):
    code, out, err = run(capsys, "succ", "--base", "1", "5")
    assert code == 1
    assert "usage error" in err
    code, _, err = run(capsys, "frobnicate")
    assert code == 1


def test_bad_numeral_exit_code(capsys):
    code, _, err = run(capsys, "succ", "--base", "2", "7")
    assert code == 1


def test_verify_pass_and_fail_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "--base", "2", "--flavor", "int",
                       "--stats", "f", "--max-len", "2")
    assert code == 0
    assert out[-1].startswith("summary ")
    assert all("result=pass" in line for line in out[:-1])

    from fockarith.operator_algebra import FAMILY_REGISTRY, Sum, register_family
    original = FAMILY_REGISTRY["nat_inc"]
    register_family("nat_inc", lambda k, r, j, s: Sum(()), adjoint="nat_inc_adj")
    try:
        code, out, _ = run(capsys, "verify", "--base", "2", "--flavor", "nat",
                           "--max-len", "2")
        assert code == 2
        assert any("result=fail" in line for line in out)
    finally:
        register_family("nat_inc", original, adjoint="nat_inc_adj")


def test_out_file(tmp_path, capsys):
    target = tmp_path / "result.txt"
    code = main(["succ", "--base", "10", "--j", "1", "--out", str(target), "41"])
    assert code == 0
    assert target.read_text().strip() == "42"


def test_cli_output_reparses(capsys):
    # the printed numeral parses back to the internal result
    code, out, _ = run(capsys, "mul", "--base", "2", "--flavor", "int",
                       "-11", "+10")
    assert code == 0
    from fockarith.numerals import INT, parse_numeral
    assert parse_numeral(out[0], 2, INT).value() == -6
