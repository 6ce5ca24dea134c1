import io
import json

import pytest
from hypothesis import given, strategies as st

from nrinv.cli import ResultRecord, format_records, parse_complex, run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def records(text):
    return [json.loads(line) for line in text.strip().splitlines()]


def test_parse_complex():
    assert parse_complex("2/65") == 2 / 65
    assert parse_complex("0.3+0.1i") == complex(0.3, 0.1)
    assert parse_complex("-1/2-3/4i") == complex(-0.5, -0.75)
    assert parse_complex("i") == 1j
    assert parse_complex("-i") == -1j
    assert parse_complex("2i") == 2j
    assert parse_complex("1e-3+2e1i") == complex(1e-3, 20)
    with pytest.raises(ValueError):
        parse_complex("abc")


@given(st.fractions(max_denominator=1000), st.fractions(max_denominator=1000))
def test_parse_rational_pairs(a, b):
    sign = "+" if b >= 0 else "-"
    text = f"{a}{sign}{abs(b)}i"
    assert parse_complex(text) == complex(float(a), float(b))


def test_poincare_command():
    code, out = call("poincare", "--r", "5")
    assert code == 0
    rec = records(out)[0]
    want = complex(*rec["meta"]["expected"])
    assert abs(complex(rec["value_re"], rec["value_im"]) - want) < 1e-8
    assert rec["meta"]["agree"] is True


def test_lens_sum_commands_differ():
    _, a = call("lens-sum", "--r", "3", "--framings", "8,-8")
    _, b = call("lens-sum", "--r", "3", "--framings", "4,3,2,-3")
    ra, rb = records(a)[0], records(b)[0]
    assert abs(complex(ra["value_re"], ra["value_im"]) - complex(rb["value_re"], rb["value_im"])) > 1e-6
    assert ra["meta"]["signature"] == [1, 1]
    assert rb["meta"]["signature"] == [3, 1]


def test_lens_sum_multiset_csv():
    code, out = call("lens-sum", "--r", "3", "--framings", "8,-8", "--multiset", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("command,")
    assert len(lines) == 65


def test_delta_r4_warns(capsys):
    code, out = call("delta", "--r", "4")
    assert code == 0
    rec = records(out)[0]
    assert rec["value_re"] == 0 and rec["value_im"] == 0
    assert "disabled" in capsys.readouterr().err


def test_domain_error_exit_1(capsys):
    code, _ = call("torus-surgery", "--r", "5", "--f", "-2", "--n", "1", "--class", "0")
    assert code == 1
    assert "NotComputable" in capsys.readouterr().err
    code, _ = call("dmod", "--r", "5", "--alpha", "3")
    assert code == 1
    assert "InadmissibleColor" in capsys.readouterr().err


def test_usage_errors_exit_2():
    assert call("nonsense")[0] == 2
    assert call("sixj", "--r", "5", "--colors", "1,2")[0] == 2
    assert call("dmod", "--alpha", "0.5")[0] == 2
    assert call("chain", "--r", "3", "--framings", "1")[0] == 2


def test_sixj_and_chain_commands():
    code, out = call("sixj", "--r", "3", "--colors", "0,0,0,0,0,0")
    assert code == 0 and abs(records(out)[0]["value_re"] - 2) < 1e-9
    code, out = call("chain", "--r", "5", "--framings", "0,0", "--colors", "0.5,0.5")
    assert code == 0
    code, out = call("chain", "--r", "3", "--framings", "8,-8", "--class", "3", "--lifts", "2,0")
    rec = records(out)[0]
    assert rec["meta"]["meridian_values"] == ["6/65", "82/65"]


def test_volume_command():
    code, out = call("volume", "--k", "2", "--rmin", "51", "--rmax", "101", "--step", "50")
    recs = records(out)
    assert code == 0 and [r["inputs"]["r"] for r in recs] == [51, 101]
    assert abs(recs[0]["meta"]["target"] - 7.32772475341) < 1e-9


def test_plain_format():
    code, out = call("dmod", "--r", "2", "--alpha", "1/2", "--format", "plain")
    assert code == 0 and out.startswith("dmod r=2")


def test_selftest_deterministic():
    code1, out1 = call("selftest", "--seed", "3")
    code2, out2 = call("selftest", "--seed", "3")
    assert code1 == 0 and out1 == out2
    assert records(out1)[-1]["meta"]["failed"] == 0


def test_json_round_trip():
    _, out = call("dmod", "--r", "7", "--alpha", "2/65+1/3i")
    for line in out.strip().splitlines():
        rec = ResultRecord.from_json(line)
        assert rec.to_json() == line


def test_format_records_csv_round_trip():
    rec = ResultRecord.of("x", {"r": 3}, complex(0.1, 1 / 3), note="a,b")
    text = format_records([rec], "csv")
    row = text.splitlines()[1]
    assert repr(1 / 3) in row and '"' in row
