import json
import pathlib

import pytest

import jetkt

ROOT = pathlib.Path(__file__).resolve().parents[2]
KDV = "independent x, t; dependent u; equation u_t = u*u_x + u_xxx;"


def test_parse_and_render():
    p = jetkt.parse(KDV)
    assert p.independents == ["x", "t"]
    assert p.equations == ["u_t = u_xxx + u*u_x"]
    assert jetkt.parse(p.render()).render() == p.render()


def test_parse_error_has_position():
    with pytest.raises(jetkt.ParseError, match="1:41: E_SOLVED_FORM"):
        jetkt.parse("independent x, t; dependent u; equation u*u_t = u_xx;")


def test_operators():
    p = jetkt.parse(KDV)
    assert jetkt.linearize(p) == [["-u_x - u*D_x + D_t - D_xxx"]]
    assert jetkt.adjoint(p) == [["u*D_x - D_t + D_xxx"]]
    assert jetkt.reduce(p, "u_tx") == "u_xxxx + u*u_xx + u_x^2"


def test_kdv_cosymmetries_and_homology():
    p = jetkt.parse(KDV)
    assert jetkt.cosymmetries(p) == [["1"], ["u"], ["u_xx + 1/2*u^2"]]
    h = jetkt.kt_homology(p)
    assert h["dim"] == 3 and h["stable"]


def test_heat_cosymmetries():
    p = jetkt.parse("independent x, t; dependent u; equation u_t = u_xx;")
    assert jetkt.cosymmetries(p, jet_order=0, degree=0, base_degree=2) == [["1"], ["x"], ["-2*t + x^2"]]


def test_gradient_complex():
    p = jetkt.parse((ROOT / "problems" / "grad.eq").read_text())
    assert p.tier_ranks == [2, 1]
    assert jetkt.kt_check(p, antighost=3)["passed"]
    with pytest.raises(jetkt.JetktError):
        jetkt.compare(p)


def test_compare_routes():
    entries = jetkt.compare(jetkt.parse(KDV))
    assert [e["agree"] for e in entries] == [True] * 5
    assert entries[-1]["theta"] == [False, True]


def test_cli_json():
    code, out, err = jetkt.run_cli(["cosymmetries", str(ROOT / "problems" / "kdv.eq"), "--json"])
    assert code == 0 and err == ""
    doc = json.loads(out)
    assert list(doc) == ["problem", "command", "bounds", "results"]
    assert len(doc["results"]) == 3
