import json
import math

import pytest

import solitonjet as sj


def test_field_roundtrip_and_partials():
    f = sj.Field("exp(2*x - y)")
    assert f.tree() == "Exp(Sub(Mul(2, x), y))"
    assert f.value(0.3, 0.1) == pytest.approx(math.exp(0.5), rel=1e-15)
    assert f.partial(0.3, 0.1, 2, 1) == pytest.approx(-4 * math.exp(0.5), rel=1e-13)
    assert str(sj.Field(str(f))) == str(f)


def test_syntax_error_reports_offset():
    with pytest.raises(sj.SolitonJetError, match="offset 3"):
        sj.Field("x +")


def test_akns_crest_height():
    g = sj.soliton_grid("akns", ["k=1,x0=0"], 0.5, grid="a=-3:3:601,b=0:1:2", field="Mx")
    assert g.shape == (601, 2)
    assert g[:, 0].max() == pytest.approx(1.0, abs=1e-6)


def test_invalid_mode_raises():
    with pytest.raises(sj.SolitonJetError, match="invalid-mode"):
        sj.soliton_grid("akns", ["k=0"], 0.5)


def test_grid_threads_identical():
    a = sj.soliton_grid("nlbq", ["a=2", "a=3"], 1.0, threads=1)
    b = sj.soliton_grid("nlbq", ["a=2", "a=3"], 1.0, threads=4)
    assert (a == b).all()


def test_builtins_pass():
    names = sj.builtin_names()
    assert "akns-one-soliton" in names
    for name in names:
        if name == "negative-control-lambda":
            continue
        assert sj.verify_builtin(name)["pass"], name


def test_negative_control_fails():
    report = sj.verify_builtin("negative-control-lambda")
    assert not report["pass"]


def test_verify_json_scenario():
    doc = {
        "name": "one",
        "family": "akns",
        "seed": {"a0": 0.5},
        "modes": [{"k": 1, "x0": 0}],
        "chain": [{"op": "soliton", "as": "s1"}],
        "equations": [{"equation": "AKNS_PDE", "bind": {"M": "s1.M"}}],
    }
    report = sj.verify_json(json.dumps(doc))
    assert report["pass"]
    assert report["entries"][0]["max_relative_residual"] <= 1e-8
