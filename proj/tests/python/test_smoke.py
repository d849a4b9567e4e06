"""Smoke tests of the python bindings."""

import json

import braidtrack as bt


def test_intro_curve_report():
    rep = bt.braid_report("z^3 - t^2", seed=1)
    assert rep["n"] == 3
    assert len(rep["generators"]) == 1
    gen = rep["generators"][0]
    assert gen["perm"] == [2, 3, 1]
    assert gen["core"] == "s2 s1 s2 s1"
    assert abs(complex(*gen["branch_point"])) < 1e-8
    assert rep["monodromy"]["order"] == 3
    assert rep["monodromy"]["transitive"] is True


def test_branch_points():
    pts = bt.branch_points("z^3 - t^2*(1-t)")
    assert len(pts) == 2
    assert abs(pts[0]) < 1e-8
    assert abs(pts[1] - 1) < 1e-8


def test_word_utilities():
    assert bt.free_reduce("s1 s1^-1 s2", 3) == "s2"
    assert bt.word_permutation("s2 s1 s2 s1", 3) == [2, 3, 1]
    assert bt.exponent_sum("s2 s1 s2 s1^-1", 3) == 2


def test_render_tikz():
    out = bt.render("s2 s1 s2 s1", 3, "tikz")
    assert "a_{2} a_{1} a_{2} a_{1}" in out


def test_arrangement_lines():
    rep = json.loads(bt.arrangement_lines([[1, -1, 0], [1, 1, 0]], seed=1))
    assert len(rep["generators"]) == 1
    assert rep["generators"][0]["core"] == "s1 s1"


def test_restrict_to_line():
    poly = json.loads(bt.restrict_to_line("z^3 - u1*u2", 2, point=[0, 0], direction=[1, 1]))
    assert poly["degz"] == 3
    assert poly["degt"] == 2


def test_verify_round_trip():
    report = bt.braid("z^3 - t^2", seed=1)
    assert bt.verify(report, "z^3 - t^2") == []
    tampered = report.replace('"sign": 1', '"sign": -1', 1)
    assert bt.verify(tampered, "z^3 - t^2") != []


def test_determinism():
    a = bt.braid("z^4 - 4*z^2 + 3 + t", seed=5)
    b = bt.braid("z^4 - 4*z^2 + 3 + t", seed=5)
    assert a == b
