import math

import numpy as np
import pytest

import rieszcert as rc


def two_level(c=0.3):
    t = np.diag([0.0, 1.0]).astype(complex)
    b = np.array([[0.0, c], [0.0, 0.0]], dtype=complex)
    return rc.PerturbedPair(t, b), rc.segment_family([(0.0, 0.0), (1.0, 1.0)])


def test_hypothesis_and_oracle_agree():
    pair, family = two_level()
    h = rc.check_hypothesis(pair, family)
    assert h.holds
    assert h.b == pytest.approx(0.3)
    q = rc.contour_projections(pair, family, 1e-9)
    o = rc.oracle_projections(pair, family)
    for a, b in zip(q.matrices, o.matrices):
        assert np.linalg.norm(a - b) < 1e-8
    assert np.allclose(q.matrices[0], [[1.0, -0.3], [0.0, 0.0]], atol=1e-10)


def test_gram_constants():
    pair, family = two_level()
    q = rc.contour_projections(pair, family, 1e-9)
    g = rc.gram_operator(q)
    assert np.allclose(g, [[1.0, -0.3], [-0.3, 1.18]], atol=1e-10)
    s = rc.similarity(q)
    assert s["m"] == pytest.approx(0.7767908047326837, rel=1e-9)
    assert s["condition"] == pytest.approx(1.344030650891055, rel=1e-9)
    assert rc.unconditional_constant(q) == pytest.approx(1.3440306508910551, rel=1e-9)


def test_generated_instance():
    inst = rc.generate_instance(n=12, segments=[(-1, -0.5), (0.5, 1), (2, 2.5)],
                                cluster_sizes=[4, 4, 4], b_ratio=0.8, seed=5)
    assert inst.b == pytest.approx(0.8 * 1.0 / 2)
    assert np.linalg.norm(inst.pair.b, 2) == pytest.approx(inst.b, rel=1e-12)
    q = rc.contour_projections(inst.pair, inst.family)
    v = rc.verify_projection_set(q, inst.pair, inst.family)
    assert v["enclosure"]
    assert v["completeness"] < 1e-8


def test_bounds_and_constants():
    assert rc.gap_sum_constant() == pytest.approx(4 + math.pi ** 2 / 6)
    assert rc.correction_constant(0.4, 1.0) == pytest.approx(5.94178454209742586870, rel=1e-13)
    family = rc.segment_family([(0.0, 0.5), (1.5, 2.0)])
    r = rc.check_neighborhood_separation(family, 0.3)
    assert bool(r)
    assert r.lhs == pytest.approx(0.4)


def test_certify_report():
    report = rc.certify()
    assert report["pass"]
    assert report["exit_code"] == 0
    names = [b["name"] for b in report["bounds"]]
    assert sorted(names) == sorted(rc.bound_names())


def test_errors_carry_codes(tmp_path):
    bad = tmp_path / "bad.mtx"
    bad.write_text("%%MatrixMarket matrix array real general\n2 2\n1\n")
    with pytest.raises(rc.RieszcertError) as info:
        rc.load_matrix(str(bad))
    assert info.value.code == "ParseError"
    m = np.arange(4, dtype=complex).reshape(2, 2) / 3
    path = tmp_path / "m.mtx"
    rc.save_matrix(m, str(path))
    assert np.array_equal(rc.load_matrix(str(path)), m)
