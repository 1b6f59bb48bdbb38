import numpy as np
import pytest

from deltahomog.config import OracleBudget
from deltahomog.exceptions import ZeroVector
from deltahomog.lie import check_orthogonal
from deltahomog.metric import MetricParams, project
from deltahomog.oracle import DeltaCertificate, chebyshev_norm, is_delta_vector_numeric, orbit_projection_sup
from deltahomog.so5 import E15, Q2, build_so5_u2, candidate_W, fv

SMALL = OracleBudget(restarts=8, steps_per_restart=300)


def space(ratio):
    return build_so5_u2(MetricParams(1.0, ratio))


def f_at(sp, W, g):
    V = project(sp.split, sp.algebra.Ad(g, W), "p")
    return float(V @ sp.split.metric_operator(sp.params) @ V)


def test_sup_is_attained_by_argmax():
    sp = space(2.5)
    W = candidate_W(1.0, 1.0, sp.params)
    res = orbit_projection_sup(sp.split, sp.params, W, SMALL)
    check_orthogonal(res.argmax)
    assert f_at(sp, W, res.argmax) == pytest.approx(res.sup, rel=1e-12)
    assert len(res.per_restart) == SMALL.restarts and res.evaluations > 0


def test_sup_at_least_identity_value():
    sp = space(1.7)
    W = fv(1, 3) + 0.2 * E15
    res = orbit_projection_sup(sp.split, sp.params, W, SMALL)
    assert res.sup >= f_at(sp, W, np.eye(5)) - 1e-15


def test_seed_reproducible_and_monotone_in_restarts():
    sp = space(0.8)
    W = candidate_W(0.5, 1.0, sp.params)
    a = orbit_projection_sup(sp.split, sp.params, W, SMALL)
    b = orbit_projection_sup(sp.split, sp.params, W, SMALL)
    assert a.sup == b.sup and np.array_equal(a.argmax, b.argmax)
    more = orbit_projection_sup(sp.split, sp.params, W, OracleBudget(restarts=12, steps_per_restart=300))
    assert more.sup >= a.sup
    assert more.per_restart[:8] == a.per_restart


def test_normal_metric_orbit_is_flat_on_p_vectors():
    # for x1 = x2 the maximum of |P Ad(g) W|^2 over the orbit of W in p is |W|^2
    sp = space(1.0)
    W = E15 + Q2
    cert = is_delta_vector_numeric(sp.split, sp.params, W, SMALL)
    assert not cert.refuted
    assert abs(cert.excess) <= 1e-9


def test_refutes_outside_range_with_witness():
    sp = space(2.5)
    W = candidate_W(1.0, 1.0, sp.params)
    cert = is_delta_vector_numeric(sp.split, sp.params, W, SMALL)
    assert cert.refuted and cert.witness is not None
    # frozen value: the family-2 maximum 2 x2 ((sqrt(lo) + sqrt(hi))/2)^2 minus the reference 6
    lo, hi = 0.25, 7.25
    assert cert.excess == pytest.approx(2 * 2.5 * ((lo ** 0.5 + hi ** 0.5) / 2) ** 2 - 6.0, abs=1e-6)
    assert f_at(sp, W, cert.witness) - cert.reference == pytest.approx(cert.excess, rel=1e-9)


def test_plausible_inside_range():
    sp = space(1.5)
    cert = is_delta_vector_numeric(sp.split, sp.params, candidate_W(1.0, -0.5, sp.params), SMALL)
    assert cert.verdict == "plausible" and cert.witness is None
    assert cert.excess <= 1e-8


def test_zero_vector():
    sp = space(1.5)
    with pytest.raises(ZeroVector):
        orbit_projection_sup(sp.split, sp.params, np.zeros(10), SMALL)
    assert chebyshev_norm(sp.split, sp.params, np.zeros(10)) == 0.0


def test_chebyshev_norm_is_orbit_invariant():
    sp = space(1.3)
    W = fv(1, 2) + 0.5 * fv(3, 5)
    g = sp.algebra.exp(np.linspace(-1, 1, 10))
    a = chebyshev_norm(sp.split, sp.params, W, SMALL)
    b = chebyshev_norm(sp.split, sp.params, sp.algebra.Ad(g, W), SMALL)
    assert a == pytest.approx(b, rel=1e-6)


def test_budget_validation():
    with pytest.raises(ValueError):
        OracleBudget(restarts=0)
    with pytest.raises(ValueError):
        OracleBudget(step_size=-1.0)


def test_certificate_dict():
    d = DeltaCertificate("refuted", 1.0, 2.0, np.eye(2)).to_dict()
    assert d["witness"] == [[1.0, 0.0], [0.0, 1.0]] and d["method"] == "oracle"
    assert DeltaCertificate("refuted", 1.0, 2.0).refuted
    assert not DeltaCertificate("plausible", 0.0, 2.0).refuted
