"""Normal-form machinery: closed form against the fixed-point iteration."""

import math

import numpy as np
import pytest

from qsink.dynamics import AbcdCoefficients, ChannelParams, abcd, ptm_at
from qsink.ptm import identity_ptm, is_cp, is_trace_preserving, is_unital
from qsink.sinkhorn import (
    NORMAL_FORM_TOL,
    closed_form_s,
    decompose,
    fixed_point_iterate,
    unital_lambdas,
)

REFERENCE = ChannelParams(1.0, 5.0, 1.0)
SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)

PARAM_GRID = [
    ChannelParams(gh, gv, g)
    for gh in (0.0, 0.5, 1.0, 5.0)
    for gv in (0.0, 0.5, 1.0, 5.0)
    for g in (0.0, 0.5, 1.0, 5.0)
    if gh + gv + g > 0.0
]
TIME_GRID = (0.1, 0.25, 0.5, 1.0, 2.0)


def weight_of(s_op: np.ndarray) -> float:
    """sigma_z weight of a trace-2 fixed point I + s sigma_z."""
    return float((s_op[0, 0] - s_op[1, 1]).real) / 2.0


# ---------------------------------------------------------------------------
# fixed_point_iterate
# ---------------------------------------------------------------------------


def test_iterate_depolarizing_fixed_point_is_identity():
    m = np.diag([1.0, 0.7, 0.7, 0.7])
    s_op = fixed_point_iterate(m)
    assert np.max(np.abs(s_op - np.eye(2))) <= 1e-12


def test_iterate_matches_closed_form():
    t = 0.3
    s_op = fixed_point_iterate(ptm_at(REFERENCE, t))
    assert abs(weight_of(s_op) - closed_form_s(abcd(REFERENCE, t))) <= 1e-10


def test_iterate_gauge_and_diagonality():
    s_op = fixed_point_iterate(ptm_at(REFERENCE, 0.5))
    assert abs(np.trace(s_op).real - 2.0) <= 1e-12
    assert abs(s_op[0, 1]) <= 1e-15
    assert abs(s_op[1, 0]) <= 1e-15


def test_iterate_rejects_expanding_map():
    with pytest.raises(ValueError):
        fixed_point_iterate(np.diag([1.0, 1.2, 1.2, 1.2]))


def test_iterate_rejects_identity_annihilating_map():
    # sends I to a rank-one projector, so the first inversion is impossible
    m = np.array(
        [
            [0.5, 0.0, 0.0, 0.5],
            [0.0, 0.1, 0.0, 0.0],
            [0.0, 0.0, 0.1, 0.0],
            [0.5, 0.0, 0.0, 0.5],
        ]
    )
    with pytest.raises(ValueError):
        fixed_point_iterate(m)


def test_iterate_respects_max_iter():
    with pytest.raises(RuntimeError):
        fixed_point_iterate(ptm_at(REFERENCE, 0.3), max_iter=5)


# ---------------------------------------------------------------------------
# closed_form_s
# ---------------------------------------------------------------------------


def test_closed_form_s_zero_for_balanced_loss():
    assert closed_form_s(abcd(ChannelParams(2.0, 2.0, 1.0), 0.7)) == 0.0


def test_closed_form_s_sign_tracks_imbalance():
    for t in (0.2, 1.0, 3.0):
        assert closed_form_s(abcd(ChannelParams(5.0, 1.0, 1.0), t)) > 0.0
        assert closed_form_s(abcd(ChannelParams(1.0, 5.0, 1.0), t)) < 0.0


def test_closed_form_s_stays_inside_unit_interval():
    for params in PARAM_GRID:
        for t in TIME_GRID:
            assert abs(closed_form_s(abcd(params, t))) < 1.0


def test_closed_form_s_rejects_boundary_coefficients():
    # passes the constructor's tolerance but sits past a + d = 2|b|
    coeffs = AbcdCoefficients(a=0.5, b=0.5000000000002, c=0.5, d=0.5, t=1.0)
    with pytest.raises(ValueError):
        closed_form_s(coeffs)


# ---------------------------------------------------------------------------
# unital_lambdas
# ---------------------------------------------------------------------------


def test_lambdas_at_zero():
    assert unital_lambdas(REFERENCE, 0.0) == (1.0, 1.0, 1.0)


def test_lambdas_pure_loss_is_identity_signal():
    # the unital part of a pure polarization filter is the identity map,
    # out to times where one decay mode is hundreds of orders below the other
    params = ChannelParams(1.0, 5.0, 0.0)
    for t in (0.5, 5.0, 50.0, 100.0):
        lams = unital_lambdas(params, t)
        assert max(abs(l - 1.0) for l in lams) <= 1e-12


def test_lambdas_pure_loss_underflow_is_detected():
    with pytest.raises(ValueError):
        unital_lambdas(ChannelParams(1.0, 5.0, 0.0), 400.0)


def test_lambdas_symmetric_depolarization():
    g, t = 1.5, 0.8
    lams = unital_lambdas(ChannelParams(0.0, 0.0, g), t)
    for lam in lams:
        assert abs(lam - math.exp(-g * t)) <= 1e-14


def test_lambdas_match_direct_formulas():
    # same quantities straight from the transfer-matrix entries; this route
    # loses precision at large times, so the grid stays moderate
    for params in PARAM_GRID:
        for t in TIME_GRID:
            co = abcd(params, t)
            root = math.sqrt((co.a + co.d) ** 2 - 4.0 * co.b * co.b)
            den = co.a - co.d + root
            direct_x = 2.0 * co.c / den
            direct_z = 4.0 * (co.a * co.d - co.b * co.b) / (den * den)
            lam_x, lam_y, lam_z = unital_lambdas(params, t)
            assert lam_x == lam_y
            assert abs(lam_x - direct_x) <= 1e-12
            assert abs(lam_z - direct_z) <= 1e-12


def test_lambdas_ordering_on_grid():
    for params in PARAM_GRID:
        for t in TIME_GRID:
            lam_x, lam_y, lam_z = unital_lambdas(params, t)
            # x and z coincide to the last ulp when gh == gv
            assert lam_y >= lam_z - 1e-12
            assert lam_z >= 0.0
            assert lam_x <= 1.0 + 1e-12


# ---------------------------------------------------------------------------
# decompose
# ---------------------------------------------------------------------------


def test_decompose_at_zero_is_trivial():
    dec = decompose(REFERENCE, 0.0)
    assert dec.s == 0.0
    assert (dec.lambda_x, dec.lambda_y, dec.lambda_z) == (1.0, 1.0, 1.0)
    assert np.max(np.abs(dec.a_op - np.eye(2))) <= 1e-12
    assert np.max(np.abs(dec.b_op - np.eye(2))) <= 1e-12
    assert np.max(np.abs(dec.upsilon - identity_ptm())) <= 1e-9


def test_decompose_rejects_negative_time():
    with pytest.raises(ValueError):
        decompose(REFERENCE, -0.5)


def test_decompose_short_time_limit():
    dec = decompose(REFERENCE, 1e-9)
    assert abs(dec.lambda_x - 1.0) <= 1e-8
    assert abs(dec.lambda_z - 1.0) <= 1e-8
    assert abs(dec.s) <= 1e-8


def test_decompose_pure_depolarization():
    g, t = 1.2, 0.9
    dec = decompose(ChannelParams(0.0, 0.0, g), t)
    assert dec.s == 0.0
    assert np.max(np.abs(dec.a_op - np.eye(2))) <= 1e-14
    assert np.max(np.abs(dec.b_op - np.eye(2))) <= 1e-14
    for lam in (dec.lambda_x, dec.lambda_y, dec.lambda_z):
        assert abs(lam - math.exp(-g * t)) <= 1e-14


def test_decompose_pure_loss_unital_part_is_identity():
    dec = decompose(ChannelParams(2.0, 0.5, 0.0), 1.3)
    assert np.max(np.abs(dec.upsilon - identity_ptm())) <= 1e-12
    assert abs(dec.lambda_x - dec.lambda_z) <= 1e-12


def test_decompose_balanced_loss_has_equal_lambdas():
    dec = decompose(ChannelParams(2.0, 2.0, 1.0), 0.6)
    assert dec.s == 0.0
    assert dec.lambda_x == dec.lambda_y
    assert abs(dec.lambda_x - dec.lambda_z) <= 1e-12


def test_decompose_weight_matches_closed_form():
    for params in PARAM_GRID:
        for t in TIME_GRID:
            dec = decompose(params, t)
            assert abs(dec.s - closed_form_s(abcd(params, t))) <= 1e-12


def test_decompose_unital_part_properties():
    for params in (REFERENCE, ChannelParams(0.5, 0.0, 5.0)):
        for t in (0.1, 1.0):
            dec = decompose(params, t)
            assert is_trace_preserving(dec.upsilon)
            assert is_unital(dec.upsilon)
            assert is_cp(dec.upsilon)
            target = np.diag([1.0, dec.lambda_x, dec.lambda_y, dec.lambda_z])
            assert np.max(np.abs(dec.upsilon - target)) <= NORMAL_FORM_TOL


def test_decompose_filters_are_positive_diagonal():
    dec = decompose(REFERENCE, 0.8)
    for op in (dec.a_op, dec.b_op):
        assert op[0, 1] == 0.0 and op[1, 0] == 0.0
        assert op[0, 0].real > 0.0 and op[1, 1].real > 0.0
        assert op[0, 0].imag == 0.0 and op[1, 1].imag == 0.0


def test_decompose_round_trip():
    # undo the filters: L = F_{A^-1} . U . F_{B^-1}
    from qsink.ptm import compose, sandwich

    for params in (REFERENCE, ChannelParams(0.5, 5.0, 0.5)):
        for t in (0.2, 1.0, 2.0):
            dec = decompose(params, t)
            a_inv = np.diag(1.0 / np.diag(dec.a_op))
            b_inv = np.diag(1.0 / np.diag(dec.b_op))
            rebuilt = compose(sandwich(a_inv), compose(dec.upsilon, sandwich(b_inv)))
            assert np.max(np.abs(rebuilt - ptm_at(params, t))) <= 1e-9


def test_decompose_fixed_point_matches_iteration():
    for params in (REFERENCE, ChannelParams(0.5, 1.0, 0.5), ChannelParams(5.0, 0.5, 1.0)):
        for t in (0.25, 0.5, 1.0):
            dec = decompose(params, t)
            s_op = np.eye(2, dtype=complex) + dec.s * SIGMA_Z
            iterated = fixed_point_iterate(ptm_at(params, t))
            assert np.max(np.abs(s_op - iterated)) <= 1e-9


def test_decompose_degenerate_filter_raises():
    with pytest.raises(ValueError):
        decompose(ChannelParams(1.0, 5.0, 0.0), 200.0)


def test_decompose_mode_underflow_raises():
    with pytest.raises(ValueError):
        decompose(ChannelParams(1.0, 5.0, 0.0), 800.0)
