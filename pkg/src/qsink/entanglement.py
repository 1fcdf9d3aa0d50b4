"""Two-qubit entanglement under independent lossy lines.

The central object is the lifetime equation

    g(t) = lx lx' + ly ly' + lz lz' - 1,

built from the unital normal forms of the two lines.  g(0) = 2, and the
first root of g is the maximal time up to which *some* initial two-qubit
state stays entangled conditioned on both photons being detected; past it,
every initial state comes out separable.  optimal_state() builds the state
that saturates that bound by undoing the output filters of the two normal
forms on a maximally entangled pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import ChannelParams
from .linalg import hermitian_part, partial_transpose_second, trace_norm
from .ptm import apply_two_qubit
from .sinkhorn import decompose, unital_lambdas

PSI_PLUS = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / math.sqrt(2.0)

# Negativity above this counts as entangled.
ENTANGLEMENT_TOL = 1e-10
# Detection probabilities at or below this make the conditional state meaningless.
MIN_DETECTION_PROB = 1e-14

_ROOT_RESIDUAL_TOL = 1e-10
_ROOT_INTERVAL_TOL = 1e-12


def _check_state(rho: np.ndarray, normalized: bool) -> np.ndarray:
    rho = hermitian_part(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 two-qubit state, got shape {rho.shape}")
    low = float(np.linalg.eigvalsh(rho)[0])
    if low < -1e-9:
        raise ValueError(f"state is not positive semidefinite (min eigenvalue {low:.3e})")
    tr = float(np.trace(rho).real)
    if normalized:
        if abs(tr - 1.0) > 1e-10:
            raise ValueError(f"state must have unit trace, got {tr!r}")
    elif not MIN_DETECTION_PROB < tr <= 1.0 + 1e-12:
        raise ValueError(f"state trace must lie in (0, 1], got {tr!r}")
    return rho


def negativity(rho: np.ndarray) -> float:
    """Entanglement negativity (|PT(rho)|_1 - 1) / 2, clamped at zero.

    Subnormalized inputs are normalized first.
    """
    rho = _check_state(rho, normalized=False)
    rho = rho / np.trace(rho).real
    value = 0.5 * (trace_norm(partial_transpose_second(rho)) - 1.0)
    return max(0.0, value)


def is_entangled(rho: np.ndarray) -> bool:
    return negativity(rho) > ENTANGLEMENT_TOL


def conditional_state(
    m1: np.ndarray, m2: np.ndarray, initial: np.ndarray
) -> tuple[np.ndarray, float]:
    """Postselected output state and the detection probability.

    Applies the product map (m1 on the first qubit, m2 on the second) to a
    normalized initial state and renormalizes by the surviving trace.
    """
    initial = _check_state(initial, normalized=True)
    raw = apply_two_qubit(m1, m2, initial)
    prob = float(np.trace(raw).real)
    if prob <= MIN_DETECTION_PROB:
        raise ValueError(f"detection probability vanished ({prob:.3e})")
    return raw / prob, prob


def lifetime_lhs(params1: ChannelParams, params2: ChannelParams, t: float) -> float:
    """g(t): positive before the lifetime, negative past it, exactly 2 at t = 0."""
    lam1 = unital_lambdas(params1, t)
    lam2 = unital_lambdas(params2, t)
    return lam1[0] * lam2[0] + lam1[1] * lam2[1] + lam1[2] * lam2[2] - 1.0


@dataclass(frozen=True)
class LifetimeResult:
    """Root-finding report for the lifetime equation.

    tau is None when g never crosses zero up to t_max (then bracket holds
    the last expansion probe and residual the g value there).  iterations
    counts g evaluations; post_root_sign_changes reports sign reversals of
    g found on a scan of [tau, 4 tau] and should be 0.
    """

    tau: float | None
    bracket: tuple[float, float]
    residual: float
    iterations: int
    lhs_at_zero: float
    post_root_sign_changes: int = 0


def max_lifetime(
    params1: ChannelParams, params2: ChannelParams, t_max: float | None = None
) -> LifetimeResult:
    """First root of the lifetime equation via bracket doubling and bisection."""
    total = params1.total_rate + params2.total_rate
    t_start = 1.0 / total if total > 0.0 else 1.0
    if t_max is None:
        t_max = 1e3 * t_start
    if t_max <= 0.0:
        raise ValueError(f"t_max must be > 0, got {t_max!r}")

    def g(t: float) -> float:
        return lifetime_lhs(params1, params2, t)

    low, high = 0.0, min(t_start, t_max)
    g_high = g(high)
    evals = 1
    while g_high >= 0.0:
        if high >= t_max:
            return LifetimeResult(
                tau=None,
                bracket=(low, high),
                residual=g_high,
                iterations=evals,
                lhs_at_zero=2.0,
            )
        low = high
        high = min(2.0 * high, t_max)
        g_high = g(high)
        evals += 1

    tau = None
    residual = math.nan
    while high - low > _ROOT_INTERVAL_TOL:
        mid = 0.5 * (low + high)
        g_mid = g(mid)
        evals += 1
        if abs(g_mid) <= _ROOT_RESIDUAL_TOL:
            tau, residual = mid, g_mid
            break
        if g_mid > 0.0:
            low = mid
        else:
            high = mid
    if tau is None:
        tau = 0.5 * (low + high)
        residual = g(tau)
        evals += 1

    # The first root is reported; check there is no re-entry right after it.
    changes = 0
    state = None
    for probe in np.linspace(tau, 4.0 * tau, 64)[1:]:
        value = g(float(probe))
        sign = 1 if value > 1e-9 else (-1 if value < -1e-9 else 0)
        if sign != 0:
            if state is not None and sign != state:
                changes += 1
            state = sign
    return LifetimeResult(
        tau=tau,
        bracket=(low, high),
        residual=residual,
        iterations=evals,
        lhs_at_zero=2.0,
        post_root_sign_changes=changes,
    )


@dataclass(frozen=True)
class OptimalState:
    """The entanglement-maximizing initial state at the lifetime."""

    psi: np.ndarray
    rho: np.ndarray
    schmidt_coefficients: tuple[float, float]


def optimal_state(
    params1: ChannelParams, params2: ChannelParams, tau: float
) -> OptimalState:
    """State whose conditional entanglement survives until tau.

    Proportional to (B1 x B2)(|HH> + |VV>) with B the output filters of the
    two normal forms at tau; more weight ends up on the polarization that
    decays faster.
    """
    if tau <= 0.0:
        raise ValueError(f"tau must be > 0, got {tau!r}")
    b1 = decompose(params1, tau).b_op
    b2 = decompose(params2, tau).b_op
    amp_h = float((b1[0, 0] * b2[0, 0]).real)
    amp_v = float((b1[1, 1] * b2[1, 1]).real)
    norm = math.hypot(amp_h, amp_v)
    psi = np.array([amp_h, 0.0, 0.0, amp_v], dtype=complex) / norm
    rho = np.outer(psi, psi.conj())
    coeffs = sorted((abs(amp_h) / norm, abs(amp_v) / norm), reverse=True)
    return OptimalState(psi=psi, rho=rho, schmidt_coefficients=(coeffs[0], coeffs[1]))


def robust_state_unital(
    lambdas1: tuple[float, float, float], lambdas2: tuple[float, float, float]
) -> np.ndarray:
    """Most robust state for two unital lines: the maximally entangled pair.

    Valid only for signal parameters sorted lx >= ly >= lz >= 0 on both lines.
    """
    for lam in (lambdas1, lambdas2):
        lx, ly, lz = lam
        if not (lx >= ly >= lz >= 0.0):
            raise ValueError(f"signal parameters must satisfy lx >= ly >= lz >= 0, got {lam!r}")
    return PSI_PLUS.copy()
