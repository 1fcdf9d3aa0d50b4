"""Normal form of a lossy qubit map: unital and trace preserving in the middle.

Any map in the transfer-matrix family of this package factors as

    L = F_Ainv . U . F_Binv        (equivalently U = F_A . L . F_B)

where F_X[rho] = X rho X^dag, A = sqrt(S), B = (L^dag[S])^(-1/2), U is unital
and trace preserving with transfer matrix diag(1, lx, ly, lz), and S is a
positive fixed point of

    F[S] = ( L[ (L^dag[S])^(-1) ] )^(-1).

For this family S = I + s sigma_z with a closed-form s, which decompose()
uses directly; fixed_point_iterate() recovers the same S by iterating F and
serves as the independent cross-check.

Numerical note: the coefficients a, b, d share the two decay modes
exp(-((r +- G) t / 2)) with r = g + gh + gv, and combinations such as
(a + d)^2 - 4 b^2 lose all precision once G t is large, while their
mode-level forms stay exact.  The lifetime search probes such times on
purpose, so everything below is written in terms of the modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import AbcdCoefficients, ChannelParams, ptm_at
from .linalg import PD_MIN_EIG, pd_inverse
from .ptm import PSD_TOL, SIGMA, apply, compose, sandwich

# The composed map must reproduce diag(1, lx, ly, lz) at least this well.
NORMAL_FORM_TOL = 1e-9


@dataclass(frozen=True)
class SinkhornDecomposition:
    """One map's normal form: L = F_{a_op^-1} . upsilon . F_{b_op^-1}."""

    s: float
    a_op: np.ndarray
    b_op: np.ndarray
    lambda_x: float
    lambda_y: float
    lambda_z: float
    upsilon: np.ndarray


# ---------------------------------------------------------------------------
# Fixed-point iteration
# ---------------------------------------------------------------------------


def _probe_positivity(m: np.ndarray) -> None:
    # A CP map sends positive definite inputs to positive definite outputs
    # exactly when it does not annihilate the identity, so that is the hard
    # requirement for the iteration (it only ever inverts images of PD
    # operators).  Rank-preserving pure loss maps pure states to singular
    # outputs and is still fine to iterate; genuinely non-positive maps are
    # rejected on the pure-state probes.
    half_eye = 0.5 * np.eye(2, dtype=complex)
    for mm in (m, m.T):
        low = float(np.linalg.eigvalsh(apply(mm, half_eye))[0])
        if low <= PD_MIN_EIG:
            raise ValueError(
                f"map is not strictly positive: identity maps to min eigenvalue {low:.3e}"
            )
    for pauli in SIGMA[1:]:
        for sign in (1.0, -1.0):
            probe = 0.5 * (np.eye(2, dtype=complex) + sign * pauli)
            low = float(np.linalg.eigvalsh(apply(m, probe))[0])
            if low < -PSD_TOL:
                raise ValueError(
                    f"map is not positive on a Pauli eigenstate probe "
                    f"(min eigenvalue {low:.3e})"
                )


def fixed_point_iterate(
    m: np.ndarray, tol: float = 1e-12, max_iter: int = 10000
) -> np.ndarray:
    """Iterate F[S] = (L[(L^dag[S])^-1])^-1 from S = I until it stops moving.

    Returns S in the tr[S] = 2 gauge (F is scale covariant, so the trace is
    renormalized after every step).  Raises ValueError for maps the iteration
    cannot handle and RuntimeError if max_iter steps are not enough.
    """
    m = np.asarray(m, dtype=float)
    _probe_positivity(m)
    m_dual = m.T
    s_op = np.eye(2, dtype=complex)
    for _ in range(max_iter):
        image = pd_inverse(apply(m, pd_inverse(apply(m_dual, s_op))))
        if float(np.max(np.abs(image - s_op))) <= tol:
            return 2.0 * image / np.trace(image).real
        s_op = 2.0 * image / np.trace(image).real
    raise RuntimeError(
        f"fixed-point iteration did not converge within {max_iter} steps"
    )


# ---------------------------------------------------------------------------
# Closed form
# ---------------------------------------------------------------------------


def closed_form_s(coeffs: AbcdCoefficients) -> float:
    """The sigma_z weight of the fixed point, s ∈ (-1, 1), from a, b, d.

    Written as -2b / (a + d + sqrt((a+d)^2 - 4b^2)) so small b is harmless.
    """
    a, b, d = coeffs.a, coeffs.b, coeffs.d
    if abs(b) < 1e-14:
        return 0.0
    radicand = (a + d) ** 2 - 4.0 * b * b
    if radicand <= 0.0:
        # a + d > 2|b| holds strictly for the loss model at any finite time,
        # so hitting the boundary means the coefficients are not from it.
        raise ValueError(f"coefficients violate a + d > 2|b|: a={a!r} b={b!r} d={d!r}")
    return -2.0 * b / (a + d + math.sqrt(radicand))


@dataclass(frozen=True)
class _Modes:
    """Decay modes and reduced quantities of one map at one instant."""

    slow: float  # exp(-((r - G) t / 2))
    fast: float  # exp(-((r + G) t / 2))
    r_gamma: float  # g / G       (0 when G = 0)
    r_delta: float  # (gh-gv) / G (0 when G = 0)
    coherence: float  # the c coefficient

    @property
    def width(self) -> float:
        # E * sqrt(1 + (g/G)^2 sinh^2(G t / 2)), the stabilized radical.
        half_gap = 0.5 * self.r_gamma * (self.slow - self.fast)
        return math.sqrt(self.slow * self.fast + half_gap * half_gap)


def _modes(params: ChannelParams, t: float) -> _Modes:
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t!r}")
    gh, gv, g = params.gamma_h, params.gamma_v, params.gamma
    delta = gh - gv
    big_g = math.hypot(g, delta)
    rate = g + gh + gv
    slow = math.exp(-0.5 * (rate - big_g) * t)
    if slow == 0.0:
        raise ValueError(f"decay modes underflow to zero at t={t!r}")
    return _Modes(
        slow=slow,
        fast=math.exp(-0.5 * (rate + big_g) * t),
        r_gamma=g / big_g if big_g > 0.0 else 0.0,
        r_delta=delta / big_g if big_g > 0.0 else 0.0,
        coherence=math.exp(-0.5 * (2.0 * g + gh + gv) * t),
    )


def unital_lambdas(params: ChannelParams, t: float) -> tuple[float, float, float]:
    """Signal parameters (lx, ly, lz) of the unital normal form at time t.

    Defined and well conditioned for every t >= 0; (1, 1, 1) exactly at
    t = 0 and identically for pure polarization-dependent loss.
    """
    modes = _modes(params, t)
    denom = modes.r_gamma * (modes.slow - modes.fast) + 2.0 * modes.width
    if denom == 0.0:
        # reachable for pure loss once slow*fast underflows double precision
        raise ValueError(f"decay modes underflow at t={t!r}; signal parameters undefined")
    lam_x = 2.0 * modes.coherence / denom
    lam_z = 4.0 * modes.slow * modes.fast / (denom * denom)
    return lam_x, lam_x, lam_z


def decompose(params: ChannelParams, t: float) -> SinkhornDecomposition:
    """Full normal form of the loss model's map at time t.

    The composed transfer matrix F_A . L . F_B is verified against
    diag(1, lx, ly, lz) to NORMAL_FORM_TOL before returning.
    """
    modes = _modes(params, t)
    gap = modes.slow - modes.fast
    denom_s = modes.slow + modes.fast + 2.0 * modes.width
    s = modes.r_delta * gap / denom_s
    # 1 +- s in cancellation-free all-positive form.
    upper = 0.5 * (modes.slow * (1.0 + modes.r_delta) + modes.fast * (1.0 - modes.r_delta))
    lower = 0.5 * (modes.slow * (1.0 - modes.r_delta) + modes.fast * (1.0 + modes.r_delta))
    one_plus_s = 2.0 * (upper + modes.width) / denom_s
    one_minus_s = 2.0 * (lower + modes.width) / denom_s
    # Eigenvalues of L^dag[S] = (a + b s) I + (b + d s) sigma_z on |H>, |V>.
    half_gsh = 0.5 * modes.r_gamma * gap
    eig_h = one_plus_s * lower + one_minus_s * half_gsh
    eig_v = one_minus_s * upper + one_plus_s * half_gsh
    if eig_h <= PD_MIN_EIG or eig_v <= PD_MIN_EIG:
        raise ValueError(
            f"degenerate filter: image of the fixed point has eigenvalues "
            f"({eig_h:.3e}, {eig_v:.3e})"
        )
    lam_x, lam_y, lam_z = unital_lambdas(params, t)

    a_op = np.diag([math.sqrt(one_plus_s), math.sqrt(one_minus_s)]).astype(complex)
    b_op = np.diag([1.0 / math.sqrt(eig_h), 1.0 / math.sqrt(eig_v)]).astype(complex)
    upsilon = compose(sandwich(a_op), compose(ptm_at(params, t), sandwich(b_op)))

    target = np.diag([1.0, lam_x, lam_y, lam_z])
    residual = float(np.max(np.abs(upsilon - target)))
    if residual > NORMAL_FORM_TOL:
        raise RuntimeError(
            f"normal form self-check failed: |upsilon - diag(1, lx, ly, lz)| = {residual:.3e}"
        )
    return SinkhornDecomposition(
        s=s,
        a_op=a_op,
        b_op=b_op,
        lambda_x=lam_x,
        lambda_y=lam_y,
        lambda_z=lam_z,
        upsilon=upsilon,
    )
