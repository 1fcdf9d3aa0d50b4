"""Continuous-time model: joint depolarization and polarization-dependent loss.

A single polarization qubit decays under

    d rho / dt = -1/2 {gh |H><H| + gv |V><V|, rho}
                 + (g/4) * sum_k (sigma_k rho sigma_k - rho),   k = x, y, z,

with attenuation rates gh, gv >= 0 and a depolarization rate g >= 0.  The
map is trace decreasing: tr rho(t) is the probability that the photon is
still there.  Its transfer matrix stays in the four-parameter family

        [[a, 0, 0, b],
         [0, c, 0, 0],
         [0, 0, c, 0],
         [b, 0, 0, d]]

whose coefficients have the closed form (G = sqrt(g^2 + (gh - gv)^2),
E = exp(-(g + gh + gv) t / 2)):

    a, d = E * (cosh(G t / 2) +- (g / G) sinh(G t / 2))
    b    = -((gh - gv) / G) * E * sinh(G t / 2)
    c    = exp(-(2 g + gh + gv) t / 2)

abcd() assembles these from the decay modes exp(-((g + gh + gv -+ G) t / 2))
in one-signed combinations, so both the G -> 0 limit and large G t come out
exact, and ptm_via_integration() recomputes the same matrix by brute-force
integration of the master equation, as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ptm import SIGMA, apply

# Steps above this would make single calls unreasonably slow; the step size
# is enlarged to keep the count below it.
MAX_RK4_STEPS = 10**7


@dataclass(frozen=True)
class ChannelParams:
    """Rates of one transmission line: attenuation of H and V, depolarization."""

    gamma_h: float
    gamma_v: float
    gamma: float

    def __post_init__(self) -> None:
        for name in ("gamma_h", "gamma_v", "gamma"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0.0:
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")

    @property
    def total_rate(self) -> float:
        return self.gamma_h + self.gamma_v + self.gamma

    @property
    def max_rate(self) -> float:
        return max(self.gamma_h, self.gamma_v, self.gamma)


@dataclass(frozen=True)
class AbcdCoefficients:
    """Transfer-matrix entries of the loss model at one instant."""

    a: float
    b: float
    c: float
    d: float
    t: float

    def __post_init__(self) -> None:
        if self.t < 0.0:
            raise ValueError(f"t must be >= 0, got {self.t!r}")
        for name in ("a", "c", "d"):
            value = getattr(self, name)
            if not 0.0 < value <= 1.0 + 1e-12:
                raise ValueError(f"{name} must lie in (0, 1], got {value!r}")
        if self.a + self.d < 2.0 * abs(self.b) - 1e-12:
            raise ValueError(
                f"coefficients violate a + d >= 2|b|: a={self.a!r} b={self.b!r} d={self.d!r}"
            )


def _sinch(x: float) -> float:
    # sinh(x)/x, with the series for small x so the limit at 0 is exact.
    if abs(x) < 1e-4:
        x2 = x * x
        return 1.0 + x2 / 6.0 + x2 * x2 / 120.0
    return math.sinh(x) / x


def abcd(params: ChannelParams, t: float) -> AbcdCoefficients:
    """Closed-form transfer-matrix coefficients at time t.

    a, b, d mix the two decay modes exp(-((r -+ G) t / 2)), r = g + gh + gv.
    The textbook E (cosh -+ (g/G) sinh) form cancels catastrophically once
    G t is large (d underflows through zero around G t ~ 80 for pure
    depolarization), so every coefficient is assembled from terms of one
    sign only; 1 - g/G is expanded so it survives g ~ G.
    """
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t!r}")
    gh, gv, g = params.gamma_h, params.gamma_v, params.gamma
    delta = gh - gv
    big_g = math.hypot(g, delta)
    x = 0.5 * big_g * t
    envelope = math.exp(-0.5 * (g + gh + gv) * t)
    mode_fast = math.exp(-0.5 * (g + gh + gv + big_g) * t)
    if big_g > 0.0:
        ratio_g = g / big_g
        # 1 - g/G = delta^2 / (G (G + g)), exact where direct subtraction is not
        rest = delta * delta / (big_g * (big_g + g))
        ratio_d = delta / big_g
    else:
        ratio_g, rest, ratio_d = 0.0, 1.0, 0.0
    if x < 1.0:
        # E sinh(G t/2) via sinh(x)/x, exact through G = 0
        esh = big_g * envelope * 0.5 * t * _sinch(x)
        ech = envelope * math.cosh(x)
    else:
        mode_slow = math.exp(-0.5 * (g + gh + gv - big_g) * t)
        esh = 0.5 * (mode_slow - mode_fast)
        ech = 0.5 * (mode_slow + mode_fast)
    return AbcdCoefficients(
        a=ech + ratio_g * esh,
        b=-ratio_d * esh,
        c=math.exp(-0.5 * (2.0 * g + gh + gv) * t),
        d=mode_fast + rest * esh,
        t=t,
    )


def ptm_from_coefficients(coeffs: AbcdCoefficients) -> np.ndarray:
    m = np.zeros((4, 4))
    m[0, 0] = coeffs.a
    m[0, 3] = m[3, 0] = coeffs.b
    m[1, 1] = m[2, 2] = coeffs.c
    m[3, 3] = coeffs.d
    return m


def ptm_at(params: ChannelParams, t: float) -> np.ndarray:
    """Transfer matrix of the loss model at time t (closed form)."""
    return ptm_from_coefficients(abcd(params, t))


# ---------------------------------------------------------------------------
# Brute-force oracle: integrate the master equation itself.
# ---------------------------------------------------------------------------


def _generator_matrix(params: ChannelParams) -> np.ndarray:
    """Master-equation right-hand side as a matrix on row-major vec'd operators.

    Columns are the literal right-hand side evaluated on the four 2x2 matrix
    units, so this encodes the anticommutator and Pauli sandwich terms and
    nothing of the closed-form solution.
    """
    loss = np.diag([params.gamma_h, params.gamma_v]).astype(complex)
    gen = np.zeros((4, 4), dtype=complex)
    for col in range(4):
        unit = np.zeros((2, 2), dtype=complex)
        unit[divmod(col, 2)] = 1.0
        out = -0.5 * (loss @ unit + unit @ loss)
        for pauli in SIGMA[1:]:
            out += 0.25 * params.gamma * (pauli @ unit @ pauli)
        out -= 0.75 * params.gamma * unit
        gen[:, col] = out.reshape(-1)
    return gen


def ptm_via_integration(
    params: ChannelParams, t: float, dt: float | None = None
) -> np.ndarray:
    """Transfer matrix at time t from RK4 integration of the master equation.

    All four Pauli inputs are propagated at once (columns of a vec'd stack)
    and the matrix entries are read off as m[i, j] = tr[sigma_i rho_j(t)]/2.
    The generator is constant in time, so the four classical RK4 stages
    collapse exactly into one degree-4 polynomial step operator, which is
    precomputed and then applied n times.
    """
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t!r}")
    basis = np.stack([s.reshape(-1) for s in SIGMA], axis=1)
    if t == 0.0:
        return np.eye(4)
    if dt is None:
        dt = 1e-4 / params.max_rate if params.max_rate > 0.0 else 1e-4
    if dt <= 0.0:
        raise ValueError(f"dt must be > 0, got {dt!r}")
    n = max(1, math.ceil(t / dt))
    if n > MAX_RK4_STEPS:
        n = MAX_RK4_STEPS
    h = t / n

    gen = _generator_matrix(params)
    eye = np.eye(4, dtype=complex)
    k1 = gen
    k2 = gen @ (eye + 0.5 * h * k1)
    k3 = gen @ (eye + 0.5 * h * k2)
    k4 = gen @ (eye + h * k3)
    step = eye + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    state = basis.astype(complex)
    for _ in range(n):
        state = step @ state
    return np.ascontiguousarray((0.5 * (basis.conj().T @ state)).real)


def detection_probability(m: np.ndarray, rho: np.ndarray) -> float:
    """Probability that a photon in state rho survives the map m."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError(f"expected a 2x2 state, got shape {rho.shape}")
    if abs(np.trace(rho) - 1.0) > 1e-10:
        raise ValueError(f"state must have unit trace, got {np.trace(rho)!r}")
    if float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]) < -1e-9:
        raise ValueError("state must be positive semidefinite")
    return float(np.trace(apply(m, rho)).real)
