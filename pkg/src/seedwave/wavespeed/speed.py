"""Speed functions of the linearized travelling-wave equations.

For a decay rate ``mu < 0`` the exponential ansatz ``(d1, d2) * exp(mu x)``
turns the linearized system into the eigenvalue problem

    (1/2 mu^2 A + Q + R) d = -mu * lambda * d,

with ``A = diag(1, 0)`` for the seed-bank model, ``A = diag(0, 1)`` for the
spore model, ``Q = ((-c, c), (c', -c'))`` and ``R = diag(s, 0)``. Writing
``B = 1/2 mu^2 A + Q + R`` with Perron root ``theta``, the two speed branches
are ``lambda = -theta / mu``. The radicand of the closed form is the
discriminant ``(B11 - B22)^2 + 4 c c'`` of ``B`` and is never negative for
non-negative switching rates.

The classical F-KPP equation is the scalar case ``B = 1/2 mu^2 + s``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.linalg import expm

from ..core.errors import DomainError, NonRealSpeedError, SolverError
from ..core.model import ModelParams, Variant

HISTORICAL_UPPER_BOUND = math.sqrt(math.sqrt(5.0) - 1.0)


@dataclass(frozen=True)
class SpeedEval:
    """Both speed branches at one decay rate.

    Fields:
    - mu: Decay rate (< 0).
    - lambda_plus: Speed on the Perron branch (>= 0 for mu < 0).
    - lambda_minus: Speed on the second branch.
    - discriminant: Radicand of the square root in the closed form.
    """

    mu: float
    lambda_plus: float
    lambda_minus: float
    discriminant: float


def linear_matrices(params: ModelParams) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(A, Q, R)`` of the linearized system.

    The classical model is embedded as variant I without switching, so the
    dormant row and column are zero.
    """
    s = params.s
    if params.variant is Variant.SPORE:
        A = np.array([[0.0, 0.0], [0.0, 1.0]])
    else:
        A = np.array([[1.0, 0.0], [0.0, 0.0]])
    Q = np.array([[-params.c, params.c], [params.c_prime, -params.c_prime]])
    R = np.array([[s, 0.0], [0.0, 0.0]])
    return A, Q, R


def _diagonal(mu: float, params: ModelParams) -> Tuple[float, float]:
    """Diagonal entries ``(B11, B22)`` of ``1/2 mu^2 A + Q + R``."""
    half_mu2 = 0.5 * mu * mu
    s = params.s
    if params.variant is Variant.SPORE:
        return s - params.c, half_mu2 - params.c_prime
    return half_mu2 - params.c + s, -params.c_prime


def radicand(mu: float, params: ModelParams) -> float:
    """Radicand of the closed-form speed function at ``mu``."""
    if params.variant is Variant.CLASSICAL:
        theta = 0.5 * mu * mu + params.s
        return theta * theta
    b11, b22 = _diagonal(mu, params)
    return (b11 - b22) ** 2 + 4.0 * params.c * params.c_prime


def _perron_root(mu: float, params: ModelParams) -> Tuple[float, float, float]:
    """Return ``(theta_plus, theta_minus, radicand)`` of ``B``."""
    if params.variant is Variant.CLASSICAL:
        theta = 0.5 * mu * mu + params.s
        return theta, theta, theta * theta
    b11, b22 = _diagonal(mu, params)
    disc = (b11 - b22) ** 2 + 4.0 * params.c * params.c_prime
    if disc < 0.0:
        raise NonRealSpeedError(mu, disc)
    root = math.sqrt(disc)
    trace = b11 + b22
    return 0.5 * (trace + root), 0.5 * (trace - root), disc


def _check_mu(mu: float) -> None:
    if not mu < 0.0:
        raise DomainError(f"Decay rate must be negative, got mu={mu}")


def speed_function(mu: float, params: ModelParams) -> SpeedEval:
    """Evaluate both speed branches in closed form.

    Args:
        mu: Decay rate, strictly negative.
        params: Model parameters.

    Returns:
        `SpeedEval` with ``lambda_plus = -(tr + sqrt(D)) / (2 mu)`` and
        ``lambda_minus = -(tr - sqrt(D)) / (2 mu)``; the classical model
        returns ``-(mu/2 + s/mu)`` on both branches.

    Raises:
        DomainError: If ``mu >= 0``.
        NonRealSpeedError: If the radicand is negative.
    """
    _check_mu(mu)
    theta_plus, theta_minus, disc = _perron_root(mu, params)
    return SpeedEval(
        mu=mu,
        lambda_plus=-theta_plus / mu,
        lambda_minus=-theta_minus / mu,
        discriminant=disc,
    )


def speed_function_numeric(mu: float, params: ModelParams) -> SpeedEval:
    """Evaluate the speed branches through a generic 2x2 eigen-solve.

    Independent of the closed form; the two must agree to about 1e-10.
    """
    _check_mu(mu)
    A, Q, R = linear_matrices(params)
    eigvals = np.linalg.eigvals(0.5 * mu * mu * A + Q + R)
    if np.max(np.abs(eigvals.imag)) > 0.0:
        raise NonRealSpeedError(mu, -float(np.max(np.abs(eigvals.imag))) ** 2)
    if params.variant is Variant.CLASSICAL:
        # the embedded dormant row is identically zero
        theta_plus = theta_minus = float(eigvals.real[np.argmax(np.abs(eigvals.real))])
    else:
        theta_plus, theta_minus = float(eigvals.real.max()), float(eigvals.real.min())
    return SpeedEval(
        mu=mu,
        lambda_plus=-theta_plus / mu,
        lambda_minus=-theta_minus / mu,
        discriminant=radicand(mu, params),
    )


def speed_derivative(mu: float, params: ModelParams) -> float:
    """Closed-form derivative of ``mu -> lambda_plus(mu)``."""
    _check_mu(mu)
    if params.variant is Variant.CLASSICAL:
        return -0.5 + params.s / (mu * mu)
    theta, _, disc = _perron_root(mu, params)
    b11, b22 = _diagonal(mu, params)
    # d(B11 - B22)/dmu is +mu for the seed-bank model and -mu for the spore model
    ddiff = mu if params.variant is Variant.SEED_BANK else -mu
    dtheta = 0.5 * (mu + (b11 - b22) * ddiff / math.sqrt(disc))
    return (theta - mu * dtheta) / (mu * mu)


def eigen_matrix(mu: float, lam: float, params: ModelParams) -> np.ndarray:
    """Return ``1/2 mu^2 A + Q + R + mu * lambda * I``.

    For the classical model the dormant row and column are zero apart from
    the ``mu * lambda`` shift.
    """
    A, Q, R = linear_matrices(params)
    return 0.5 * mu * mu * A + Q + R + mu * lam * np.eye(2)


def determinant_poly(mu: float, lam: float, params: ModelParams) -> float:
    """Return ``P(mu, lambda) = det(1/2 mu^2 A + Q + R + mu lambda I)``.

    The classical model uses the scalar ``1/2 mu^2 + s + mu lambda``.
    """
    if params.variant is Variant.CLASSICAL:
        return 0.5 * mu * mu + params.s + mu * lam
    m = eigen_matrix(mu, lam, params)
    return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def _determinant_coefficients(lam: float, params: ModelParams) -> np.ndarray:
    """Coefficients (low to high) of ``mu -> P(mu, lambda)``."""
    s, c, cp = params.s, params.c, params.c_prime
    if params.variant is Variant.CLASSICAL:
        return np.array([s, lam, 0.5])
    if params.variant is Variant.SEED_BANK:
        e11, e22 = np.array([s - c, lam, 0.5]), np.array([-cp, lam])
    else:
        e11, e22 = np.array([s - c, lam]), np.array([-cp, lam, 0.5])
    return P.polysub(P.polymul(e11, e22), np.array([c * cp]))


def determinant_roots(lam: float, params: ModelParams) -> np.ndarray:
    """Real roots in ``mu`` of ``P(mu, lambda)`` for fixed ``lambda``, sorted.

    For two-component models and ``lambda > lambda*`` there are two negative
    roots on the ``lambda_plus`` branch (one on each side of ``mu*``) and a
    positive root on the ``lambda_minus`` branch.
    """
    roots = P.polyroots(_determinant_coefficients(lam, params))
    real = roots[np.abs(roots.imag) <= 1e-9 * np.maximum(1.0, np.abs(roots.real))]
    return np.sort(real.real)


def perron_eigenvector(mu: float, params: ModelParams) -> Tuple[float, float]:
    """Perron eigenvector of ``1/2 mu^2 A + Q + R`` for eigenvalue ``-mu lambda_plus``.

    Normalized with ``d2 = 1`` whenever ``c' > 0`` (closed form
    ``d1 = (theta - B22) / c'``); with ``c' = 0`` the matrix is reducible and
    the normalization switches to ``d1 = 1``. The classical model has a single
    component and returns ``(1, 1)`` so the pair can weight both flags.

    Raises:
        NonRealSpeedError: Propagated from the speed function.
    """
    _check_mu(mu)
    if params.variant is Variant.CLASSICAL:
        return 1.0, 1.0
    theta, _, _ = _perron_root(mu, params)
    b11, b22 = _diagonal(mu, params)
    if params.c_prime > 0.0:
        return (theta - b22) / params.c_prime, 1.0
    if params.c > 0.0:
        return 1.0, (theta - b11) / params.c
    return (1.0, 0.0) if b11 >= b22 else (0.0, 1.0)


def diagonal_entries(mu: float, params: ModelParams) -> Tuple[float, float]:
    """Diagonal ``(F_a, F_d)`` of the eigen matrix on the Perron branch.

    Both are strictly negative when ``c c' > 0``; their product equals
    ``c c'`` because the determinant vanishes.

    Raises:
        SolverError: If ``c c' > 0`` and an entry is not strictly negative.
    """
    lam = speed_function(mu, params).lambda_plus
    m = eigen_matrix(mu, lam, params)
    f_a, f_d = float(m[0, 0]), float(m[1, 1])
    if params.c * params.c_prime > 0.0 and not (f_a < 0.0 and f_d < 0.0):
        raise SolverError(f"Non-negative diagonal entry at mu={mu}: F_a={f_a}, F_d={f_d}")
    return f_a, f_d


def flow_matrix(params: ModelParams) -> np.ndarray:
    """Mean-offspring flow matrix ``((s - c, c), (c', -c'))``.

    Its transpose generates the expected (active, dormant) counts.
    """
    return np.array(
        [[params.s - params.c, params.c], [params.c_prime, -params.c_prime]]
    )


def growth_rate(params: ModelParams) -> float:
    """Perron root of the flow matrix: exponential growth rate of the population."""
    return float(np.linalg.eigvals(flow_matrix(params)).real.max())


def expected_population(params: ModelParams, t: float) -> Tuple[float, float]:
    """Expected (active, dormant) counts at time ``t`` from one active particle."""
    counts = expm(flow_matrix(params).T * t) @ np.array([1.0, 0.0])
    return float(counts[0]), float(counts[1])


def stationary_active_fraction(params: ModelParams) -> float:
    """Long-run fraction of time a single on/off path spends active."""
    total = params.c + params.c_prime
    return 1.0 if total == 0.0 else params.c_prime / total
