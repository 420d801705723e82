"""Independent oracles shared by the test suite.

Everything here deliberately avoids the code paths it checks: measures
are expanded from explicit error-operator coefficient vectors, steady
covariances come from a dense 64-dimensional linear solve, and the
cavity steady state from the closed-form solution of its linear ODE.
"""

import math

import numpy as np

TWO_PI = 2.0 * math.pi

# basis indices: (dq1, dp1, dx1, dy1, dq2, dp2, dx2, dy2)
IQ1, IP1, IQ2, IP2 = 0, 1, 4, 5


def quadratic_form(coeffs, cov):
    """Variance of a linear combination, expanded over all 64 entries."""
    total = 0.0
    for i in range(8):
        for j in range(8):
            total += coeffs[i] * coeffs[j] * cov[i, j]
    return total


def rotated_error_vectors(psi1, psi2):
    """Coefficient vectors of the rotated difference quadratures.

    The position-like and momentum-like error operators after rotating
    subsystem j by angle psi_j, normalized by 1/sqrt(2).
    """
    c_q = np.zeros(8)
    c_p = np.zeros(8)
    root = math.sqrt(2.0)
    c_q[IQ1] = math.cos(psi1) / root
    c_q[IP1] = math.sin(psi1) / root
    c_q[IQ2] = -math.cos(psi2) / root
    c_q[IP2] = -math.sin(psi2) / root
    c_p[IP1] = math.cos(psi1) / root
    c_p[IQ1] = -math.sin(psi1) / root
    c_p[IP2] = -math.cos(psi2) / root
    c_p[IQ2] = math.sin(psi2) / root
    return c_q, c_p


def brute_s_q(cov):
    c_q, c_p = rotated_error_vectors(0.0, 0.0)
    return 1.0 / (quadratic_form(c_q, cov) + quadratic_form(c_p, cov))


def brute_s_phi(cov, phi, psi1=0.0):
    """Phase-shifted measure from rotations (psi1, psi1 + phi)."""
    c_q, c_p = rotated_error_vectors(psi1, psi1 + phi)
    return 1.0 / (quadratic_form(c_q, cov) + quadratic_form(c_p, cov))


def brute_s_p(cov, phi1, phi2):
    _, c_p = rotated_error_vectors(phi1, phi2)
    return 1.0 / (2.0 * quadratic_form(c_p, cov))


def lyapunov_steady_state(m, n):
    """Solve M V + V M^T + N = 0 as a dense 64-dimensional linear system."""
    eye = np.eye(8)
    system = np.kron(m, eye) + np.kron(eye, m)
    return np.linalg.solve(system, -np.asarray(n, dtype=float).reshape(-1)).reshape(8, 8)


def cavity_steady_state(E, kappa, delta):
    """Fixed point of da/dt = -(kappa - i delta) a + E."""
    return E * (kappa + 1j * delta) / (kappa**2 + delta**2)


def random_positive_covariance(rng, scale=1.0):
    """Random symmetric positive-definite 8x8 matrix."""
    a = rng.normal(size=(8, 8))
    return scale * (a @ a.T) + 1e-6 * np.eye(8)


def circular_distance(a, b):
    """Shortest angular distance between two angles."""
    d = (a - b) % TWO_PI
    return min(d, TWO_PI - d)
