"""Shared scenario builders and independent oracles for the test suite."""

from __future__ import annotations

import math

import numpy as np

from jointweak.hilbert import Ket, Operator, ket, sigma_x, sigma_z
from jointweak.weakvalue import weak_value_set


def random_state(rng: np.random.Generator, dim: int, real: bool = False) -> Ket:
    v = rng.normal(size=dim)
    if not real:
        v = v + 1j * rng.normal(size=dim)
    return ket(v / np.linalg.norm(v), normalized=True)


def random_local_unitary(rng: np.random.Generator) -> np.ndarray:
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(m)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def commuting_pair(rng: np.random.Generator | None, kind: str):
    """Commuting 4-dim pair; a random local rotation when rng is given."""
    if kind == "involutory":
        a0 = np.kron(sigma_x().entries, np.eye(2))
        b0 = np.kron(np.eye(2), sigma_z().entries)
    else:
        p = np.array([[1, 0], [0, 0]], dtype=complex)
        a0 = np.kron(p, np.eye(2))
        b0 = np.kron(np.eye(2), p)
    if rng is None:
        return Operator(a0), Operator(b0)
    u = np.kron(random_local_unitary(rng), random_local_unitary(rng))
    return Operator(u @ a0 @ u.conj().T), Operator(u @ b0 @ u.conj().T)


def random_scenario(rng: np.random.Generator, kind: str, min_overlap: float = 0.1):
    """(pre, post, a, b, weak values) with a comfortably non-orthogonal pair."""
    a, b = commuting_pair(rng, kind)
    while True:
        pre = random_state(rng, 4)
        post = random_state(rng, 4)
        if abs(post.overlap(pre)) >= min_overlap:
            return pre, post, a, b, weak_value_set(pre, post, a, b)


def theta_scenario(theta: float = math.pi / 6):
    """Pre |+z,+z>, post realizing a_w = i tan(theta), b_w = 1."""
    from jointweak.hilbert import identity, tensor

    pre = ket([1, 0, 0, 0], normalized=True)
    post = ket([math.cos(theta), 0, -1j * math.sin(theta), 0], normalized=True)
    a = tensor(sigma_x(), identity(2))
    b = tensor(identity(2), sigma_z())
    return pre, post, a, b


# --------------------------------------------------------------------------
# quadrature oracle for the 1-D Gaussian kernel table
# --------------------------------------------------------------------------

def gauss_1d(x: np.ndarray, center: float, sigma: float) -> np.ndarray:
    return (2 * np.pi * sigma**2) ** -0.25 * np.exp(
        -((x - center) ** 2) / (4 * sigma**2)
    )


def quad_kernel(kind: str, a: float, b: float, sigma: float, npts: int = 100_000):
    """Numerically integrate <G_a| op |G_b> on [-40 sigma, 40 sigma].

    Derivatives of G_b are applied analytically to the Gaussian form, so
    the oracle never touches the closed kernel formulas it validates.
    """
    lim = 40 * sigma
    x = np.linspace(-lim, lim, npts)
    ga = gauss_1d(x, a, sigma)
    gb = gauss_1d(x, b, sigma)
    s2 = sigma**2
    if kind == "1":
        integrand = ga * gb
    elif kind == "X":
        integrand = ga * x * gb
    elif kind == "X2":
        integrand = ga * x**2 * gb
    elif kind == "P":
        # P G_b = -i d/dx G_b = i (x - b) / (2 s^2) G_b
        integrand = ga * (1j * (x - b) / (2 * s2)) * gb
    elif kind == "P2":
        # P^2 G_b = -G_b'' = (1/(2 s^2) - (x-b)^2/(4 s^4)) G_b
        integrand = ga * (1 / (2 * s2) - (x - b) ** 2 / (4 * s2**2)) * gb
    else:
        raise ValueError(kind)
    return np.trapezoid(integrand, x)
