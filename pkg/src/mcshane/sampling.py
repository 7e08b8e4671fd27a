"""Seeded random generators for the property suites.

Everything takes an explicit numpy Generator so sample sets are reproducible
from a seed; the property suites (CLI `props` and the tests) fix their seeds
in one place.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy.linalg import expm

from . import algebra, models
from .algebra import Isometry, J, SL2C, SL2R, SU21
from .crossratio import BoundaryPoint

__all__ = [
    "rng_for",
    "random_heisenberg_point",
    "random_boundary_point",
    "random_su21",
    "random_su21_loxodromic",
    "random_strip_parameter",
    "random_sl2c",
    "random_sl2c_loxodromic",
    "random_sl2r_loxodromic",
    "random_parabolic_sl2",
    "random_disk_mobius",
    "separated_quadruple",
]


def rng_for(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_heisenberg_point(rng, scale: float = 2.0) -> models.HeisenbergPoint:
    zeta = complex(rng.normal(0, scale), rng.normal(0, scale))
    v = float(rng.normal(0, scale * scale))
    return models.HeisenbergPoint(zeta, v)


def random_boundary_point(rng, scale: float = 2.0) -> BoundaryPoint:
    return BoundaryPoint.from_heisenberg(random_heisenberg_point(rng, scale))


def random_su21(rng, scale: float = 0.4) -> Isometry:
    """exp of a random su(2,1) element: X* J + J X = 0, tr X = 0."""
    Y = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    X = Y - J @ Y.conj().T @ J
    X = X - np.trace(X) / 3 * np.eye(3)
    return Isometry(expm(scale * X), SU21)


def random_strip_parameter(rng, re_range=(0.2, 1.5), margin: float = 1e-3) -> complex:
    re = rng.uniform(*re_range)
    im = rng.uniform(-math.pi + margin, math.pi - margin)
    return complex(re, im)


def random_su21_loxodromic(rng, re_range=(0.2, 1.5)):
    """(M, lam, Q) with M = Q E(lam) Q^{-1}."""
    lam = random_strip_parameter(rng, re_range)
    Q = random_su21(rng)
    M = Q @ algebra.E_matrix(lam) @ Q.inv()
    return M, lam, Q


def random_sl2c(rng, scale: float = 0.8) -> Isometry:
    X = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    X = X - np.trace(X) / 2 * np.eye(2)
    return Isometry(expm(scale * X), SL2C)


def random_sl2c_loxodromic(rng) -> Isometry:
    ell = complex(rng.uniform(0.3, 2.5), rng.uniform(-2.8, 2.8))
    D = Isometry(np.diag([cmath.exp(ell / 2), cmath.exp(-ell / 2)]), SL2C)
    g = random_sl2c(rng)
    return g @ D @ g.inv()


def random_sl2r_loxodromic(rng) -> Isometry:
    ell = rng.uniform(0.3, 3.0)
    D = Isometry(np.diag([math.exp(ell / 2), math.exp(-ell / 2)]), SL2R)
    X = rng.normal(size=(2, 2))
    X = X - np.trace(X) / 2 * np.eye(2)
    g = Isometry(expm(0.7 * X), SL2R)
    return g @ D @ g.inv()


def random_parabolic_sl2(rng, group: str = SL2C) -> Isometry:
    if group == SL2R:
        tau = float(rng.uniform(0.5, 3.0)) * (1 if rng.random() < 0.5 else -1)
        P = Isometry([[1, tau], [0, 1]], SL2R)
        X = rng.normal(size=(2, 2))
        X = X - np.trace(X) / 2 * np.eye(2)
        g = Isometry(expm(0.6 * X), SL2R)
    else:
        tau = complex(rng.normal(0, 1.5), rng.normal(0, 1.5))
        if abs(tau) < 0.3:
            tau += 1.0
        P = Isometry([[1, tau], [0, 1]], SL2C)
        g = random_sl2c(rng)
    return g @ P @ g.inv()


def random_disk_mobius(rng) -> Isometry:
    """Isometry of the Poincare disk: z -> e^{i phi} (z + a)/(1 + conj(a) z)."""
    phi = rng.uniform(0, 2 * math.pi)
    r = rng.uniform(0, 0.8)
    theta = rng.uniform(0, 2 * math.pi)
    a = r * cmath.exp(1j * theta)
    M = np.array([[cmath.exp(1j * phi / 2), cmath.exp(1j * phi / 2) * a],
                  [cmath.exp(-1j * phi / 2) * a.conjugate(), cmath.exp(-1j * phi / 2)]],
                 dtype=complex)
    M = M / cmath.sqrt(np.linalg.det(M))
    return Isometry(M, SL2C)


def separated_quadruple(rng, min_gap: float = 0.3, scale: float = 2.0):
    """Four pairwise Cygan-separated boundary points of CH^2."""
    for _ in range(1000):
        pts = [random_heisenberg_point(rng, scale) for _ in range(4)]
        ok = True
        for i in range(4):
            for j in range(i + 1, 4):
                if models.cygan_distance(pts[i], pts[j]) < min_gap:
                    ok = False
        if ok:
            return [BoundaryPoint.from_heisenberg(p) for p in pts]
    raise RuntimeError("sampling failed to separate points")
