"""Coordinate models of rank-one boundaries and their metrics.

Three mutually convertible pictures are implemented:

* unit ball (real of any dimension, or complex of dimension 2) with the
  projective distance  cosh d = |1 - <x,y>| / sqrt((1-<x,x>)(1-<y,y>))
  (the Cayley-hyperbolic correction term R<.,.> is identically zero here);
* Siegel domain with horospherical coordinates (zeta, v, u) and the lift
  psi(zeta,v,u) = ((-|zeta|^2-u+iv)/2, zeta, 1), whose Bergman distance is
  cosh^2(rho/2) = <z,w><w,z> / (<z,z><w,w>);
* Heisenberg group C x R with law (z1,v1)<>(z2,v2) =
  (z1+z2, v1+v2+2 Im(z1 conj(z2))), gauge norm |q| = (|zeta|^4+v^2)^(1/4),
  and the Cygan metric rho0(p,q) = |p^{-1}<>q|.

Boundary lift conventions.  Heisenberg points are lifted by
heisenberg_lift(zeta,v) = (-|zeta|^2+iv, sqrt(2) zeta, 1); with this choice
left translations are the unipotent matrices of su21 and rho0(p,q)^2 =
|<lift p, lift q>| exactly.  The Siegel map psi uses the coordinates above;
the two coordinatizations of the same boundary point differ by the group
dilation (zeta, v) -> (sqrt(2) zeta, 2 v).

Real cross-ratio exponent.  real_crossratio_ball follows the <<.,.>> factors
(<<x,y>> = |1 - <x,y>|) and real_crossratio_heisenberg the squared-Cygan
factors; the two agree with each other and, on the complex hyperbolic
boundary, with |complex cross-ratio|.  For a real ball both equal the square
of the Euclidean/chordal Moebius cross-ratio (the unsquared version is the
one that matches |CR| on the 2- and 3-dimensional real cases).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import INF, Isometry, SU21, herm_product, is_inf
from .errors import DegenerateConfigurationError, DomainError

__all__ = [
    "HeisenbergPoint",
    "SiegelPoint",
    "BallPoint",
    "HEIS_ORIGIN",
    "heisenberg_mul",
    "heisenberg_inv",
    "heisenberg_norm",
    "cygan_distance",
    "heisenberg_lift",
    "lift_to_heisenberg",
    "heisenberg_translation",
    "psi_lift",
    "bergman_distance",
    "bergman_distance_lifts",
    "ball_distance",
    "real_crossratio_ball",
    "real_crossratio_heisenberg",
    "CAYLEY",
    "CAYLEY_INV",
    "ball_lift",
    "ball_point_from_lift",
    "heisenberg_to_ball",
    "ball_to_heisenberg",
    "siegel_coords_of_heisenberg",
    "heisenberg_of_siegel_coords",
    "ball_apply",
]

BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class HeisenbergPoint:
    """Point (zeta, v) of the Heisenberg group; INF is kept as a separate tag."""

    zeta: complex
    v: float

    def __post_init__(self):
        if not (np.isfinite(self.zeta.real) and np.isfinite(self.zeta.imag) and np.isfinite(self.v)):
            raise DomainError("HeisenbergPoint components must be finite")

    def __iter__(self):
        yield self.zeta
        yield self.v


HEIS_ORIGIN = HeisenbergPoint(0j, 0.0)


def _as_heis(p) -> HeisenbergPoint:
    if isinstance(p, HeisenbergPoint):
        return p
    if is_inf(p):
        raise DomainError("operation undefined at the point at infinity")
    zeta, v = p
    return HeisenbergPoint(complex(zeta), float(v))


def heisenberg_mul(p, q) -> HeisenbergPoint:
    p, q = _as_heis(p), _as_heis(q)
    v = p.v + q.v + 2 * (p.zeta * np.conj(q.zeta)).imag
    return HeisenbergPoint(p.zeta + q.zeta, v)


def heisenberg_inv(p) -> HeisenbergPoint:
    p = _as_heis(p)
    return HeisenbergPoint(-p.zeta, -p.v)


def heisenberg_norm(q) -> float:
    q = _as_heis(q)
    return float((abs(q.zeta) ** 4 + q.v**2) ** 0.25)


def cygan_distance(p, q) -> float:
    """rho0(p,q) = |p^{-1} <> q|; a genuine left-invariant metric."""
    p, q = _as_heis(p), _as_heis(q)
    return heisenberg_norm(heisenberg_mul(heisenberg_inv(p), q))


def heisenberg_lift(p) -> np.ndarray:
    """Null lift (-|zeta|^2 + iv, sqrt(2) zeta, 1); INF lifts to (1,0,0)."""
    if is_inf(p):
        return np.array([1, 0, 0], dtype=complex)
    p = _as_heis(p)
    return np.array(
        [-abs(p.zeta) ** 2 + 1j * p.v, math.sqrt(2) * p.zeta, 1.0], dtype=complex
    )


def lift_to_heisenberg(vec, tol: float = 1e-9):
    """Inverse of heisenberg_lift on projective null vectors."""
    v = np.asarray(vec, dtype=complex).reshape(3)
    scale = float(np.max(np.abs(v)))
    if scale == 0:
        raise DomainError("zero vector")
    if abs(v[2]) <= tol * scale:
        return INF
    w = v / v[2]
    zeta = w[1] / math.sqrt(2)
    if abs(w[0].real + abs(zeta) ** 2) > tol * max(1.0, abs(w[0])):
        raise DomainError("vector is not a null lift of a finite boundary point")
    return HeisenbergPoint(complex(zeta), float(w[0].imag))


def heisenberg_translation(p) -> Isometry:
    """Left translation by p as an SU(2,1) matrix (unipotent upper triangular)."""
    p = _as_heis(p)
    z = p.zeta
    return Isometry(
        [
            [1, -math.sqrt(2) * np.conj(z), -abs(z) ** 2 + 1j * p.v],
            [0, 1, math.sqrt(2) * z],
            [0, 0, 1],
        ],
        SU21,
    )


@dataclass(frozen=True)
class SiegelPoint:
    """Horospherical coordinates (zeta, v, u); u = 0 on the boundary."""

    zeta: complex
    v: float
    u: float

    def __post_init__(self):
        if self.u < 0:
            raise DomainError("horospherical height must be nonnegative")

    @property
    def is_boundary(self) -> bool:
        return self.u == 0.0


def psi_lift(p) -> np.ndarray:
    """psi(zeta,v,u) = ((-|zeta|^2-u+iv)/2, zeta, 1); psi(q_inf) = (1,0,0).

    <psi,psi> = -u: negative inside the domain, null exactly on the boundary.
    """
    if is_inf(p):
        return np.array([1, 0, 0], dtype=complex)
    if not isinstance(p, SiegelPoint):
        zeta, v, u = p
        p = SiegelPoint(complex(zeta), float(v), float(u))
    return np.array(
        [(-abs(p.zeta) ** 2 - p.u + 1j * p.v) / 2, p.zeta, 1.0], dtype=complex
    )


def bergman_distance(p: SiegelPoint, q: SiegelPoint) -> float:
    """cosh^2(rho/2) = <z,w><w,z> / (<z,z><w,w>) on interior points."""
    for pt in (p, q):
        if is_inf(pt) or pt.u <= 0:
            raise DomainError("bergman_distance needs interior points (u > 0)")
    return bergman_distance_lifts(psi_lift(p), psi_lift(q))


def bergman_distance_lifts(z, w) -> float:
    """Bergman distance from arbitrary negative lifts (<z,z> < 0)."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    zz = herm_product(z, z).real
    ww = herm_product(w, w).real
    if zz >= 0 or ww >= 0:
        raise DomainError("lifts must be negative vectors (interior points)")
    num = herm_product(z, w) * herm_product(w, z)
    c2 = (num.real) / (zz * ww)
    c2 = max(c2, 1.0)
    return 2.0 * math.acosh(math.sqrt(c2))


def siegel_coords_of_heisenberg(p) -> SiegelPoint:
    """Boundary Siegel coordinates of a Heisenberg point (dilation by sqrt 2)."""
    p = _as_heis(p)
    return SiegelPoint(math.sqrt(2) * p.zeta, 2 * p.v, 0.0)


def heisenberg_of_siegel_coords(p: SiegelPoint) -> HeisenbergPoint:
    if not p.is_boundary:
        raise DomainError("only boundary Siegel points correspond to Heisenberg points")
    return HeisenbergPoint(p.zeta / math.sqrt(2), p.v / 2)


class BallPoint:
    """Point of the unit ball model, real (any dim) or complex (dim 2)."""

    def __init__(self, coordinates):
        x = np.asarray(coordinates)
        if np.iscomplexobj(x):
            x = x.astype(complex)
        else:
            x = x.astype(float)
        n2 = float(np.sum(np.abs(x) ** 2))
        if n2 > 1 + 1e-9:
            raise DomainError(f"ball point has norm^2 = {n2} > 1")
        x.setflags(write=False)
        self.coordinates = x

    @property
    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.coordinates) ** 2))

    @property
    def is_boundary(self) -> bool:
        return abs(self.norm_sq - 1.0) <= BOUNDARY_TOL

    def __repr__(self):
        return f"BallPoint({np.array2string(self.coordinates, precision=6)})"


def _ball_inner(x: BallPoint, y: BallPoint) -> complex:
    return complex(np.sum(x.coordinates * np.conj(y.coordinates)))


def _chordal(x: BallPoint, y: BallPoint) -> float:
    # <<x,y>> = (|1-<x,y>|^2 + 2 R<x,y>)^(1/2) with R = 0 away from the
    # Cayley-hyperbolic case
    return abs(1 - _ball_inner(x, y))


def ball_distance(x: BallPoint, y: BallPoint) -> float:
    """cosh d = <<x,y>> / sqrt((1-<x,x>)(1-<y,y>)) on interior points."""
    if x.is_boundary or y.is_boundary:
        raise DomainError("distance to a boundary point is infinite")
    c = _chordal(x, y) / math.sqrt((1 - x.norm_sq) * (1 - y.norm_sq))
    return math.acosh(max(c, 1.0))


def real_crossratio_ball(x: BallPoint, z: BallPoint, y: BallPoint, w: BallPoint) -> float:
    """[x,z,y,w]_R = <<z,x>> <<w,y>> / (<<w,x>> <<z,y>>) on boundary points."""
    for pt in (x, z, y, w):
        if not pt.is_boundary:
            raise DomainError("real cross-ratio needs boundary points")
    num = _chordal(z, x) * _chordal(w, y)
    den = _chordal(w, x) * _chordal(z, y)
    if den == 0.0:
        raise DegenerateConfigurationError("coincident points", limit="inf")
    if num == 0.0:
        raise DegenerateConfigurationError("coincident points", limit="0")
    return num / den


def _cygan_sq_factor(a, b):
    """rho0(a,b)^2, with None signalling a factor to drop (point at infinity)."""
    if is_inf(a) or is_inf(b):
        return None
    return cygan_distance(a, b) ** 2


def real_crossratio_heisenberg(g1, g3, g2, g4) -> float:
    """[g1,g3,g2,g4]_R = |g3^{-1}g1|^2 |g4^{-1}g2|^2 / (|g4^{-1}g1|^2 |g3^{-1}g2|^2).

    Accepts HeisenbergPoint / (zeta, v) pairs / INF (handled by dropping the
    matched factor pair).  numpy arrays select the degenerate R^n case, where
    the group is abelian, the norm Euclidean, and the same squared pattern
    applies.
    """
    if any(isinstance(g, np.ndarray) for g in (g1, g3, g2, g4) if not is_inf(g)):
        return _real_crossratio_euclidean(g1, g3, g2, g4)
    pairs = [(g1, g3), (g2, g4), (g1, g4), (g2, g3)]
    vals = [_cygan_sq_factor(a, b) for a, b in pairs]
    num = [v for v in vals[:2]]
    den = [v for v in vals[2:]]
    # a point at infinity appears once in the numerator and once in the
    # denominator; both factors drop (the algebraic limit)
    numf = 1.0
    denf = 1.0
    for v in num:
        numf *= 1.0 if v is None else v
    for v in den:
        denf *= 1.0 if v is None else v
    if denf == 0.0:
        raise DegenerateConfigurationError("coincident points", limit="inf")
    if numf == 0.0:
        raise DegenerateConfigurationError("coincident points", limit="0")
    return numf / denf


def _real_crossratio_euclidean(g1, g3, g2, g4) -> float:
    def d2(a, b):
        if is_inf(a) or is_inf(b):
            return None
        return float(np.sum((np.asarray(a, dtype=float) - np.asarray(b, dtype=float)) ** 2))

    vals = [d2(g1, g3), d2(g2, g4), d2(g1, g4), d2(g2, g3)]
    numf = (1.0 if vals[0] is None else vals[0]) * (1.0 if vals[1] is None else vals[1])
    denf = (1.0 if vals[2] is None else vals[2]) * (1.0 if vals[3] is None else vals[3])
    if denf == 0.0:
        raise DegenerateConfigurationError("coincident points", limit="inf")
    if numf == 0.0:
        raise DegenerateConfigurationError("coincident points", limit="0")
    return numf / denf


# Cayley transform between the Siegel (J-form) frame and the complex ball
# frame with Hermitian form diag(1,1,-1): CAYLEY maps J-lifts to ball lifts,
# <C x, C y>_ball = <x, y>_J, det CAYLEY = 1, and (0,...,0,1) <-> q_inf.
_s = 1 / math.sqrt(2)
CAYLEY = np.array([[0, 1, 0], [_s, 0, _s], [_s, 0, -_s]], dtype=complex)
CAYLEY_INV = np.array([[0, _s, _s], [1, 0, 0], [0, _s, -_s]], dtype=complex)


def ball_lift(x: BallPoint) -> np.ndarray:
    """(x1, x2, 1): null for the ball form diag(1,1,-1) iff x is on the boundary."""
    c = x.coordinates.astype(complex)
    if c.shape != (2,):
        raise DomainError("complex hyperbolic ball lifts need 2 coordinates")
    return np.array([c[0], c[1], 1.0], dtype=complex)


def ball_point_from_lift(vec) -> BallPoint:
    v = np.asarray(vec, dtype=complex).reshape(3)
    if abs(v[2]) < 1e-14 * float(np.max(np.abs(v))):
        raise DomainError("lift lies on the hyperplane at infinity of the chart")
    return BallPoint(np.array([v[0] / v[2], v[1] / v[2]]))


def heisenberg_to_ball(p) -> BallPoint:
    return ball_point_from_lift(CAYLEY @ heisenberg_lift(p))


def ball_to_heisenberg(x: BallPoint):
    return lift_to_heisenberg(CAYLEY_INV @ ball_lift(x))


def ball_apply(g: Isometry, x: BallPoint) -> BallPoint:
    """Projective action of an SU(2,1) element (J-frame) on ball points."""
    if g.group != SU21:
        raise DomainError("ball_apply expects an SU21 isometry")
    return ball_point_from_lift(CAYLEY @ (g.entries @ (CAYLEY_INV @ ball_lift(x))))
