"""Cross-ratios on rank-one boundaries, periods, and derived invariants.

The complex cross-ratio of a,b,c,d on the boundary of complex hyperbolic
2-space is [a,b,c,d] = <a,b><c,d> / (<a,d><c,b>) on null lifts; on the
Riemann sphere the same slot pattern reads (a-b)(c-d)/((a-d)(c-b)).  Both
satisfy the eight axioms exercised in tests/test_crossratio.py, the real
cross-ratio of models.py being the modulus of either.

The period of a loxodromic g is log [g^-, g y, g^+, y]; it is independent of
the auxiliary point y, its real part is the translation length, and for
SL(2,C) it equals the complex length.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import algebra, models
from .algebra import INF, Isometry, SL2C, SL2R, SU21, herm_product, is_inf
from .errors import (
    DegenerateConfigurationError,
    DomainError,
    IllConditionedError,
    PreconditionError,
)

__all__ = [
    "BoundaryPoint",
    "PPInvariants",
    "cx_crossratio",
    "sl2_crossratio",
    "period",
    "pp_invariants",
    "holder_check",
    "HolderRecord",
    "normalize_zero_infinity",
]

DEGENERATE_TOL = 1e-14
FIXED_POINT_GUARD = 1e-8


class BoundaryPoint:
    """A point of the boundary of complex hyperbolic 2-space.

    Stored as a projective null lift in the Siegel (J-form) frame; the
    constructors accept Heisenberg coordinates, ball coordinates, or a raw
    lift, and the accessors convert back.
    """

    def __init__(self, lift, check: bool = True):
        v = np.asarray(lift, dtype=complex).reshape(3)
        scale = float(np.max(np.abs(v)))
        if scale == 0:
            raise DomainError("zero vector is not a boundary point")
        v = v / scale
        if check:
            h = herm_product(v, v)
            if abs(h) > 1e-9:
                raise DomainError(f"lift is not null: <z,z> = {h}")
        v.setflags(write=False)
        self.lift = v

    @classmethod
    def from_heisenberg(cls, p) -> "BoundaryPoint":
        return cls(models.heisenberg_lift(p), check=False)

    @classmethod
    def from_ball(cls, x) -> "BoundaryPoint":
        if not isinstance(x, models.BallPoint):
            x = models.BallPoint(x)
        return cls(models.CAYLEY_INV @ models.ball_lift(x))

    @classmethod
    def infinity(cls) -> "BoundaryPoint":
        return cls(np.array([1, 0, 0], dtype=complex), check=False)

    def to_heisenberg(self):
        return models.lift_to_heisenberg(self.lift)

    def to_ball(self) -> models.BallPoint:
        return models.ball_point_from_lift(models.CAYLEY @ self.lift)

    def apply(self, g: Isometry) -> "BoundaryPoint":
        if g.group != SU21:
            raise DomainError("BoundaryPoint.apply expects an SU21 isometry")
        return BoundaryPoint(g.entries @ self.lift, check=False)

    def chordal_gap(self, other: "BoundaryPoint") -> float:
        """|<p,q>| on unit-scaled lifts; zero iff the points coincide."""
        return abs(herm_product(self.lift, other.lift))

    def __repr__(self):
        return f"BoundaryPoint({np.array2string(self.lift, precision=6)})"


def _lift_of(p) -> np.ndarray:
    if isinstance(p, BoundaryPoint):
        return p.lift
    if isinstance(p, models.HeisenbergPoint) or is_inf(p):
        return models.heisenberg_lift(p)
    return np.asarray(p, dtype=complex).reshape(3)


def cx_crossratio(a, b, c, d) -> complex:
    """[a,b,c,d] = <a,b><c,d> / (<a,d><c,b>) on null lifts (scale-free)."""
    la, lb, lc, ld = (_lift_of(p) for p in (a, b, c, d))
    num = herm_product(la, lb) * herm_product(lc, ld)
    den = herm_product(la, ld) * herm_product(lc, lb)
    scale = max(
        float(np.max(np.abs(la))) * float(np.max(np.abs(ld))),
        float(np.max(np.abs(lc))) * float(np.max(np.abs(lb))),
    ) ** 2
    if abs(den) < DEGENERATE_TOL * scale:
        raise DegenerateConfigurationError(
            "cross-ratio denominator vanishes (a=d or c=b)", limit="inf"
        )
    return num / den


def sl2_crossratio(a, b, c, d) -> complex:
    """(a-b)(c-d)/((a-d)(c-b)) on the Riemann sphere, INF by factor-dropping."""

    def diff(u, v):
        if is_inf(u) or is_inf(v):
            return None
        return u - v

    num = [diff(a, b), diff(c, d)]
    den = [diff(a, d), diff(c, b)]
    numf = 1.0 + 0j
    denf = 1.0 + 0j
    for v in num:
        numf *= 1 if v is None else v
    for v in den:
        denf *= 1 if v is None else v
    if abs(denf) < DEGENERATE_TOL:
        raise DegenerateConfigurationError("a = d or c = b", limit="inf")
    return numf / denf


def _su21_fixed_boundary_points(g: Isometry):
    ed = algebra.su21_eigendata(g)
    return BoundaryPoint(ed.attracting, check=False), BoundaryPoint(ed.repelling, check=False)


def period(g: Isometry, y=None) -> complex:
    """log [g^-, g y, g^+, y] with the principal branch.

    Raises IllConditionedError if y is within 1e-8 (chordal/Cygan scale) of a
    fixed point.  When y is omitted a generic auxiliary point is chosen.
    """
    if g.group in (SL2R, SL2C):
        att, rep = algebra.sl2_fixed_points(g)
        if y is None:
            y = _generic_sphere_point((att, rep))
        for fp in (att, rep):
            if _sphere_gap(y, fp) < FIXED_POINT_GUARD:
                raise IllConditionedError("auxiliary point too close to a fixed point")
        gy = algebra.mobius_apply(g, y)
        value = sl2_crossratio(rep, gy, att, y)
    elif g.group == SU21:
        att, rep = _su21_fixed_boundary_points(g)
        if y is None:
            y = _generic_boundary_point((att, rep))
        elif not isinstance(y, BoundaryPoint):
            y = BoundaryPoint.from_heisenberg(y) if not is_inf(y) else BoundaryPoint.infinity()
        for fp in (att, rep):
            if y.chordal_gap(fp) < FIXED_POINT_GUARD:
                raise IllConditionedError("auxiliary point too close to a fixed point")
        value = cx_crossratio(rep, y.apply(g), att, y)
    else:
        raise DomainError(f"unsupported group {g.group}")
    out = cmath.log(value)
    # principal branch sanity: the real part must match the modulus route
    assert abs(out.real - math.log(abs(value))) < 1e-9
    return out


def _sphere_gap(a, b) -> float:
    """Chordal distance on the Riemann sphere (bounded, INF-aware)."""
    if is_inf(a) and is_inf(b):
        return 0.0
    if is_inf(a) or is_inf(b):
        z = b if is_inf(a) else a
        return 2.0 / math.sqrt(1.0 + abs(z) ** 2)
    return 2.0 * abs(a - b) / math.sqrt((1 + abs(a) ** 2) * (1 + abs(b) ** 2))


def _generic_sphere_point(avoid):
    for cand in (1.0, 2.0, 1j, 0.5 + 0.25j, -3.0):
        if all(_sphere_gap(cand, fp) > 10 * FIXED_POINT_GUARD for fp in avoid):
            return cand
    raise IllConditionedError("could not find a generic auxiliary point")


def _generic_boundary_point(avoid):
    for zeta, v in ((1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (-0.5, 2.0), (2.0, -1.0)):
        cand = BoundaryPoint.from_heisenberg(models.HeisenbergPoint(complex(zeta), v))
        if all(cand.chordal_gap(fp) > 10 * FIXED_POINT_GUARD for fp in avoid):
            return cand
    raise IllConditionedError("could not find a generic auxiliary point")


@dataclass(frozen=True)
class PPInvariants:
    """The three cross-ratios X1, X2, X3 of an ordered boundary quadruple."""

    X1: complex
    X2: complex
    X3: complex

    def identity_residuals(self) -> tuple[float, float]:
        """Residuals of |X2|^2 = |X1||X3| and
        2|X1|^2 Re X3 = |X1|^2 + |X2|^2 + 1 - 2 Re(X1 + X2)."""
        r1 = abs(abs(self.X2) ** 2 - abs(self.X1) * abs(self.X3))
        lhs = 2 * abs(self.X1) ** 2 * self.X3.real
        rhs = abs(self.X1) ** 2 + abs(self.X2) ** 2 + 1 - 2 * (self.X1 + self.X2).real
        return r1, abs(lhs - rhs)


def pp_invariants(z1, z2, z3, z4) -> PPInvariants:
    """(X1, X2, X3) = ([z4,z2,z3,z1], [z4,z3,z2,z1], [z4,z3,z1,z2])."""
    try:
        X1 = cx_crossratio(z4, z2, z3, z1)
        X2 = cx_crossratio(z4, z3, z2, z1)
        X3 = cx_crossratio(z4, z3, z1, z2)
    except DegenerateConfigurationError as exc:
        raise DegenerateConfigurationError(f"degenerate quadruple: {exc}") from exc
    return PPInvariants(X1, X2, X3)


def normalize_zero_infinity(x: BoundaryPoint, z: BoundaryPoint) -> Isometry:
    """An SU(2,1) move g with g(x) = Heisenberg origin and g(z) = q_inf.

    Uses the 2-transitivity of the action: the columns of g^{-1} are the
    lifts of z and x scaled into a J-frame, completed by a positive vector.
    """
    zl = z.lift.copy()
    xl = x.lift.copy()
    pairing = herm_product(zl, xl)
    if abs(pairing) < 1e-12:
        raise PreconditionError("x and z must be distinct boundary points")
    # columns (c1, c2, c3) with <c1,c1>=<c3,c3>=0, <c2,c2>=1, <c1,c3>=1
    c1 = zl
    c3 = xl / np.conj(pairing)
    # J-orthogonal complement of span(c1, c3)
    A = np.vstack([(algebra.J @ c1).conj(), (algebra.J @ c3).conj()])
    _, _, Vh = np.linalg.svd(A)
    c2 = Vh[-1].conj()
    h = herm_product(c2, c2).real
    if h <= 0:
        raise PreconditionError("degenerate frame")
    c2 = c2 / math.sqrt(h)
    Q = np.column_stack([c1, c2, c3])
    det = np.linalg.det(Q)
    Q = Q * det ** (-1.0 / 3.0)
    return Isometry(Q, SU21).inv()


@dataclass(frozen=True)
class HolderRecord:
    """Result of a Hoelder-inequality check on one configuration."""

    lhs: float
    rhs: float
    constants: dict = field(repr=False)
    move: Isometry = field(repr=False)

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + 1e-12


def holder_check(x, z, t, y1, y2, band=(0.05, None)) -> HolderRecord:
    """Check |[x,y1,z,t] - [x,y2,z,t]| <= C rho0(y1, y2).

    The configuration is normalized so x = 0 and z = infinity; in that frame
    K = |<x,t>| and the y_i must satisfy a < sqrt(r_i^4 + v_i^2) < b.  The
    binding constant is C = ((sqrt(8) b + 2 b + 4 b^2)/K)^(1/2); the record
    also carries the unsquared variant for reference.
    """
    pts = [p if isinstance(p, BoundaryPoint) else BoundaryPoint.from_heisenberg(p)
           for p in (x, z, t, y1, y2)]
    x, z, t, y1, y2 = pts
    g = normalize_zero_infinity(x, z)
    tn, y1n, y2n = (p.apply(g).to_heisenberg() for p in (t, y1, y2))
    if is_inf(tn) or is_inf(y1n) or is_inf(y2n):
        raise PreconditionError("t, y1, y2 must stay finite in the normalized frame")
    a_lo, b_hi = band
    gauges = [math.sqrt(abs(p.zeta) ** 4 + p.v**2) for p in (y1n, y2n)]
    if b_hi is None:
        b_hi = 1.0001 * max(gauges)
    if not all(a_lo < gsq < b_hi for gsq in gauges):
        raise PreconditionError(
            f"separation band violated: gauges {gauges} outside ({a_lo}, {b_hi})"
        )
    K = math.sqrt(abs(tn.zeta) ** 4 + tn.v**2)
    if K < 1e-12:
        raise PreconditionError("t coincides with x in the normalized frame")
    lhs = abs(cx_crossratio(x, y1, z, t) - cx_crossratio(x, y2, z, t))
    rho = models.cygan_distance(y1n, y2n)
    c_binding = math.sqrt((math.sqrt(8.0) * b_hi + 2 * b_hi + 4 * b_hi**2) / K)
    c_displayed = (math.sqrt(8.0) * b_hi + 2 * b_hi + 4 * b_hi**2) / K
    rhs = c_binding * rho
    constants = {
        "K": K,
        "a": a_lo,
        "b": b_hi,
        "C_binding": c_binding,
        "C_displayed": c_displayed,
        "rho0": rho,
    }
    return HolderRecord(lhs=lhs, rhs=rhs, constants=constants, move=g)
