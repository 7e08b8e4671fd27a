"""Pair-of-pants data and the four gap functions, by two independent routes.

A pants triple is (alpha, gamma, beta) with alpha*gamma*beta = 1, first
boundary alpha.  Gap functions:

* boundary alpha (loxodromic):   G  = log [a+, g-, a-, b+]
                                 Gr = log [a+, b+, a-, b-]
* cusp alpha (parabolic):        W  = W_alpha(g-, b+)
                                 Wr = W_alpha(b+, b-)

where W_alpha(s,t) is the derivative-ratio cocycle, computed here in a
normalized chart (alpha fixing infinity) where it collapses to a ratio of
differences: (t - s) / (alpha(s0) - s0) on the sphere, and the same with
vertical-axis coordinates on the Heisenberg chain.

Closed forms: W = 1/(1 + e^((l(beta)+l(gamma))/2)) and
Wr = sinh(l(beta)/2) / (cosh(l(gamma)/2) + cosh(l(beta)/2)).  The half-length
exponentials are taken on the trace-consistent branch: with m(.) the
attracting matrix eigenvalue, W = 1/(1 - m(gamma) m(beta)) holds for any
triple with alpha*gamma*beta = 1 and unipotent-normalized alpha (one cuff
trace then carries the parity minus sign), and stays valid by continuity off
the Fuchsian locus.  The SU(2,1) closed forms for G and Gr are in terms of
the strip parameters (lam, mu, nu) and the cross-ratio invariants X1, X2, X3
of the (alpha, gamma) fixed-point quadruple, with sigma(x) = e^x - e^(x̄-x).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import algebra, crossratio, models
from .algebra import INF, Isometry, SL2C, SL2R, SU21, is_inf
from .crossratio import BoundaryPoint, PPInvariants, cx_crossratio, sl2_crossratio
from .errors import (
    ClassificationError,
    DegenerateConfigurationError,
    DomainError,
    PreconditionError,
)

__all__ = [
    "PantsTriple",
    "GapValue",
    "CuspConfig",
    "gap_G",
    "gap_Gr",
    "w_alpha",
    "w_alpha_fd",
    "gap_W",
    "gap_Wr",
    "closed_W_sl2",
    "closed_Wr_sl2",
    "pants_closed_W",
    "pants_closed_Wr",
    "shear_coords",
    "sigma",
    "su21_gap_G",
    "su21_gap_Gr",
    "su21_closed_gaps",
    "su21_cusp_config",
    "su21_cusp_data",
    "axis_coordinate",
]

RELATION_TOL = 1e-10
SEPARATION_TOL = 1e-8
COINCIDENCE_FLOOR = 1e-14

INTERIOR = "interior"
BOUNDARY = "boundary"
HYPERBOLIC = "hyperbolic"
CUSP = "cusp"


class PantsTriple:
    """Ordered (alpha, gamma, beta) with alpha*gamma*beta = 1."""

    def __init__(self, alpha: Isometry, gamma: Isometry, beta: Isometry,
                 kind: str = INTERIOR, label: str = ""):
        n = alpha.entries.shape[0]
        resid = np.max(np.abs(alpha.entries @ gamma.entries @ beta.entries - np.eye(n)))
        # absolute 1e-10 for order-one matrices; relative for the huge deep-
        # slope words, whose products cannot cancel below eps * scale^2
        scale = max(
            1.0,
            float(np.max(np.abs(gamma.entries))) * float(np.max(np.abs(beta.entries))),
        )
        if resid > RELATION_TOL * scale:
            raise PreconditionError(f"alpha*gamma*beta != 1 (residual {resid})")
        if kind not in (INTERIOR, BOUNDARY):
            raise PreconditionError(f"unknown pants kind {kind!r}")
        self.alpha = alpha
        self.gamma = gamma
        self.beta = beta
        self.kind = kind
        self.label = label

    @classmethod
    def from_alpha_beta(cls, alpha: Isometry, beta: Isometry, **kw) -> "PantsTriple":
        return cls(alpha, alpha.inv() @ beta.inv(), beta, **kw)

    @property
    def group(self) -> str:
        return self.alpha.group

    @cached_property
    def alpha_kind(self) -> str:
        return CUSP if self.alpha.classify() == algebra.PARABOLIC else HYPERBOLIC

    # fixed-point caches; sphere points for 2x2 groups, BoundaryPoints for SU21
    @cached_property
    def alpha_fixed(self):
        return self._fixed(self.alpha)

    @cached_property
    def beta_fixed(self):
        return self._fixed(self.beta)

    @cached_property
    def gamma_fixed(self):
        return self._fixed(self.gamma)

    def _fixed(self, g: Isometry):
        if g.group == SU21:
            ed = algebra.su21_eigendata(g)
            return (BoundaryPoint(ed.attracting, check=False),
                    BoundaryPoint(ed.repelling, check=False))
        return algebra.sl2_fixed_points(g)

    def check_separation(self) -> float:
        """Minimal pairwise gap of the six fixed points (alpha hyperbolic)."""
        pts = [*self.alpha_fixed, *self.beta_fixed, *self.gamma_fixed]
        gaps = []
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if self.group == SU21:
                    gaps.append(pts[i].chordal_gap(pts[j]))
                else:
                    gaps.append(crossratio._sphere_gap(pts[i], pts[j]))
        return min(gaps)

    def __repr__(self):
        return f"PantsTriple({self.group}, {self.alpha_kind}, label={self.label!r})"


@dataclass(frozen=True)
class GapValue:
    value: complex
    route: str
    pants_id: str = ""
    tag: str | None = None

    @property
    def applicable(self) -> bool:
        return self.tag is None


def _log_crossratio_of_fixed_points(P: PantsTriple, second, fourth) -> complex:
    if P.group == SU21:
        return cmath.log(cx_crossratio(P.alpha_fixed[0], second, P.alpha_fixed[1], fourth))
    return cmath.log(sl2_crossratio(P.alpha_fixed[0], second, P.alpha_fixed[1], fourth))


def gap_G(P: PantsTriple) -> GapValue:
    """G(P) = log [alpha+, gamma-, alpha-, beta+].

    Deep pants have genuinely tiny gaps (the endpoints beta+ and gamma-
    converge), so only numerically meaningless coincidence (below the double
    precision floor) is rejected here; check_separation() stays available
    for the 1e-8 sanity check on explicitly constructed pants.
    """
    if P.alpha_kind == CUSP:
        # alpha+ = alpha- collapses the cross-ratio; the gap is measured by W
        return GapValue(0j, route="definitional", pants_id=P.label, tag="cusp-degenerate")
    if P.check_separation() <= COINCIDENCE_FLOOR:
        raise DegenerateConfigurationError("fixed points coincide at working precision")
    val = _log_crossratio_of_fixed_points(P, P.gamma_fixed[1], P.beta_fixed[0])
    return GapValue(val, route="definitional", pants_id=P.label)


def gap_Gr(P: PantsTriple) -> GapValue:
    """Gr(P) = log [alpha+, beta+, alpha-, beta-] (beta also a boundary)."""
    if P.alpha_kind == CUSP:
        return GapValue(0j, route="definitional", pants_id=P.label, tag="cusp-degenerate")
    if P.kind != BOUNDARY:
        return GapValue(0j, route="definitional", pants_id=P.label, tag="not-applicable")
    val = _log_crossratio_of_fixed_points(P, P.beta_fixed[0], P.beta_fixed[1])
    return GapValue(val, route="definitional", pants_id=P.label)


# ---------------------------------------------------------------------------
# cusp gap machinery


def _sl2_parabolic_chart(alpha: Isometry):
    """Moebius chart g with g(alpha^+) = INF, plus the translation amount."""
    fp = algebra.parabolic_fixed_point(alpha)
    if is_inf(fp):
        chart = Isometry(np.eye(2), alpha.group if alpha.group != SL2R else SL2R)
    else:
        chart = Isometry([[0, 1], [-1, fp]], SL2C)
    conj = chart @ alpha @ chart.inv()
    tau = algebra.mobius_apply(conj, 0.0) - 0.0
    if tau == 0 or is_inf(tau):
        raise ClassificationError("alpha does not translate the chart")
    return chart, conj, tau


def axis_coordinate(p, tol: float = 1e-8) -> float:
    """Coordinate x of a vertical-axis boundary point with lift (ix, 0, 1)."""
    lift = p.lift if isinstance(p, BoundaryPoint) else np.asarray(p, dtype=complex)
    scale = float(np.max(np.abs(lift)))
    if abs(lift[2]) < 1e-12 * scale:
        raise DomainError("point at infinity has no axis coordinate")
    w = lift / lift[2]
    if abs(w[1]) > tol * max(1.0, abs(w[0])) or abs(w[0].real) > tol * max(1.0, abs(w[0])):
        raise DomainError(f"not a vertical-axis point: normalized lift {w}")
    return float(w[0].imag)


def _su21_vertical_translation_amount(alpha: Isometry) -> float:
    """Translation of the vertical axis by a parabolic fixing q_inf."""
    e1 = alpha.entries @ np.array([1, 0, 0], dtype=complex)
    if abs(e1[1]) > 1e-10 or abs(e1[2]) > 1e-10:
        raise PreconditionError("alpha must fix the point at infinity")
    origin = np.array([0, 0, 1], dtype=complex)
    img = alpha.entries @ origin
    return axis_coordinate(img) - 0.0


def w_alpha(alpha: Isometry, s, t, s0=None) -> complex:
    """W_alpha(s,t): derivative ratio of log cross-ratios at y = alpha^+.

    In the chart with alpha^+ at infinity this is
    (chart(t) - chart(s)) / (alpha(s0) - s0); the result is independent of s0
    (properties (a),(b),(c) are exercised in the test suite).  For SU(2,1)
    the supported data are vertical-axis points of a parabolic vertical
    translation, where the same ratio is taken on axis coordinates.
    """
    if alpha.classify() != algebra.PARABOLIC:
        raise ClassificationError("w_alpha needs a parabolic alpha")
    if alpha.group in (SL2R, SL2C):
        chart, conj, tau = _sl2_parabolic_chart(alpha)
        gs = algebra.mobius_apply(chart, s)
        gt = algebra.mobius_apply(chart, t)
        if is_inf(gs) or is_inf(gt):
            raise DomainError("s and t must differ from the fixed point of alpha")
        if s0 is not None:
            w = algebra.mobius_apply(chart, s0)
            tau = algebra.mobius_apply(conj, w) - w
        return (gt - gs) / tau
    if alpha.group == SU21:
        tau = _su21_vertical_translation_amount(alpha)
        xs = axis_coordinate(s if isinstance(s, BoundaryPoint) else BoundaryPoint.from_heisenberg(s))
        xt = axis_coordinate(t if isinstance(t, BoundaryPoint) else BoundaryPoint.from_heisenberg(t))
        if s0 is not None:
            x0 = axis_coordinate(s0 if isinstance(s0, BoundaryPoint) else BoundaryPoint.from_heisenberg(s0))
            p0 = BoundaryPoint(np.array([1j * x0, 0, 1], dtype=complex), check=False)
            tau = axis_coordinate(p0.apply(alpha)) - x0
        return complex((xt - xs) / tau)
    raise DomainError(f"unsupported group {alpha.group}")


def w_alpha_fd(alpha: Isometry, s, t, s0, h: float = 1e-4) -> complex:
    """Finite-difference route to W_alpha with one Richardson level.

    Approaches y -> alpha^+ along a canonical path and differentiates the two
    log cross-ratios numerically; serves as a cross-check of w_alpha.
    """

    def ratio(step):
        if alpha.group in (SL2R, SL2C):
            chart, conj, _ = _sl2_parabolic_chart(alpha)
            gs, gt = algebra.mobius_apply(chart, s), algebra.mobius_apply(chart, t)
            g0 = algebra.mobius_apply(chart, s0)
            g1 = algebra.mobius_apply(conj, g0)
            y = 1.0 / step

            def logcr(u, v):
                return cmath.log((y - v) / (y - u))

            return logcr(gs, gt) / logcr(g0, g1)
        xs = axis_coordinate(s if isinstance(s, BoundaryPoint) else BoundaryPoint.from_heisenberg(s))
        xt = axis_coordinate(t if isinstance(t, BoundaryPoint) else BoundaryPoint.from_heisenberg(t))
        x0 = axis_coordinate(s0 if isinstance(s0, BoundaryPoint) else BoundaryPoint.from_heisenberg(s0))
        p0 = BoundaryPoint(np.array([1j * x0, 0, 1], dtype=complex), check=False)
        x1 = axis_coordinate(p0.apply(alpha))
        y = BoundaryPoint(np.array([1j / step, 0, 1], dtype=complex), check=False)
        num = cmath.log(cx_crossratio(BoundaryPoint.infinity(), _axis_pt(xs), y, _axis_pt(xt)))
        den = cmath.log(cx_crossratio(BoundaryPoint.infinity(), _axis_pt(x0), y, _axis_pt(x1)))
        return num / den

    r1 = ratio(h)
    r2 = ratio(h / 2)
    return 2 * r2 - r1


def _axis_pt(x: float) -> BoundaryPoint:
    return BoundaryPoint(np.array([1j * x, 0, 1], dtype=complex), check=False)


def gap_W(P: PantsTriple) -> GapValue:
    """W(P) = W_alpha(gamma^-, beta^+) for a cusp first boundary."""
    if P.alpha_kind != CUSP:
        raise ClassificationError("gap_W needs a cusp alpha")
    val = w_alpha(P.alpha, P.gamma_fixed[1], P.beta_fixed[0])
    return GapValue(val, route="definitional", pants_id=P.label)


def gap_Wr(P: PantsTriple) -> GapValue:
    """Wr(P) = W_alpha(beta^+, beta^-) when beta is peripheral."""
    if P.alpha_kind != CUSP:
        raise ClassificationError("gap_Wr needs a cusp alpha")
    if P.kind != BOUNDARY:
        return GapValue(0j, route="definitional", pants_id=P.label, tag="not-applicable")
    val = w_alpha(P.alpha, P.beta_fixed[0], P.beta_fixed[1])
    return GapValue(val, route="definitional", pants_id=P.label)


# ---------------------------------------------------------------------------
# closed forms


def closed_W_sl2(lb: complex, lg: complex) -> complex:
    """W = 1/(1 + e^((lb+lg)/2)) on given complex lengths (principal exp)."""
    return 1.0 / (1.0 + cmath.exp((lb + lg) / 2))


def closed_Wr_sl2(lb: complex, lg: complex) -> complex:
    """Wr = sinh(lb/2) / (cosh(lg/2) + cosh(lb/2))."""
    return cmath.sinh(lb / 2) / (cmath.cosh(lg / 2) + cmath.cosh(lb / 2))


def _multipliers(P: PantsTriple):
    if P.group == SU21:
        mg = cmath.exp(algebra.su21_eigendata(P.gamma).lam)
        mb = cmath.exp(algebra.su21_eigendata(P.beta).lam)
    else:
        mg = algebra.sl2_multiplier(P.gamma)
        mb = algebra.sl2_multiplier(P.beta)
    return mg, mb


def pants_closed_W(P: PantsTriple) -> GapValue:
    """Closed-form W via attracting multipliers: 1/(1 - m(gamma) m(beta)).

    Requires the triple normalized so alpha is the honest unipotent (the
    parity is then carried by the cuff multipliers; for real traces the
    product m(gamma) m(beta) comes out negative and the value matches
    1/(1 + e^((l(beta)+l(gamma))/2)) with positive lengths).
    """
    if P.alpha_kind != CUSP:
        raise ClassificationError("pants_closed_W needs a cusp alpha")
    _check_unipotent_alpha(P)
    mg, mb = _multipliers(P)
    return GapValue(1.0 / (1.0 - mg * mb), route="closed-form", pants_id=P.label)


def pants_closed_Wr(P: PantsTriple) -> GapValue:
    """Closed-form Wr via multipliers: (m(beta) - 1/m(beta)) / (tr beta - tr gamma)."""
    if P.alpha_kind != CUSP:
        raise ClassificationError("pants_closed_Wr needs a cusp alpha")
    if P.kind != BOUNDARY:
        return GapValue(0j, route="closed-form", pants_id=P.label, tag="not-applicable")
    _check_unipotent_alpha(P)
    mg, mb = _multipliers(P)
    if P.group == SU21:
        nu = algebra.su21_eigendata(P.beta).lam
        mu = algebra.su21_eigendata(P.gamma).lam
        num = cmath.exp(nu) - cmath.exp(-nu.conjugate())
        den = (cmath.exp(nu) + cmath.exp(-nu.conjugate())
               - cmath.exp(mu.conjugate()) - cmath.exp(-mu))
    else:
        num = mb - 1.0 / mb
        den = P.beta.trace - P.gamma.trace
    return GapValue(num / den, route="closed-form", pants_id=P.label)


def _check_unipotent_alpha(P: PantsTriple):
    if P.group == SU21:
        # vertical translation form is checked by the translation extractor
        _su21_vertical_translation_amount(P.alpha)
        return
    if abs(P.alpha.trace - 2) > 1e-8:
        raise PreconditionError(
            f"alpha must be sign-normalized unipotent (trace {P.alpha.trace})"
        )


def shear_coords(P: PantsTriple):
    """Shear coordinates (A, B, C) of an SL(2,C) pants.

    A = -[g-, a+, b+, beta(a+)], B = -[a+, b+, g-, alpha^{-1}(b+)],
    C = -[b+, g-, a+, beta^{-1}(g-)].
    """
    if P.group not in (SL2R, SL2C):
        raise DomainError("shear_coords is an SL(2,C) operation")
    if P.check_separation() <= SEPARATION_TOL:
        raise DegenerateConfigurationError("fixed points insufficiently separated")
    ap = P.alpha_fixed[0]
    bp = P.beta_fixed[0]
    gm = P.gamma_fixed[1]
    A = -sl2_crossratio(gm, ap, bp, algebra.mobius_apply(P.beta, ap))
    B = -sl2_crossratio(ap, bp, gm, algebra.mobius_apply(P.alpha.inv(), bp))
    C = -sl2_crossratio(bp, gm, ap, algebra.mobius_apply(P.beta.inv(), gm))
    return A, B, C


# ---------------------------------------------------------------------------
# SU(2,1) closed forms in strip parameters and cross-ratio invariants


def sigma(x: complex) -> complex:
    """sigma(x) = e^x - e^(conj(x) - x); satisfies sigma(-x) = -e^(-conj(x)) sigma(x)."""
    x = complex(x)
    return cmath.exp(x) - cmath.exp(x.conjugate() - x)


def _su21_G_numerator(lam, mu, nu, pp: PPInvariants) -> complex:
    lb, mb, nb = lam.conjugate(), mu.conjugate(), nu.conjugate()
    X1, X2c = pp.X1, pp.X2.conjugate()
    return (
        cmath.exp(-lb) * (cmath.exp(mb - mu) + X1 * sigma(-mb) + X2c * sigma(mu))
        + cmath.exp(-nb) * cmath.exp(lb)
        * (cmath.exp(mu - mb) + X2c * sigma(-mu) + X1 * sigma(mb))
        - cmath.exp(nu - nb)
        - cmath.exp(-nu)
    )


def su21_gap_G(lam: complex, mu: complex, nu: complex, pp: PPInvariants) -> complex:
    """Closed-form G(P) for alpha = E(lam), gamma = Q E(mu) Q^{-1}, beta = R E(nu) R^{-1}."""
    lb, mb, nb = lam.conjugate(), mu.conjugate(), nu.conjugate()
    X1, X2c, X3c = pp.X1, pp.X2.conjugate(), pp.X3.conjugate()
    num = _su21_G_numerator(lam, mu, nu, pp)
    den = (
        cmath.exp(-lb) * (X2c * sigma(mu) + X1 * X3c * sigma(-mb))
        + cmath.exp(-nb) * cmath.exp(-lam) * (X2c * sigma(-mu) + X1 * X3c * sigma(mb))
    )
    return cmath.log(num / den)


def su21_gap_Gr(lam: complex, mu: complex, nu: complex, pp: PPInvariants) -> complex:
    """Closed-form Gr(P); denominator is |G-numerator|^2, numerator groups as
    |X1|^2 (T1 X3 + T4 conj(X3)) + 2 Re(T2 X1 X2)."""
    mb = mu.conjugate()
    q = cmath.exp(-nu - mu + lam - lam.conjugate())
    p = cmath.exp(-nu.conjugate() + lam.conjugate() - lam) - cmath.exp(-mu)
    T1 = abs(sigma(mu)) ** 2 * abs(1 - q) ** 2
    T4 = abs(sigma(mu)) ** 2 * abs(p) ** 2
    T2 = sigma(mb) ** 2 * (1 - q) * p
    X1, X2, X3 = pp.X1, pp.X2, pp.X3
    num = abs(X1) ** 2 * (T1 * X3 + T4 * X3.conjugate()) + 2 * (T2 * X1 * X2).real
    den = abs(_su21_G_numerator(lam, mu, nu, pp)) ** 2
    return cmath.log(num / den)


def su21_closed_gaps(P: PantsTriple):
    """(G, Gr) closed-form values for an SU(2,1) pants with alpha = E(lam).

    Raises PreconditionError if alpha is not in the diagonal normal form.
    """
    if P.group != SU21:
        raise DomainError("su21_closed_gaps expects an SU21 pants")
    ed_a = algebra.su21_eigendata(P.alpha)
    D = np.abs(P.alpha.entries - np.diag(np.diag(P.alpha.entries))).max()
    if D > 1e-9:
        raise PreconditionError("alpha must be normalized to the E(lam) form")
    lam = ed_a.lam
    ed_g = algebra.su21_eigendata(P.gamma)
    ed_b = algebra.su21_eigendata(P.beta)
    a_alpha = BoundaryPoint.infinity()
    r_alpha = BoundaryPoint(np.array([0, 0, 1], dtype=complex), check=False)
    a_gamma = BoundaryPoint(ed_g.attracting, check=False)
    r_gamma = BoundaryPoint(ed_g.repelling, check=False)
    pp = crossratio.pp_invariants(a_gamma, a_alpha, r_alpha, r_gamma)
    G = su21_gap_G(lam, ed_g.lam, ed_b.lam, pp)
    Gr = su21_gap_Gr(lam, ed_g.lam, ed_b.lam, pp)
    return (GapValue(G, route="closed-form", pants_id=P.label),
            GapValue(Gr, route="closed-form", pants_id=P.label))


# ---------------------------------------------------------------------------
# cusp configuration on the vertical axis


@dataclass(frozen=True)
class CuspConfig:
    """Vertical-axis cusp data (t; t1, t2 for gamma; s1, s2 for beta)."""

    t: float
    t1: float
    t2: float
    s1: float
    s2: float
    mu: complex
    nu: complex

    @property
    def W(self) -> float:
        return (self.s1 - self.t2) / self.t

    @property
    def Wr(self) -> float:
        return (self.s2 - self.s1) / self.t

    def five_identity_residuals(self):
        """Residuals of the five entry identities of the two beta normal forms."""
        emu, emub = cmath.exp(-self.mu), cmath.exp(self.mu.conjugate())
        env, envb = cmath.exp(self.nu), cmath.exp(-self.nu.conjugate())
        dt = self.t1 - self.t2
        ds = self.s1 - self.s2
        r1 = (emu * self.t1 - emub * self.t2) / dt - (self.s1 * env - self.s2 * envb) / ds
        r2 = (emub - emu) / dt - (envb - env) / ds
        r3 = cmath.exp(self.mu - self.mu.conjugate()) - cmath.exp(self.nu.conjugate() - self.nu)
        r4 = (self.t * (emub * self.t2 - emu * self.t1) + self.t1 * self.t2 * (emub - emu)) / dt \
            - (envb - env) / ds * self.s1 * self.s2
        r5 = (self.t * (emub - emu) + emub * self.t1 - emu * self.t2) / dt \
            - (self.s1 * envb - self.s2 * env) / ds
        return tuple(abs(r) for r in (r1, r2, r3, r4, r5))

    def sum_residual(self) -> float:
        return abs(self.t + self.t1 + self.t2 - self.s1 - self.s2)


def axis_loxodromic(mu: complex, t1: float, t2: float) -> Isometry:
    """The SU(2,1) loxodromic Q E(mu) Q^{-1} with attracting/repelling axis
    coordinates t1, t2, built from the explicit axis normal form of Q
    (columns (i t1 g, 0, g) and (i t2 j, 0, j) with g conj(j) (t1-t2) = -i)."""
    d = t1 - t2
    if d == 0:
        raise PreconditionError("axis fixed points must be distinct")
    r = 1.0 / math.sqrt(abs(d))
    phase = -1j if d > 0 else 1j
    g = r * cmath.exp(1j * cmath.phase(phase) / 2)
    j = r * cmath.exp(-1j * cmath.phase(phase) / 2)
    Q = np.array(
        [
            [1j * t1 * g, 0, 1j * t2 * j],
            [0, -1j * np.conj(g * j) * d, 0],
            [g, 0, j],
        ],
        dtype=complex,
    )
    Qi = algebra.J @ Q.conj().T @ algebra.J
    lox = Q @ algebra.E_matrix(mu).entries @ Qi
    return Isometry(lox, SU21)


def vertical_translation(t: float) -> Isometry:
    """[[1,0,it],[0,1,0],[0,0,1]]: Heisenberg translation by (0, t)."""
    return Isometry([[1, 0, 1j * t], [0, 1, 0], [0, 0, 1]], SU21)


def su21_cusp_config(mu: complex, nu: complex, t: float) -> CuspConfig:
    """Vertical-axis configuration realizing strip parameters (mu, nu) and
    cusp translation t; gauge-fixed by t2 = 0.

    t1 - t2 = (e^(conj mu) - e^(-mu)) t / D with
    D = e^nu + e^(-conj nu) - e^(conj mu) - e^(-mu); gamma is reconstructed as
    an explicit axis loxodromic, beta = gamma^{-1} alpha^{-1}, and s1, s2 are
    read off beta's eigenvector axis coordinates, so all five entry
    identities hold by construction.
    """
    mu, nu = complex(mu), complex(nu)
    if t == 0:
        raise PreconditionError("cusp translation t must be nonzero")
    if abs(cmath.exp(mu - mu.conjugate()) - cmath.exp(nu.conjugate() - nu)) > 1e-9:
        raise PreconditionError("mu, nu violate e^(mu - conj mu) = e^(conj nu - nu)")
    emu, emub = cmath.exp(-mu), cmath.exp(mu.conjugate())
    env, envb = cmath.exp(nu), cmath.exp(-nu.conjugate())
    D = env + envb - emub - emu
    if abs(D) < 1e-12:
        raise DegenerateConfigurationError(
            "vanishing denominator e^nu + e^(-conj nu) = e^(conj mu) + e^(-mu)"
        )
    t1 = complex((emub - emu) * t / D)
    if abs(t1.imag) > 1e-9 * max(1.0, abs(t1)):
        raise PreconditionError("parameters give a non-real axis configuration")
    t1 = t1.real
    t2 = 0.0
    gamma = axis_loxodromic(mu, t1, t2)
    beta = gamma.inv() @ vertical_translation(t).inv()
    ed = algebra.su21_eigendata(beta)
    if abs(cmath.exp(ed.lam) - env) > 1e-8 * max(1.0, abs(env)):
        raise PreconditionError(
            "reconstructed beta has attracting eigenvalue inconsistent with nu"
        )
    s1 = axis_coordinate(BoundaryPoint(ed.attracting, check=False))
    s2 = axis_coordinate(BoundaryPoint(ed.repelling, check=False))
    return CuspConfig(t=t, t1=t1, t2=t2, s1=s1, s2=s2, mu=mu, nu=ed.lam)


def su21_cusp_data(P: PantsTriple) -> CuspConfig:
    """Extract the vertical-axis cusp configuration from an embedded pants."""
    if P.group != SU21 or P.alpha_kind != CUSP:
        raise PreconditionError("su21_cusp_data needs an SU21 cusp pants")
    t = _su21_vertical_translation_amount(P.alpha)
    ed_g = algebra.su21_eigendata(P.gamma)
    ed_b = algebra.su21_eigendata(P.beta)
    t1 = axis_coordinate(BoundaryPoint(ed_g.attracting, check=False))
    t2 = axis_coordinate(BoundaryPoint(ed_g.repelling, check=False))
    s1 = axis_coordinate(BoundaryPoint(ed_b.attracting, check=False))
    s2 = axis_coordinate(BoundaryPoint(ed_b.repelling, check=False))
    return CuspConfig(t=t, t1=t1, t2=t2, s1=s1, s2=s2, mu=ed_g.lam, nu=ed_b.lam)
