"""Property suites: sampled checks of the algebraic identities.

Each suite returns a list of SuiteResult records (one per checked property)
with the worst residual seen over the sample; the CLI `props` command and
the acceptance tests both run these.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import algebra, crossratio, models, pants, sampling
from .algebra import SL2C, SL2R, SU21
from .crossratio import BoundaryPoint, cx_crossratio, sl2_crossratio
from .errors import DegenerateConfigurationError, IllConditionedError

__all__ = [
    "SuiteResult",
    "axioms_suite",
    "pp_suite",
    "holder_suite",
    "cocycle_suite",
    "period_suite",
    "ALL_SUITES",
]


@dataclass(frozen=True)
class SuiteResult:
    name: str
    worst: float
    tol: float
    samples: int

    @property
    def passed(self) -> bool:
        return self.worst <= self.tol


def _sphere_points(rng, n, min_gap=0.15):
    out = []
    while len(out) < n:
        z = complex(rng.normal(0, 2), rng.normal(0, 2))
        if all(abs(z - w) > min_gap for w in out):
            out.append(z)
    return out


def _ch2_points(rng, n, min_gap=0.3):
    pts = []
    while len(pts) < n:
        p = sampling.random_heisenberg_point(rng)
        if all(models.cygan_distance(p, q) > min_gap for q in pts):
            pts.append(p)
    return [BoundaryPoint.from_heisenberg(p) for p in pts], pts


def axioms_suite(n: int = 1000, seed: int = 7, tol: float = 1e-10):
    """The eight cross-ratio axioms on the Riemann sphere and on the boundary
    of complex hyperbolic 2-space, plus isometry invariance."""
    rng = sampling.rng_for(seed)
    worst = {f"axiom{i}": 0.0 for i in range(1, 9)}
    worst_inv = {"mobius": 0.0, "su21": 0.0}

    for _ in range(n):
        # --- Riemann sphere ---
        x, y, z, t, w = _sphere_points(rng, 5)
        cr = sl2_crossratio
        worst["axiom1"] = max(worst["axiom1"], abs(cr(x, x, z, t)), abs(cr(x, y, z, z)))
        worst["axiom2"] = max(worst["axiom2"], abs(cr(x, y, x, t) - 1), abs(cr(x, y, z, y) - 1))
        worst["axiom3"] = max(worst["axiom3"], abs(cr(x, y, z, t) - cr(x, y, w, t) * cr(w, y, z, t)))
        worst["axiom4"] = max(worst["axiom4"], abs(cr(x, y, z, t) - cr(x, y, z, w) * cr(x, w, z, t)))
        worst["axiom5"] = max(worst["axiom5"], abs(cr(x, y, z, t) - cr(z, t, x, y)))
        worst["axiom6"] = max(worst["axiom6"], abs(cr(x, y, z, t) * cr(z, y, x, t) - 1))
        worst["axiom7"] = max(worst["axiom7"], abs(cr(x, y, z, t) * cr(x, t, z, y) - 1))
        realcr = models.real_crossratio_heisenberg(
            np.array([x.real, x.imag]), np.array([y.real, y.imag]),
            np.array([z.real, z.imag]), np.array([t.real, t.imag]))
        worst["axiom8"] = max(worst["axiom8"], abs(math.sqrt(realcr) - abs(cr(x, y, z, t))))
        g = sampling.random_sl2c(rng)
        gx, gy, gz, gt = (algebra.mobius_apply(g, p) for p in (x, y, z, t))
        worst_inv["mobius"] = max(worst_inv["mobius"], abs(cr(x, y, z, t) - cr(gx, gy, gz, gt)))

        # --- boundary of CH^2 ---
        (bx, by, bz, bt, bw), heis = _ch2_points(rng, 5)
        ccr = cx_crossratio
        worst["axiom1"] = max(worst["axiom1"], abs(ccr(bx, bx, bz, bt)))
        worst["axiom2"] = max(worst["axiom2"], abs(ccr(bx, by, bx, bt) - 1))
        worst["axiom3"] = max(worst["axiom3"], abs(ccr(bx, by, bz, bt) - ccr(bx, by, bw, bt) * ccr(bw, by, bz, bt)))
        worst["axiom4"] = max(worst["axiom4"], abs(ccr(bx, by, bz, bt) - ccr(bx, by, bz, bw) * ccr(bx, bw, bz, bt)))
        worst["axiom5"] = max(worst["axiom5"], abs(ccr(bx, by, bz, bt) - ccr(bz, bt, bx, by)))
        worst["axiom6"] = max(worst["axiom6"], abs(ccr(bx, by, bz, bt) * ccr(bz, by, bx, bt) - 1))
        worst["axiom7"] = max(worst["axiom7"], abs(ccr(bx, by, bz, bt) * ccr(bx, bt, bz, by) - 1))
        rcr = models.real_crossratio_heisenberg(heis[0], heis[1], heis[2], heis[3])
        worst["axiom8"] = max(worst["axiom8"], abs(rcr - abs(ccr(bx, by, bz, bt))))
        gq = sampling.random_su21(rng)
        imgs = [p.apply(gq) for p in (bx, by, bz, bt)]
        worst_inv["su21"] = max(worst_inv["su21"], abs(ccr(bx, by, bz, bt) - ccr(*imgs)))

    out = [SuiteResult(k, v, tol, n) for k, v in worst.items()]
    out += [SuiteResult(f"invariance-{k}", v, tol, n) for k, v in worst_inv.items()]
    return out


def pp_suite(n: int = 1000, seed: int = 11, tol: float = 1e-10):
    """Residuals of the two cross-ratio-invariant identities on random
    separated boundary quadruples."""
    rng = sampling.rng_for(seed)
    w1 = w2 = 0.0
    for _ in range(n):
        pts = sampling.separated_quadruple(rng)
        pp = crossratio.pp_invariants(*pts)
        r1, r2 = pp.identity_residuals()
        scale = max(1.0, abs(pp.X1) * abs(pp.X3), abs(pp.X1) ** 2)
        w1 = max(w1, r1 / scale)
        w2 = max(w2, r2 / scale)
    return [SuiteResult("pp-identity-1", w1, tol, n), SuiteResult("pp-identity-2", w2, tol, n)]


def holder_suite(n: int = 10_000, seed: int = 13, band=(0.3, 3.0)):
    """lhs <= C rho0 over admissible configurations; worst margin reported
    (positive margin = violation)."""
    rng = sampling.rng_for(seed)
    worst_margin = -math.inf
    violations = 0
    x = BoundaryPoint.from_heisenberg(models.HeisenbergPoint(0j, 0.0))
    z = BoundaryPoint.infinity()
    count = 0
    while count < n:
        y1 = _banded_point(rng, band)
        y2 = _banded_point(rng, band)
        t = sampling.random_heisenberg_point(rng)
        if math.sqrt(abs(t.zeta) ** 4 + t.v**2) < 0.2:
            continue
        try:
            rec = crossratio.holder_check(x, z, BoundaryPoint.from_heisenberg(t),
                                          y1, y2, band=band)
        except (DegenerateConfigurationError, IllConditionedError):
            continue
        margin = rec.lhs - rec.rhs
        worst_margin = max(worst_margin, margin)
        if not rec.holds:
            violations += 1
        count += 1
    return [SuiteResult("holder-violations", float(violations), 0.0, n),
            SuiteResult("holder-worst-margin", worst_margin, 0.0, n)]


def _banded_point(rng, band):
    lo, hi = band
    while True:
        p = sampling.random_heisenberg_point(rng, scale=1.2)
        gauge = math.sqrt(abs(p.zeta) ** 4 + p.v**2)
        if lo * 1.01 < gauge < hi * 0.99:
            return BoundaryPoint.from_heisenberg(p)


def cocycle_suite(group: str = SL2C, n: int = 1000, seed: int = 17,
                  tol: float = 1e-9, s0_tol: float = 1e-10):
    """W_alpha properties (a), (b), (c) and independence of s0."""
    rng = sampling.rng_for(seed)
    wa = wb = wc = ws = 0.0
    for _ in range(n):
        if group == SU21:
            tau = float(rng.uniform(0.5, 3.0)) * (1 if rng.random() < 0.5 else -1)
            alpha = pants.vertical_translation(tau)
            if rng.random() < 0.3:
                # screw-parabolic variant: pi-rotation times the translation
                rot = algebra.Isometry(np.diag([-1, 1, -1]).astype(complex), SU21)
                alpha = rot @ alpha
            xs = rng.uniform(-5, 5, size=4)
            s, t, u, s0 = (pants._axis_pt(float(v)) for v in xs)

            def act(p):
                return p.apply(alpha)
        else:
            alpha = sampling.random_parabolic_sl2(rng, group)
            fp = algebra.parabolic_fixed_point(alpha)
            pts = []
            while len(pts) < 4:
                c = complex(rng.normal(0, 2), rng.normal(0, 2))
                if crossratio._sphere_gap(c, fp) > 0.05:
                    pts.append(c)
            s, t, u, s0 = pts

            def act(p):
                return algebra.mobius_apply(alpha, p)

        W = lambda a, b, s0=None: pants.w_alpha(alpha, a, b, s0)
        wa = max(wa, abs(W(act(s), act(t)) - W(s, t)))
        wb = max(wb, abs(W(s, act(s)) - 1))
        wc = max(wc, abs(W(s, u) - W(s, t) - W(t, u)))
        ws = max(ws, abs(W(s, t, s0) - W(s, t, u)))
    label = "su21" if group == SU21 else "sl2c"
    return [
        SuiteResult(f"cocycle-{label}-a", wa, tol, n),
        SuiteResult(f"cocycle-{label}-b", wb, tol, n),
        SuiteResult(f"cocycle-{label}-c", wc, tol, n),
        SuiteResult(f"cocycle-{label}-s0", ws, s0_tol, n),
    ]


def period_suite(n: int = 200, seed: int = 23, tol: float = 1e-8):
    """Re(period) against metric translation length on both targets.

    SL(2,C): length from eigenvalue moduli; SU(2,1): Bergman displacement of
    an axis point (both independent of the cross-ratio route).
    """
    rng = sampling.rng_for(seed)
    w_sl2 = w_su21 = w_bergman = 0.0
    for _ in range(n):
        M = sampling.random_sl2c_loxodromic(rng)
        m = algebra.sl2_multiplier(M)
        try:
            per = crossratio.period(M)
        except IllConditionedError:
            continue
        w_sl2 = max(w_sl2, abs(per.real - 2 * math.log(abs(m))))

        Q, lam, frame = sampling.random_su21_loxodromic(rng)
        per2 = crossratio.period(Q)
        w_su21 = max(w_su21, abs(per2.real - 2 * lam.real))
        axis_pt = frame.entries @ models.psi_lift(models.SiegelPoint(0j, 0.0, 1.0))
        d = models.bergman_distance_lifts(axis_pt, Q.entries @ axis_pt)
        w_bergman = max(w_bergman, abs(per2.real - d))
    return [
        SuiteResult("period-sl2c-eigen", w_sl2, tol, n),
        SuiteResult("period-su21-eigen", w_su21, tol, n),
        SuiteResult("period-su21-bergman", w_bergman, tol, n),
    ]


ALL_SUITES = {
    "crossratio": lambda n, seed, group: axioms_suite(n, seed),
    "pp": lambda n, seed, group: pp_suite(n, seed),
    "holder": lambda n, seed, group: holder_suite(n, seed),
    "cocycle": lambda n, seed, group: (
        cocycle_suite(SL2C, n, seed) + cocycle_suite(SU21, n, seed)
        if group == "both"
        else cocycle_suite(SU21 if group == "su21" else SL2C, n, seed)
    ),
    "period": lambda n, seed, group: period_suite(n, seed),
}
