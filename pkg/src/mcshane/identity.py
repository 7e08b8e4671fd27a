"""Branch-tracked summation of gap terms and identity verification reports.

Each verification run enumerates slopes to a trace threshold, evaluates one
gap term per ordered pants (two per slope), reduces them with compensated
summation in a canonical order (increasing |trace|, then slope), and reports
the residual against the identity's target:

* cusp identity:       1  = sum of W-terms           (target 1)
* boundary identity:   l(alpha) = sum of G-terms     (target = period)
* mapping torus:       0  = sum over slope orbits    (target 0)

Routes.  "definitional" evaluates gaps as (logs of) cross-ratios of actual
fixed points; "closed" uses the trace/multiplier closed forms (and, for
boundary runs, the SU(2,1) closed form on embedded pants); "both" computes
the two totals and their gap.  Identical inputs and policy produce
bit-identical reports: the term order is canonical and the reduction is
sequential Neumaier summation regardless of thread count (threads only
parallelize term evaluation).

The tail bound accumulates, for every pruned subtree with root trace z, the
envelope 8 C / ((|z|-1)^2 - 1), C the per-kind term coefficient: subtree
sums are geometrically dominated by their root because traces at least
double down the Fuchsian-type tree.  Its validity is asserted against
deeper runs in the test suite (Fuchsian runs only; elsewhere best effort).
"""

from __future__ import annotations

import cmath
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import algebra, crossratio, enumeration, pants as pants_mod
from .algebra import SL2C, SL2R, SU21
from .enumeration import (
    FundamentalDomain,
    MarkovTriple,
    Representation,
    Slope,
    farey_expand,
    pants_for_slope,
)
from .errors import DomainError, PreconditionError, UsageError

__all__ = [
    "ExpansionPolicy",
    "IdentityReport",
    "TermRow",
    "sum_cusp_identity",
    "sum_boundary_identity",
    "sum_mapping_torus",
    "telescope_check",
    "neumaier_total",
]

TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class ExpansionPolicy:
    """Enumeration and evaluation policy for one verification run."""

    trace_threshold: float = 1e6
    max_terms: int = 200_000
    route: str = "closed"  # definitional | closed | both
    threads: int = 1

    def __post_init__(self):
        if self.route not in ("definitional", "closed", "both"):
            raise UsageError(f"unknown route {self.route!r}")
        if self.trace_threshold <= 4:
            raise UsageError("trace threshold must exceed 4")
        if self.threads < 1:
            raise UsageError("threads must be >= 1")


@dataclass(frozen=True)
class TermRow:
    slope: Slope
    trace: complex
    value: complex
    partial: complex


@dataclass
class IdentityReport:
    kind: str
    rep_spec: str
    target: complex
    total: complex
    route: str
    terms: list = field(repr=False)
    tail_bound: float = 0.0
    diverged: bool = False
    seed: int = 0
    shells: list = field(default_factory=list, repr=False)
    extras: dict = field(default_factory=dict, repr=False)

    @property
    def residual(self) -> complex:
        return self.target - self.total

    @property
    def residual_mod(self) -> float:
        """|residual| with the imaginary part reduced mod 2 pi."""
        r = self.residual
        im = (r.imag + math.pi) % TWO_PI - math.pi
        return math.hypot(r.real, im)

    @property
    def terms_used(self) -> int:
        return len(self.terms)

    def passes(self, tol: float, mod2pi: bool = False) -> bool:
        if self.diverged:
            return False
        err = self.residual_mod if mod2pi else abs(self.residual)
        return err <= tol

    # -- serialization ---------------------------------------------------

    def to_json(self) -> str:
        payload = {
            "target": [_f(self.target.real), _f(self.target.imag)],
            "total": [_f(self.total.real), _f(self.total.imag)],
            "residual": [_f(self.residual.real), _f(self.residual.imag)],
            "residual_mod2pi": _f(self.residual_mod),
            "terms": self.terms_used,
            "tail_bound": _f(self.tail_bound),
            "route": self.route,
            "rep": self.rep_spec,
            "seed": self.seed,
            "diverged": self.diverged,
        }
        if self.shells:
            payload["shells"] = [[_f(b), _f(v)] for b, v in self.shells]
        for k in sorted(self.extras):
            payload[k] = self.extras[k]
        return json.dumps(payload, separators=(",", ":"))

    def to_csv(self) -> str:
        lines = ["p,q,term_re,term_im,partial_re,partial_im"]
        for row in self.terms:
            lines.append(
                ",".join(
                    [str(row.slope.p), str(row.slope.q),
                     _g(row.value.real), _g(row.value.imag),
                     _g(row.partial.real), _g(row.partial.imag)]
                )
            )
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        lines = [
            f"identity: {self.kind}",
            f"rep: {self.rep_spec}",
            f"route: {self.route}",
            f"target: {_g(self.target.real)} {_g(self.target.imag)}",
            f"total: {_g(self.total.real)} {_g(self.total.imag)}",
            f"residual: {_g(abs(self.residual))}",
            f"residual_mod2pi: {_g(self.residual_mod)}",
            f"terms: {self.terms_used}",
            f"tail_bound: {_g(self.tail_bound)}",
            f"diverged: {self.diverged}",
        ]
        for k in sorted(self.extras):
            lines.append(f"{k}: {self.extras[k]}")
        if self.shells:
            lines.append("shells (|trace| bound, |partial sum|):")
            for b, v in self.shells:
                lines.append(f"  {_g(b)} {_g(v)}")
        return "\n".join(lines) + "\n"


def _f(x: float) -> float:
    # round-trip-safe float for JSON (17 significant digits)
    return float(f"{x:.17g}")


def _g(x: float) -> str:
    return f"{x:.17g}"


# ---------------------------------------------------------------------------
# compensated reduction


def neumaier_total(values):
    """Neumaier-compensated complex sum; returns (total, partials)."""
    s_re = c_re = s_im = c_im = 0.0
    partials = []

    def add(s, c, x):
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        return t, c

    for v in values:
        s_re, c_re = add(s_re, c_re, v.real)
        s_im, c_im = add(s_im, c_im, v.imag)
        partials.append(complex(s_re + c_re, s_im + c_im))
    return complex(s_re + c_re, s_im + c_im), partials


def _map_terms(fn, items, threads: int):
    if threads <= 1 or len(items) < 4:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# term evaluation


def _attracting_multiplier_from_trace(t: complex) -> complex:
    t = complex(t)
    if abs(t) > 1e100:
        return t  # 1/t correction is far below double precision here
    s = cmath.sqrt(t * t - 4)
    if (t.conjugate() * s).real < 0:
        s = -s
    m = (t + s) / 2
    if abs(m) < 1:
        m = (t - s) / 2
    return m


def closed_cusp_term(trace: complex) -> complex:
    """2 W(P) for the two ordered pants of one slope: 2 / (1 + m(trace)^2)."""
    t = complex(trace)
    if abs(t) > 1e100:
        return 2.0 * (1.0 / t) ** 2
    m = _attracting_multiplier_from_trace(t)
    return 2.0 / (1.0 + m * m)


def _definitional_cusp_term(rep: Representation, s: Slope) -> complex:
    P, Pm = pants_for_slope(rep, s)
    return pants_mod.gap_W(P).value + pants_mod.gap_W(Pm).value


def _definitional_boundary_term(rep: Representation, s: Slope) -> complex:
    P, Pm = pants_for_slope(rep, s)
    return pants_mod.gap_G(P).value + pants_mod.gap_G(Pm).value


def _closed_boundary_term(rep: Representation, s: Slope) -> complex:
    """SU(2,1) closed-form G on the C-Fuchsian embedding of the pants."""
    if rep.target == SL2R:
        emb = enumeration.embed_cfuchsian(rep)
    elif rep.flavor == enumeration.CFUCHSIAN:
        emb = rep
    else:
        raise PreconditionError(
            "closed boundary route needs a real (embeddable) representation"
        )
    P, Pm = pants_for_slope(emb, s)
    g1, _ = pants_mod.su21_closed_gaps(P)
    g2, _ = pants_mod.su21_closed_gaps(Pm)
    return g1.value + g2.value


def _su21_cusp_closed_term(rep: Representation, s: Slope) -> complex:
    """Cusp closed form 1/(1 - e^(mu + nu)) per ordered pants, from the
    embedded matrices' strip parameters."""
    P, Pm = pants_for_slope(rep, s)
    out = 0j
    for Q in (P, Pm):
        mu = algebra.su21_eigendata(Q.gamma).lam
        nu = algebra.su21_eigendata(Q.beta).lam
        out += 1.0 / (1.0 - cmath.exp(mu + nu))
    return out


# ---------------------------------------------------------------------------
# tail bound


def _term_envelope(kind: str, rep: Representation, z: float) -> float:
    if kind == "boundary":
        ell = algebra.sl2_complex_length(
            rep.alpha if rep.target != SU21 else rep.source.alpha
        )
        coeff = 4.0 * math.exp(ell.real)
    else:
        coeff = 2.0
    if not math.isfinite(z):
        return 0.0
    if z > 1e60:
        inv = 1.0 / z
        return 2.0 * coeff * inv * inv
    base = (z - 1.0) ** 2 - 1.0
    if base <= 0:
        return math.inf
    return 2.0 * coeff / base


def _run_sum(kind, rep, policy, term_fns, threshold, arc_filter=None):
    tail = [0.0]

    def prune(tm):
        tail[0] += 2.0 * _term_envelope(kind, rep, abs(tm))

    rows = farey_expand(rep.markov, threshold, prune=prune, arc_filter=arc_filter)
    diverged = False
    if len(rows) > policy.max_terms:
        # budget truncation: the dropped rows are accounted to the tail, so
        # the run stays honest without a diverged flag
        for _s, t in rows[policy.max_terms:]:
            tail[0] += _term_envelope(kind, rep, abs(t))
        rows = rows[: policy.max_terms]
    totals = {}
    primary = policy.route if policy.route != "both" else "closed"
    partials = None
    values_primary = None
    for route, fn in term_fns.items():
        values = _map_terms(fn, rows, policy.threads)
        total, parts = neumaier_total(values)
        totals[route] = total
        if route == primary:
            partials = parts
            values_primary = values
    terms = [
        TermRow(slope=s, trace=t, value=v, partial=p)
        for (s, t), v, p in zip(rows, values_primary, partials)
    ]
    return totals, terms, tail[0], diverged


def _route_fns(policy, definitional, closed):
    if policy.route == "definitional":
        return {"definitional": definitional}
    if policy.route == "closed":
        return {"closed": closed}
    return {"closed": closed, "definitional": definitional}


def _finish(kind, rep, policy, target, totals, terms, tail, diverged, seed, shells=None):
    primary = policy.route if policy.route != "both" else "closed"
    extras = {}
    if len(totals) > 1:
        other = totals["definitional"]
        extras["route_gap"] = _f(abs(totals["closed"] - other))
        extras["total_definitional"] = [_f(other.real), _f(other.imag)]
    report = IdentityReport(
        kind=kind,
        rep_spec=rep.spec,
        target=target,
        total=totals[primary],
        route=policy.route,
        terms=terms,
        tail_bound=tail,
        diverged=diverged,
        seed=seed,
        shells=shells or [],
        extras=extras,
    )
    return report


def sum_cusp_identity(rep: Representation, tol: float = 1e-8,
                      policy: ExpansionPolicy = ExpansionPolicy(), seed: int = 0) -> IdentityReport:
    """Verify 1 = sum of cusp gaps over ordered pants (torus: no Wr terms)."""
    if not rep.is_cusp:
        raise PreconditionError("cusp identity needs a cusped representation")
    if rep.target == SU21:
        closed = lambda row: _su21_cusp_closed_term(rep, row[0])
    else:
        closed = lambda row: closed_cusp_term(row[1])
    definitional = lambda row: _definitional_cusp_term(rep, row[0])
    totals, terms, tail, diverged = _run_sum(
        "cusp", rep, policy, _route_fns(policy, definitional, closed),
        policy.trace_threshold,
    )
    return _finish("cusp", rep, policy, 1.0 + 0j, totals, terms, tail, diverged, seed)


def sum_boundary_identity(rep: Representation, tol: float = 1e-6,
                          policy: ExpansionPolicy = ExpansionPolicy(route="definitional"),
                          seed: int = 0) -> IdentityReport:
    """Verify period(alpha) = sum of boundary gaps over ordered pants."""
    if rep.is_cusp:
        raise PreconditionError("boundary identity needs a hyperbolic boundary")
    if rep.target == SU21:
        target = 2 * algebra.su21_eigendata(rep.alpha).lam.real + 0j
    else:
        target = algebra.sl2_complex_length(rep.alpha)
    definitional = lambda row: _definitional_boundary_term(rep, row[0])
    closed = lambda row: _closed_boundary_term(rep, row[0])
    totals, terms, tail, diverged = _run_sum(
        "boundary", rep, policy, _route_fns(policy, definitional, closed),
        policy.trace_threshold,
    )
    return _finish("boundary", rep, policy, target, totals, terms, tail, diverged, seed)


def sum_mapping_torus(rep: Representation, tol: float = 1e-2,
                      policy: ExpansionPolicy = ExpansionPolicy(trace_threshold=1e120),
                      seed: int = 0) -> IdentityReport:
    """Best-effort vanishing sum over slope orbits of the monodromy.

    Terms are grouped in dyadic |trace| shells (monodromy-invariant, since
    the fixed character makes traces orbit-constant); the report records the
    |partial sum| after each shell.  Both the ordered-pants (coefficient 2)
    and unordered (coefficient 1) normalizations are reported; the target is
    0 either way.
    """
    if rep.flavor != enumeration.FIBERED:
        raise PreconditionError("mapping-torus sum needs a fibered representation")
    fd = FundamentalDomain(rep.monodromy)
    closed = lambda row: closed_cusp_term(row[1])
    definitional = lambda row: _definitional_cusp_term(rep, row[0])
    totals, terms, tail, diverged = _run_sum(
        "mapping-torus", rep, policy, _route_fns(policy, definitional, closed),
        policy.trace_threshold, arc_filter=fd,
    )
    shells = []
    bound = 4.0
    acc = 0j
    in_band = 0
    for row in terms:
        while abs(row.trace) > bound:
            if in_band:
                shells.append((bound, abs(acc)))
                in_band = 0
            bound *= 4.0
        acc += row.value
        in_band += 1
    if in_band:
        shells.append((bound, abs(acc)))
    report = _finish("mapping-torus", rep, policy, 0j, totals, terms, tail,
                     diverged, seed, shells=shells)
    primary_total = report.total
    report.extras["total_coefficient1"] = [_f(primary_total.real / 2), _f(primary_total.imag / 2)]
    slow = len(shells) >= 5 and any(
        abs(shells[i + 1][1]) > abs(shells[i][1]) for i in range(len(shells) - 5, len(shells) - 1)
    )
    if slow:
        report.diverged = True
    return report


@dataclass(frozen=True)
class TelescopeReport:
    shift_residual: float
    gap_residuals: tuple
    widths_sum: float
    period_real: float
    disjoint: bool

    @property
    def passes(self) -> bool:
        return (self.shift_residual < 1e-9
                and max(self.gap_residuals) < 1e-9
                and self.widths_sum <= self.period_real + 1e-9
                and self.disjoint)


def telescope_check(rep: Representation, n_gaps: int = 20, n_samples: int = 100,
                    seed: int = 0) -> TelescopeReport:
    """Check the B-map bookkeeping on a Fuchsian boundary representation.

    B(y) = [alpha+, y, alpha-, zeta]:  log B(alpha z) = log B(z) - l(alpha),
    log B(gamma-) - log B(beta+) = G(P), and the first gaps, translated into
    one fundamental domain of the alpha action, are disjoint with total width
    at most l(alpha).
    """
    if rep.is_cusp or rep.target != SL2R:
        raise PreconditionError("telescope_check needs a Fuchsian boundary representation")
    att, repell = algebra.sl2_fixed_points(rep.alpha)
    ell = algebra.sl2_complex_length(rep.alpha).real
    zeta = _pick_reference(att, repell)

    def logB(y):
        return cmath.log(crossratio.sl2_crossratio(att, y, repell, zeta))

    rng = np.random.default_rng(seed)
    shift_res = 0.0
    for _ in range(n_samples):
        z = complex(rng.uniform(-10, 10))
        if min(_dist(z, att), _dist(z, repell), _dist(z, zeta)) < 1e-3:
            continue
        lhs = logB(algebra.mobius_apply(rep.alpha, z))
        rhs = logB(z) - ell
        d = lhs - rhs
        # compare modulo 2 pi i (the log branch may jump across the cut)
        im = (d.imag + math.pi) % TWO_PI - math.pi
        shift_res = max(shift_res, math.hypot(d.real, im))

    rows = farey_expand(rep.markov, 1e4)[: n_gaps]
    gap_res = []
    intervals = []  # (start mod ell, width) on the circle R / ell Z
    for s, _tr in rows:
        for P in pants_for_slope(rep, s):
            G = pants_mod.gap_G(P).value
            lo = logB(P.beta_fixed[0]).real
            hi = logB(P.gamma_fixed[1]).real
            gap_res.append(abs((hi - lo) - G.real))
            intervals.append((lo % ell, hi - lo))
    intervals.sort()
    disjoint = True
    for i in range(len(intervals)):
        s0, w0 = intervals[i]
        if i + 1 < len(intervals):
            disjoint &= s0 + w0 <= intervals[i + 1][0] + 1e-9
        else:
            disjoint &= s0 + w0 <= intervals[0][0] + ell + 1e-9
    widths = sum(w for _s, w in intervals)
    return TelescopeReport(
        shift_residual=shift_res,
        gap_residuals=tuple(gap_res),
        widths_sum=widths,
        period_real=ell,
        disjoint=disjoint,
    )


def _pick_reference(att, repell):
    for cand in (0.5, -0.7, 1.3, 2.7, -3.1):
        if min(_dist(cand, att), _dist(cand, repell)) > 1e-2:
            return cand
    raise DomainError("no generic reference point found")


def _dist(a, b) -> float:
    return crossratio._sphere_gap(a, b)
