"""Representations of the (punctured/holed) torus and simple-curve enumeration.

Slopes p/q index free homotopy classes of simple closed curves; the two
Stern-Brocot cones (spanned by (0,1),(1,0) and (1,0),(0,-1)) cover all of
them.  Traces follow the Vieta recursion: a Farey edge carrying traces
(tl, tr) with mediant trace tm has child mediants tl*tm - tr and tm*tr - tl.

Markings.  A marking is an ordered pair (A, B) of generators.  The two
elementary moves

    m1: (A, B) -> (A B, B)        m2: (A, B) -> (A, B A)

and their inverses preserve the commutator [B, A] = B A B^{-1} A^{-1}
exactly (not just up to conjugacy), and act on the slope columns by the
elementary matrices [[1,0],[1,1]] and [[1,1],[0,1]].  Decomposing an SL(2,Z)
matrix with first column (p, q) into these moves therefore yields, for every
slope, a marking (A_s, B_s) whose first generator represents the slope and
whose commutator is the *same* peripheral element; this is what lets all
pants in a McShane sum share one alpha.

Cusp pants are emitted sign-normalized: alpha = -[B,A] (trace +2, honest
unipotent), beta = -A_s, gamma = [A,B] A_s^{-1}, so that alpha embeds to a
pure vertical Heisenberg translation and the attracting-multiplier product
m(gamma) m(beta) carries the parity sign of the cusp gap closed form.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

from . import algebra, pants as pants_mod
from .algebra import INF, Isometry, SL2C, SL2R, SU21, is_inf
from .errors import (
    ConstructionError,
    DomainError,
    PreconditionError,
    UsageError,
)
from .pants import PantsTriple

__all__ = [
    "Slope",
    "MarkovTriple",
    "Representation",
    "farey_neighbors",
    "farey_expand",
    "trace_for_slope",
    "build_fuchsian",
    "build_quasifuchsian",
    "build_holed_torus",
    "embed_cfuchsian",
    "fibered_character",
    "fibered_fixed_points",
    "pants_for_slope",
    "marking_for_slope",
    "mirror_marking",
    "parse_rep_spec",
    "monodromy_matrix",
    "monodromy_slope_action",
    "FundamentalDomain",
    "OVERFLOW_CAP",
]

MARKOV_TOL = 1e-10
OVERFLOW_CAP = 1e120


@dataclass(frozen=True, order=True)
class Slope:
    """Primitive slope p/q, canonical with q > 0 or (p, q) = (1, 0)."""

    p: int
    q: int

    @classmethod
    def make(cls, p: int, q: int) -> "Slope":
        if p == q == 0:
            raise DomainError("slope (0,0) is not primitive")
        if gcd(abs(p), abs(q)) != 1:
            raise DomainError(f"({p},{q}) is not primitive")
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        return cls(p, q)

    @property
    def is_infinity(self) -> bool:
        return self.q == 0

    def value(self):
        return INF if self.q == 0 else Fraction(self.p, self.q)

    def __str__(self):
        return f"{self.p}/{self.q}"


def _det(u, v) -> int:
    return u[0] * v[1] - u[1] * v[0]


def are_farey_neighbors(s1: Slope, s2: Slope) -> bool:
    return abs(_det((s1.p, s1.q), (s2.p, s2.q))) == 1


def _cone_of(s: Slope):
    """(u, v, target) for the Stern-Brocot cone containing s."""
    if s.p > 0 and s.q >= 0:
        return (0, 1), (1, 0), (s.p, s.q)
    if s.p <= 0 and s.q > 0:
        if s.p == 0:
            raise PreconditionError("0/1 is a cone generator, not a mediant")
        return (1, 0), (0, -1), (-s.p, -s.q)
    raise PreconditionError(f"slope {s} is a cone generator, not a mediant")


def farey_neighbors(s: Slope) -> tuple[Slope, Slope]:
    """The Farey parents (left, right) whose mediant is s."""
    u, v, t = _cone_of(s)
    guard = 0
    while True:
        guard += 1
        if guard > 10_000:
            raise ConstructionError(f"Farey descent failed for {s}")
        m = (u[0] + v[0], u[1] + v[1])
        if m == t:
            return Slope.make(*u), Slope.make(*v)
        D = _det(u, v)
        a = _det(t, v) // D
        b = _det(u, t) // D
        if a > b:
            v = m
        else:
            u = m


@dataclass(frozen=True)
class MarkovTriple:
    """Traces (x, y, z) of (A, B, AB)."""

    x: complex
    y: complex
    z: complex

    @property
    def boundary_trace(self) -> complex:
        x, y, z = self.x, self.y, self.z
        return x * x + y * y + z * z - x * y * z - 2

    @property
    def markov_residual(self) -> float:
        x, y, z = self.x, self.y, self.z
        return abs(x * x + y * y + z * z - x * y * z)

    @property
    def is_cusp(self) -> bool:
        return self.markov_residual <= MARKOV_TOL

    def as_tuple(self):
        return (self.x, self.y, self.z)


FUCHSIAN = "fuchsian"
QUASIFUCHSIAN = "quasifuchsian"
HOLED = "holed"
CFUCHSIAN = "cfuchsian-su21"
FIBERED = "fibered"


@dataclass
class Representation:
    """Two-generator representation with peripheral element alpha = [B,A]
    (sign-normalized to trace +2 for cusp flavors)."""

    A: Isometry
    B: Isometry
    target: str
    flavor: str
    markov: MarkovTriple
    alpha: Isometry
    spec: str = ""
    monodromy: str = ""
    source: "Representation | None" = None

    def __post_init__(self):
        if self.flavor != CFUCHSIAN:
            tr = (self.A.trace, self.B.trace, (self.A @ self.B).trace)
            for got, want in zip(tr, self.markov.as_tuple()):
                if abs(got - want) > 1e-8:
                    raise ConstructionError(f"trace {got} != Markov value {want}")
        is_cusp = self.flavor in (FUCHSIAN, QUASIFUCHSIAN, CFUCHSIAN, FIBERED) and self.markov.is_cusp
        alpha_parabolic = self.alpha.classify() == algebra.PARABOLIC
        if is_cusp != alpha_parabolic:
            raise ConstructionError("alpha must be parabolic exactly for cusp flavors")
        self._mirror = None

    @property
    def is_cusp(self) -> bool:
        return self.markov.is_cusp

    def mirror(self) -> "Representation":
        """Marking with both generator classes reversed and the same alpha.

        (A~, B~) = (B A^{-1} B^{-1}, B A B^{-1} A^{-1} B^{-1}) has
        [B~, A~] = [B, A] exactly, tr(A~ B~) = tr(AB), and slope columns
        negated, so pants built from it are the ordered mirrors.
        """
        if self._mirror is None:
            Ae, Be = self.A.entries, self.B.entries
            Ai, Bi = algebra.sl2_inverse(Ae), algebra.sl2_inverse(Be)
            A2 = Isometry(Be @ Ai @ Bi, self.A.group)
            B2 = Isometry(Be @ Ae @ Bi @ Ai @ Bi, self.B.group)
            self._mirror = Representation(
                A=A2, B=B2, target=self.target, flavor=self.flavor,
                markov=self.markov, alpha=self.alpha, spec=self.spec,
                monodromy=self.monodromy, source=self.source,
            )
            self._mirror._mirror = self
        return self._mirror


def _commutator(A: Isometry, B: Isometry) -> Isometry:
    return B @ A @ B.inv() @ A.inv()


def _conjugate_pair(A, B, h):
    return h @ A @ h.inv(), h @ B @ h.inv()


def _torus_matrices(x, y, z, group):
    """tr A = x, tr B = y, tr AB = z; the classical normal form."""
    z = complex(z)
    xi = (z + cmath.sqrt(z * z - 4)) / 2
    if abs(xi) < 1:
        xi = (z - cmath.sqrt(z * z - 4)) / 2
    A = np.array([[x, -1], [1, 0]], dtype=complex)
    B = np.array([[0, xi], [-1 / xi, y]], dtype=complex)
    if group == SL2R:
        A, B = A.real.astype(complex), B.real.astype(complex)
    return Isometry(A, group), Isometry(B, group)


def _normalize_peripheral(A: Isometry, B: Isometry):
    """Conjugate the pair so the commutator fixes INF (and 0 when hyperbolic)."""
    K = _commutator(A, B)
    group = A.group if A.group == B.group else SL2C
    if K.classify() == algebra.PARABOLIC:
        fp = algebra.parabolic_fixed_point(K)
        if is_inf(fp):
            return A, B
        h = Isometry([[0, 1], [-1, fp]], SL2C if fp.imag else group)
        return _conjugate_pair(A, B, h)
    att, rep = algebra.sl2_fixed_points(K)
    if is_inf(att) and rep == 0:
        return A, B
    h = _mobius_to_zero_infinity(att, rep, group)
    return _conjugate_pair(A, B, h)


def _mobius_to_zero_infinity(att, rep, group):
    """A Moebius map sending att -> INF and rep -> 0."""
    if is_inf(att):
        # z -> z - rep
        M = [[1, -rep], [0, 1]]
    elif is_inf(rep):
        # z -> 1/(z - att)
        M = [[0, 1], [1, -att]]
    else:
        # z -> (z - rep)/(z - att), normalized to det 1
        d = att - rep
        M = np.array([[1, -rep], [1, -att]], dtype=complex) / cmath.sqrt(-d)
    M = np.asarray(M, dtype=complex)
    M = M / cmath.sqrt(np.linalg.det(M))
    g = SL2C if np.max(np.abs(M.imag)) > 1e-12 else group
    return Isometry(M, g)


def build_fuchsian(x: float, y: float, z: float) -> Representation:
    """Cusped torus representation in SL(2,R) with tr[A,B] = -2."""
    for v in (x, y, z):
        if not (isinstance(v, (int, float)) and v > 2):
            raise ConstructionError(f"need real traces > 2, got {v}")
    triple = MarkovTriple(complex(x), complex(y), complex(z))
    if not triple.is_cusp:
        raise ConstructionError(
            f"x^2+y^2+z^2 != xyz (residual {triple.markov_residual}); not a cusped torus"
        )
    A, B = _torus_matrices(x, y, z, SL2R)
    A, B = _normalize_peripheral(A, B)
    alpha = -_commutator(A, B)
    return Representation(A=A, B=B, target=SL2R, flavor=FUCHSIAN,
                          markov=triple, alpha=alpha, spec=f"markov:{_fmt(x)},{_fmt(y)},{_fmt(z)}")


def build_quasifuchsian(x: complex, y: complex, branch: str = "near") -> Representation:
    """Type-preserving SL(2,C) representation; z solves z^2 - xyz + x^2 + y^2 = 0.

    branch picks the root: "near" is the one of smaller modulus (continuous
    from the Fuchsian locus around (3,3,3)), "far" the other.
    """
    x, y = complex(x), complex(y)
    disc = (x * y) ** 2 - 4 * (x * x + y * y)
    s = cmath.sqrt(disc)
    if abs(disc) < 1e-10:
        import warnings

        warnings.warn("discriminant near zero: branch choice unstable")
    roots = sorted([(x * y + s) / 2, (x * y - s) / 2], key=abs)
    z = roots[0] if branch == "near" else roots[1]
    triple = MarkovTriple(x, y, z)
    A, B = _torus_matrices(x, y, z, SL2C)
    A, B = _normalize_peripheral(A, B)
    alpha = -_commutator(A, B)
    return Representation(A=A, B=B, target=SL2C, flavor=QUASIFUCHSIAN,
                          markov=triple, alpha=alpha,
                          spec=f"markov:{_fmt(x)},{_fmt(y)}")


def build_holed_torus(x, y, z) -> Representation:
    """One-holed torus: boundary trace x^2+y^2+z^2-xyz-2 beyond -2."""
    triple = MarkovTriple(complex(x), complex(y), complex(z))
    bt = triple.boundary_trace
    if abs(bt) <= 2 + MARKOV_TOL:
        raise ConstructionError(f"boundary trace {bt} is not hyperbolic")
    real = all(abs(complex(v).imag) < 1e-14 for v in (x, y, z))
    group = SL2R if real else SL2C
    if real and bt.real >= -2:
        raise ConstructionError(f"boundary trace {bt} must be < -2 for the real case")
    A, B = _torus_matrices(x, y, z, group)
    A, B = _normalize_peripheral(A, B)
    alpha = _commutator(A, B)
    return Representation(A=A, B=B, target=group, flavor=HOLED,
                          markov=triple, alpha=alpha,
                          spec=f"markov:{_fmt(x)},{_fmt(y)},{_fmt(z)}")


def build_fibered(triple: MarkovTriple, word: str) -> Representation:
    A, B = _torus_matrices(triple.x, triple.y, triple.z, SL2C)
    A, B = _normalize_peripheral(A, B)
    alpha = -_commutator(A, B)
    return Representation(A=A, B=B, target=SL2C, flavor=FIBERED,
                          markov=triple, alpha=alpha,
                          spec=f"monodromy:{word}", monodromy=word)


def embed(M: Isometry) -> Isometry:
    """C-Fuchsian embedding [[a,b],[c,d]] -> [[a,0,ib],[0,1,0],[-ic,0,d]].

    Exactly form-preserving; on the vertical chain the boundary action is the
    source Moebius action in the axis coordinate, so cross-ratios and periods
    are preserved on the nose.
    """
    E = M.entries
    if np.max(np.abs(E.imag)) > 1e-9 * max(1.0, float(np.max(np.abs(E)))):
        raise PreconditionError("C-Fuchsian embedding needs real source matrices")
    a, b, c, d = E[0, 0].real, E[0, 1].real, E[1, 0].real, E[1, 1].real
    return Isometry(
        [[a, 0, 1j * b], [0, 1, 0], [-1j * c, 0, d]],
        SU21,
    )


def embed_cfuchsian(rep: Representation) -> Representation:
    """Embed a Fuchsian (or holed real) representation into SU(2,1)."""
    if rep.target != SL2R:
        raise PreconditionError("embed_cfuchsian needs an SL(2,R) source")
    A, B = embed(rep.A), embed(rep.B)
    alpha = embed(rep.alpha)
    return Representation(A=A, B=B, target=SU21, flavor=CFUCHSIAN,
                          markov=rep.markov, alpha=alpha,
                          spec=f"embed:su21:{rep.spec}", source=rep)


# ---------------------------------------------------------------------------
# traces along the Farey tree


def trace_for_slope(rep_or_triple, s: Slope) -> complex:
    """Trace of the slope-s curve by Vieta descent from the base triple."""
    triple = rep_or_triple.markov if isinstance(rep_or_triple, Representation) else rep_or_triple
    x, y, z = triple.as_tuple()
    if s == Slope(1, 0):
        return x
    if s == Slope(0, 1):
        return y
    u, v, t = _cone_of(s)
    if u == (0, 1):
        tl, tr, tm = y, x, z
    else:
        tl, tr, tm = x, y, x * y - z
    guard = 0
    while True:
        guard += 1
        if guard > 10_000:
            raise ConstructionError(f"trace descent failed for {s}")
        m = (u[0] + v[0], u[1] + v[1])
        if m == t:
            return tm
        D = _det(u, v)
        a = _det(t, v) // D
        b = _det(u, t) // D
        if abs(tm) > OVERFLOW_CAP:
            raise ConstructionError(f"trace overflow beyond {OVERFLOW_CAP} for {s}")
        if a > b:
            v, tl, tr, tm = m, tl, tm, tl * tm - tr
        else:
            u, tl, tr, tm = m, tm, tr, tm * tr - tl


def farey_expand(triple: MarkovTriple, threshold: float, prune=None, arc_filter=None):
    """All slopes with |trace| <= threshold, as a sorted list of (Slope, trace).

    The two base slopes come first; both cones are walked depth-first with an
    explicit stack.  `prune(mediant_trace)` is called on every subtree root
    whose trace exceeds the threshold (tail bookkeeping); `arc_filter`
    restricts the walk (used for mapping-torus fundamental domains) and
    receives cone endpoint vectors.  The output is sorted by
    (|trace|, q, p): a deterministic canonical order.
    """
    x, y, z = triple.as_tuple()
    out = []
    for s, t in ((Slope(1, 0), x), (Slope(0, 1), y)):
        if abs(t) <= threshold and (arc_filter is None or arc_filter.contains_slope(s)):
            out.append((s, t))
    cones = [((0, 1), (1, 0), y, x, z), ((1, 0), (0, -1), x, y, x * y - z)]
    for root in cones:
        stack = [root]
        while stack:
            u, v, tl, tr, tm = stack.pop()
            if arc_filter is not None and not arc_filter.cone_may_meet(u, v):
                continue
            m = (u[0] + v[0], u[1] + v[1])
            s = Slope.make(*m)
            inside = arc_filter is None or arc_filter.contains_slope(s)
            if abs(tm) > threshold:
                if inside and prune is not None:
                    prune(tm)
                if arc_filter is None:
                    continue  # traces grow monotonically down Fuchsian-type cones
                if arc_filter.cone_covered(u, v) or abs(tm) > OVERFLOW_CAP:
                    continue  # deep inside the domain traces only keep growing
            elif inside:
                out.append((s, tm))
            stack.append((u, m, tl, tm, tl * tm - tr))
            stack.append((m, v, tm, tr, tm * tr - tl))
    out.sort(key=lambda r: (abs(r[1]), r[0].q, r[0].p))
    return out


# ---------------------------------------------------------------------------
# markings and pants


def marking_for_slope(rep: Representation, s: Slope):
    """(A_s, B_s) with A_s representing slope s and [B_s, A_s] = [B, A].

    Stern-Brocot pair walk: a pair (U, V) with slope columns (cu, cv)
    descends through (U, V U) and (U V, V); both moves preserve [U, V]
    exactly, and the element for the mediant column cu + cv is V U.  At the
    target mediant the marking is (A_s, B_s) = (V U, U) with
    [B_s, A_s] = [U, V U] = [U, V].  Starting pairs: (B, A) with columns
    ((0,1), (1,0)) for positive slopes, and (B A^{-k}, A) with columns
    ((-k,1), (1,0)) for slopes in (-k, 0]; both carry [U, V] = [B, A].  All
    descent steps are plain products (no inverses), so matrix growth is
    monotone and there is no cancellation on deep slopes.
    """
    if s == Slope(1, 0):
        return rep.A, rep.B
    group = rep.A.group if rep.A.group == rep.B.group else SL2C
    A, B = rep.A.entries, rep.B.entries
    p, q = s.p, s.q
    if p > 0:
        U, cu = B, (0, 1)
        V, cv = A, (1, 0)
    else:
        k = (-p) // q + 1
        Ak = np.linalg.matrix_power(algebra.sl2_inverse(A), k)
        U, cu = B @ Ak, (-k, 1)
        V, cv = A, (1, 0)
    t = (p, q)
    guard = 0
    while True:
        guard += 1
        if guard > 100_000:
            raise ConstructionError(f"pair walk failed for slope {s}")
        D = _det(cu, cv)
        a = _det(t, cv) // D
        b = _det(cu, t) // D
        if a == b == 1:
            As = V @ U
            break
        if a > b:
            V, cv = V @ U, (cu[0] + cv[0], cu[1] + cv[1])
        else:
            U, cu = U @ V, (cu[0] + cv[0], cu[1] + cv[1])
    As = As / cmath.sqrt(complex(np.linalg.det(As)))
    Bs = U / cmath.sqrt(complex(np.linalg.det(U)))
    if group == SL2R:
        As, Bs = As.real.astype(complex), Bs.real.astype(complex)
    return Isometry(As, group), Isometry(Bs, group)


def mirror_marking(A: Isometry, B: Isometry):
    """The elliptic-involution marking: same slope class inverted, same [B,A]."""
    group = A.group if A.group == B.group else SL2C
    Ae, Be = A.entries, B.entries
    Ai, Bi = algebra.sl2_inverse(Ae), algebra.sl2_inverse(Be)
    A2 = Be @ Ai @ Bi
    B2 = Be @ Ae @ Bi @ Ai @ Bi
    d1, d2 = complex(np.linalg.det(A2)), complex(np.linalg.det(B2))
    if abs(d1 - 1) > 0.1 or abs(d2 - 1) > 0.1:
        raise ConstructionError("mirror marking lost precision for this slope")
    A2 = A2 / cmath.sqrt(d1)
    B2 = B2 / cmath.sqrt(d2)
    if group == SL2R:
        A2, B2 = A2.real.astype(complex), B2.real.astype(complex)
    return Isometry(A2, group), Isometry(B2, group)


def _pants_from_marking(rep: Representation, A_s: Isometry, label: str) -> PantsTriple:
    # [B_s, A_s] = [B, A] exactly, so the shared rep-level alpha closes the
    # relation; recomputing the commutator from a deep marking would only
    # add cancellation noise
    if rep.target == SU21:
        raise DomainError("embedded pants are built from the 2x2 source")
    alpha = rep.alpha
    beta = -A_s if rep.is_cusp else A_s
    gamma = alpha.inv() @ beta.inv()
    return PantsTriple(alpha, gamma, beta, kind=pants_mod.INTERIOR, label=label)


def pants_for_slope(rep: Representation, s: Slope):
    """The two ordered pants (P, mirror P) for slope s, sharing rep.alpha.

    For C-Fuchsian representations the 2x2 source pants are built first and
    embedded matrix-by-matrix (the embedding is a homomorphism, so the
    relation alpha*gamma*beta = 1 survives exactly).
    """
    if rep.flavor == CFUCHSIAN:
        P2, M2 = pants_for_slope(rep.source, s)

        def lift(P):
            return PantsTriple(embed(P.alpha), embed(P.gamma), embed(P.beta),
                               kind=P.kind, label=P.label)

        return lift(P2), lift(M2)
    A_s, _B_s = marking_for_slope(rep, s)
    P = _pants_from_marking(rep, A_s, label=str(s))
    # the ordered mirror: same walk in the class-reversed marking (the walk
    # stays positive-move, so deep slopes keep full precision)
    A_m, _B_m = marking_for_slope(rep.mirror(), s)
    Pm = _pants_from_marking(rep, A_m, label=f"{s}*")
    return P, Pm


# ---------------------------------------------------------------------------
# fibered characters and monodromy action


def _move_R(v):
    x, y, z = v
    return (x, z, x * z - y)


def _move_L(v):
    x, y, z = v
    return (z, y, z * y - x)


_MOVES = {"R": _move_R, "L": _move_L}
_SLOPE_MOVES = {"R": np.array([[1, -1], [0, 1]]), "L": np.array([[1, 0], [-1, 1]])}


def _trace_map(word: str):
    def F(v):
        for ch in word:
            v = _MOVES[ch](v)
        return v

    return F


def monodromy_matrix(word: str) -> np.ndarray:
    """Homological action of the word on curve classes (letters applied left
    to right; slope labels transform by S = S_{w_n} ... S_{w_1})."""
    S = np.eye(2, dtype=int)
    for ch in word:
        S = _SLOPE_MOVES[ch] @ S
    return S


def monodromy_slope_action(word: str, s: Slope) -> Slope:
    S = monodromy_matrix(word)
    p, q = int(S[0, 0] * s.p + S[0, 1] * s.q), int(S[1, 0] * s.p + S[1, 1] * s.q)
    return Slope.make(p, q)


def _validate_monodromy(word: str):
    if not word or any(ch not in "RL" for ch in word):
        raise UsageError(f"monodromy word must be nonempty over {{R, L}}: {word!r}")
    if "R" not in word or "L" not in word:
        raise UsageError("monodromy must contain both letters (pseudo-Anosov)")


def fibered_fixed_points(word: str, seed_center: complex = 3.0):
    """All non-real cusped fixed points of the word's trace map.

    Gauss-Newton from a 5x5x5 seed grid around (3,3,3) with +-2i
    perturbations; solutions deduplicated by rounding, reality filtered at
    1e-6, and the cusp equation imposed alongside the fixed-point equations.
    """
    _validate_monodromy(word)
    F = _trace_map(word)

    def H(v):
        fx = F(tuple(v))
        markov = v[0] ** 2 + v[1] ** 2 + v[2] ** 2 - v[0] * v[1] * v[2]
        return np.array([fx[0] - v[0], fx[1] - v[1], fx[2] - v[2], markov], dtype=complex)

    def jac(v):
        h = 1e-7
        cols = []
        base = H(v)
        for i in range(3):
            vv = v.copy()
            vv[i] += h
            cols.append((H(vv) - base) / h)
        return np.column_stack(cols), base

    offsets = [0.0, -1.0, 1.0, 2j, -2j]
    found = []
    for dx in offsets:
        for dy in offsets:
            for dz in offsets:
                v = np.array([seed_center + dx, seed_center + dy, seed_center + dz], dtype=complex)
                ok = False
                for _ in range(60):
                    Jm, base = jac(v)
                    if np.linalg.norm(base) < 1e-12:
                        ok = True
                        break
                    try:
                        step, *_ = np.linalg.lstsq(Jm, -base, rcond=None)
                    except np.linalg.LinAlgError:
                        break
                    v = v + step
                    if not np.all(np.isfinite(v)) or np.max(np.abs(v)) > 1e6:
                        break
                if not ok:
                    continue
                if np.max(np.abs(v.imag)) < 1e-6:
                    continue  # real (Fuchsian-locus) solutions are excluded
                if np.min(np.abs(v)) < 1e-9:
                    continue
                key = tuple(np.round(v, 8))
                if key not in [f[0] for f in found]:
                    found.append((key, MarkovTriple(*[complex(c) for c in v])))
    return [t for _, t in found]


def fibered_character(word: str) -> MarkovTriple:
    """Canonical non-real fixed triple (Im z > 0 preferred)."""
    cands = fibered_fixed_points(word)
    if not cands:
        raise ConstructionError(f"no non-real fixed character found for {word!r}")
    cands.sort(key=lambda t: (-t.z.imag, abs(t.z)))
    return cands[0]


class FundamentalDomain:
    """Orbit representatives for the monodromy action on slopes.

    The slope action S is a hyperbolic element of SL(2,Z); its two fixed
    directions are irrational.  On each complementary arc the domain is the
    half-open stretch [anchor, S^power(anchor)) in the flow direction, with
    the simplest rational (or the slope 1/0) as anchor.  Pieces are plain
    sigma-intervals: every Farey cone is a sigma-interval too, and the fixed
    directions stay at positive distance from the domain, so both membership
    and cone pruning reduce to interval arithmetic (exact Fractions at the
    rational endpoints, floats with margin in the interior).
    """

    def __init__(self, word: str, power: int = 1):
        _validate_monodromy(word)
        if power < 1:
            raise PreconditionError("power must be >= 1")
        self.word = word
        self.power = power
        S = monodromy_matrix(word)
        tr = int(S[0, 0] + S[1, 1])
        if abs(tr) <= 2:
            raise PreconditionError(f"monodromy action is not Anosov (trace {tr})")
        if tr < 0:
            S = -S
            tr = -tr
        self.S = S
        a, b, c, d = (int(S[i, j]) for i in (0, 1) for j in (0, 1))
        disc = (a - d) ** 2 + 4 * b * c
        if math.isqrt(disc) ** 2 == disc:
            raise PreconditionError("monodromy action is reducible over Q")
        sq = math.sqrt(disc)
        if c == 0:
            raise PreconditionError("monodromy action fixes the slope 1/0")
        self.fix_lo, self.fix_hi = sorted((((a - d) + sq) / (2 * c), ((a - d) - sq) / (2 * c)))
        self.pieces = self._build_pieces()

    # -- slope action ----------------------------------------------------

    def apply(self, s: Slope, k: int = 1) -> Slope:
        M = np.linalg.matrix_power(self.S, abs(k)).astype(object)
        if k < 0:
            M = np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]], dtype=object)
        p = int(M[0, 0] * s.p + M[0, 1] * s.q)
        q = int(M[1, 0] * s.p + M[1, 1] * s.q)
        return Slope.make(p, q)

    # -- construction ------------------------------------------------------

    def _build_pieces(self):
        """Each piece: (includes_inf, closed_end, open_end, lo, hi) with exact
        Fraction endpoints; (lo, hi) the float hull used for cone pruning."""
        pieces = []
        k = self.power
        # arc between the fixed directions
        a_mid = _simplest_slope_between(self.fix_lo, self.fix_hi)
        b_mid = self.apply(a_mid, k)
        fa, fb = a_mid.value(), b_mid.value()
        if not (self.fix_lo < float(fb) < self.fix_hi):
            raise ConstructionError("anchor image escaped the middle arc")
        pieces.append(_FdPiece(False, fa, fb))
        # arc through infinity, anchored at the slope 1/0
        a_inf = Slope(1, 0)
        b_inf = self.apply(a_inf, k)
        c_inf = self.apply(a_inf, 2 * k)
        fb, fc = b_inf.value(), c_inf.value()
        # flow continues a -> b -> c; the stretch from infinity to b is the
        # unbounded side of b not containing c
        if fc > fb:
            pieces.append(_FdPiece(True, None, fb, lo=-math.inf))
        else:
            pieces.append(_FdPiece(True, None, fb, hi=math.inf))
        return pieces

    # -- queries -----------------------------------------------------------

    def contains_slope(self, s: Slope) -> bool:
        return any(p.contains(s) for p in self.pieces)

    def representative(self, s: Slope) -> Slope:
        cur = s
        for _ in range(512):
            if self.contains_slope(cur):
                return cur
            cur = self.apply(cur, 1)
        cur = s
        for _ in range(512):
            if self.contains_slope(cur):
                return cur
            cur = self.apply(cur, -1)
        raise ConstructionError(f"orbit of {s} never met the fundamental domain")

    def cone_may_meet(self, u, v) -> bool:
        """Whether the open cone between direction vectors u, v can meet the
        domain (conservative: errs toward True)."""
        lo, hi = _cone_interval(u, v)
        return any(p.overlaps(lo, hi) for p in self.pieces)

    def cone_covered(self, u, v) -> bool:
        """Whole cone inside a single piece hull (traces grow monotonically
        toward rational directions there, so a big-trace subtree can stop)."""
        lo, hi = _cone_interval(u, v)
        return any(p.covers(lo, hi) for p in self.pieces)


class _FdPiece:
    """Half-open stretch of slopes: [closed_end, open_end) in sigma-order,
    optionally with the slope 1/0 attached and one unbounded side."""

    def __init__(self, includes_inf, closed_end, open_end, lo=None, hi=None):
        self.includes_inf = includes_inf
        self.closed_end = closed_end  # Fraction or None (infinity anchor)
        self.open_end = open_end  # Fraction
        if lo is None and hi is None:
            fa, fb = float(closed_end), float(open_end)
            self.lo, self.hi = min(fa, fb), max(fa, fb)
        else:
            self.lo = float(open_end) if lo is None else lo
            self.hi = float(open_end) if hi is None else hi

    def contains(self, s: Slope) -> bool:
        if s.is_infinity:
            return self.includes_inf
        sig = s.value()
        if sig == self.open_end:
            return False
        if self.closed_end is not None and sig == self.closed_end:
            return True
        if self.lo == -math.inf:
            return sig < self.open_end
        if self.hi == math.inf:
            return sig > self.open_end
        lo, hi = sorted((self.closed_end, self.open_end))
        return lo < sig < hi

    def overlaps(self, lo: float, hi: float, margin: float = 1e-9) -> bool:
        if self.includes_inf and (lo == -math.inf or hi == math.inf):
            return True
        return hi >= self.lo - margin and lo <= self.hi + margin

    def covers(self, lo: float, hi: float, margin: float = 1e-9) -> bool:
        return lo >= self.lo - margin and hi <= self.hi + margin


def _cone_interval(u, v):
    """Float sigma-interval hull of the open cone spanned by u and v."""
    vals = []
    for w in (u, v):
        if w[1] == 0:
            continue
        vals.append(w[0] / w[1])
    if len(vals) == 2:
        lo, hi = sorted(vals)
        return lo, hi
    if not vals:
        return -math.inf, math.inf
    f = vals[0]
    # one endpoint is the direction of 1/0: the cone is unbounded; its side
    # is the sign cone actually used by farey_expand
    if u[1] == 0:
        other = v
    else:
        other = u
    # positive combinations of (1,0)-type and the finite direction sweep away
    # from f toward +inf when the finite direction has positive q-sign
    if (u[1] == 0 and u[0] > 0 and v[1] > 0) or (v[1] == 0 and v[0] > 0 and u[1] > 0):
        return f, math.inf
    return -math.inf, f


def _simplest_slope_between(lo: float, hi: float) -> Slope:
    """Stern-Brocot search for the simplest rational strictly inside (lo, hi)."""
    # integers first
    n = math.floor(lo) + 1
    while n <= math.ceil(hi):
        if lo < n < hi:
            return Slope.make(n, 1)
        n += 1
    u, v = (math.floor(lo), 1), (math.floor(lo) + 1, 1)
    for _ in range(10_000):
        m = (u[0] + v[0], u[1] + v[1])
        sigma = m[0] / m[1]
        if lo < sigma < hi:
            return Slope.make(*m)
        if sigma <= lo:
            u = m
        else:
            v = m
    raise ConstructionError(f"no simple rational found in ({lo}, {hi})")


# ---------------------------------------------------------------------------
# spec strings


_COMPLEX_RE = re.compile(r"^[0-9eE+\-.ij]+$")


def _parse_complex(tok: str) -> complex:
    tok = tok.strip().replace(" ", "")
    if not tok or not _COMPLEX_RE.match(tok):
        raise UsageError(f"cannot parse complex literal {tok!r}")
    tok = tok.replace("i", "j")
    try:
        return complex(tok)
    except ValueError as exc:
        raise UsageError(f"cannot parse complex literal {tok!r}") from exc


def _fmt(v) -> str:
    v = complex(v)
    if v.imag == 0:
        return f"{v.real:g}"
    return f"{v.real:g}{v.imag:+g}i"


def parse_rep_spec(spec: str) -> Representation:
    """Build a representation from a spec string.

    Formats: markov:x,y,z (three traces), markov:x,y (quasi-Fuchsian, z by
    continuity), monodromy:RL..., embed:su21:markov:...
    """
    spec = spec.strip()
    if spec.startswith("embed:su21:"):
        inner = parse_rep_spec(spec[len("embed:su21:"):])
        return embed_cfuchsian(inner)
    if spec.startswith("monodromy:"):
        word = spec[len("monodromy:"):]
        _validate_monodromy(word)
        return build_fibered(fibered_character(word), word)
    if spec.startswith("markov:"):
        toks = spec[len("markov:"):].split(",")
        vals = [_parse_complex(t) for t in toks]
        if len(vals) == 2:
            return build_quasifuchsian(vals[0], vals[1])
        if len(vals) != 3:
            raise UsageError("markov spec needs 2 or 3 trace values")
        x, y, z = vals
        triple = MarkovTriple(x, y, z)
        real = all(abs(v.imag) < 1e-14 for v in vals)
        if triple.is_cusp:
            if real:
                return build_fuchsian(x.real, y.real, z.real)
            A, B = _torus_matrices(x, y, z, SL2C)
            A, B = _normalize_peripheral(A, B)
            return Representation(A=A, B=B, target=SL2C, flavor=QUASIFUCHSIAN,
                                  markov=triple, alpha=-_commutator(A, B),
                                  spec=spec)
        return build_holed_torus(x, y, z)
    raise UsageError(f"unknown representation spec {spec!r}")
