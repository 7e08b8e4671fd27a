"""Complex scalars, small matrices, the Hermitian form, and isometry spectra.

Everything downstream (cross-ratios, gap functions, identity sums) reduces to
2x2 and 3x3 complex matrix algebra done here: the signature-(2,1) Hermitian
form in its antidiagonal-block shape, eigenvalue/eigenvector extraction for
SU(2,1) loxodromics, and fixed points / complex lengths for SL(2,C).

Conventions
-----------
* The Hermitian form is <z,w> = w* J z with J = [[0,0,1],[0,I,0],[1,0,0]].
* Loxodromic SU(2,1) spectra are written (e^lam, e^(conj(lam)-lam),
  e^(-conj(lam))) with lam in the strip S = {Re > 0, Im in (-pi, pi]}.
* Complex lengths l of SL(2,C) loxodromics satisfy e^l = (multiplier at the
  attracting fixed point), Re l > 0, Im l in (-pi, pi].
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ClassificationError, DomainError, IllConditionedError

__all__ = [
    "J",
    "INF",
    "Isometry",
    "ProjectiveNullVector",
    "EigenData",
    "herm_product",
    "su21_eigendata",
    "su21_frame",
    "sl2_fixed_points",
    "sl2_complex_length",
    "sl2_multiplier",
    "mobius_apply",
    "sl2_inverse",
    "E_matrix",
]

J = np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]], dtype=complex)

DET_TOL = 1e-12
FORM_TOL = 1e-10
REAL_TOL = 1e-12
NULL_TOL = 1e-9
PARABOLIC_TRACE_TOL = 1e-10
UNIT_MODULUS_BAND = 1e-8

SL2R = "SL2R"
SL2C = "SL2C"
SU21 = "SU21"

LOXODROMIC = "loxodromic"
PARABOLIC = "parabolic"
ELLIPTIC = "elliptic"
IDENTITY = "identity"


class _Infinity:
    """Point at infinity of the Riemann sphere / Heisenberg compactification."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"


INF = _Infinity()


def is_inf(z) -> bool:
    return z is INF


class Isometry:
    """A 2x2 or 3x3 unimodular matrix tagged with its target group.

    Instances are immutable; `entries` is a read-only complex array.
    """

    def __init__(self, entries, group: str):
        M = np.array(entries, dtype=complex)
        if group in (SL2R, SL2C):
            if M.shape != (2, 2):
                raise DomainError(f"{group} isometry must be 2x2, got {M.shape}")
        elif group == SU21:
            if M.shape != (3, 3):
                raise DomainError("SU21 isometry must be 3x3")
        else:
            raise DomainError(f"unknown group tag {group!r}")
        scale = max(1.0, float(np.max(np.abs(M))))
        det = np.linalg.det(M)
        if abs(det - 1) > DET_TOL * scale * scale:
            raise DomainError(f"determinant {det} is not 1")
        if group == SL2R and np.max(np.abs(M.imag)) > REAL_TOL * scale:
            raise DomainError("SL2R entries must be real")
        if group == SU21:
            resid = np.max(np.abs(M.conj().T @ J @ M - J))
            if resid > FORM_TOL * scale * scale:
                raise DomainError(f"form preservation residual {resid}")
        M.setflags(write=False)
        self.entries = M
        self.group = group
        self._class = None

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def inv(self) -> "Isometry":
        M = self.entries
        if self.group == SU21:
            # J-unitarity gives the inverse in closed form
            return Isometry(J @ M.conj().T @ J, self.group)
        a, b, c, d = M[0, 0], M[0, 1], M[1, 0], M[1, 1]
        return Isometry([[d, -b], [-c, a]], self.group)

    def __matmul__(self, other: "Isometry") -> "Isometry":
        if self.group == other.group:
            group = self.group
        elif {self.group, other.group} == {SL2R, SL2C}:
            group = SL2C
        else:
            raise DomainError(f"cannot compose {self.group} with {other.group}")
        return Isometry(self.entries @ other.entries, group)

    def __neg__(self) -> "Isometry":
        if self.group == SU21:
            raise DomainError("-M is not unimodular for 3x3")
        return Isometry(-self.entries, self.group)

    def conjugate_by(self, g: "Isometry") -> "Isometry":
        return g @ self @ g.inv()

    def classify(self) -> str:
        if self._class is None:
            self._class = _classify(self)
        return self._class

    def __repr__(self):
        return f"Isometry({self.group}, tr={self.trace:.6g})"


def _classify(iso: Isometry) -> str:
    M = iso.entries
    n = M.shape[0]
    if np.max(np.abs(M - np.eye(n))) < 1e-12 or (
        n == 2 and np.max(np.abs(M + np.eye(2))) < 1e-12
    ):
        return IDENTITY
    if n == 2:
        t = iso.trace
        if abs(t * t - 4) < PARABOLIC_TRACE_TOL:
            return PARABOLIC
        if iso.group == SL2R or abs(t.imag) < 1e-12:
            return LOXODROMIC if abs(t.real) > 2 else ELLIPTIC
        return LOXODROMIC
    # SU(2,1): classify by eigenvalue moduli with a band around 1.  Cubic
    # roots of a clustered spectrum carry O(eps^(1/3)) noise, so the tight
    # band is only trusted once the roots are well separated.
    roots = _char_roots(M)
    moduli = np.abs(roots)
    separations = [abs(roots[i] - roots[j]) for i in range(3) for j in range(i + 1, 3)]
    if np.max(moduli) > 1 + 1e-4:
        return LOXODROMIC
    if min(separations) > 1e-4:
        return LOXODROMIC if np.max(moduli) > 1 + UNIT_MODULUS_BAND else ELLIPTIC
    # all eigenvalues on the unit circle: parabolic iff some repeated
    # eigenvalue has geometric multiplicity below its algebraic one.
    # Repeated roots of the cubic carry O(eps^(1/m)) individual error but
    # their cluster mean is accurate, so cluster (tolerance 1e-4) and test
    # the rank of M - mean(cluster) I.
    used = [False] * 3
    for i in range(3):
        if used[i]:
            continue
        cluster = [roots[i]]
        for j in range(i + 1, 3):
            if not used[j] and abs(roots[i] - roots[j]) < 1e-4:
                cluster.append(roots[j])
                used[j] = True
        if len(cluster) >= 2:
            mean = sum(cluster) / len(cluster)
            R = M - mean * np.eye(3)
            s = np.linalg.svd(R, compute_uv=False)
            rank = int(np.sum(s > 1e-7 * max(float(s[0]), 1.0)))
            if 3 - rank < len(cluster):
                return PARABOLIC
    return ELLIPTIC


class ProjectiveNullVector:
    """A nonzero null vector of <.,.>, compared projectively."""

    __slots__ = ("components",)

    def __init__(self, components, check: bool = True):
        v = np.array(components, dtype=complex).reshape(3)
        scale = float(np.max(np.abs(v)))
        if scale == 0.0:
            raise DomainError("zero vector has no projective class")
        if check:
            h = herm_product(v, v)
            if abs(h) > NULL_TOL * scale * scale:
                raise DomainError(f"vector is not null: <z,z> = {h}")
        v.setflags(write=False)
        self.components = v

    def projectively_equal(self, other: "ProjectiveNullVector", tol: float = 1e-9) -> bool:
        return projectively_equal(self.components, other.components, tol)

    def __repr__(self):
        return f"ProjectiveNullVector({np.array2string(self.components, precision=6)})"


def projectively_equal(v, w, tol: float = 1e-9) -> bool:
    """Proportionality test pivoting on the max-modulus component."""
    v = np.asarray(v, dtype=complex).reshape(3)
    w = np.asarray(w, dtype=complex).reshape(3)
    i = int(np.argmax(np.abs(v)))
    if abs(w[i]) == 0.0:
        return False
    return bool(np.max(np.abs(v / v[i] - w / w[i])) <= tol)


def herm_product(z, w) -> complex:
    """<z,w> = w* J z = z1*conj(w3) + z2*conj(w2) + z3*conj(w1)."""
    zv = z.components if isinstance(z, ProjectiveNullVector) else np.asarray(z, dtype=complex)
    wv = w.components if isinstance(w, ProjectiveNullVector) else np.asarray(w, dtype=complex)
    if not np.any(zv) or not np.any(wv):
        raise DomainError("herm_product of a zero vector")
    return complex(
        zv[0] * np.conj(wv[2]) + zv[1] * np.conj(wv[1]) + zv[2] * np.conj(wv[0])
    )


@dataclass(frozen=True)
class EigenData:
    """Loxodromic spectrum of an SU(2,1) element.

    lam lies in the strip S; attracting/repelling are null eigenvectors for
    e^lam and e^(-conj(lam)); neutral has positive self-product.
    """

    lam: complex
    attracting: np.ndarray
    repelling: np.ndarray
    neutral: np.ndarray

    @cached_property
    def eigenvalues(self):
        lam = self.lam
        return (cmath.exp(lam), cmath.exp(lam.conjugate() - lam), cmath.exp(-lam.conjugate()))


def E_matrix(lam: complex) -> Isometry:
    """Loxodromic normal form diag(e^lam, e^(conj(lam)-lam), e^(-conj(lam)))."""
    lam = complex(lam)
    return Isometry(
        np.diag([cmath.exp(lam), cmath.exp(lam.conjugate() - lam), cmath.exp(-lam.conjugate())]),
        SU21,
    )


def _char_roots(M) -> np.ndarray:
    """Eigenvalues of a 3x3 matrix from its characteristic cubic.

    Roots come from the cubic's companion matrix and get one Newton polish
    step, which is enough at double precision for the well-separated spectra
    this package meets.
    """
    t = np.trace(M)
    # second elementary symmetric function of the eigenvalues
    e2 = 0.5 * (t * t - np.trace(M @ M))
    det = np.linalg.det(M)
    coeffs = np.array([1.0, -t, e2, -det], dtype=complex)
    roots = np.roots(coeffs)
    der = np.polyder(coeffs)
    for i, r in enumerate(roots):
        p = np.polyval(coeffs, r)
        dp = np.polyval(der, r)
        if dp != 0:
            roots[i] = r - p / dp
    return roots


def _eigenvector(M, ev) -> np.ndarray:
    """Unit-norm right eigenvector via the smallest singular vector of M - ev."""
    _, _, Vh = np.linalg.svd(M - ev * np.eye(3))
    v = Vh[-1].conj()
    return v / np.linalg.norm(v)


def canonicalize_strip(lam: complex) -> complex:
    """Move lam into S = {Re > 0, Im in (-pi, pi]}, ties at -pi resolved to +pi."""
    im = lam.imag
    im = (im + cmath.pi) % (2 * cmath.pi) - cmath.pi
    if im <= -cmath.pi + 1e-300:
        im = cmath.pi
    return complex(lam.real, im)


def su21_eigendata(M: Isometry) -> EigenData:
    """Spectral data (lam in S, attracting/repelling/neutral frames).

    Raises ClassificationError for non-loxodromic input and
    IllConditionedError when the largest modulus hugs the unit circle.
    """
    if M.group != SU21:
        raise DomainError("su21_eigendata expects an SU21 isometry")
    A = M.entries
    roots = _char_roots(A)
    order = np.argsort(np.abs(roots))
    small, mid, big = roots[order[0]], roots[order[1]], roots[order[2]]
    if abs(big) <= 1 + 1e-12:
        raise ClassificationError(
            f"not loxodromic: eigenvalue moduli {sorted(np.abs(roots))}"
        )
    if abs(big) - 1 < UNIT_MODULUS_BAND:
        raise IllConditionedError("near-parabolic: attracting modulus within 1e-8 of 1")
    lam = canonicalize_strip(cmath.log(big))
    attracting = _eigenvector(A, big)
    repelling = _eigenvector(A, small)
    neutral = _eigenvector(A, mid)
    scale = 1.0
    if abs(herm_product(attracting, attracting)) > NULL_TOL * scale:
        raise ClassificationError("attracting eigenvector is not null")
    if abs(herm_product(repelling, repelling)) > NULL_TOL * scale:
        raise ClassificationError("repelling eigenvector is not null")
    if herm_product(neutral, neutral).real <= 0:
        raise ClassificationError("neutral eigenvector is not positive")
    return EigenData(lam=lam, attracting=attracting, repelling=repelling, neutral=neutral)


def su21_frame(M: Isometry) -> tuple[complex, Isometry]:
    """(lam, Q) with M = Q E(lam) Q^{-1} and Q in SU(2,1).

    Columns of Q are the attracting / neutral / repelling eigenvectors scaled
    so that Q* J Q = J, then the residual phase is absorbed to make det Q = 1.
    """
    ed = su21_eigendata(M)
    q1, q2, q3 = ed.attracting.copy(), ed.neutral.copy(), ed.repelling.copy()
    q2 = q2 / np.sqrt(herm_product(q2, q2).real)
    pairing = herm_product(q1, q3)
    # want <q1,q3> = 1; put the correction wholly into q3
    q3 = q3 / np.conj(pairing)
    Q = np.column_stack([q1, q2, q3])
    det = np.linalg.det(Q)
    # det is a unit modulus up to rounding; a cube-root phase restores det 1
    phase = det ** (-1.0 / 3.0)
    Q = Q * phase
    return ed.lam, Isometry(Q, SU21)


def sl2_inverse(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]], dtype=complex)


def mobius_apply(M, z):
    """Action of a 2x2 matrix on the Riemann sphere; INF marks infinity."""
    M = M.entries if isinstance(M, Isometry) else np.asarray(M, dtype=complex)
    a, b, c, d = M[0, 0], M[0, 1], M[1, 0], M[1, 1]
    if is_inf(z):
        return (a / c) if c != 0 else INF
    den = c * z + d
    if den == 0:
        return INF
    return (a * z + b) / den


def sl2_multiplier(M) -> complex:
    """Attracting eigenvalue m, |m| >= 1, with m + 1/m = tr(M) exactly.

    The square root is taken with the branch that avoids cancellation, so the
    sign of a real trace is inherited by m (the trace-consistent branch).
    """
    t = M.trace if isinstance(M, Isometry) else complex(np.trace(np.asarray(M)))
    s = cmath.sqrt(t * t - 4)
    if (t.conjugate() * s).real < 0:
        s = -s
    m = (t + s) / 2
    if abs(m) < 1:
        m = (t - s) / 2
    return m


def sl2_fixed_points(M: Isometry):
    """(attracting, repelling) fixed points on the Riemann sphere.

    Fixed points come from eigenvectors: for the eigenvalue m with |m| > 1 the
    point (v0/v1) is attracting (derivative 1/m^2 there).
    """
    if M.group not in (SL2R, SL2C):
        raise DomainError("sl2_fixed_points expects a 2x2 isometry")
    cls = M.classify()
    if cls == IDENTITY:
        raise ClassificationError("identity fixes everything")
    if cls == PARABOLIC:
        raise ClassificationError("parabolic element has a single fixed point")
    m = sl2_multiplier(M)
    att = _fixed_point_of_eigenvalue(M.entries, m)
    rep = _fixed_point_of_eigenvalue(M.entries, 1 / m)
    return att, rep


def parabolic_fixed_point(M: Isometry):
    """The unique fixed point of a parabolic 2x2 isometry."""
    A = M.entries
    a, b, c, d = A[0, 0], A[0, 1], A[1, 0], A[1, 1]
    scale = max(abs(a), abs(b), abs(c), abs(d))
    if abs(c) < 1e-14 * scale:
        return INF
    return (a - d) / (2 * c)


def _fixed_point_of_eigenvalue(A, m):
    # eigenvector rows: (A - m) v = 0; use the better-conditioned row
    r1 = (A[0, 0] - m, A[0, 1])
    r2 = (A[1, 0], A[1, 1] - m)
    if max(abs(r2[0]), abs(r2[1])) >= max(abs(r1[0]), abs(r1[1])):
        v = (r2[1], -r2[0])
    else:
        v = (r1[1], -r1[0])
    if abs(v[1]) < 1e-14 * abs(v[0]):
        return INF
    return v[0] / v[1]


def sl2_complex_length(M: Isometry) -> complex:
    """Complex length l: e^l = multiplier at the attracting fixed point.

    Re l > 0, Im l in (-pi, pi]; 2 cosh(l/2) = +-tr(M).
    """
    if M.group not in (SL2R, SL2C):
        raise DomainError("sl2_complex_length expects a 2x2 isometry")
    t = M.trace
    if abs(t.imag) < 1e-12 and abs(t.real) <= 2 + 1e-12:
        raise ClassificationError(f"trace {t} is not loxodromic")
    m = sl2_multiplier(M)
    return canonicalize_strip(cmath.log(m * m))
