"""Constant-spectrum analytic curves of matrices.

Three entire closed forms witness degenerate invariant-distance behaviour:

* triangular conjugation  -- joins two matrices with equal spectra through a
  shared triangular frame, with the conjugating unitaries interpolated along
  a logarithm path;
* exponential conjugation -- lam -> exp(-lam Y) A exp(lam Y), the canonical
  zero-metric witness with prescribed first derivative;
* matrix polynomial       -- explicit low-degree curves, including the
  quadratic 2x2 witness with constant trace and determinant.

``verify_constant_spectrum`` samples any curve and reports the worst
eigenvalue-multiset deviation from an expected spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DomainError,
    InternalError,
    InvalidInputError,
    PreconditionError,
    UnsupportedError,
)
from .geometry import bottleneck_assignment
from .matcore import (
    DEFAULT_TOL,
    as_matrix,
    ordered_triangularize,
    sigma_pushforward,
    solve_conjugation,
    spectrum,
    unitary_log,
)
from .nonderog import classify

#: Acceptance threshold when pairing two eigenvalue multisets.
PAIRING_TOL = 1e-6

#: Threshold below which a direction counts as nilpotent / a matrix as scalar.
STRUCTURE_TOL = 1e-8


@dataclass(eq=False)
class TriangularConjugationCurve:
    """exp(H0 + lam H1) ((1-lam) T0 + lam T1) exp(-(H0 + lam H1))."""

    h0: np.ndarray
    h1: np.ndarray
    t0: np.ndarray
    t1: np.ndarray
    kind: str = "triangular_conjugation"

    def __call__(self, lam):
        x = self.h0 + complex(lam) * self.h1
        mid = (1.0 - lam) * self.t0 + lam * self.t1
        return scipy.linalg.expm(x) @ mid @ scipy.linalg.expm(-x)


@dataclass(eq=False)
class ExpConjugationCurve:
    """exp(-lam Y) A exp(lam Y); spectrum is constant identically."""

    base: np.ndarray
    generator: np.ndarray
    kind: str = "exp_conjugation"

    def __call__(self, lam):
        x = complex(lam) * self.generator
        return scipy.linalg.expm(-x) @ self.base @ scipy.linalg.expm(x)


@dataclass(eq=False)
class MatrixPolynomialCurve:
    """sum_k lam^k C_k for a list of coefficient matrices."""

    coefficients: list
    kind: str = "matrix_polynomial"

    def __call__(self, lam):
        lam = complex(lam)
        out = np.zeros_like(self.coefficients[0])
        power = 1.0 + 0.0j
        for c in self.coefficients:
            out = out + power * c
            power *= lam
        return out


def _pair_greedy(a_vals, b_vals, tol_abs):
    """Greedy nearest-neighbour pairing of two multisets.

    Returns the index array mapping positions of *a_vals* to positions of
    *b_vals*, or raises when some pair exceeds the acceptance threshold.
    """
    b_vals = np.asarray(b_vals)
    used = np.zeros(len(b_vals), dtype=bool)
    pairing = np.empty(len(a_vals), dtype=int)
    for i, x in enumerate(a_vals):
        dist = np.abs(b_vals - x)
        dist[used] = np.inf
        j = int(np.argmin(dist))
        if dist[j] > tol_abs:
            raise PreconditionError(
                f"spectra differ as multisets (gap {dist[j]:.3e})"
            )
        pairing[i] = j
        used[j] = True
    return pairing


def _phase_align_unitaries(v, t, u):
    """Diagonal-phase gauge making diag(v* u) real nonnegative."""
    d = np.diag(v.conj().T @ u).copy()
    d[np.abs(d) < 1e-12] = 1.0
    phases = d / np.abs(d)
    dm = np.diag(phases)
    return v @ dm, dm.conj().T @ t @ dm


def iso_spectral_curve(a, b) -> TriangularConjugationCurve:
    """Entire curve through A (at 0) and B (at 1) with constant spectrum.

    Requires the two spectra to agree as multisets and both matrices to lie
    in the spectral ball.  Both matrices are triangularized with the same
    diagonal order; the triangular parts are joined affinely (their shared
    diagonal keeps the spectrum fixed) and the unitaries through the
    difference of their logarithms.
    """
    A = as_matrix(a)
    B = as_matrix(b)
    if B.shape != A.shape:
        raise InvalidInputError("matrices must have the same dimension")
    sp_a = spectrum(A)
    sp_b = spectrum(B)
    if not (sp_a.in_spectral_ball() and sp_b.in_spectral_ball()):
        raise DomainError("both matrices must lie in the spectral ball")
    tol_abs = PAIRING_TOL * (1.0 + sp_a.radius)
    pairing = _pair_greedy(sp_a.values, sp_b.values, tol_abs)

    u, t0 = ordered_triangularize(A, sp_a.values)
    v, t1 = ordered_triangularize(B, sp_b.values[pairing])
    v, t1 = _phase_align_unitaries(v, t1, u)
    # shared diagonal: the affine interpolation then fixes the spectrum
    np.fill_diagonal(t1, np.diag(t0))

    h0 = unitary_log(u)
    h1 = unitary_log(v) - h0
    return TriangularConjugationCurve(h0=h0, h1=h1, t0=t0, t1=t1)


def _is_scalar(a, tol_abs) -> bool:
    n = a.shape[0]
    return np.linalg.norm(a - (np.trace(a) / n) * np.eye(n)) <= tol_abs


def _is_nilpotent(b, tol_abs) -> bool:
    n = b.shape[0]
    power = np.linalg.matrix_power(b, n)
    return np.linalg.norm(power) <= tol_abs * max(1.0, np.linalg.norm(b)) ** n


def zero_metric_curve(a, b, tol: float = DEFAULT_TOL):
    """Entire curve with value A and derivative B at 0, constant spectrum.

    Two supported regimes: a scalar base with a nilpotent direction gives
    the affine curve A + lam B; a non-derogatory base with vanishing
    symmetrized differential gives the exponential conjugation along the
    solution of the commutation equation.  Anything else is unsupported.
    """
    A = as_matrix(a)
    B = as_matrix(b)
    if B.shape != A.shape:
        raise InvalidInputError("matrices must have the same dimension")
    scale = STRUCTURE_TOL * (1.0 + np.linalg.norm(A))
    if _is_scalar(A, scale):
        if not _is_nilpotent(B, STRUCTURE_TOL):
            raise UnsupportedError(
                "scalar base point requires a nilpotent direction"
            )
        return MatrixPolynomialCurve([A, B])
    if classify(A, tol=tol).verdict:
        push = sigma_pushforward(A, B)
        if np.max(np.abs(push)) > STRUCTURE_TOL * (
            1.0 + np.linalg.norm(A) * np.linalg.norm(B)
        ):
            raise UnsupportedError(
                "symmetrized differential of the direction does not vanish"
            )
        y = solve_conjugation(A, B, tol=tol)
        return ExpConjugationCurve(base=A, generator=y)
    raise UnsupportedError(
        "base point is derogatory and not scalar; no witness is constructed"
    )


def _poly_product(p, q):
    return np.convolve(p, q)


def spectrum_polynomials_2x2(curve: MatrixPolynomialCurve):
    """Trace and determinant of a 2x2 matrix polynomial as polynomials.

    Returns (trace_coeffs, det_coeffs), ascending in the curve parameter.
    """
    coeffs = [np.asarray(c, dtype=complex) for c in curve.coefficients]
    if coeffs[0].shape != (2, 2):
        raise InvalidInputError("only 2x2 matrix polynomials are supported")
    entry = {
        (i, j): np.array([c[i, j] for c in coeffs]) for i in range(2) for j in range(2)
    }
    trace = entry[(0, 0)] + entry[(1, 1)]
    det = _poly_product(entry[(0, 0)], entry[(1, 1)]) - _poly_product(
        entry[(0, 1)], entry[(1, 0)]
    )
    return trace, det


def _solve_quadratic_tail(a0, b):
    """Trace-zero psi with tr(A0 psi) = det B, tr(B psi) = 0, det psi = 0.

    psi is parametrized as [[u, v], [w, -u]]; the two linear constraints cut
    an affine subspace on which the isotropy condition u^2 + v w = 0 is
    rooted directly.
    """
    det_b = b[0, 0] * b[1, 1] - b[0, 1] * b[1, 0]
    # tr(M psi) = (m00 - m11) u + m10 v + m01 w
    rows = np.array(
        [
            [a0[0, 0] - a0[1, 1], a0[1, 0], a0[0, 1]],
            [b[0, 0] - b[1, 1], b[1, 0], b[0, 1]],
        ]
    )
    rhs = np.array([det_b, 0.0 + 0.0j])
    xp, *_ = np.linalg.lstsq(rows, rhs, rcond=None)
    if np.linalg.norm(rows @ xp - rhs) > 1e-10 * (1.0 + np.linalg.norm(rhs)):
        raise InternalError("quadratic witness constraints are inconsistent")
    _, s, vh = np.linalg.svd(rows)
    rank = int(np.count_nonzero(s > 1e-12 * (s[0] if len(s) else 1.0)))
    null = [vh[i].conj() for i in range(rank, 3)]

    def quad(x):
        return x[0] * x[0] + x[1] * x[2]

    def bilin(x, y):
        return 2.0 * x[0] * y[0] + x[1] * y[2] + x[2] * y[1]

    candidates = []
    for direction in null:
        a_coef = quad(direction)
        b_coef = bilin(xp, direction)
        c_coef = quad(xp)
        if abs(a_coef) > 1e-14:
            roots = np.roots([a_coef, b_coef, c_coef])
            candidates.extend(xp + r * direction for r in roots)
        elif abs(b_coef) > 1e-14:
            candidates.append(xp + (-c_coef / b_coef) * direction)
        elif abs(c_coef) <= 1e-14:
            candidates.append(xp)
    if not candidates:
        raise InternalError("no isotropic point on the constraint set")
    best = min(candidates, key=lambda x: abs(quad(x)) + 0.0)
    u, v, w = best
    return np.array([[u, v], [w, -u]])


def quadratic_witness_2x2(a, b) -> MatrixPolynomialCurve:
    """Degree-at-most-2 polynomial curve p with p(0)=A, p'(0)=B and
    constant spectrum, for 2x2 matrices.

    A scalar base with nilpotent direction yields the affine curve.  For a
    non-derogatory base the second-order coefficient is first taken from the
    exponential conjugation through the solution of the commutation
    equation; when the resulting trace/determinant variation is not exactly
    flat, the coefficient is recomputed by solving the four scalar
    constancy constraints directly.  The returned curve always has all
    nonconstant trace and determinant coefficients at most 1e-10.
    """
    A = as_matrix(a)
    B = as_matrix(b)
    if A.shape != (2, 2) or B.shape != (2, 2):
        raise InvalidInputError("operation is defined for 2x2 matrices")
    scale = STRUCTURE_TOL * (1.0 + np.linalg.norm(A))
    if _is_scalar(A, scale):
        if not _is_nilpotent(B, STRUCTURE_TOL):
            raise UnsupportedError("scalar base point requires a nilpotent direction")
        return MatrixPolynomialCurve([A, B])
    if not classify(A).verdict:
        raise UnsupportedError("base point is derogatory and not scalar")
    push = sigma_pushforward(A, B)
    if np.max(np.abs(push)) > STRUCTURE_TOL * (
        1.0 + np.linalg.norm(A) * np.linalg.norm(B)
    ):
        raise UnsupportedError("symmetrized differential of the direction does not vanish")

    y = solve_conjugation(A, B)
    psi = (y @ y @ A - 2.0 * y @ A @ y + A @ y @ y) / 2.0
    curve = MatrixPolynomialCurve([A, B, psi])
    if _max_nonconstant_variation(curve) > 1e-10:
        a0 = A - (np.trace(A) / 2.0) * np.eye(2)
        psi = _solve_quadratic_tail(a0, B)
        curve = MatrixPolynomialCurve([A, B, psi])
    variation = _max_nonconstant_variation(curve)
    if variation > 1e-10:
        raise InternalError(
            f"quadratic witness varies its spectrum (coefficient {variation:.3e})"
        )
    return curve


def _max_nonconstant_variation(curve: MatrixPolynomialCurve) -> float:
    trace, det = spectrum_polynomials_2x2(curve)
    worst = 0.0
    if len(trace) > 1:
        worst = max(worst, float(np.max(np.abs(trace[1:]))))
    if len(det) > 1:
        worst = max(worst, float(np.max(np.abs(det[1:]))))
    return worst


@dataclass(eq=False)
class SpectrumCheck:
    """Outcome of sampling a curve against an expected spectrum."""

    passed: bool
    max_deviation: float
    samples: int
    radius: float
    tol: float
    worst_point: complex


def _sample_points(samples, radius):
    """Deterministic low-discrepancy sampling of the disk |lam| <= radius."""
    golden = (np.sqrt(5.0) - 1.0) / 2.0
    pts = [0.0 + 0.0j, 1.0 + 0.0j]
    for k in range(max(samples - 2, 0)):
        r = radius * np.sqrt((k + 0.5) / max(samples - 2, 1))
        theta = 2.0 * np.pi * ((k * golden) % 1.0)
        pts.append(r * np.exp(1j * theta))
    return np.array(pts[:samples])


def multiset_distance(values_a, values_b) -> float:
    """Optimal-pairing max distance between two eigenvalue multisets."""
    a = np.atleast_1d(np.asarray(values_a, dtype=complex))
    b = np.atleast_1d(np.asarray(values_b, dtype=complex))
    if len(a) != len(b):
        raise InvalidInputError("multisets must have equal size")
    cost = np.abs(a[:, None] - b[None, :])
    value, _ = bottleneck_assignment(cost)
    return value


def verify_constant_spectrum(
    curve,
    expected,
    samples: int = 100,
    radius: float = 10.0,
    tol: float = 1e-6,
) -> SpectrumCheck:
    """Sample a curve and compare every spectrum against the expected one.

    Evaluates the curve at *samples* points with |lam| <= radius (always
    including 0 and 1), measures the optimal-pairing eigenvalue deviation
    and passes iff the worst deviation is at most *tol*.
    """
    exp_values = np.atleast_1d(
        np.asarray(getattr(expected, "values", expected), dtype=complex)
    )
    worst = -1.0
    worst_point = 0.0 + 0.0j
    for lam in _sample_points(samples, radius):
        vals = np.linalg.eigvals(as_matrix(curve(lam)))
        dev = multiset_distance(vals, exp_values)
        if dev > worst:
            worst = dev
            worst_point = complex(lam)
    return SpectrumCheck(
        passed=bool(worst <= tol),
        max_deviation=float(worst),
        samples=samples,
        radius=radius,
        tol=tol,
        worst_point=worst_point,
    )
