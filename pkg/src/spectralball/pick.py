"""Pick-matrix interpolation and discontinuity gap certificates.

Feasibility of disk interpolation problems via positive semidefiniteness of
the Pick matrix, recovery of the unique Blaschke-product solution in the
singular case, a boundary search producing a Blaschke product through scaled
roots of unity, the induced analytic disc into the symmetrized polydisc, and
the resulting certified gap between the spectral radius and the generic
two-point distance limit at scalar base points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainError,
    InternalError,
    InvalidInputError,
    NumericError,
    PreconditionError,
)
from .matcore import DEFAULT_TOL, as_matrix, elementary_symmetric, spectrum

#: Descending step of the coarse feasibility scan.
COARSE_STEP = 1e-2

#: Width of the final bisection bracket.
BISECT_WIDTH = 1e-10

_CIRCLE_SAMPLES = 256


@dataclass(eq=False)
class PickProblem:
    """Disk interpolation data: distinct nodes in D and target values."""

    nodes: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        self.nodes = np.atleast_1d(np.asarray(self.nodes, dtype=complex))
        self.targets = np.atleast_1d(np.asarray(self.targets, dtype=complex))
        if len(self.nodes) != len(self.targets):
            raise InvalidInputError("nodes and targets must have equal length")
        if np.max(np.abs(self.nodes)) >= 1.0:
            raise InvalidInputError("nodes must lie in the open unit disk")
        n = len(self.nodes)
        for j in range(n):
            for k in range(j + 1, n):
                if abs(self.nodes[j] - self.nodes[k]) <= 1e-12 * (
                    1.0 + abs(self.nodes[j])
                ):
                    raise InvalidInputError("interpolation nodes must be distinct")

    @property
    def size(self) -> int:
        return len(self.nodes)


class BlaschkeProduct:
    """Finite Blaschke product: unimodular constant times disk factors.

    Evaluates u * prod_i (z - z_i) / (1 - conj(z_i) z); unimodular on the
    unit circle, modulus below one inside the open disk.
    """

    def __init__(self, unimodular: complex, zeros=()):
        u = complex(unimodular)
        if abs(abs(u) - 1.0) > 1e-6:
            raise InvalidInputError("leading constant must be unimodular")
        self.unimodular = u / abs(u)
        self.zeros = np.asarray(zeros, dtype=complex).ravel()
        if self.zeros.size and np.max(np.abs(self.zeros)) >= 1.0:
            raise InvalidInputError("zeros must lie in the open unit disk")

    @property
    def order(self) -> int:
        return len(self.zeros)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, self.unimodular, dtype=complex)
        for w in self.zeros:
            out = out * (z - w) / (1.0 - np.conj(w) * z)
        if z.shape == ():
            return complex(out)
        return out

    def prepend_zero_at_origin(self) -> "BlaschkeProduct":
        """The product z -> z * B(z)."""
        return BlaschkeProduct(self.unimodular, np.concatenate(([0.0], self.zeros)))

    def __repr__(self):
        return f"BlaschkeProduct(unimodular={self.unimodular!r}, zeros={self.zeros!r})"


@dataclass(eq=False)
class ZeroInterpolant:
    """Degenerate constant-zero interpolant (not a Blaschke product)."""

    order: int = 0
    degenerate: bool = True

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        return complex(out) if z.shape == () else out


def pick_matrix(problem: PickProblem) -> np.ndarray:
    """Hermitian Pick matrix of an interpolation problem.

    Entry (j, k) is (1 - w_j conj(w_k)) / (1 - x_j conj(x_k)); the problem
    admits a holomorphic disk-to-disk solution exactly when this matrix is
    positive semidefinite.
    """
    x = problem.nodes
    w = problem.targets
    num = 1.0 - w[:, None] * np.conj(w)[None, :]
    den = 1.0 - x[:, None] * np.conj(x)[None, :]
    m = num / den
    return (m + m.conj().T) / 2.0


def is_psd(m, tol: float = DEFAULT_TOL) -> bool:
    """Positive semidefiniteness of a Hermitian matrix.

    True iff the smallest eigenvalue is at least -tol * (1 + largest).
    Rejects input that is not Hermitian within tolerance.
    """
    M = as_matrix(m)
    defect = np.linalg.norm(M - M.conj().T)
    if defect > 1e-8 * (1.0 + np.linalg.norm(M)):
        raise InvalidInputError("matrix is not Hermitian")
    vals = np.linalg.eigvalsh((M + M.conj().T) / 2.0)
    return bool(vals[0] >= -tol * (1.0 + max(vals[-1], 0.0)))


def _rational_from_nullvector(problem, c):
    """Numerator/denominator coefficients (ascending) of the interpolant.

    f(z) = sum_k c_k k_x(z) / sum_k c_k conj(w_k) k_x(z) with the
    reproducing kernel k_x(z) = 1 / (1 - conj(x) z); clearing denominators
    gives two polynomials of degree below the node count.
    """
    x = problem.nodes
    w = problem.targets
    n = problem.size
    num = np.zeros(n, dtype=complex)
    den = np.zeros(n, dtype=complex)
    for k in range(n):
        # ascending coefficients of prod_{l != k} (1 - conj(x_l) z)
        poly = np.array([1.0 + 0j])
        for l in range(n):
            if l != k:
                poly = np.convolve(poly, np.array([1.0, -np.conj(x[l])]))
        num[: len(poly)] += c[k] * poly
        den[: len(poly)] += c[k] * np.conj(w[k]) * poly
    return num, den


def _polish_roots(coeffs_ascending):
    c = np.trim_zeros(coeffs_ascending[::-1], "f")
    if len(c) <= 1:
        return np.zeros(0, dtype=complex)
    return np.roots(c)


def degenerate_interpolant(problem: PickProblem, nullvec, tol: float = DEFAULT_TOL):
    """Unique interpolant of a singular positive-semidefinite Pick problem.

    Given a null vector of the (PSD, singular) Pick matrix, reconstructs the
    Blaschke product of order rank(Pick matrix) solving the problem and
    validates interpolation and circle unimodularity numerically.  All-zero
    target data yields the flagged constant-zero interpolant.
    """
    m = pick_matrix(problem)
    vals = np.linalg.eigvalsh(m)
    scale = 1.0 + max(vals[-1], 0.0)
    if vals[0] < -1e-6 * scale:
        raise PreconditionError("Pick matrix is not positive semidefinite")
    if vals[0] > 1e-6 * scale:
        raise PreconditionError("Pick matrix is not singular")
    c = np.atleast_1d(np.asarray(nullvec, dtype=complex))
    if len(c) != problem.size or np.linalg.norm(c) == 0.0:
        raise InvalidInputError("null vector has the wrong shape")
    c = c / np.linalg.norm(c)
    resid = np.linalg.norm(m @ c)
    if resid > 1e-5 * scale:
        raise PreconditionError(f"vector is not in the null space ({resid:.3e})")

    if np.max(np.abs(problem.targets)) <= tol:
        return ZeroInterpolant()

    num, den = _rational_from_nullvector(problem, c)

    grid = np.exp(2j * np.pi * np.arange(_CIRCLE_SAMPLES) / _CIRCLE_SAMPLES)
    den_vals = np.polyval(den[::-1], grid)
    if np.min(np.abs(den_vals)) <= 1e-12 * max(1.0, np.max(np.abs(den_vals))):
        raise NumericError("interpolant denominator vanishes on the sample grid")

    roots_num = _polish_roots(num)
    roots_den = _polish_roots(den)
    # cancel root pairs shared by numerator and denominator
    keep = []
    used = np.zeros(len(roots_den), dtype=bool)
    for r in roots_num:
        hit = None
        for i, rd in enumerate(roots_den):
            if not used[i] and abs(r - rd) <= 1e-8 * (1.0 + abs(r)):
                hit = i
                break
        if hit is None:
            keep.append(r)
        else:
            used[hit] = True
    zeros = np.array([r for r in keep if abs(r) < 1.0], dtype=complex)

    f_grid = np.polyval(num[::-1], grid) / den_vals
    shape = np.ones_like(grid)
    for z in zeros:
        shape *= (grid - z) / (1.0 - np.conj(z) * grid)
    ratios = f_grid / shape
    u = ratios.mean()
    if abs(abs(u) - 1.0) > 1e-6 or np.max(np.abs(ratios - u)) > 1e-6:
        raise NumericError("recovered interpolant is not a Blaschke product")
    bp = BlaschkeProduct(u, zeros)

    interp = np.max(np.abs(bp(problem.nodes) - problem.targets))
    if interp > 1e-6:
        raise NumericError(f"interpolation residual {interp:.3e} is too large")
    circle = np.max(np.abs(np.abs(bp(grid)) - 1.0))
    if circle > 1e-8:
        raise NumericError("interpolant is not unimodular on the circle")
    return bp


@dataclass(eq=False)
class BoundarySolution:
    """Result of the roots-of-unity boundary interpolation search."""

    beta: complex
    blaschke: object
    degenerate: bool
    interpolation_residual: float
    smallest_eigenvalue: float


def _roots_of_unity(n):
    return np.exp(2j * np.pi * np.arange(n) / n)


def _pick_problem_at(lambdas, eps, r):
    nodes = eps * r
    targets = lambdas / nodes
    return PickProblem(nodes, targets)


def _smallest_eig(lambdas, eps, r):
    return float(np.linalg.eigvalsh(pick_matrix(_pick_problem_at(lambdas, eps, r)))[0])


def blaschke_through_roots_of_unity(lambdas, tol: float = DEFAULT_TOL) -> BoundarySolution:
    """Blaschke product through scaled roots of unity hitting given values.

    For eigenvalues lambda_1..lambda_n in the open disk, finds beta in the
    disk and a Blaschke product B of order at most n with B(0) = 0 and
    B(eps_j beta) = lambda_j at the n-th roots of unity eps_j.  The radius
    |beta| is located where the Pick matrix of the reduced data (which
    depends on |beta| only) first turns singular positive semidefinite:
    a coarse descending scan from just below 1 followed by bisection on the
    sign of the smallest eigenvalue.  All-zero data is returned as the
    degenerate flagged case with beta = 0.
    """
    lam = np.atleast_1d(np.asarray(lambdas, dtype=complex))
    n = len(lam)
    if np.max(np.abs(lam)) >= 1.0:
        raise DomainError("values must lie in the open unit disk")
    if np.max(np.abs(lam)) <= tol:
        return BoundarySolution(
            beta=0.0 + 0.0j,
            blaschke=ZeroInterpolant(),
            degenerate=True,
            interpolation_residual=0.0,
            smallest_eigenvalue=0.0,
        )
    eps = _roots_of_unity(n)
    lo = float(np.max(np.abs(lam))) * (1.0 + 1e-12) + 1e-14
    hi = 1.0 - 1e-6
    if lo >= hi:
        raise NumericError("no search bracket: spectrum reaches the boundary")

    grid = np.arange(hi, lo, -COARSE_STEP)
    grid = np.append(grid, lo)
    vals = np.array([_smallest_eig(lam, eps, r) for r in grid])

    # lowest feasibility transition: last sign change scanning downward
    crossing = None
    for i in range(len(grid) - 1):
        if vals[i] >= 0.0 > vals[i + 1]:
            crossing = i
    if crossing is None:
        if np.all(vals >= 0.0):
            # feasible all the way down: boundary point at the bracket bottom
            r0 = lo
        else:
            raise NumericError("feasibility scan found no positive region")
    else:
        r_hi, r_lo = grid[crossing], grid[crossing + 1]
        for _ in range(200):
            if r_hi - r_lo <= BISECT_WIDTH:
                break
            mid = (r_hi + r_lo) / 2.0
            if _smallest_eig(lam, eps, mid) >= 0.0:
                r_hi = mid
            else:
                r_lo = mid
        # lower endpoint: the certified radius never exceeds the true boundary
        r0 = r_lo

    problem = _pick_problem_at(lam, eps, r0)
    m = pick_matrix(problem)
    evals, evecs = np.linalg.eigh(m)
    inner = degenerate_interpolant(problem, evecs[:, 0], tol=tol)
    if isinstance(inner, ZeroInterpolant):
        bp = inner
        residual = float(np.max(np.abs(lam)))
    else:
        bp = inner.prepend_zero_at_origin()
        residual = float(np.max(np.abs(bp(eps * r0) - lam)))
    if bp.order > n:
        raise InternalError("recovered product exceeds the admissible order")
    if residual > 1e-6:
        raise NumericError(f"boundary interpolation residual {residual:.3e}")
    return BoundarySolution(
        beta=complex(r0),
        blaschke=bp,
        degenerate=False,
        interpolation_residual=residual,
        smallest_eigenvalue=float(evals[0]),
    )


class SymmetrizedDisc:
    """Analytic disc into the symmetrized polydisc induced by a Blaschke
    product vanishing at the origin.

    Evaluates the elementary symmetric functions of B at the n-th roots of
    an arbitrary n-th root of the parameter; the value does not depend on
    the chosen root because changing it permutes the arguments.
    """

    def __init__(self, blaschke, n: int, tol: float = 1e-9):
        if blaschke.order > n:
            raise PreconditionError("product order must not exceed n")
        if not np.any(np.abs(blaschke.zeros) <= tol):
            raise PreconditionError("product must vanish at the origin")
        self.blaschke = blaschke
        self.n = n
        self._eps = _roots_of_unity(n)
        self._verify(tol)

    def _value(self, zeta, branch=0):
        zeta = complex(zeta)
        if zeta == 0.0:
            return np.zeros(self.n, dtype=complex)
        root = np.exp(np.log(zeta) / self.n) * self._eps[branch]
        return elementary_symmetric(self.blaschke(self._eps * root))

    def __call__(self, zeta):
        return self._value(zeta)

    def branch_spread(self, zeta) -> float:
        """Largest coordinatewise deviation across all root branches."""
        base = self._value(zeta, 0)
        spread = 0.0
        for b in range(1, self.n):
            spread = max(spread, float(np.max(np.abs(self._value(zeta, b) - base))))
        return spread

    def _verify(self, tol):
        rng = np.random.default_rng(1234)
        pts = 0.95 * np.sqrt(rng.uniform(0.01, 1.0, 16)) * np.exp(
            2j * np.pi * rng.uniform(size=16)
        )
        worst = max(self.branch_spread(z) for z in pts)
        if worst > tol:
            raise InternalError(
                f"symmetrized disc depends on the root branch ({worst:.3e})"
            )


def gn_disc_from_blaschke(blaschke, n: int) -> SymmetrizedDisc:
    """Analytic disc into the symmetrized polydisc from a Blaschke product
    of order at most n vanishing at 0; the disc itself vanishes at 0."""
    return SymmetrizedDisc(blaschke, n)


@dataclass(eq=False)
class GapCertificate:
    """Certified comparison of r(B) with the generic distance limit at 0.

    ``upper`` = |beta|^n bounds the two-point distance limit from above;
    ``radius`` = r(B) is the value at the scalar base point itself.  A
    strictly positive gap occurs exactly when the eigenvalues of B are not
    all equal.
    """

    beta: complex
    blaschke: object
    upper: float
    radius: float
    is_gap: bool
    degenerate: bool = False
    interpolation_residual: float = 0.0


def gap_certificate(b, tol: float = DEFAULT_TOL) -> GapCertificate:
    """Run the boundary interpolation search on the spectrum of B.

    Returns upper = |beta|^n, radius = r(B) and the gap verdict
    upper < radius - 1e-9.  A spectral radius of zero short-circuits to the
    degenerate all-zero certificate.
    """
    B = as_matrix(b)
    sp = spectrum(B)
    if not sp.in_spectral_ball():
        raise DomainError("matrix lies outside the spectral ball")
    n = B.shape[0]
    if sp.radius <= tol:
        return GapCertificate(
            beta=0.0 + 0.0j,
            blaschke=None,
            upper=0.0,
            radius=sp.radius,
            is_gap=False,
            degenerate=True,
        )
    sol = blaschke_through_roots_of_unity(sp.values, tol=tol)
    upper = float(abs(sol.beta) ** n)
    return GapCertificate(
        beta=sol.beta,
        blaschke=sol.blaschke,
        upper=upper,
        radius=sp.radius,
        is_gap=bool(upper < sp.radius - 1e-9),
        degenerate=sol.degenerate,
        interpolation_residual=sol.interpolation_residual,
    )
