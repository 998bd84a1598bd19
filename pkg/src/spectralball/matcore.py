"""Dense complex matrix kernel.

Spectra, symmetrized coordinates (signed characteristic-polynomial
coefficients) and their differential, companion matrices, Schur forms with a
prescribed diagonal order, matrix exponentials/logarithms, and the linear
algebra of the commutation operator H -> AH - HA.

Everything here is a pure function of its inputs; matrices are plain complex
numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import scipy.linalg

from .errors import InvalidInputError, NoSolutionError

#: Default relative tolerance for residuals and rank decisions.
DEFAULT_TOL = 1e-9


def as_matrix(a) -> np.ndarray:
    """Validate *a* as a square complex matrix and return it as an ndarray.

    Raises InvalidInputError for non-square shapes, empty matrices or
    non-finite entries.
    """
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise InvalidInputError(f"expected a square matrix, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise InvalidInputError("matrix entries must be finite")
    return m


@dataclass(eq=False)
class Spectrum:
    """Eigenvalue multiset of a square matrix, with its spectral radius."""

    values: np.ndarray
    radius: float = field(init=False)

    def __post_init__(self):
        self.values = np.atleast_1d(np.asarray(self.values, dtype=complex))
        self.radius = float(np.max(np.abs(self.values)))

    @property
    def n(self) -> int:
        return len(self.values)

    def in_spectral_ball(self) -> bool:
        return self.radius < 1.0


@dataclass(eq=False)
class SymPoint:
    """Point of C^n holding the symmetrized coordinates (s_1, ..., s_n).

    s_j is the j-th elementary symmetric function of the eigenvalues, so the
    characteristic polynomial is t^n + sum_j (-1)^j s_j t^(n-j).
    """

    coords: np.ndarray

    def __post_init__(self):
        self.coords = np.atleast_1d(np.asarray(self.coords, dtype=complex))

    @property
    def n(self) -> int:
        return len(self.coords)

    def char_coefficients(self) -> np.ndarray:
        """Monic characteristic polynomial coefficients, descending degree."""
        signs = (-1.0) ** np.arange(1, self.n + 1)
        return np.concatenate(([1.0 + 0j], signs * self.coords))

    def roots(self) -> np.ndarray:
        return np.roots(self.char_coefficients())

    def in_symmetrized_polydisc(self) -> bool:
        """True iff every root of the associated polynomial lies in the
        open unit disk."""
        return bool(np.max(np.abs(self.roots())) < 1.0)


def spectrum(a) -> Spectrum:
    """Eigenvalue multiset of a square matrix (unordered, with multiplicity)."""
    return Spectrum(np.linalg.eigvals(as_matrix(a)))


def elementary_symmetric(values) -> np.ndarray:
    """Elementary symmetric functions e_1, ..., e_n of a list of numbers.

    Computed by expanding prod_j (t - v_j); no eigen-solving involved.
    """
    vals = np.atleast_1d(np.asarray(values, dtype=complex))
    coeffs = np.array([1.0 + 0j])
    for v in vals:
        coeffs = np.convolve(coeffs, np.array([1.0, -v]))
    n = len(vals)
    signs = (-1.0) ** np.arange(1, n + 1)
    return signs * coeffs[1:]


def sigma(a) -> SymPoint:
    """Symmetrized coordinates of a matrix.

    The j-th coordinate is the j-th elementary symmetric function of the
    eigenvalues; equivalently the characteristic polynomial of A is
    t^n + sum_j (-1)^j sigma_j t^(n-j).
    """
    return SymPoint(elementary_symmetric(spectrum(a).values))


def sigma_pushforward(a, b) -> np.ndarray:
    """Differential of the symmetrized coordinates at A, applied to B.

    The j-th coordinate is the sum of all j x j determinants obtained by
    taking a principal j x j submatrix of A and replacing one column by the
    corresponding entries of B.  The first coordinate is the trace of B.
    """
    A = as_matrix(a)
    B = as_matrix(b)
    if B.shape != A.shape:
        raise InvalidInputError(
            f"dimension mismatch: {A.shape} versus {B.shape}"
        )
    n = A.shape[0]
    out = np.zeros(n, dtype=complex)
    out[0] = np.trace(B)
    for j in range(2, n + 1):
        blocks = []
        for idx in combinations(range(n), j):
            sel = np.ix_(idx, idx)
            sub_a = A[sel]
            sub_b = B[sel]
            for col in range(j):
                m = sub_a.copy()
                m[:, col] = sub_b[:, col]
                blocks.append(m)
        out[j - 1] = np.linalg.det(np.array(blocks)).sum()
    return out


def sigma_differential_matrix(a) -> np.ndarray:
    """Matrix of the linear map B -> sigma_pushforward(A, B).

    Returns an n x n^2 array acting on column-stacked B.  Row j-1 represents
    tr(D_{j-1} B) where D_j = s_j I - A D_{j-1}, D_0 = I; this is the
    classical expansion of the derivative of the characteristic-polynomial
    coefficients and agrees with the column-replacement minors formula.
    """
    A = as_matrix(a)
    n = A.shape[0]
    sig = sigma(A).coords
    rows = np.empty((n, n * n), dtype=complex)
    d = np.eye(n, dtype=complex)
    rows[0] = d.ravel()
    for j in range(1, n):
        d = sig[j - 1] * np.eye(n) - A @ d
        # tr(D B) pairs D[r, k] with B[k, r]: C-order ravel of D matches
        # the F-order ravel of B.
        rows[j] = d.ravel()
    return rows


def companion(s) -> np.ndarray:
    """Companion matrix with the prescribed symmetrized coordinates.

    Layout: ones on the subdiagonal and the negated monic polynomial
    coefficients in the last column, so that sigma(companion(s)) == s.
    """
    coords = np.atleast_1d(np.asarray(getattr(s, "coords", s), dtype=complex))
    if not np.isfinite(coords).all():
        raise InvalidInputError("coordinates must be finite")
    n = len(coords)
    m = np.zeros((n, n), dtype=complex)
    for k in range(n - 1):
        m[k + 1, k] = 1.0
    for i in range(n):
        m[i, n - 1] = -((-1.0) ** (n - i)) * coords[n - i - 1]
    return m


def _swap_adjacent(t, u, i):
    """Swap diagonal entries i, i+1 of the triangular factor in place."""
    t11 = t[i, i]
    t22 = t[i + 1, i + 1]
    t12 = t[i, i + 1]
    v = np.array([t12, t22 - t11])
    nv = np.linalg.norm(v)
    if nv == 0.0:
        return
    q1 = v / nv
    q2 = np.array([-np.conj(q1[1]), np.conj(q1[0])])
    g = np.column_stack([q1, q2])
    t[:, i : i + 2] = t[:, i : i + 2] @ g
    t[i : i + 2, :] = g.conj().T @ t[i : i + 2, :]
    u[:, i : i + 2] = u[:, i : i + 2] @ g
    t[i + 1, i] = 0.0


def ordered_triangularize(a, order, match_tol: float = 1e-6):
    """Unitary triangularization with a prescribed diagonal order.

    Parameters
    ----------
    a : square matrix
    order : sequence of the eigenvalues of *a*, in the order they should
        appear on the diagonal of the triangular factor.
    match_tol : relative tolerance used to match *order* against the
        computed spectrum.

    Returns
    -------
    (u, t) with u unitary, t upper triangular, u* a u = t and
    diag(t) equal to *order* up to eigensolver accuracy.

    Raises InvalidInputError when *order* is not a permutation of the
    spectrum of *a*.
    """
    from scipy.optimize import linear_sum_assignment

    A = as_matrix(a)
    n = A.shape[0]
    order = np.atleast_1d(np.asarray(order, dtype=complex)).ravel()
    if len(order) != n:
        raise InvalidInputError("order must list all eigenvalues")
    t, u = scipy.linalg.schur(A, output="complex")
    diag = np.diag(t)
    cost = np.abs(order[:, None] - diag[None, :])
    rows, cols = linear_sum_assignment(cost)
    scale = 1.0 + float(np.max(np.abs(diag)))
    if cost[rows, cols].max() > match_tol * scale:
        raise InvalidInputError("order is not a permutation of the spectrum")
    # labels[p] = destination slot of the eigenvalue currently at position p
    labels = np.empty(n, dtype=int)
    labels[cols] = rows
    labels = list(labels)
    t = t.copy()
    u = u.copy()
    for k in range(n):
        p = labels.index(k, k)
        for i in range(p - 1, k - 1, -1):
            _swap_adjacent(t, u, i)
            labels[i], labels[i + 1] = labels[i + 1], labels[i]
    return u, t


def matrix_exp(m) -> np.ndarray:
    """Matrix exponential of a square matrix."""
    return scipy.linalg.expm(as_matrix(m))


def _normal_eig(u):
    """Spectral decomposition of a normal matrix via its Schur form."""
    t, q = scipy.linalg.schur(u, output="complex")
    return np.diag(t).copy(), q


def unitary_log(u, tol: float = 1e-8) -> np.ndarray:
    """Skew-Hermitian logarithm of a unitary matrix.

    Uses the spectral decomposition (unitary matrices are normal), taking
    the principal logarithm of each unit-modulus eigenvalue.  The result L
    satisfies matrix_exp(L) == u to roundoff.
    """
    U = as_matrix(u)
    n = U.shape[0]
    defect = np.linalg.norm(U.conj().T @ U - np.eye(n))
    if defect > tol * np.sqrt(n):
        raise InvalidInputError(f"matrix is not unitary (defect {defect:.3e})")
    w, q = _normal_eig(U)
    return q @ np.diag(np.log(w)) @ q.conj().T


def commutation_operator(a) -> np.ndarray:
    """Matrix of H -> AH - HA acting on column-stacked H (n^2 x n^2)."""
    A = as_matrix(a)
    n = A.shape[0]
    eye = np.eye(n)
    return np.kron(eye, A) - np.kron(A.T, eye)


@dataclass(eq=False)
class CommutantBasis:
    """Basis of the space of matrices commuting with a given matrix."""

    dim: int
    basis: list


def commutant_basis(a, tol: float = DEFAULT_TOL) -> CommutantBasis:
    """Null-space basis of the commutation operator of *a*.

    The dimension is always at least n, with equality exactly for
    non-derogatory matrices.
    """
    A = as_matrix(a)
    n = A.shape[0]
    op = commutation_operator(A)
    _, s, vh = np.linalg.svd(op)
    # the floor keeps a noise-only operator (nearly scalar A) fully null
    scale = max(s[0] if len(s) else 0.0, np.linalg.norm(A))
    mask = s <= tol * scale
    basis = [vh[i].conj().reshape((n, n), order="F") for i in np.nonzero(mask)[0]]
    return CommutantBasis(dim=int(mask.sum()), basis=basis)


def solve_conjugation(a, b, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Minimal-norm solution Y of AY - YA = B.

    Solves the column-stacked linear system in the least-squares sense and
    rejects the result when B is not in the range of the commutation
    operator (residual above tol * (1 + ||B||)).
    """
    A = as_matrix(a)
    B = as_matrix(b)
    if B.shape != A.shape:
        raise InvalidInputError("A and B must have the same dimension")
    n = A.shape[0]
    op = commutation_operator(A)
    y, *_ = np.linalg.lstsq(op, B.ravel(order="F"), rcond=None)
    Y = y.reshape((n, n), order="F")
    resid = np.linalg.norm(A @ Y - Y @ A - B)
    if resid > tol * (1.0 + np.linalg.norm(B)):
        raise NoSolutionError(
            f"direction is not in the range of the commutation operator "
            f"(residual {resid:.3e})"
        )
    return Y
