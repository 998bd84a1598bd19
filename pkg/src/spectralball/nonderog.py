"""Non-derogatory classification by six independent criteria.

A square matrix is non-derogatory when every eigenvalue has geometric
multiplicity one.  Six equivalent numerical characterizations are evaluated
side by side and cross-checked:

* ``cyclic_vector``        -- a randomized vector generates a full Krylov basis
* ``minimal_degree``       -- the minimal polynomial has full degree
* ``eigenspace_dim``       -- every eigenvalue cluster has a 1-dim eigenspace
* ``commutant_dim``        -- the commutant has dimension exactly n
* ``symmetrization_rank``  -- the differential of the symmetrized
                              coordinates has rank n
* ``conjugation_orbit_rank`` -- the commutation operator has rank n^2 - n

Disagreement between criteria without a borderline rank decision is reported
as an internal error.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InternalError
from .matcore import (
    DEFAULT_TOL,
    as_matrix,
    commutation_operator,
    sigma,
    sigma_differential_matrix,
)

CRITERIA = (
    "cyclic_vector",
    "minimal_degree",
    "eigenspace_dim",
    "commutant_dim",
    "symmetrization_rank",
    "conjugation_orbit_rank",
)

#: Relative gap used to group nearly-equal computed eigenvalues.
CLUSTER_GAP = 1e-6

#: Number of random probes for the cyclic-vector criterion.
CYCLIC_TRIALS = 5

_DEFAULT_SEED = 0x5EED


@dataclass
class CriterionResult:
    passed: bool
    diagnostic: float
    borderline: bool = False


@dataclass(eq=False)
class NonderogReport:
    verdict: bool
    per_criterion: dict
    tolerances: dict
    borderline: bool = field(init=False)

    def __post_init__(self):
        self.borderline = any(c.borderline for c in self.per_criterion.values())


@dataclass(eq=False)
class PolyCoeffs:
    """Monic polynomial, coefficients ascending (last entry exactly 1)."""

    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        self.coeffs[-1] = 1.0

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z: complex) -> complex:
        return complex(np.polyval(self.coeffs[::-1], z))

    def on_matrix(self, m) -> np.ndarray:
        a = as_matrix(m)
        out = np.zeros_like(a)
        power = np.eye(a.shape[0], dtype=complex)
        for c in self.coeffs:
            out = out + c * power
            power = power @ a
        return out


def _rank_by_svd(s, tol, floor=0.0):
    """(rank, borderline) from a descending singular-value list.

    Rank counts values above tol * max(s_max, floor); the decision is
    flagged borderline when a singular value sits within a decade of that
    threshold.  The floor keeps operators that are pure roundoff noise
    (e.g. the commutation operator of a nearly scalar matrix) from being
    read as full rank: without it the noise itself sets the scale.
    """
    s = np.asarray(s, dtype=float)
    smax = s[0] if len(s) else 0.0
    scale = max(smax, floor)
    if scale == 0.0:
        return 0, False
    thresh = tol * scale
    rank = int(np.count_nonzero(s > thresh))
    borderline = bool(np.any((s >= thresh / 10.0) & (s <= thresh * 10.0)))
    return rank, borderline


def _minimal_polynomial_impl(A, tol):
    """Return (ascending coeffs, borderline flag)."""
    n = A.shape[0]
    power = np.eye(n, dtype=complex)
    cols = [power.ravel(order="F")]
    borderline = False
    for d in range(1, n):
        power = power @ A
        vec = power.ravel(order="F")
        cols.append(vec)
        w = np.column_stack(cols)
        norms = np.linalg.norm(w, axis=0)
        norms[norms == 0.0] = 1.0  # a vanished power is already dependent
        s = np.linalg.svd(w / norms, compute_uv=False)
        if np.any((s >= tol * s[0] / 10.0) & (s <= tol * s[0] * 10.0)):
            borderline = True
        if s[-1] <= tol * s[0]:
            coef, *_ = np.linalg.lstsq(
                np.column_stack(cols[:-1]), -vec, rcond=None
            )
            return np.append(coef, 1.0), borderline
    # Full degree: minimal polynomial equals the characteristic polynomial.
    desc = sigma(A).char_coefficients()
    return desc[::-1], borderline


def minimal_polynomial(a, tol: float = DEFAULT_TOL) -> PolyCoeffs:
    """Monic polynomial of least degree annihilating the matrix.

    Found at the first rank deficiency of the stacked column-vectorized
    powers I, A, A^2, ...; its coefficients come from a least-squares solve
    against the last power.
    """
    A = as_matrix(a)
    coeffs, _ = _minimal_polynomial_impl(A, tol)
    return PolyCoeffs(coeffs)


def _cluster_eigenvalues(values, radius):
    """Group computed eigenvalues whose mutual gap is below the cluster
    threshold; returns a list of index arrays."""
    n = len(values)
    thresh = CLUSTER_GAP * (1.0 + radius)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= thresh:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [np.array(g) for g in groups.values()]


def _criterion_cyclic(A, tol, rng):
    n = A.shape[0]
    best_rank, best_borderline = 0, True
    for _ in range(CYCLIC_TRIALS):
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        cols = [v]
        for _ in range(n - 1):
            cols.append(A @ cols[-1])
        k = np.column_stack(cols)
        norms = np.linalg.norm(k, axis=0)
        norms[norms == 0.0] = 1.0
        s = np.linalg.svd(k / norms, compute_uv=False)
        rank, borderline = _rank_by_svd(s, tol)
        if rank > best_rank or (rank == best_rank and not borderline):
            best_rank, best_borderline = rank, borderline
        if best_rank == n and not best_borderline:
            break
    return CriterionResult(best_rank == n, float(best_rank), best_borderline)


def _criterion_eigenspaces(A, tol):
    n = A.shape[0]
    values = np.linalg.eigvals(A)
    radius = float(np.max(np.abs(values)))
    floor = np.linalg.norm(A)
    max_mult = 0
    borderline = False
    for group in _cluster_eigenvalues(values, radius):
        center = values[group].mean()
        s = np.linalg.svd(A - center * np.eye(n), compute_uv=False)
        rank, flag = _rank_by_svd(s, tol, floor=floor)
        # every cluster has at least one eigenvalue, whatever the rank says
        mult = max(n - rank, 1)
        max_mult = max(max_mult, mult)
        borderline = borderline or flag
    return CriterionResult(max_mult == 1, float(max_mult), borderline)


def classify(a, tol: float = DEFAULT_TOL, rng=None) -> NonderogReport:
    """Classify a matrix as non-derogatory or derogatory.

    All six criteria are evaluated; the verdict is their majority.  A
    disagreement with no borderline rank decision raises InternalError.
    The randomized cyclic-vector probe draws from *rng* (seeded default).
    """
    A = as_matrix(a)
    n = A.shape[0]
    if rng is None:
        rng = np.random.default_rng(_DEFAULT_SEED)

    per = {}
    per["cyclic_vector"] = _criterion_cyclic(A, tol, rng)

    min_coeffs, mp_borderline = _minimal_polynomial_impl(A, tol)
    degree = len(min_coeffs) - 1
    per["minimal_degree"] = CriterionResult(degree == n, float(degree), mp_borderline)

    per["eigenspace_dim"] = _criterion_eigenspaces(A, tol)

    op = commutation_operator(A)
    s_op = np.linalg.svd(op, compute_uv=False)
    op_rank, op_borderline = _rank_by_svd(s_op, tol, floor=np.linalg.norm(A))
    commutant_dim = n * n - op_rank
    per["commutant_dim"] = CriterionResult(
        commutant_dim == n, float(commutant_dim), op_borderline
    )

    s_sig = np.linalg.svd(sigma_differential_matrix(A), compute_uv=False)
    sig_rank, sig_borderline = _rank_by_svd(s_sig, tol)
    per["symmetrization_rank"] = CriterionResult(
        sig_rank == n, float(sig_rank), sig_borderline
    )

    per["conjugation_orbit_rank"] = CriterionResult(
        op_rank == n * n - n, float(op_rank), op_borderline
    )

    votes = sum(1 for c in per.values() if c.passed)
    if votes in (0, len(per)):
        verdict = votes > 0
    else:
        if not any(c.borderline for c in per.values()):
            detail = {k: (c.passed, c.diagnostic) for k, c in per.items()}
            raise InternalError(f"criteria disagree without borderline flags: {detail}")
        clean = [c.passed for c in per.values() if not c.borderline]
        pool = clean if clean and sum(clean) * 2 != len(clean) else [
            c.passed for c in per.values()
        ]
        if sum(pool) * 2 == len(pool):
            raise InternalError("criteria are tied; cannot form a verdict")
        verdict = sum(pool) * 2 > len(pool)

    tolerances = {
        "rank": tol,
        "cluster_gap": CLUSTER_GAP,
        "borderline_decade": 10.0,
    }
    return NonderogReport(verdict=verdict, per_criterion=per, tolerances=tolerances)


def is_nonderogatory(a, tol: float = DEFAULT_TOL, rng=None) -> bool:
    """Convenience wrapper returning only the classify verdict."""
    return classify(a, tol=tol, rng=rng).verdict
