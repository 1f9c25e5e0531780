"""Dense eigenvalue, trace-norm, and PSD services for small Hermitian matrices.

All quantities are dimensionless (hbar = 1, so the vacuum covariance matrix is
the identity) and quadratures are ordered (Q1, P1, Q2, P2, ...).  Matrices are
plain numpy arrays; every function here is pure, so values can be shared freely
between threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

DEFAULT_PSD_TOL = 1e-9
HERMITICITY_TOL = 1e-12


class ValidationError(ValueError):
    """An input fails a structural precondition (shape, symmetry, finiteness)."""


def symplectic_form(n_modes: int) -> np.ndarray:
    """Direct sum of ``n_modes`` copies of [[0, 1], [-1, 0]]."""
    if n_modes < 0:
        raise ValidationError(f"n_modes must be nonnegative, got {n_modes}")
    if n_modes == 0:
        return np.zeros((0, 0))
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def require_finite(mat: np.ndarray, name: str = "matrix") -> np.ndarray:
    arr = np.asarray(mat)
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite entries")
    return arr


def hermiticity_defect(h: np.ndarray) -> tuple[float, tuple[int, int]]:
    """Largest entry of |h - h^dagger| and its index."""
    d = np.abs(h - np.conj(h).T)
    i, j = np.unravel_index(int(np.argmax(d)), d.shape)
    return float(d[i, j]), (int(i), int(j))


def require_hermitian(h: np.ndarray, tol: float = HERMITICITY_TOL,
                      name: str = "matrix") -> np.ndarray:
    """Validate near-Hermiticity and return the symmetrized (h + h^dagger)/2.

    The tolerance is relative to max(1, largest |entry|); inputs beyond it are
    rejected rather than repaired, naming the worst entry.
    """
    arr = np.asarray(h)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise ValidationError(f"{name} must have positive dimension")
    require_finite(arr, name)
    defect, (i, j) = hermiticity_defect(arr)
    scale = max(1.0, float(np.abs(arr).max()))
    if defect > tol * scale:
        raise ValidationError(
            f"{name} is not Hermitian: |h[{i},{j}] - conj(h[{j},{i}])| = "
            f"{defect:.6e} exceeds {tol:g} * {scale:.6e}")
    return (arr + np.conj(arr).T) / 2.0


def hermitian_eigenvalues(h: np.ndarray, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """All eigenvalues of a (near-)Hermitian matrix, ascending and real."""
    return np.linalg.eigvalsh(require_hermitian(h, tol))


def trace_norm(h: np.ndarray, tol: float = HERMITICITY_TOL) -> float:
    """Sum of absolute eigenvalues; equals trace(h) exactly when h is PSD."""
    return float(np.abs(hermitian_eigenvalues(h, tol)).sum())


@dataclass(frozen=True)
class PsdReport:
    """Verdict of a tolerant positive-semidefiniteness test, with margins."""

    ok: bool
    min_eigenvalue: float
    max_eigenvalue: float
    tol: float

    def __bool__(self) -> bool:
        return self.ok


def is_psd(h: np.ndarray, tol: float = DEFAULT_PSD_TOL) -> PsdReport:
    """PSD test passing iff lambda_min >= -tol * max(1, |lambda_max|)."""
    if tol < 0:
        raise ValidationError(f"tol must be nonnegative, got {tol}")
    ev = hermitian_eigenvalues(h)
    lo, hi = float(ev[0]), float(ev[-1])
    return PsdReport(lo >= -tol * max(1.0, abs(hi)), lo, hi, tol)


def real_embed(h: np.ndarray) -> np.ndarray:
    """Embed Hermitian h = A + iB as the real symmetric [[A, -B], [B, A]].

    The embedding's spectrum is the spectrum of h with every eigenvalue
    doubled in multiplicity, which gives an independent route to the complex
    eigenvalues through a purely real solver.
    """
    herm = require_hermitian(h)
    a, b = herm.real, herm.imag
    return np.block([[a, -b], [b, a]])


def jacobi_eigenvalues(mat: np.ndarray, max_sweeps: int = 60) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Deliberately independent of the LAPACK-backed path so the two can be
    cross-checked; meant for the small (<= ~32x32) matrices this package
    works with.
    """
    a = np.array(mat, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"matrix must be square, got shape {a.shape}")
    scale = max(1.0, float(np.abs(a).max()))
    if a.size and float(np.abs(a - a.T).max()) > HERMITICITY_TOL * scale:
        raise ValidationError("matrix must be symmetric")
    a = (a + a.T) / 2.0
    n = a.shape[0]
    if n < 2:
        return np.diag(a).copy()
    for _ in range(max_sweeps):
        off = float(np.sqrt(max(0.0, (a * a).sum() - (np.diag(a) ** 2).sum())))
        if off <= 1e-14 * scale * n:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-18 * scale:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta == 0.0:
                    t = 1.0
                else:
                    t = np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
    return np.sort(np.diag(a))


def random_orthogonal(dim: int, rng) -> np.ndarray:
    """Random orthogonal matrix via QR of a Gaussian matrix."""
    rng = np.random.default_rng(rng)
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    return q * np.sign(np.diag(r))


def random_orthogonal_symplectic(n_modes: int, rng) -> np.ndarray:
    """Random element of O(2n) intersected with Sp(2n, R).

    Built as the real representation of a random n x n unitary: entry u_jk
    becomes the 2x2 block [[Re u, Im u], [-Im u, Re u]].
    """
    rng = np.random.default_rng(rng)
    z = rng.standard_normal((n_modes, n_modes)) + 1j * rng.standard_normal((n_modes, n_modes))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    u = q * (d / np.abs(d))
    s = np.zeros((2 * n_modes, 2 * n_modes))
    s[0::2, 0::2] = u.real
    s[0::2, 1::2] = u.imag
    s[1::2, 0::2] = -u.imag
    s[1::2, 1::2] = u.real
    return s


def random_symplectic(n_modes: int, rng, scale: float = 1.0) -> np.ndarray:
    """exp(Omega H) for random symmetric H with entries uniform in [-scale, scale].

    Always symplectic because Omega H lies in the symplectic Lie algebra.
    """
    rng = np.random.default_rng(rng)
    h = rng.uniform(-scale, scale, (2 * n_modes, 2 * n_modes))
    h = (h + h.T) / 2.0
    return scipy.linalg.expm(symplectic_form(n_modes) @ h)
