"""(m+n)-mode Gaussian states as covariance matrix plus mean vector records.

A state of m modes on side A and n modes on side B is fully described by its
2(m+n) x 2(m+n) covariance matrix and its mean vector, both in the
(Q1, P1, Q2, P2, ...) quadrature ordering with the A modes first.  A
covariance matrix is physical ("bona fide") iff cov + i*Omega >= 0, where
Omega is the symplectic form; all constructors here enforce that with a
tolerant PSD test.

Mean vectors are carried everywhere even though the steering quantities
ignore them, because channels act on them and file round-trips must be
faithful.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .linalg import (
    DEFAULT_PSD_TOL,
    HERMITICITY_TOL,
    PsdReport,
    ValidationError,
    is_psd,
    random_symplectic,
    require_finite,
    symplectic_form,
)


class BonaFideError(ValidationError):
    """Covariance matrix violates cov + i*Omega >= 0."""

    def __init__(self, message: str, min_eigenvalue: float):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


@dataclass(frozen=True)
class GaussianState:
    """Immutable (modes_a + modes_b)-mode Gaussian state record.

    Only shape consistency is checked here; use :func:`make_state` for the
    fully validated constructor.  The arrays are copied and frozen.
    """

    modes_a: int
    modes_b: int
    cov: np.ndarray
    mean: np.ndarray

    def __post_init__(self):
        if self.modes_a < 1 or self.modes_b < 1:
            raise ValidationError(
                f"mode counts must be positive, got ({self.modes_a}, {self.modes_b})")
        dim = 2 * (self.modes_a + self.modes_b)
        cov = np.array(self.cov, dtype=float)
        mean = np.array(self.mean, dtype=float)
        if cov.shape != (dim, dim):
            raise ValidationError(f"cov must have shape ({dim}, {dim}), got {cov.shape}")
        if mean.shape != (dim,):
            raise ValidationError(f"mean must have length {dim}, got shape {mean.shape}")
        require_finite(cov, "cov")
        require_finite(mean, "mean")
        cov.setflags(write=False)
        mean.setflags(write=False)
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "mean", mean)

    @property
    def n_modes(self) -> int:
        return self.modes_a + self.modes_b

    @property
    def dim(self) -> int:
        return 2 * self.n_modes

    def block_a(self) -> np.ndarray:
        return self.cov[: 2 * self.modes_a, : 2 * self.modes_a]

    def block_b(self) -> np.ndarray:
        return self.cov[2 * self.modes_a :, 2 * self.modes_a :]

    def block_c(self) -> np.ndarray:
        return self.cov[: 2 * self.modes_a, 2 * self.modes_a :]


def validate_state(state: GaussianState, tol: float = DEFAULT_PSD_TOL) -> PsdReport:
    """Bona fide report: tolerant PSD test of cov + i*Omega."""
    g = state.cov.astype(complex)
    g += 1j * symplectic_form(state.n_modes)
    return is_psd(g, tol)


def _require_symmetric(cov: np.ndarray, name: str = "cov") -> np.ndarray:
    defect = float(np.abs(cov - cov.T).max()) if cov.size else 0.0
    scale = max(1.0, float(np.abs(cov).max())) if cov.size else 1.0
    if defect > HERMITICITY_TOL * scale:
        i, j = np.unravel_index(int(np.argmax(np.abs(cov - cov.T))), cov.shape)
        raise ValidationError(
            f"{name} is not symmetric: |cov[{i},{j}] - cov[{j},{i}]| = {defect:.6e}")
    return (cov + cov.T) / 2.0


def make_state(modes_a: int, modes_b: int, cov, mean=None,
               tol: float = DEFAULT_PSD_TOL) -> GaussianState:
    """Validated constructor: shapes, symmetry, finiteness, bona fide condition."""
    cov = require_finite(np.array(cov, dtype=float), "cov")
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise ValidationError(f"cov must be square, got shape {cov.shape}")
    cov = _require_symmetric(cov)
    if mean is None:
        mean = np.zeros(cov.shape[0])
    state = GaussianState(modes_a, modes_b, cov, mean)
    report = validate_state(state, tol)
    if not report.ok:
        raise BonaFideError(
            f"covariance matrix is not bona fide: min eigenvalue of cov + i*Omega "
            f"is {report.min_eigenvalue:.6e} (tol {tol:g})", report.min_eigenvalue)
    return state


def check_standard_form_params(a: float, b: float, c: float, d: float) -> None:
    """Verify the (1+1)-mode standard-form constraints, naming any failure.

    Constraints: a >= 1, b >= 1, a(ab - c^2) - b >= 0, b(ab - d^2) - a >= 0,
    (ab - c^2)(ab - d^2) + 1 - a^2 - b^2 - 2cd >= 0.  A relative slack absorbs
    rounding in parameter values supplied from closed-form expressions.
    """
    slack = 1e-9 * max(1.0, (a * b) ** 2)
    checks = [
        ("a >= 1", a - 1.0),
        ("b >= 1", b - 1.0),
        ("a(ab - c^2) - b >= 0", a * (a * b - c * c) - b),
        ("b(ab - d^2) - a >= 0", b * (a * b - d * d) - a),
        ("(ab - c^2)(ab - d^2) + 1 - a^2 - b^2 - 2cd >= 0",
         (a * b - c * c) * (a * b - d * d) + 1.0 - a * a - b * b - 2.0 * c * d),
    ]
    for name, value in checks:
        if not np.isfinite(value) or value < -slack:
            raise ValidationError(
                f"standard-form constraint violated: {name} (value {value:.6e})")


def standard_form_state(a: float, b: float, c: float, d: float,
                        tol: float = DEFAULT_PSD_TOL) -> GaussianState:
    """(1+1)-mode state with covariance [[a,0,c,0],[0,a,0,d],[c,0,b,0],[0,d,0,b]]."""
    check_standard_form_params(a, b, c, d)
    cov = np.array([
        [a, 0.0, c, 0.0],
        [0.0, a, 0.0, d],
        [c, 0.0, b, 0.0],
        [0.0, d, 0.0, b],
    ])
    return make_state(1, 1, cov, tol=tol)


def schmidt_pure_state(modes_a: int, modes_b: int, gammas,
                       tol: float = DEFAULT_PSD_TOL) -> GaussianState:
    """Pure-state covariance in phase-space Schmidt form.

    Each mixing factor gamma_k >= 1 couples mode A_k to mode B_k through the
    off-diagonal block diag(sqrt(gamma_k^2 - 1), -sqrt(gamma_k^2 - 1)); the
    |modes_a - modes_b| unpaired modes on the larger side are vacuum.
    """
    gammas = np.atleast_1d(np.asarray(gammas, dtype=float))
    k = min(modes_a, modes_b)
    if modes_a < 1 or modes_b < 1:
        raise ValidationError(
            f"mode counts must be positive, got ({modes_a}, {modes_b})")
    if gammas.shape != (k,):
        raise ValidationError(
            f"expected {k} mixing factors for a ({modes_a}+{modes_b})-mode state, "
            f"got {gammas.shape}")
    for idx, g in enumerate(gammas):
        if not np.isfinite(g) or g < 1.0:
            raise ValidationError(f"mixing factor gamma[{idx}] = {g} must be >= 1")
    a_diag = np.ones(modes_a)
    b_diag = np.ones(modes_b)
    a_diag[:k] = gammas
    b_diag[:k] = gammas
    cov = np.zeros((2 * (modes_a + modes_b), 2 * (modes_a + modes_b)))
    cov[: 2 * modes_a, : 2 * modes_a] = np.diag(np.repeat(a_diag, 2))
    cov[2 * modes_a :, 2 * modes_a :] = np.diag(np.repeat(b_diag, 2))
    for i in range(k):
        coupling = np.sqrt(gammas[i] ** 2 - 1.0)
        block = np.diag([coupling, -coupling])
        cov[2 * i : 2 * i + 2, 2 * modes_a + 2 * i : 2 * modes_a + 2 * i + 2] = block
        cov[2 * modes_a + 2 * i : 2 * modes_a + 2 * i + 2, 2 * i : 2 * i + 2] = block
    return make_state(modes_a, modes_b, cov, tol=tol)


def squeezed_vacuum_state(r: float, tol: float = DEFAULT_PSD_TOL) -> GaussianState:
    """Two-mode squeezed vacuum with squeezing parameter r >= 0.

    Identical to the Schmidt pure state at gamma = cosh(2r).
    """
    if not np.isfinite(r) or r < 0:
        raise ValidationError(f"squeezing parameter must be >= 0, got {r}")
    ch, sh = np.cosh(2.0 * r), np.sinh(2.0 * r)
    cov = np.array([
        [ch, 0.0, sh, 0.0],
        [0.0, ch, 0.0, -sh],
        [sh, 0.0, ch, 0.0],
        [0.0, -sh, 0.0, ch],
    ])
    return make_state(1, 1, cov, tol=tol)


def williamson_inverse(sympl_eigenvalues, sympl: np.ndarray) -> np.ndarray:
    """Assemble S * diag(nu_1, nu_1, nu_2, nu_2, ...) * S^T."""
    nu = np.asarray(sympl_eigenvalues, dtype=float)
    cov = sympl @ np.diag(np.repeat(nu, 2)) @ sympl.T
    return (cov + cov.T) / 2.0


def random_state(modes_a: int, modes_b: int, max_sympl_eigen: float, rng,
                 tol: float = DEFAULT_PSD_TOL) -> GaussianState:
    """Random bona fide state, valid by construction.

    Draws symplectic eigenvalues nu_k uniform in [1, max_sympl_eigen] and a
    random symplectic S = exp(Omega H) with H symmetric, entries uniform in
    [-1, 1], then returns S diag(nu) S^T with zero mean.  Deterministic for a
    fixed integer seed; pass independent generators for parallel sampling.
    """
    if max_sympl_eigen < 1.0:
        raise ValidationError(f"max_sympl_eigen must be >= 1, got {max_sympl_eigen}")
    rng = np.random.default_rng(rng)
    n = modes_a + modes_b
    nu = rng.uniform(1.0, max_sympl_eigen, n)
    sympl = random_symplectic(n, rng)
    return make_state(modes_a, modes_b, williamson_inverse(nu, sympl), tol=tol)


def mix_covariances(s1: GaussianState, s2: GaussianState, p1: float,
                    tol: float = DEFAULT_PSD_TOL) -> GaussianState:
    """State with the convex combination p1*cov1 + (1-p1)*cov2 of covariances.

    Always bona fide (the PSD cone is convex); means mix with the same weights.
    """
    if (s1.modes_a, s1.modes_b) != (s2.modes_a, s2.modes_b):
        raise ValidationError(
            f"partition mismatch: ({s1.modes_a},{s1.modes_b}) vs ({s2.modes_a},{s2.modes_b})")
    if not 0.0 <= p1 <= 1.0:
        raise ValidationError(f"p1 must lie in [0, 1], got {p1}")
    cov = p1 * s1.cov + (1.0 - p1) * s2.cov
    mean = p1 * s1.mean + (1.0 - p1) * s2.mean
    return make_state(s1.modes_a, s1.modes_b, cov, mean, tol=tol)


def state_to_json(state: GaussianState) -> str:
    """Serialize to the state document schema (floats round-trip exactly)."""
    return json.dumps({
        "modes_a": state.modes_a,
        "modes_b": state.modes_b,
        "cov": state.cov.tolist(),
        "mean": state.mean.tolist(),
    }, indent=2)


def state_from_json(text: str, tol: float = DEFAULT_PSD_TOL,
                    require_bona_fide: bool = True) -> GaussianState:
    """Parse a state document; unknown keys are ignored.

    With require_bona_fide=False only structural validation runs, which lets
    callers report the bona fide margin instead of failing.
    """
    doc = json.loads(text)
    if not isinstance(doc, dict):
        raise ValidationError("state document must be a JSON object")
    missing = {"modes_a", "modes_b", "cov", "mean"} - set(doc)
    if missing:
        raise ValidationError(f"state document missing keys: {sorted(missing)}")
    modes_a, modes_b = doc["modes_a"], doc["modes_b"]
    if not isinstance(modes_a, int) or not isinstance(modes_b, int):
        raise ValidationError("modes_a and modes_b must be integers")
    try:
        cov = np.array(doc["cov"], dtype=float)
        mean = np.array(doc["mean"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"cov/mean must be numeric arrays: {exc}") from None
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise ValidationError(f"cov must be a square matrix, got shape {cov.shape}")
    if require_bona_fide:
        return make_state(modes_a, modes_b, cov, mean, tol=tol)
    cov = _require_symmetric(require_finite(cov, "cov"))
    return GaussianState(modes_a, modes_b, cov, mean)
