"""Dense complex matrix primitives.

Everything here works on small ``numpy`` arrays (dimension ~12 at most), so
the Sylvester solver is a plain Kronecker-vectorized linear solve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError, SpectralOverlapError

RANK_RTOL = 1e-8
INERTIA_RTOL = 1e-8
HERMITIAN_RTOL = 1e-12


def as_cmatrix(a, shape: tuple[int, int] | None = None, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-D complex array, optionally checking the shape."""
    arr = np.asarray(a, dtype=complex)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2:
        raise DataError(f"{name} must be 2-D, got ndim={arr.ndim}")
    if shape is not None and arr.shape != tuple(shape):
        raise DataError(f"{name} has shape {arr.shape}, expected {tuple(shape)}")
    if not np.all(np.isfinite(arr)):
        raise DataError(f"{name} has non-finite entries")
    return arr


def _require_square(a: np.ndarray, name: str) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DataError(f"{name} must be square, got shape {a.shape}")


def spectrum(A) -> np.ndarray:
    """Eigenvalues of a square matrix, with multiplicity."""
    A = as_cmatrix(A, name="A")
    _require_square(A, "A")
    if A.shape[0] == 0:
        return np.zeros(0, dtype=complex)
    return np.linalg.eigvals(A)


def solve_sylvester(M, N, Q, sep_tol: float | None = None) -> np.ndarray:
    """Solve ``M X + X N = Q`` by Kronecker vectorization.

    ``sep_tol`` bounds ``min |mu_i + nu_j|`` over eigenvalues of M and N from
    below; the default is ``1e-10 * max(1, |M| + |N|)``.
    """
    M = as_cmatrix(M, name="M")
    N = as_cmatrix(N, name="N")
    _require_square(M, "M")
    _require_square(N, "N")
    m, n = M.shape[0], N.shape[0]
    Q = as_cmatrix(Q, shape=(m, n), name="Q") if m and n else np.zeros((m, n), dtype=complex)
    if m == 0 or n == 0:
        return np.zeros((m, n), dtype=complex)

    if sep_tol is None:
        sep_tol = 1e-10 * max(1.0, np.linalg.norm(M, 2) + np.linalg.norm(N, 2))
    gap = np.min(np.abs(spectrum(M)[:, None] + spectrum(N)[None, :]))
    if gap <= sep_tol:
        raise SpectralOverlapError(
            f"spectra of M and -N overlap (min |mu+nu| = {gap:.3e} <= {sep_tol:.3e})"
        )

    # column-major vec: vec(MX) = (I kron M) vec X, vec(XN) = (N^T kron I) vec X
    K = np.kron(np.eye(n), M) + np.kron(N.T, np.eye(m))
    x = np.linalg.solve(K, Q.reshape(-1, order="F"))
    return x.reshape((m, n), order="F")


def hermitian_part(H: np.ndarray) -> np.ndarray:
    return 0.5 * (H + H.conj().T)


@dataclass(frozen=True)
class Inertia:
    n_plus: int
    n_zero: int
    n_minus: int
    tolerance: float

    @property
    def counts(self) -> tuple[int, int, int]:
        return (self.n_plus, self.n_zero, self.n_minus)

    @property
    def dim(self) -> int:
        return self.n_plus + self.n_zero + self.n_minus

    def __add__(self, other: "Inertia") -> "Inertia":
        return Inertia(
            self.n_plus + other.n_plus,
            self.n_zero + other.n_zero,
            self.n_minus + other.n_minus,
            max(self.tolerance, other.tolerance),
        )

    def to_dict(self) -> dict:
        return {
            "n_plus": self.n_plus,
            "n_zero": self.n_zero,
            "n_minus": self.n_minus,
            "tolerance": self.tolerance,
        }


def default_inertia_tol(H: np.ndarray) -> float:
    return INERTIA_RTOL * max(1.0, float(np.linalg.norm(H)))


def hermitian_eigvals(H, hermitian_rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    """Eigenvalues of a (numerically) Hermitian matrix, ascending."""
    H = as_cmatrix(H, name="H")
    _require_square(H, "H")
    if H.shape[0] == 0:
        return np.zeros(0)
    scale = float(np.linalg.norm(H))
    asym = float(np.linalg.norm(H - H.conj().T))
    if asym > hermitian_rtol * max(scale, np.finfo(float).tiny):
        raise DataError(f"matrix is not Hermitian (|H - H*| = {asym:.3e}, |H| = {scale:.3e})")
    return np.linalg.eigvalsh(hermitian_part(H))


def hermitian_inertia(H, tol: float | None = None, hermitian_rtol: float = HERMITIAN_RTOL) -> Inertia:
    """Count eigenvalues above ``tol``, within ``[-tol, tol]`` and below ``-tol``."""
    H = as_cmatrix(H, name="H")
    ev = hermitian_eigvals(H, hermitian_rtol)
    if tol is None:
        tol = default_inertia_tol(H)
    return Inertia(
        n_plus=int(np.sum(ev > tol)),
        n_zero=int(np.sum(np.abs(ev) <= tol)),
        n_minus=int(np.sum(ev < -tol)),
        tolerance=float(tol),
    )


def numerical_rank(A: np.ndarray, rtol: float = RANK_RTOL) -> int:
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def pair_controllable(Z, X, tol: float = RANK_RTOL) -> bool:
    """Full rank of the Krylov matrix ``[X, ZX, ..., Z^{n-1} X]``."""
    Z = as_cmatrix(Z, name="Z")
    _require_square(Z, "Z")
    n = Z.shape[0]
    X = np.asarray(X, dtype=complex)
    if X.ndim != 2 or X.shape[0] != n:
        raise DataError(f"X has shape {X.shape}, expected ({n}, p)")
    if n == 0:
        return True
    blocks = [X]
    for _ in range(n - 1):
        blocks.append(Z @ blocks[-1])
    return numerical_rank(np.hstack(blocks), tol) == n


def pair_observable(U, W, tol: float = RANK_RTOL) -> bool:
    """Full rank of the stacked matrix ``[U; UW; ...; UW^{n-1}]``."""
    W = as_cmatrix(W, name="W")
    _require_square(W, "W")
    n = W.shape[0]
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[1] != n:
        raise DataError(f"U has shape {U.shape}, expected (m, {n})")
    if n == 0:
        return True
    blocks = [U]
    for _ in range(n - 1):
        blocks.append(blocks[-1] @ W)
    return numerical_rank(np.vstack(blocks), tol) == n
