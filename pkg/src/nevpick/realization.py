"""State-space realizations ``D + C (lambda I - A)^{-1} B`` and the
J-unitary function Theta, the inner function psi and Blaschke-Potapov factors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .datasets import BTOAData
from .errors import DataError, PoleProximityError, SingularMatrixError
from .numkit import as_cmatrix, hermitian_part, pair_observable, solve_sylvester, spectrum
from .pick import assemble_gamma_d, gamma_left, gamma_right

POLE_RTOL = 1e-8


@dataclass(frozen=True, eq=False)
class Realization:
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        D = as_cmatrix(self.D, name="D")
        r, q = D.shape
        A = np.asarray(self.A, dtype=complex)
        n = A.shape[0] if A.size else 0
        A = A.reshape(n, n) if n else np.zeros((0, 0), dtype=complex)
        B = np.asarray(self.B, dtype=complex).reshape(n, q)
        C = np.asarray(self.C, dtype=complex).reshape(r, n)
        for name, M in (("A", A), ("B", B), ("C", C)):
            if not np.all(np.isfinite(M)):
                raise DataError(f"{name} has non-finite entries")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "_poles", spectrum(A))

    @property
    def shape(self) -> tuple[int, int]:
        return self.D.shape

    @property
    def order(self) -> int:
        return self.A.shape[0]

    def poles(self) -> np.ndarray:
        return self._poles.copy()

    def value_at_infinity(self) -> np.ndarray:
        return self.D.copy()

    def candidate_poles(self) -> np.ndarray:
        return self.poles()

    def _check_points(self, lams: np.ndarray) -> None:
        if self.order == 0:
            return
        ev = self._poles
        dist = np.min(np.abs(lams[:, None] - ev[None, :]), axis=1)
        bad = dist <= POLE_RTOL * (1 + np.abs(lams))
        if np.any(bad):
            lam = lams[np.argmax(bad)]
            raise PoleProximityError(f"evaluation point {lam} is at a pole of the realization")

    def eval(self, lam: complex) -> np.ndarray:
        return self.eval_many(np.array([lam]))[0]

    def eval_many(self, lams) -> np.ndarray:
        """Values at each point of ``lams``; shape ``(K, r, q)``."""
        lams = np.asarray(lams, dtype=complex).reshape(-1)
        K = lams.size
        r, q = self.shape
        if self.order == 0:
            return np.broadcast_to(self.D, (K, r, q)).copy()
        self._check_points(lams)
        n = self.order
        M = lams[:, None, None] * np.eye(n) - self.A
        X = np.linalg.solve(M, np.broadcast_to(self.B, (K, n, q)))
        return self.D + self.C @ X

    def __call__(self, lam):
        return self.eval(lam)

    def cascade(self, other: "Realization") -> "Realization":
        """Realization of the product ``self(lambda) @ other(lambda)``."""
        n1, n2 = self.order, other.order
        A = np.block([[self.A, self.B @ other.C], [np.zeros((n2, n1)), other.A]])
        B = np.vstack([self.B @ other.D, other.B])
        C = np.hstack([self.C, self.D @ other.C])
        return Realization(A, B, C, self.D @ other.D)

    def zeros(self) -> np.ndarray:
        """Zeros of a square realization with invertible feedthrough."""
        if self.order == 0:
            return np.zeros(0, dtype=complex)
        return spectrum(self.A - self.B @ np.linalg.solve(self.D, self.C))

    def to_dict(self) -> dict:
        return {"A": self.A, "B": self.B, "C": self.C, "D": self.D}


def constant_realization(D) -> Realization:
    D = as_cmatrix(D, name="D")
    return Realization(np.zeros((0, 0)), np.zeros((0, D.shape[1])), np.zeros((D.shape[0], 0)), D)


@dataclass(frozen=True, eq=False)
class ThetaRealization:
    base: Realization
    J: np.ndarray
    gamma_D: np.ndarray
    bold_A: np.ndarray
    bold_C: np.ndarray
    n_Z: int
    n_W: int
    p: int
    m: int
    lyapunov_residual: float

    def eval(self, lam: complex) -> np.ndarray:
        return self.base.eval(lam)

    def eval_many(self, lams) -> np.ndarray:
        return self.base.eval_many(lams)

    def blocks_many(self, lams):
        """``(T11, T12, T21, T22)`` stacked over the points."""
        T = self.eval_many(lams)
        p = self.p
        return T[:, :p, :p], T[:, :p, p:], T[:, p:, :p], T[:, p:, p:]

    def value_at_infinity(self) -> np.ndarray:
        return self.base.value_at_infinity()

    def to_dict(self) -> dict:
        return {**self.base.to_dict(), "J": self.J}


def signature(p: int, m: int) -> np.ndarray:
    return np.diag(np.r_[np.ones(p), -np.ones(m)]).astype(complex)


def bold_matrices(d: BTOAData) -> tuple[np.ndarray, np.ndarray]:
    """``A = diag(-Z*, W)`` and ``C = [[-X*, V], [-Y*, U]]``."""
    nZ, nW = d.n_Z, d.n_W
    A = np.block([
        [-d.Z.conj().T, np.zeros((nZ, nW))],
        [np.zeros((nW, nZ)), d.W],
    ])
    C = np.block([[-d.X.conj().T, d.V], [-d.Y.conj().T, d.U]])
    return A, C


def build_theta(d: BTOAData, gamma_D: np.ndarray | None = None, cond_limit: float = 1e12) -> ThetaRealization:
    if gamma_D is None:
        gamma_D = assemble_gamma_d(gamma_left(d.Z, d.X, d.Y), d.Gamma, gamma_right(d.W, d.U, d.V))
    gamma_D = hermitian_part(np.asarray(gamma_D, dtype=complex))
    n = gamma_D.shape[0]
    if n and np.linalg.cond(gamma_D) > cond_limit:
        raise SingularMatrixError("Pick matrix is singular; Theta is undefined")
    A, C = bold_matrices(d)
    J = signature(d.p, d.m)
    lyap = gamma_D @ A + A.conj().T @ gamma_D + C.conj().T @ J @ C
    res = float(np.linalg.norm(lyap)) if n else 0.0
    scale = 1 + np.linalg.norm(gamma_D) * np.linalg.norm(A) + np.linalg.norm(C) ** 2
    if res > 1e-9 * scale:
        raise DataError(f"block Lyapunov identity fails (residual {res:.3e}); data not consistent")
    B = np.linalg.solve(gamma_D, C.conj().T @ J) if n else np.zeros((0, d.p + d.m))
    base = Realization(A, B, -C, np.eye(d.p + d.m))
    return ThetaRealization(base, J, gamma_D, A, C, d.n_Z, d.n_W, d.p, d.m, res)


@dataclass(frozen=True, eq=False)
class PsiRealization:
    base: Realization
    inverse: Realization
    P: np.ndarray

    def eval(self, lam: complex) -> np.ndarray:
        return self.base.eval(lam)

    def eval_many(self, lams) -> np.ndarray:
        return self.base.eval_many(lams)

    def value_at_infinity(self) -> np.ndarray:
        return self.base.value_at_infinity()

    def to_dict(self) -> dict:
        return {"psi": self.base.to_dict(), "psi_inverse": self.inverse.to_dict(), "P": self.P}


def build_psi(U, W) -> PsiRealization:
    """Inner function with zeros at ``sigma(W)``: ``I - U P^{-1} (z + W*)^{-1} U*``."""
    U = np.asarray(U, dtype=complex)
    W = np.asarray(W, dtype=complex)
    m, n = U.shape
    if n == 0:
        I = constant_realization(np.eye(m))
        return PsiRealization(I, I, np.zeros((0, 0), dtype=complex))
    if not pair_observable(U, W):
        raise DataError("(U, W) is not observable; psi is undefined")
    P = hermitian_part(solve_sylvester(W.conj().T, W, U.conj().T @ U))
    if np.min(np.linalg.eigvalsh(P)) <= 0:
        raise SingularMatrixError("Lyapunov solution P is not positive definite")
    Pinv_Us = np.linalg.solve(P, U.conj().T)
    base = Realization(-W.conj().T, U.conj().T, -np.linalg.solve(P.T, U.T).T, np.eye(m))
    inverse = Realization(W, Pinv_Us, U, np.eye(m))
    return PsiRealization(base, inverse, P)


def blaschke_factor(alpha: complex, P_proj) -> Realization:
    """Realization of ``I - P + ((lambda - a)/(lambda + conj(a))) P``."""
    alpha = complex(alpha)
    if not alpha.real > 0:
        raise DataError("Blaschke zero must lie in the open right half plane")
    P = as_cmatrix(P_proj, name="P")
    scale = max(1.0, float(np.linalg.norm(P)))
    if np.linalg.norm(P @ P - P) > 1e-10 * scale or np.linalg.norm(P - P.conj().T) > 1e-10 * scale:
        raise DataError("P is not an orthogonal projection")
    k = P.shape[0]
    w, V = np.linalg.eigh(hermitian_part(P))
    Q = V[:, w > 0.5]
    r = Q.shape[1]
    return Realization(
        -np.conj(alpha) * np.eye(r),
        Q.conj().T,
        -2 * alpha.real * Q,
        np.eye(k),
    )


@dataclass(frozen=True)
class KernelCheck:
    lhs: np.ndarray
    rhs: np.ndarray
    defect: float


def theta_kernel(theta: ThetaRealization, z: complex, zeta: complex) -> KernelCheck:
    """``(J - Theta(z) J Theta(zeta)*) / (z + conj(zeta))`` against its state-space form."""
    z, zeta = complex(z), complex(zeta)
    denom = z + np.conj(zeta)
    if abs(denom) <= 1e-12 * (1 + abs(z) + abs(zeta)):
        raise PoleProximityError("z + conj(zeta) = 0: kernel undefined")
    J = theta.J
    Tz, Tw = theta.eval_many([z, zeta])
    lhs = (J - Tz @ J @ Tw.conj().T) / denom
    A, C = theta.bold_A, theta.bold_C
    n = A.shape[0]
    if n == 0:
        rhs = np.zeros_like(lhs)
    else:
        I = np.eye(n)
        left = np.linalg.solve((z * I - A).T, C.T).T  # C (z - A)^{-1}
        right = np.linalg.solve(np.conj(zeta) * I - A.conj().T, C.conj().T)
        rhs = left @ np.linalg.solve(theta.gamma_D, right)
    return KernelCheck(lhs, rhs, float(np.linalg.norm(lhs - rhs)))


def j_unitarity_defect(theta: ThetaRealization, y) -> float | np.ndarray:
    """``max(|J - T* J T|, |J - T J T*|)`` at ``T = Theta(iy)``."""
    ys = np.atleast_1d(np.asarray(y, dtype=float))
    T = theta.eval_many(1j * ys)
    J = theta.J
    Th = np.conj(np.swapaxes(T, -1, -2))
    d1 = np.linalg.norm(J - Th @ J @ T, axis=(1, 2), ord=2)
    d2 = np.linalg.norm(J - T @ J @ Th, axis=(1, 2), ord=2)
    out = np.maximum(d1, d2)
    return float(out[0]) if np.ndim(y) == 0 else out


def theta_det_formula(d: BTOAData, lam: complex) -> complex:
    """``det(l - Z) det(l + W*) / (det(l + Z*) det(l - W))``."""
    lam = complex(lam)
    Iz, Iw = np.eye(d.n_Z), np.eye(d.n_W)
    num = np.linalg.det(lam * Iz - d.Z) * np.linalg.det(lam * Iw + d.W.conj().T)
    den = np.linalg.det(lam * Iz + d.Z.conj().T) * np.linalg.det(lam * Iw - d.W)
    return complex(num / den)
