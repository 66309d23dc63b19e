"""Pick matrices, solvability verdicts, J-gramians and inertia bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .datasets import COINCIDE_TOL, BTOAData, SimpleData
from .errors import SingularMatrixError
from .numkit import Inertia, hermitian_inertia, hermitian_part, solve_sylvester


def gamma_left(Z, X, Y) -> np.ndarray:
    """Solve ``G Z* + Z G = X X* - Y Y*``."""
    Z = np.asarray(Z, dtype=complex)
    X = np.asarray(X, dtype=complex)
    Y = np.asarray(Y, dtype=complex)
    Q = X @ X.conj().T - Y @ Y.conj().T
    return hermitian_part(solve_sylvester(Z, Z.conj().T, Q))


def gamma_right(W, U, V) -> np.ndarray:
    """Solve ``G W + W* G = U* U - V* V``."""
    W = np.asarray(W, dtype=complex)
    U = np.asarray(U, dtype=complex)
    V = np.asarray(V, dtype=complex)
    Q = U.conj().T @ U - V.conj().T @ V
    return hermitian_part(solve_sylvester(W.conj().T, W, Q))


def assemble_gamma_d(gL: np.ndarray, G: np.ndarray, gR: np.ndarray) -> np.ndarray:
    return np.block([[gL, G], [G.conj().T, gR]])


@dataclass(frozen=True)
class PickReport:
    gamma_L: np.ndarray
    gamma_R: np.ndarray
    gamma_D: np.ndarray
    inertia: Inertia
    solvable_schur: bool
    degenerate: bool
    kappa: int | None

    @property
    def verdict(self) -> str:
        if self.degenerate:
            return "degenerate"
        return "solvable" if self.solvable_schur else "indefinite"

    def to_dict(self) -> dict:
        return {
            "gamma_L": self.gamma_L,
            "gamma_R": self.gamma_R,
            "gamma_D": self.gamma_D,
            "inertia": self.inertia.to_dict(),
            "verdict": self.verdict,
            "solvable_schur": self.solvable_schur,
            "degenerate": self.degenerate,
            "kappa": self.kappa,
        }


def pick_matrix(d: BTOAData, tol: float | None = None) -> PickReport:
    gL = gamma_left(d.Z, d.X, d.Y)
    gR = gamma_right(d.W, d.U, d.V)
    gD = assemble_gamma_d(gL, d.Gamma, gR)
    inert = hermitian_inertia(hermitian_part(gD), tol)
    nu_plus, nu_zero, nu_minus = inert.counts
    return PickReport(
        gamma_L=gL,
        gamma_R=gR,
        gamma_D=gD,
        inertia=inert,
        # the degenerate PSD case still has solutions; it is flagged separately
        solvable_schur=nu_minus == 0,
        degenerate=nu_zero > 0,
        kappa=nu_minus if nu_zero == 0 else None,
    )


def simple_pick_matrix(s: SimpleData) -> np.ndarray:
    """Closed-form entries of the Pick matrix for simple data."""
    N, Np = len(s.left), len(s.right)
    P = np.zeros((N + Np, N + Np), dtype=complex)
    for i, a in enumerate(s.left):
        for j, b in enumerate(s.left):
            P[i, j] = (a.x @ b.x.conj() - a.y @ b.y.conj()) / (a.z + np.conj(b.z))
    for i, a in enumerate(s.right):
        for j, b in enumerate(s.right):
            P[N + i, N + j] = (a.u.conj() @ b.u - a.v.conj() @ b.v) / (np.conj(a.w) + b.w)
    for i, a in enumerate(s.left):
        for j, b in enumerate(s.right):
            if abs(a.z - b.w) <= COINCIDE_TOL:
                val = s.rho[(i, j)]
            else:
                val = (a.x @ b.v - a.y @ b.u) / (b.w - a.z)
            P[i, N + j] = val
            P[N + j, i] = np.conj(val)
    return P


@dataclass(frozen=True)
class JGramians:
    G_ZX: np.ndarray
    G_ZY: np.ndarray
    G_UW: np.ndarray
    G_VW: np.ndarray
    residual_L: float
    residual_R: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def j_gramians(d: BTOAData) -> JGramians:
    Zs, Ws = d.Z.conj().T, d.W.conj().T
    G_ZX = hermitian_part(solve_sylvester(d.Z, Zs, d.X @ d.X.conj().T))
    G_ZY = hermitian_part(solve_sylvester(d.Z, Zs, d.Y @ d.Y.conj().T))
    G_UW = hermitian_part(solve_sylvester(Ws, d.W, d.U.conj().T @ d.U))
    G_VW = hermitian_part(solve_sylvester(Ws, d.W, d.V.conj().T @ d.V))
    gL = gamma_left(d.Z, d.X, d.Y)
    gR = gamma_right(d.W, d.U, d.V)
    return JGramians(
        G_ZX, G_ZY, G_UW, G_VW,
        residual_L=float(np.linalg.norm(G_ZX - G_ZY - gL)),
        residual_R=float(np.linalg.norm(G_VW - G_UW + gR)),
    )


@dataclass(frozen=True)
class CouplingFactorization:
    """``Gamma_D = F* M F`` with ``F = [[I, -T],[0, I]]`` and block-diagonal ``M``.

    ``T_tilde`` is the coupling operator in coordinates; the middle factor is
    built from the J-gramians alone, so the reconstruction is a genuine check.
    """

    T_tilde: np.ndarray
    middle: np.ndarray
    reconstruction: np.ndarray
    reconstruction_residual: float
    complement: np.ndarray

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def coupling_factorization(d: BTOAData, cond_limit: float = 1e12) -> CouplingFactorization:
    nZ, nW = d.n_Z, d.n_W
    gR = gamma_right(d.W, d.U, d.V)
    gD = assemble_gamma_d(gamma_left(d.Z, d.X, d.Y), d.Gamma, gR)
    g = j_gramians(d)
    GC = g.G_ZX - g.G_ZY
    GO = g.G_VW - g.G_UW
    if nZ and np.linalg.cond(GC) > cond_limit:
        raise SingularMatrixError("Gamma_L is singular; coupling operator undefined")
    T = -np.linalg.solve(GC, d.Gamma) if nZ else np.zeros((0, nW), dtype=complex)
    comp = hermitian_part(-GO - T.conj().T @ GC @ T)
    M = np.block([[GC, np.zeros((nZ, nW))], [np.zeros((nW, nZ)), comp]])
    F = np.block([[np.eye(nZ), -T], [np.zeros((nW, nZ)), np.eye(nW)]])
    R = F.conj().T @ M @ F
    return CouplingFactorization(
        T_tilde=T,
        middle=M,
        reconstruction=R,
        reconstruction_residual=float(np.linalg.norm(gD - R)) if gD.size else 0.0,
        complement=comp,
    )


@dataclass(frozen=True)
class SchurInertia:
    whole: Inertia
    block: Inertia
    complement: Inertia
    complement_matrix: np.ndarray

    @property
    def additive(self) -> bool:
        return self.whole.counts == (self.block + self.complement).counts


def schur_complement_inertia(H, k: int, tol: float | None = None, cond_limit: float = 1e12) -> SchurInertia:
    """Inertia of ``H``, of its leading ``k x k`` block and of the Schur complement."""
    H = hermitian_part(np.asarray(H, dtype=complex))
    H11, H12 = H[:k, :k], H[:k, k:]
    H21, H22 = H[k:, :k], H[k:, k:]
    if k and np.linalg.cond(H11) > cond_limit:
        raise SingularMatrixError("leading block is singular")
    S = hermitian_part(H22 - H21 @ np.linalg.solve(H11, H12)) if k else H22
    return SchurInertia(
        whole=hermitian_inertia(H, tol),
        block=hermitian_inertia(H11, tol),
        complement=hermitian_inertia(S, tol),
        complement_matrix=S,
    )


def inertia_splits(gamma_D, n_Z: int, tol: float | None = None) -> dict:
    """Negative index of ``Gamma_D`` directly and through both block pivots."""
    H = hermitian_part(np.asarray(gamma_D, dtype=complex))
    n = H.shape[0]
    out = {"direct": hermitian_inertia(H, tol).n_minus}
    left = schur_complement_inertia(H, n_Z, tol)
    out["via_left"] = left.block.n_minus + left.complement.n_minus
    # pivot on the trailing block by reversing the block order
    perm = np.r_[np.arange(n_Z, n), np.arange(n_Z)]
    right = schur_complement_inertia(H[np.ix_(perm, perm)], n - n_Z, tol)
    out["via_right"] = right.block.n_minus + right.complement.n_minus
    return out
