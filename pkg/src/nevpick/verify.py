"""Independent checks on candidate interpolants.

Residue point evaluations are computed by trapezoid quadrature on small
circles around the nodes, so nothing here reuses the construction of Theta.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Protocol

import numpy as np

from .datasets import COINCIDE_TOL, BTOAData, SimpleData
from .errors import ContourError, DataError, PoleProximityError, SingularMatrixError
from .numkit import Inertia, hermitian_inertia, hermitian_part, spectrum
from .pick import assemble_gamma_d, gamma_left, gamma_right
from .realization import bold_matrices


class Evaluator(Protocol):
    def eval_many(self, lams) -> np.ndarray: ...


class ClosedForm:
    """Wrap a pointwise function ``lam -> (p x m)`` with known poles."""

    def __init__(self, func: Callable[[complex], object], p: int, m: int, poles=(), at_infinity=None):
        self.func = func
        self.shape = (p, m)
        self._poles = np.asarray(poles, dtype=complex).reshape(-1)
        self._inf = None if at_infinity is None else np.asarray(at_infinity, dtype=complex).reshape(p, m)

    def eval_many(self, lams) -> np.ndarray:
        lams = np.asarray(lams, dtype=complex).reshape(-1)
        out = np.empty((lams.size,) + self.shape, dtype=complex)
        for k, lam in enumerate(lams):
            out[k] = np.asarray(self.func(complex(lam)), dtype=complex).reshape(self.shape)
        return out

    def eval(self, lam: complex) -> np.ndarray:
        return self.eval_many([lam])[0]

    def candidate_poles(self) -> np.ndarray:
        return self._poles

    def value_at_infinity(self) -> np.ndarray:
        if self._inf is None:
            raise ValueError("value at infinity not provided")
        return self._inf

    @classmethod
    def constant(cls, c, p: int | None = None, m: int | None = None) -> "ClosedForm":
        c = np.atleast_2d(np.asarray(c, dtype=complex))
        p, m = c.shape if p is None else (p, m)
        c = np.broadcast_to(c, (p, m)).copy()
        return cls(lambda lam: c, p, m, at_infinity=c)


def _poles_of(S) -> np.ndarray:
    f = getattr(S, "candidate_poles", None)
    return np.asarray(f(), dtype=complex).reshape(-1) if f is not None else np.zeros(0, dtype=complex)


# ------------------------------------------------------------ contours


@dataclass(frozen=True)
class ContourConfig:
    nodes_per_circle: int = 256
    gap_fraction: float = 0.5
    re_fraction: float = 0.25
    cluster_rtol: float = 1e-6
    explicit_radii: dict | None = None

    def doubled(self) -> "ContourConfig":
        return ContourConfig(2 * self.nodes_per_circle, self.gap_fraction, self.re_fraction,
                             self.cluster_rtol, self.explicit_radii)


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float
    members: tuple


def _clusters(eigs: np.ndarray, rtol: float) -> list[list[complex]]:
    groups: list[list[complex]] = []
    for mu in eigs:
        for g in groups:
            if abs(mu - np.mean(g)) <= rtol * (1 + abs(mu)):
                g.append(complex(mu))
                break
        else:
            groups.append([complex(mu)])
    return groups


def plan_circles(eigs, poles, cfg: ContourConfig) -> list[Circle]:
    """One circle per eigenvalue cluster, clear of other clusters and poles."""
    eigs = np.asarray(eigs, dtype=complex).reshape(-1)
    poles = np.asarray(poles, dtype=complex).reshape(-1)
    groups = _clusters(eigs, cfg.cluster_rtol)
    circles = []
    for k, g in enumerate(groups):
        c = complex(np.mean(g))
        if c.real <= 0:
            raise ContourError(f"eigenvalue {c} is not in the right half plane")
        spread = max(abs(mu - c) for mu in g)
        others = [mu for j, h in enumerate(groups) if j != k for mu in h]
        obstacles = np.array(others + list(poles), dtype=complex)
        gap = float(np.min(np.abs(obstacles - c))) if obstacles.size else np.inf
        r = min(cfg.gap_fraction * gap, cfg.re_fraction * c.real)
        if cfg.explicit_radii and k in cfg.explicit_radii:
            r = float(cfg.explicit_radii[k])
        if r <= 4 * spread or r <= 0:
            raise ContourError(f"cannot isolate eigenvalue cluster at {c} (radius {r:.3e})")
        if poles.size and np.min(np.abs(poles - c)) < 2 * r * (1 - 1e-12):
            raise ContourError(f"integrand pole within twice the radius of the circle at {c}")
        if r >= c.real:
            raise ContourError(f"circle at {c} leaves the right half plane")
        circles.append(Circle(c, r, tuple(g)))
    return circles


def _circle_points(circle: Circle, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights with ``sum w f(l) ~ (1/2 pi i) \\oint f``."""
    e = np.exp(2j * np.pi * np.arange(n) / n)
    return circle.center + circle.radius * e, circle.radius * e / n


def _resolvent_left(Z: np.ndarray, lams: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    n = Z.shape[0]
    M = lams[:, None, None] * np.eye(n) - Z
    return np.linalg.solve(M, rhs)


def _resolvent_right(W: np.ndarray, lams: np.ndarray, lhs: np.ndarray) -> np.ndarray:
    """``lhs (lam - W)^{-1}`` for each point."""
    n = W.shape[0]
    M = lams[:, None, None] * np.eye(n) - W
    return np.swapaxes(np.linalg.solve(np.swapaxes(M, 1, 2), np.swapaxes(lhs, 1, 2)), 1, 2)


def _quadrature(circles: list[Circle], n: int, integrand) -> np.ndarray:
    total = None
    for circ in circles:
        lams, w = _circle_points(circ, n)
        part = np.tensordot(w, integrand(lams), axes=(0, 0))
        total = part if total is None else total + part
    return total


def ltoa_eval(S, Z, X, cfg: ContourConfig = ContourConfig()) -> np.ndarray:
    """``sum Res (l - Z)^{-1} X S(l)`` over the spectrum of ``Z``."""
    Z = np.asarray(Z, dtype=complex)
    X = np.asarray(X, dtype=complex)
    nZ = Z.shape[0]
    if nZ == 0:
        return np.zeros((0, S.shape[1] if hasattr(S, "shape") else 0), dtype=complex)
    circles = plan_circles(spectrum(Z), _poles_of(S), cfg)
    return _quadrature(circles, cfg.nodes_per_circle,
                       lambda l: _resolvent_left(Z, l, X @ S.eval_many(l)))


def rtoa_eval(S, U, W, cfg: ContourConfig = ContourConfig()) -> np.ndarray:
    """``sum Res S(l) U (l - W)^{-1}`` over the spectrum of ``W``."""
    U = np.asarray(U, dtype=complex)
    W = np.asarray(W, dtype=complex)
    nW = W.shape[0]
    if nW == 0:
        return np.zeros((S.shape[0] if hasattr(S, "shape") else 0, 0), dtype=complex)
    circles = plan_circles(spectrum(W), _poles_of(S), cfg)
    return _quadrature(circles, cfg.nodes_per_circle,
                       lambda l: _resolvent_right(W, l, S.eval_many(l) @ U))


def btoa_eval(S, Z, X, U, W, cfg: ContourConfig = ContourConfig()) -> np.ndarray:
    """``sum Res (l - Z)^{-1} X S(l) U (l - W)^{-1}`` over both spectra.

    Coinciding eigenvalues of ``Z`` and ``W`` share a single circle.
    """
    Z, X, U, W = (np.asarray(a, dtype=complex) for a in (Z, X, U, W))
    nZ, nW = Z.shape[0], W.shape[0]
    if nZ == 0 or nW == 0:
        return np.zeros((nZ, nW), dtype=complex)
    eigs = np.concatenate([spectrum(Z), spectrum(W)])
    circles = plan_circles(eigs, _poles_of(S), cfg)

    def integrand(l):
        inner = _resolvent_left(Z, l, X @ S.eval_many(l) @ U)
        return _resolvent_right(W, l, inner)

    return _quadrature(circles, cfg.nodes_per_circle, integrand)


# ------------------------------------------------------------ residuals


AXIS_SAMPLES = 100
INTERIOR_SAMPLES = 100


def axis_grid(n: int = AXIS_SAMPLES) -> np.ndarray:
    th = np.linspace(-np.pi / 2, np.pi / 2, n + 2)[1:-1]
    return 1j * np.tan(th)


def interior_grid(n: int = INTERIOR_SAMPLES) -> np.ndarray:
    """Deterministic points spread over the right half plane."""
    k = int(round(np.sqrt(n)))
    re = np.geomspace(0.03, 30.0, k)
    im = np.linspace(-12.0, 12.0, k) + 0.0137
    return (re[:, None] + 1j * im[None, :]).reshape(-1)[:n]


@dataclass(frozen=True)
class ResidualReport:
    r_left: float
    r_right: float
    r_bi: float
    contractivity_max: float
    axis_max: float
    interior_max: float | None
    samples_used: int
    mode: str

    def passed(self, tol: float = 1e-6) -> bool:
        return max(self.r_left, self.r_right, self.r_bi) <= tol and self.contractivity_max <= 1 + tol

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _sup_norm(S, lams: np.ndarray) -> float:
    vals = S.eval_many(lams)
    if vals.size == 0:
        return 0.0
    return float(np.max(np.linalg.norm(vals, ord=2, axis=(1, 2))))


def check_interpolation(S, d: BTOAData, cfg: ContourConfig = ContourConfig(), kappa: int = 0) -> ResidualReport:
    """Residuals of the three interpolation conditions and a contractivity sample.

    With ``kappa > 0`` the function may have poles in the right half plane, so
    only the boundary values are sampled for the norm bound.
    """
    rl = float(np.linalg.norm(ltoa_eval(S, d.Z, d.X, cfg) - d.Y)) if d.n_Z else 0.0
    rr = float(np.linalg.norm(rtoa_eval(S, d.U, d.W, cfg) - d.V)) if d.n_W else 0.0
    rb = float(np.linalg.norm(btoa_eval(S, d.Z, d.X, d.U, d.W, cfg) - d.Gamma)) if d.n_Z and d.n_W else 0.0
    ax = _sup_norm(S, axis_grid())
    used = AXIS_SAMPLES
    inner = None
    if kappa == 0:
        inner = _sup_norm(S, interior_grid())
        used += INTERIOR_SAMPLES
    cmax = ax if inner is None else max(ax, inner)
    nc = cfg.nodes_per_circle
    quad = nc * (d.n_Z + d.n_W + (d.n_Z + d.n_W if d.n_Z and d.n_W else 0))
    return ResidualReport(rl, rr, rb, cmax, ax, inner, used + quad, "schur" if kappa == 0 else f"kappa={kappa}")


def circle_value_and_derivative(S, a: complex, h: float, n: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """``S(a)`` and ``S'(a)`` from samples on a circle of radius ``h``.

    Works at removable singularities of the representation (e.g. an
    interpolant evaluated at a node of ``W``).
    """
    e = np.exp(2j * np.pi * np.arange(n) / n)
    vals = S.eval_many(a + h * e)
    val = vals.mean(axis=0)
    der = np.tensordot(e.conj(), vals, axes=(0, 0)) / (n * h)
    return val, der


def _safe_radius(S, a: complex, cap: float = 1e-2) -> float:
    poles = _poles_of(S)
    r = min(cap, 0.25 * abs(a.real)) if a.real else cap
    if poles.size:
        r = min(r, 0.25 * float(np.min(np.abs(poles - a))))
    return r


def sampled_pick_matrix(S, s: SimpleData) -> np.ndarray:
    """Pick matrix rebuilt from values of ``S`` at the nodes, conjugated by the directions."""
    N = len(s.left)
    zs = [ln.z for ln in s.left]
    ws = [rn.w for rn in s.right]
    Sz, Sw, dSw = [], [], []
    for z in zs:
        Sz.append(circle_value_and_derivative(S, z, _safe_radius(S, z))[0])
    for w in ws:
        v, dv = circle_value_and_derivative(S, w, _safe_radius(S, w))
        Sw.append(v)
        dSw.append(dv)
    n = N + len(ws)
    P = np.zeros((n, n), dtype=complex)
    Ip, Im = np.eye(s.p), np.eye(s.m)
    for i, a in enumerate(s.left):
        for j, b in enumerate(s.left):
            K = (Ip - Sz[i] @ Sz[j].conj().T) / (a.z + np.conj(b.z))
            P[i, j] = a.x @ K @ b.x.conj()
    for i, a in enumerate(s.right):
        for j, b in enumerate(s.right):
            K = (Im - Sw[i].conj().T @ Sw[j]) / (np.conj(a.w) + b.w)
            P[N + i, N + j] = a.u.conj() @ K @ b.u
    for i, a in enumerate(s.left):
        for j, b in enumerate(s.right):
            if abs(a.z - b.w) <= COINCIDE_TOL:
                K = dSw[j]
            else:
                K = (Sz[i] - Sw[j]) / (a.z - b.w)
            P[i, N + j] = a.x @ K @ b.u
            P[N + j, i] = np.conj(P[i, N + j])
    return P


# ------------------------------------------------------------ kernels


@dataclass(frozen=True)
class KernelSampleReport:
    grid: list
    gram: np.ndarray
    inertia: Inertia
    asymmetry: float

    def to_dict(self) -> dict:
        return {"grid": self.grid, "gram": self.gram, "inertia": self.inertia.to_dict(),
                "asymmetry": self.asymmetry}


def dbr_kernel_inertia(S, points, block: bool = False, tol: float | None = None) -> KernelSampleReport:
    """Gram matrix of the de Branges-Rovnyak kernel on ``points`` and its inertia.

    ``block=True`` uses the 2 x 2 block kernel at ``(z_i, z_i; z_j, z_j)``,
    which also needs ``S`` at the conjugate points and a derivative wherever
    ``z_i = conj(z_j)``.
    """
    pts = np.asarray(points, dtype=complex).reshape(-1)
    if np.any(pts.real <= 0):
        raise DataError("kernel points must lie in the open right half plane")
    n = pts.size
    Sv = S.eval_many(pts)
    p, m = Sv.shape[1:]
    Ip, Im = np.eye(p), np.eye(m)
    if not block:
        G = np.zeros((n * p, n * p), dtype=complex)
        for i in range(n):
            for j in range(n):
                G[i * p:(i + 1) * p, j * p:(j + 1) * p] = (
                    (Ip - Sv[i] @ Sv[j].conj().T) / (pts[i] + np.conj(pts[j]))
                )
    else:
        Sc = S.eval_many(pts.conj())  # S(conj z)
        dS = {}

        def deriv(a):
            if a not in dS:
                dS[a] = circle_value_and_derivative(S, a, _safe_radius(S, a))[1]
            return dS[a]

        q = p + m
        G = np.zeros((n * q, n * q), dtype=complex)
        for i in range(n):
            for j in range(n):
                zi, zj = pts[i], pts[j]
                d = zi - np.conj(zj)
                if abs(d) <= 1e-12 * (1 + abs(zi)):
                    # z_i = conj(z_j): the quotients tend to S'(z_i) and S'(z_j)*
                    k12 = deriv(complex(zi))
                    k21 = deriv(complex(zj)).conj().T
                else:
                    k12 = (Sv[i] - Sc[j]) / d
                    k21 = (Sc[i].conj().T - Sv[j].conj().T) / d
                s = zi + np.conj(zj)
                blk = np.block([
                    [(Ip - Sv[i] @ Sv[j].conj().T) / s, k12],
                    [k21, (Im - Sc[i].conj().T @ Sc[j]) / s],
                ])
                G[i * q:(i + 1) * q, j * q:(j + 1) * q] = blk
    asym = float(np.linalg.norm(G - G.conj().T))
    H = hermitian_part(G)
    return KernelSampleReport(list(pts), H, hermitian_inertia(H, tol), asym)


@dataclass(frozen=True)
class FMIReport:
    matrix: np.ndarray
    schur_complement_value: np.ndarray
    psd_defect: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def fmi_kernel(d: BTOAData, S, z: complex, zeta: complex | None = None,
               gamma_D: np.ndarray | None = None) -> FMIReport:
    """Augmented Pick kernel at ``(z, zeta)`` and its Schur complement over ``Gamma_D``."""
    z = complex(z)
    zeta = z if zeta is None else complex(zeta)
    if gamma_D is None:
        gamma_D = assemble_gamma_d(gamma_left(d.Z, d.X, d.Y), d.Gamma, gamma_right(d.W, d.U, d.V))
    n = gamma_D.shape[0]
    if n and np.linalg.cond(gamma_D) > 1e12:
        raise SingularMatrixError("Pick matrix is singular")
    A, C = bold_matrices(d)
    I_n = np.eye(n)
    W_eigs = spectrum(d.W)
    for pt in (z, zeta):
        if W_eigs.size and np.min(np.abs(W_eigs - pt)) <= 1e-8 * (1 + abs(pt)):
            raise PoleProximityError(f"point {pt} lies on the spectrum of W")
    Sz, Sw = S.eval_many([z, zeta])
    p, m = Sz.shape
    Ip = np.eye(p)

    def row(lam, Sl):
        L = np.hstack([Ip, -Sl]) @ C
        return -np.linalg.solve((lam * I_n - A).T, L.T).T if n else np.zeros((p, 0))

    r = row(z, Sz)
    c = row(zeta, Sw).conj().T
    K = (Ip - Sz @ Sw.conj().T) / (z + np.conj(zeta))
    M = np.block([[gamma_D, c], [r, K]])
    schur = K - r @ np.linalg.solve(gamma_D, c) if n else K
    if zeta == z:
        diag = schur
    else:
        rz = row(z, Sz)
        diag = (Ip - Sz @ Sz.conj().T) / (2 * z.real) - rz @ np.linalg.solve(gamma_D, rz.conj().T)
    ev = np.linalg.eigvalsh(hermitian_part(diag))
    return FMIReport(M, schur, float(max(0.0, -ev.min())))


def fmi_max_defect(d: BTOAData, S, points) -> tuple[complex, float]:
    """Point with the largest FMI Schur-complement defect among ``points``."""
    best, worst = None, -1.0
    for pt in np.asarray(points, dtype=complex).reshape(-1):
        try:
            dfc = fmi_kernel(d, S, pt).psd_defect
        except PoleProximityError:
            continue
        if dfc > worst:
            best, worst = complex(pt), dfc
    return best, worst
