"""Interpolants ``S = (T11 G + T12)(T21 G + T22)^{-1}`` and the side condition."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import jsonio
from .datasets import BTOAData
from .errors import DataError, ParseError, SingularDenominatorError, SingularMatrixError
from .numkit import as_cmatrix, spectrum
from .pick import PickReport, pick_matrix
from .realization import (
    PsiRealization,
    Realization,
    ThetaRealization,
    build_psi,
    build_theta,
    constant_realization,
)

DENOM_COND_LIMIT = 1e12
SIDE_RADIUS = 1e-4
SIDE_MIN_ABS = 1e-8
CONTRACTIVE_SAMPLES = 500


@dataclass(frozen=True, eq=False)
class FreeParameter:
    """Schur-class parameter: a constant contraction or a stable realization."""

    variant: str
    value: np.ndarray | None = None
    realization: Realization | None = None
    sampled_sup_norm: float = field(default=float("nan"))

    @classmethod
    def constant(cls, G) -> "FreeParameter":
        G = as_cmatrix(G, name="G")
        nrm = float(np.linalg.norm(G, 2)) if G.size else 0.0
        if nrm > 1 + 1e-12:
            raise DataError(f"constant parameter is not contractive (norm {nrm:.6g})")
        return cls("constant", value=G, sampled_sup_norm=nrm)

    @classmethod
    def zero(cls, p: int, m: int) -> "FreeParameter":
        return cls.constant(np.zeros((p, m), dtype=complex))

    @classmethod
    def from_realization(cls, R: Realization, samples: int = CONTRACTIVE_SAMPLES) -> "FreeParameter":
        poles = R.poles()
        if poles.size and not np.all(poles.real < 0):
            raise DataError("parameter realization has poles outside the open left half plane")
        th = np.linspace(-np.pi / 2, np.pi / 2, samples + 2)[1:-1]
        vals = R.eval_many(1j * np.tan(th))
        sup = float(np.max(np.linalg.norm(vals, ord=2, axis=(1, 2))))
        sup = max(sup, float(np.linalg.norm(R.D, 2)))
        if sup > 1 + 1e-8:
            raise DataError(f"parameter realization is not contractive on the axis (sampled norm {sup:.6g})")
        return cls("realization", realization=R, sampled_sup_norm=sup)

    @property
    def shape(self) -> tuple[int, int]:
        return self.value.shape if self.variant == "constant" else self.realization.shape

    def as_realization(self) -> Realization:
        return constant_realization(self.value) if self.variant == "constant" else self.realization

    def eval_many(self, lams) -> np.ndarray:
        lams = np.asarray(lams, dtype=complex).reshape(-1)
        if self.variant == "constant":
            return np.broadcast_to(self.value, (lams.size,) + self.value.shape).copy()
        return self.realization.eval_many(lams)

    def eval(self, lam: complex) -> np.ndarray:
        return self.eval_many([lam])[0]

    def value_at_infinity(self) -> np.ndarray:
        return self.as_realization().value_at_infinity()

    def poles(self) -> np.ndarray:
        return self.as_realization().poles()

    def to_dict(self) -> dict:
        if self.variant == "constant":
            return {"kind": "constant", "value": self.value}
        return {"kind": "realization", **self.realization.to_dict()}


def _denominator(theta: ThetaRealization, G: FreeParameter, lams):
    T11, T12, T21, T22 = theta.blocks_many(lams)
    Gv = G.eval_many(lams)
    return T11 @ Gv + T12, T21 @ Gv + T22


def lft_apply_many(theta: ThetaRealization, G: FreeParameter, lams) -> np.ndarray:
    lams = np.asarray(lams, dtype=complex).reshape(-1)
    num, den = _denominator(theta, G, lams)
    if den.shape[1]:
        s = np.linalg.svd(den, compute_uv=False)
        # Theta [G; I] has full column rank, so its norm is a safe yardstick
        # even when den is 1 x 1
        scale = np.linalg.norm(np.concatenate([num, den], axis=1), ord=2, axis=(1, 2))
        bad = s[:, -1] * DENOM_COND_LIMIT < scale
        if np.any(bad):
            k = int(np.argmax(bad))
            raise SingularDenominatorError(
                f"denominator T21 G + T22 is singular at {lams[k]}", float(s[k, -1])
            )
    # S = num den^{-1}  <=>  den^T S^T = num^T
    St = np.linalg.solve(np.swapaxes(den, 1, 2), np.swapaxes(num, 1, 2))
    return np.swapaxes(St, 1, 2)


def lft_apply(theta: ThetaRealization, G: FreeParameter, lam: complex) -> np.ndarray:
    return lft_apply_many(theta, G, [lam])[0]


@dataclass(frozen=True)
class SideCondition:
    points: np.ndarray
    values: np.ndarray
    min_abs: float
    ok: bool

    def to_dict(self) -> dict:
        return {
            "points": list(self.points),
            "values": list(self.values),
            "min_abs": self.min_abs,
            "ok": self.ok,
        }


def _node_points(d: BTOAData, tol: float = 1e-6) -> np.ndarray:
    pts: list[complex] = []
    for mu in np.concatenate([spectrum(d.Z), spectrum(d.W)]):
        if all(abs(mu - q) > tol * (1 + abs(q)) for q in pts):
            pts.append(complex(mu))
    return np.array(pts, dtype=complex)


def side_condition(
    d: BTOAData,
    theta: ThetaRealization,
    psi: PsiRealization,
    G: FreeParameter,
    radius: float = SIDE_RADIUS,
) -> SideCondition:
    """``det(psi (T21 G + T22))`` at each node, as a 4-point circle average."""
    pts = _node_points(d)
    if pts.size == 0:
        return SideCondition(pts, np.zeros(0, dtype=complex), float("inf"), True)
    offs = radius * np.exp(0.5j * np.pi * np.arange(4))
    lams = (pts[:, None] + offs[None, :]).reshape(-1)
    _, den = _denominator(theta, G, lams)
    dets = np.linalg.det(psi.eval_many(lams) @ den).reshape(pts.size, 4)
    vals = dets.mean(axis=1)
    min_abs = float(np.min(np.abs(vals)))
    return SideCondition(pts, vals, min_abs, min_abs > SIDE_MIN_ABS)


@dataclass(frozen=True, eq=False)
class Interpolant:
    data: BTOAData
    pick: PickReport
    theta: ThetaRealization
    psi: PsiRealization
    G: FreeParameter
    kappa_expected: int
    side: SideCondition

    @property
    def side_condition_ok(self) -> bool:
        return self.side.ok

    @property
    def shape(self) -> tuple[int, int]:
        return (self.data.p, self.data.m)

    def eval_many(self, lams) -> np.ndarray:
        return lft_apply_many(self.theta, self.G, lams)

    def eval(self, lam: complex) -> np.ndarray:
        return lft_apply(self.theta, self.G, lam)

    def __call__(self, lam):
        return self.eval(lam)

    def value_at_infinity(self) -> np.ndarray:
        return self.G.value_at_infinity()

    def numerator_denominator(self, lams):
        return _denominator(self.theta, self.G, np.asarray(lams, dtype=complex).reshape(-1))

    def denominator_realization(self) -> Realization:
        """Realization of ``T21 G + T22`` (bottom block row of ``Theta [G; I]``)."""
        Gr = self.G.as_realization()
        p, m = self.shape
        GI = Realization(Gr.A, Gr.B, np.vstack([Gr.C, np.zeros((m, Gr.order))]),
                         np.vstack([Gr.D, np.eye(m)]))
        full = self.theta.base.cascade(GI)
        return Realization(full.A, full.B, full.C[p:], full.D[p:])

    def candidate_poles(self) -> np.ndarray:
        """Possible poles of ``S`` in the right half plane.

        Zeros of the denominator realization; node points are dropped because
        the side condition rules out poles there and the apparent singularity of
        Theta at ``sigma(W)`` cancels.
        """
        z = self.denominator_realization().zeros()
        z = z[z.real > 0]
        nodes = _node_points(self.data)
        if nodes.size and z.size:
            keep = np.min(np.abs(z[:, None] - nodes[None, :]), axis=1) > 1e-6 * (1 + np.abs(z))
            z = z[keep]
        return z


def make_interpolant(d: BTOAData, G: FreeParameter | None = None, tol: float | None = None) -> Interpolant:
    if G is None:
        G = FreeParameter.zero(d.p, d.m)
    if G.shape != (d.p, d.m):
        raise DataError(f"parameter has shape {G.shape}, expected {(d.p, d.m)}")
    rep = pick_matrix(d, tol)
    if rep.degenerate:
        raise SingularMatrixError("Pick matrix is singular; no linear-fractional parametrization")
    theta = build_theta(d, rep.gamma_D)
    psi = build_psi(d.U, d.W)
    side = side_condition(d, theta, psi, G)
    return Interpolant(d, rep, theta, psi, G, rep.inertia.n_minus, side)


def lft_equation_residual(interp: Interpolant, lams) -> float:
    """``max |S (T21 G + T22) - (T11 G + T12)|`` over the points."""
    lams = np.asarray(lams, dtype=complex).reshape(-1)
    S = interp.eval_many(lams)
    num, den = interp.numerator_denominator(lams)
    return float(np.max(np.linalg.norm(S @ den - num, axis=(1, 2))))


def parse_parameter(text: str | bytes, p: int, m: int) -> FreeParameter:
    """Read a parameter file: ``{"kind": "constant", "value": M}`` or a realization."""
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"JSON syntax error: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    kind = doc.get("kind")
    if kind == "constant":
        return FreeParameter.constant(jsonio.decode_matrix(doc.get("value"), "value", (p, m)))
    if kind == "realization":
        for key in "ABCD":
            if key not in doc:
                raise ParseError("missing field", key)
        D = jsonio.decode_matrix(doc["D"], "D", (p, m))
        A = jsonio.decode_matrix(doc["A"], "A")
        n = A.shape[0]
        B = jsonio.decode_matrix(doc["B"], "B", (n, m) if n else (None, None))
        C = jsonio.decode_matrix(doc["C"], "C", (p, n) if n else (None, None))
        return FreeParameter.from_realization(Realization(A, B.reshape(n, m), C.reshape(p, n), D))
    raise ParseError("kind must be \"constant\" or \"realization\"", "kind")
