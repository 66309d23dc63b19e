"""Winding numbers of determinants along the imaginary axis and kappa certificates.

The axis is traversed downward, from +i infinity to -i infinity, so the right
half plane lies on the left and ``wno det f`` counts zeros minus poles there.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .datasets import BTOAData
from .errors import WindingError
from .lft import FreeParameter, Interpolant, make_interpolant


@dataclass(frozen=True)
class WindingConfig:
    y_max: float = 1e4
    initial_samples: int = 4096
    refinement_limit: int = 2 ** 20
    max_step: float = np.pi / 2
    min_abs_det: float = 1e-10
    rounding_tol: float = 0.1


class MatrixFunction:
    """Minimal evaluator: batched values plus the limit at infinity."""

    def __init__(self, many: Callable[[np.ndarray], np.ndarray], at_infinity):
        self._many = many
        self._inf = np.atleast_2d(np.asarray(at_infinity, dtype=complex))

    def eval_many(self, lams) -> np.ndarray:
        return self._many(np.asarray(lams, dtype=complex).reshape(-1))

    def value_at_infinity(self) -> np.ndarray:
        return self._inf

    def __matmul__(self, other: "MatrixFunction") -> "MatrixFunction":
        return MatrixFunction(
            lambda l: self.eval_many(l) @ other.eval_many(l),
            self.value_at_infinity() @ other.value_at_infinity(),
        )


@dataclass(frozen=True)
class WindingResult:
    wno: int
    raw: float
    rounding_defect: float
    samples: int
    min_abs_det: float


def _dets(f, theta: np.ndarray) -> np.ndarray:
    vals = f.eval_many(1j * np.tan(theta))
    return np.linalg.det(vals) if vals.shape[1] else np.ones(theta.size, dtype=complex)


def winding_detail(f, cfg: WindingConfig = WindingConfig()) -> WindingResult:
    t0 = np.arctan(cfg.y_max)
    theta = np.linspace(t0, -t0, cfg.initial_samples)
    dets = _dets(f, theta)
    while True:
        if np.min(np.abs(dets)) <= cfg.min_abs_det:
            k = int(np.argmin(np.abs(dets)))
            raise WindingError(f"determinant vanishes on the axis near y = {np.tan(theta[k]):.6g}")
        steps = np.angle(dets[1:] / dets[:-1])
        bad = np.flatnonzero(np.abs(steps) >= cfg.max_step)
        if bad.size == 0:
            break
        if theta.size + bad.size > cfg.refinement_limit:
            raise WindingError("argument unwrapping did not converge within the refinement limit")
        mids = 0.5 * (theta[bad] + theta[bad + 1])
        new = _dets(f, mids)
        theta = np.insert(theta, bad + 1, mids)
        dets = np.insert(dets, bad + 1, new)
    d_inf = np.linalg.det(f.value_at_infinity()) if f.value_at_infinity().size else 1.0 + 0j
    if abs(d_inf) <= cfg.min_abs_det:
        raise WindingError("determinant vanishes at infinity")
    close_in = np.angle(dets[0] / d_inf)
    close_out = np.angle(d_inf / dets[-1])
    if max(abs(close_in), abs(close_out)) >= cfg.max_step:
        raise WindingError("function has not settled to its limit at y_max; increase y_max")
    total = close_in + float(np.sum(steps)) + close_out
    raw = total / (2 * np.pi)
    wno = int(round(raw))
    defect = abs(raw - wno)
    if defect >= cfg.rounding_tol:
        raise WindingError(f"winding number {raw:.4f} is not close to an integer")
    return WindingResult(wno, raw, defect, int(theta.size), float(np.min(np.abs(dets))))


def winding_det(f, cfg: WindingConfig = WindingConfig()) -> int:
    """Winding number of ``det f(iy)`` along the downward axis, closed at infinity."""
    return winding_detail(f, cfg).wno


def theta22_function(interp: Interpolant) -> MatrixFunction:
    p = interp.theta.p
    return MatrixFunction(lambda l: interp.theta.eval_many(l)[:, p:, p:],
                          interp.theta.value_at_infinity()[p:, p:])


def psi_function(interp: Interpolant) -> MatrixFunction:
    return MatrixFunction(interp.psi.eval_many, interp.psi.value_at_infinity())


def psi_inverse_function(interp: Interpolant) -> MatrixFunction:
    inv = interp.psi.inverse
    return MatrixFunction(inv.eval_many, inv.value_at_infinity())


def denominator_function(interp: Interpolant) -> MatrixFunction:
    """``psi (T21 G + T22)``, analytic on the closed right half plane."""
    def many(l):
        return interp.psi.eval_many(l) @ interp.numerator_denominator(l)[1]

    Ginf = interp.G.value_at_infinity()
    Tinf = interp.theta.value_at_infinity()
    p = interp.theta.p
    return MatrixFunction(many, interp.psi.value_at_infinity() @ (Tinf[p:, :p] @ Ginf + Tinf[p:, p:]))


def pole_count(interp: Interpolant, cfg: WindingConfig = WindingConfig()) -> int:
    """Total pole multiplicity of the interpolant in the right half plane."""
    return winding_det(denominator_function(interp), cfg)


@dataclass(frozen=True)
class KappaCertificate:
    kappa_pick: int
    wno_theta22: int
    wno_psi: int
    wno_identity_ok: bool
    pole_count_S: int
    side_condition_ok: bool
    certified: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def kappa_certificate(
    d: BTOAData,
    G: FreeParameter | None = None,
    cfg: WindingConfig = WindingConfig(),
    interp: Interpolant | None = None,
) -> KappaCertificate:
    if interp is None:
        interp = make_interpolant(d, G)
    kappa = interp.kappa_expected
    w22 = winding_det(theta22_function(interp), cfg)
    wpsi = winding_det(psi_function(interp), cfg)
    poles = pole_count(interp, cfg)
    ident = w22 + wpsi == kappa
    return KappaCertificate(
        kappa_pick=kappa,
        wno_theta22=w22,
        wno_psi=wpsi,
        wno_identity_ok=ident,
        pole_count_S=poles,
        side_condition_ok=interp.side_condition_ok,
        certified=ident and poles == kappa and interp.side_condition_ok,
    )
