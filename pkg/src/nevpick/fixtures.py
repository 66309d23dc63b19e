"""Hand-checked fixtures D1-D4 and seeded random problem generators."""

from __future__ import annotations

import numpy as np

from .datasets import BTOAData, LeftNode, RightNode, SimpleData, aggregate_from_simple
from .numkit import hermitian_eigvals, solve_sylvester
from .pick import pick_matrix, simple_pick_matrix


def _empty(r, c):
    return np.zeros((r, c), dtype=complex)


def d1() -> BTOAData:
    """One left node: z = 1, x = 1, y = 0."""
    return BTOAData([[1]], [[1]], [[0]], _empty(0, 0), _empty(1, 0), _empty(1, 0), _empty(1, 0), 1, 1)


def d2() -> BTOAData:
    """One right node: w = 1, u = 1, v = 0."""
    return BTOAData(_empty(0, 0), _empty(0, 1), _empty(0, 1), [[1]], [[1]], [[0]], _empty(0, 1), 1, 1)


def d3() -> BTOAData:
    """One left node with |y| > |x|: indefinite, kappa = 1."""
    return BTOAData([[1]], [[1]], [[2]], _empty(0, 0), _empty(1, 0), _empty(1, 0), _empty(1, 0), 1, 1)


def d4_simple(rho: complex = 0.0) -> SimpleData:
    """Coinciding left and right node at 1 with free coupling ``rho``."""
    return SimpleData(
        1, 1,
        [LeftNode(1, [1], [0.5])],
        [RightNode(1, [1], [0.5])],
        {(0, 0): complex(rho)},
    )


def d4(rho: complex = 0.0) -> BTOAData:
    return aggregate_from_simple(d4_simple(rho))


def d1_simple() -> SimpleData:
    return SimpleData(1, 1, [LeftNode(1, [1], [0])], [], {})


FIXTURES = {"D1": d1, "D2": d2, "D3": d3, "D4": d4}


# ------------------------------------------------------------ random data


def random_node(rng: np.random.Generator) -> complex:
    return complex(rng.uniform(0.2, 3.0), rng.uniform(-2.0, 2.0))


def random_cvec(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def random_contraction(rng: np.random.Generator, p: int, m: int, max_norm: float = 1.0) -> np.ndarray:
    K = rng.standard_normal((p, m)) + 1j * rng.standard_normal((p, m))
    K /= np.linalg.norm(K, 2)
    return K * rng.uniform(0.1, max_norm)


def _separated(points: list[complex], sep: float) -> bool:
    return all(abs(a - b) >= sep for i, a in enumerate(points) for b in points[i + 1:])


def _nodes(rng, n: int, sep: float) -> list[complex]:
    while True:
        pts = [random_node(rng) for _ in range(n)]
        if _separated(pts, sep):
            return pts


def random_simple_data(rng: np.random.Generator, n_left: int, n_right: int, p: int, m: int) -> SimpleData:
    """Unconstrained random simple data; nodes never coincide."""
    zs = _nodes(rng, n_left, 1e-3)
    ws = _nodes(rng, n_right, 1e-3)
    left = [LeftNode(z, random_cvec(rng, p), random_cvec(rng, m)) for z in zs]
    right = [RightNode(w, random_cvec(rng, m), random_cvec(rng, p)) for w in ws]
    return SimpleData(p, m, left, right, {})


class RationalContraction:
    """``S0(l) = s [(1 - t) K1 + t b(l) K2]`` with a scalar Blaschke factor ``b``."""

    def __init__(self, rng: np.random.Generator, p: int, m: int, scale: float = 0.9):
        self.K1 = random_contraction(rng, p, m)
        self.K2 = random_contraction(rng, p, m)
        self.t = rng.uniform(0.2, 0.8)
        self.a = random_node(rng)
        self.s = scale

    def __call__(self, lam: complex) -> np.ndarray:
        b = (lam - self.a) / (lam + np.conj(self.a))
        return self.s * ((1 - self.t) * self.K1 + self.t * b * self.K2)

    def derivative(self, lam: complex) -> np.ndarray:
        db = 2 * self.a.real / (lam + np.conj(self.a)) ** 2
        return self.s * self.t * db * self.K2


def _min_eig_ratio(P: np.ndarray) -> float:
    ev = hermitian_eigvals(P, hermitian_rtol=1e-10)
    return float(np.min(np.abs(ev)) / max(1e-300, np.max(np.abs(ev))))


def random_definite_simple(
    rng: np.random.Generator,
    n_left: int,
    n_right: int,
    p: int,
    m: int,
    n_coincide: int = 0,
    min_eig_ratio: float = 1e-6,
    sep: float = 0.05,
    max_tries: int = 1000,
) -> SimpleData:
    """Simple data sampled from a strictly contractive rational function.

    The resulting Pick matrix is positive definite; poorly conditioned draws
    are rejected.
    """
    n_coincide = min(n_coincide, n_left, n_right)
    for _ in range(max_tries):
        S0 = RationalContraction(rng, p, m)
        zs = _nodes(rng, n_left, sep)
        ws = list(zs[:n_coincide]) + _nodes(rng, n_right - n_coincide, sep)
        if not all(abs(z - w) >= sep for z in zs for w in ws[n_coincide:]):
            continue
        if not _separated(ws, sep):
            continue
        left = []
        for z in zs:
            x = random_cvec(rng, p)
            left.append(LeftNode(z, x, x @ S0(z)))
        right = []
        for w in ws:
            u = random_cvec(rng, m)
            right.append(RightNode(w, u, S0(w) @ u))
        rho = {(i, i): complex(left[i].x @ S0.derivative(zs[i]) @ right[i].u) for i in range(n_coincide)}
        s = SimpleData(p, m, left, right, rho)
        P = simple_pick_matrix(s)
        if np.min(np.linalg.eigvalsh(0.5 * (P + P.conj().T))) <= 0:
            continue
        if _min_eig_ratio(P) >= min_eig_ratio:
            return s
    raise RuntimeError("could not sample well-conditioned definite data")


def random_indefinite_simple(
    rng: np.random.Generator,
    n_minus: int,
    n_left: int,
    n_right: int,
    p: int,
    m: int,
    min_eig_ratio: float = 1e-4,
    sep: float = 0.1,
    max_tries: int = 20000,
) -> SimpleData:
    """Rejection-sample simple data whose Pick matrix has ``n_minus`` negative eigenvalues."""
    if n_left + n_right < n_minus:
        raise ValueError("need at least n_minus nodes")
    for _ in range(max_tries):
        zs = _nodes(rng, n_left, sep)
        ws = _nodes(rng, n_right, sep)
        if not all(abs(z - w) >= sep for z in zs for w in ws):
            continue
        # a random scale on y and v makes every inertia split reasonably common
        c = rng.uniform(0.3, 1.2)
        left = [LeftNode(z, random_cvec(rng, p), c * random_cvec(rng, m)) for z in zs]
        right = [RightNode(w, random_cvec(rng, m), c * random_cvec(rng, p)) for w in ws]
        s = SimpleData(p, m, left, right, {})
        P = simple_pick_matrix(s)
        ev = np.linalg.eigvalsh(0.5 * (P + P.conj().T))
        if int(np.sum(ev < 0)) != n_minus:
            continue
        if _min_eig_ratio(P) >= min_eig_ratio:
            return s
    raise RuntimeError(f"could not sample data with {n_minus} negative eigenvalues")


def random_btoa_data(rng: np.random.Generator, n_Z: int, n_W: int, p: int, m: int) -> BTOAData:
    """Admissible data with non-normal ``Z`` and ``W``; Gamma solves the Sylvester equation."""
    def tri(n):
        T = np.triu(0.3 * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))), 1)
        return T + np.diag([random_node(rng) for _ in range(n)])

    Q = rng.standard_normal((n_Z, n_Z)) + 1j * rng.standard_normal((n_Z, n_Z))
    Z = Q @ tri(n_Z) @ np.linalg.inv(Q) if n_Z else _empty(0, 0)
    W = tri(n_W)
    X = random_cvec(rng, n_Z * p).reshape(n_Z, p)
    Y = 0.6 * random_cvec(rng, n_Z * m).reshape(n_Z, m)
    U = random_cvec(rng, m * n_W).reshape(m, n_W)
    V = 0.6 * random_cvec(rng, p * n_W).reshape(p, n_W)
    G = solve_sylvester(-Z, W, X @ V - Y @ U)
    return BTOAData(Z, X, Y, W, U, V, G, p, m)


def kappa_of(d: BTOAData) -> int | None:
    return pick_matrix(d).kappa
