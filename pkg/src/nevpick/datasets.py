"""Problem data: simple node/direction form, the aggregate seven-matrix form,
admissibility checks and JSON ingestion.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import jsonio
from .errors import DataError, ParseError
from .numkit import as_cmatrix, pair_controllable, pair_observable, spectrum

COINCIDE_TOL = 1e-12
COMPAT_RTOL = 1e-10
SYLVESTER_RTOL = 1e-8


@dataclass(eq=False)
class LeftNode:
    """Left tangential condition ``x S(z) = y``."""

    z: complex
    x: np.ndarray  # length p
    y: np.ndarray  # length m

    def __post_init__(self):
        self.z = complex(self.z)
        self.x = np.asarray(self.x, dtype=complex).reshape(-1)
        self.y = np.asarray(self.y, dtype=complex).reshape(-1)


@dataclass(eq=False)
class RightNode:
    """Right tangential condition ``S(w) u = v``."""

    w: complex
    u: np.ndarray  # length m
    v: np.ndarray  # length p

    def __post_init__(self):
        self.w = complex(self.w)
        self.u = np.asarray(self.u, dtype=complex).reshape(-1)
        self.v = np.asarray(self.v, dtype=complex).reshape(-1)


@dataclass(eq=False)
class SimpleData:
    p: int
    m: int
    left: list[LeftNode] = field(default_factory=list)
    right: list[RightNode] = field(default_factory=list)
    rho: dict[tuple[int, int], complex] = field(default_factory=dict)

    def coinciding_pairs(self) -> list[tuple[int, int]]:
        return [
            (i, j)
            for i, ln in enumerate(self.left)
            for j, rn in enumerate(self.right)
            if abs(ln.z - rn.w) <= COINCIDE_TOL
        ]

    def validate(self) -> None:
        """Raise ``DataError`` (with a path) if any invariant fails."""
        for i, ln in enumerate(self.left):
            if ln.x.shape != (self.p,):
                raise ParseError(f"x has length {ln.x.size}, expected p={self.p}", f"left[{i}].x")
            if ln.y.shape != (self.m,):
                raise ParseError(f"y has length {ln.y.size}, expected m={self.m}", f"left[{i}].y")
            if not ln.z.real > 0:
                raise ParseError("node must lie in the open right half plane", f"left[{i}].z")
            if not np.any(ln.x):
                raise ParseError("direction x must be nonzero", f"left[{i}].x")
        for j, rn in enumerate(self.right):
            if rn.u.shape != (self.m,):
                raise ParseError(f"u has length {rn.u.size}, expected m={self.m}", f"right[{j}].u")
            if rn.v.shape != (self.p,):
                raise ParseError(f"v has length {rn.v.size}, expected p={self.p}", f"right[{j}].v")
            if not rn.w.real > 0:
                raise ParseError("node must lie in the open right half plane", f"right[{j}].w")
            if not np.any(rn.u):
                raise ParseError("direction u must be nonzero", f"right[{j}].u")
        for side, nodes, attr in (("left", self.left, "z"), ("right", self.right, "w")):
            pts = [getattr(n, attr) for n in nodes]
            for a in range(len(pts)):
                for b in range(a + 1, len(pts)):
                    if abs(pts[a] - pts[b]) <= COINCIDE_TOL:
                        raise ParseError(f"nodes {a} and {b} coincide", f"{side}[{b}].{attr}")
        pairs = set(self.coinciding_pairs())
        for i, j in pairs:
            x, y = self.left[i].x, self.left[i].y
            u, v = self.right[j].u, self.right[j].v
            defect = abs(x @ v - y @ u)
            if defect > COMPAT_RTOL * (1 + np.linalg.norm(x) * np.linalg.norm(v)):
                raise ParseError(
                    f"compatibility x v = y u fails at coinciding nodes ({i},{j}): defect {defect:.3e}",
                    f"right[{j}].v",
                )
            if (i, j) not in self.rho:
                raise ParseError(f"missing rho for coinciding pair ({i},{j})", "rho")
        for key in self.rho:
            if key not in pairs:
                raise ParseError(f"rho given for non-coinciding pair {key}", "rho")

    def __eq__(self, other):
        if not isinstance(other, SimpleData):
            return NotImplemented
        if (self.p, self.m, len(self.left), len(self.right)) != (
            other.p, other.m, len(other.left), len(other.right)
        ):
            return False
        for a, b in zip(self.left, other.left):
            if a.z != b.z or not np.array_equal(a.x, b.x) or not np.array_equal(a.y, b.y):
                return False
        for a, b in zip(self.right, other.right):
            if a.w != b.w or not np.array_equal(a.u, b.u) or not np.array_equal(a.v, b.v):
                return False
        return self.rho == other.rho


_BTOA_FIELDS = ("Z", "X", "Y", "W", "U", "V", "Gamma")


@dataclass(eq=False)
class BTOAData:
    """Aggregate data ``(Z, X, Y; U, V, W; Gamma)``.

    Shapes: Z n_Z x n_Z, X n_Z x p, Y n_Z x m, W n_W x n_W, U m x n_W,
    V p x n_W, Gamma n_Z x n_W. Either side may be empty.
    """

    Z: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    W: np.ndarray
    U: np.ndarray
    V: np.ndarray
    Gamma: np.ndarray
    p: int
    m: int

    def __post_init__(self):
        p, m = int(self.p), int(self.m)
        nZ = np.asarray(self.Z).shape[0] if np.asarray(self.Z).size else 0
        nW = np.asarray(self.W).shape[0] if np.asarray(self.W).size else 0
        shapes = {
            "Z": (nZ, nZ), "X": (nZ, p), "Y": (nZ, m),
            "W": (nW, nW), "U": (m, nW), "V": (p, nW), "Gamma": (nZ, nW),
        }
        for name, shape in shapes.items():
            raw = np.asarray(getattr(self, name), dtype=complex)
            if raw.size == 0:
                arr = np.zeros(shape, dtype=complex)
            else:
                arr = as_cmatrix(raw, shape=shape, name=name)
            setattr(self, name, arr)
        self.p, self.m = p, m

    @property
    def n_Z(self) -> int:
        return self.Z.shape[0]

    @property
    def n_W(self) -> int:
        return self.W.shape[0]

    def replace(self, **kw) -> "BTOAData":
        vals = {k: getattr(self, k) for k in _BTOA_FIELDS + ("p", "m")}
        vals.update(kw)
        return BTOAData(**vals)

    def __eq__(self, other):
        if not isinstance(other, BTOAData):
            return NotImplemented
        return (self.p, self.m) == (other.p, other.m) and all(
            getattr(self, k).shape == getattr(other, k).shape
            and np.array_equal(getattr(self, k), getattr(other, k))
            for k in _BTOA_FIELDS
        )


@dataclass
class AdmissibilityReport:
    spectra_ok: bool
    controllable: bool
    observable: bool
    sylvester_residual: float
    sylvester_ok: bool
    verdict: bool

    CHECKS = ("spectra_ok", "controllable", "observable", "sylvester_ok")

    @property
    def compatible(self) -> list[bool]:
        """Outcome of each check, in ``CHECKS`` order."""
        return [getattr(self, k) for k in self.CHECKS]

    def to_dict(self) -> dict:
        return {
            "spectra_ok": self.spectra_ok,
            "controllable": self.controllable,
            "observable": self.observable,
            "sylvester_residual": self.sylvester_residual,
            "sylvester_ok": self.sylvester_ok,
            "compatible": self.compatible,
            "checks": list(self.CHECKS),
            "verdict": self.verdict,
        }


def aggregate_from_simple(s: SimpleData) -> BTOAData:
    s.validate()
    N, Np = len(s.left), len(s.right)
    Z = np.diag([ln.z for ln in s.left]).astype(complex).reshape(N, N)
    X = np.array([ln.x for ln in s.left], dtype=complex).reshape(N, s.p)
    Y = np.array([ln.y for ln in s.left], dtype=complex).reshape(N, s.m)
    W = np.diag([rn.w for rn in s.right]).astype(complex).reshape(Np, Np)
    U = np.array([rn.u for rn in s.right], dtype=complex).reshape(Np, s.m).T
    V = np.array([rn.v for rn in s.right], dtype=complex).reshape(Np, s.p).T
    G = np.zeros((N, Np), dtype=complex)
    for i, ln in enumerate(s.left):
        for j, rn in enumerate(s.right):
            if abs(ln.z - rn.w) <= COINCIDE_TOL:
                G[i, j] = s.rho[(i, j)]
            else:
                G[i, j] = (ln.x @ rn.v - ln.y @ rn.u) / (rn.w - ln.z)
    return BTOAData(Z, X, Y, W, U, V, G, s.p, s.m)


def sylvester_residual(d: BTOAData) -> float:
    R = d.Gamma @ d.W - d.Z @ d.Gamma - d.X @ d.V + d.Y @ d.U
    return float(np.linalg.norm(R))


def validate_admissible(d: BTOAData, tol: float = SYLVESTER_RTOL) -> AdmissibilityReport:
    eigs = np.concatenate([spectrum(d.Z), spectrum(d.W)])
    spectra_ok = bool(np.all(eigs.real > 0))
    ctrl = pair_controllable(d.Z, d.X)
    obs = pair_observable(d.U, d.W)
    res = sylvester_residual(d)
    nrm = np.linalg.norm
    scale = 1 + nrm(d.X) * nrm(d.V) + nrm(d.Y) * nrm(d.U) + nrm(d.Gamma) * (nrm(d.W) + nrm(d.Z))
    syl_ok = bool(res <= tol * scale)
    return AdmissibilityReport(
        spectra_ok=spectra_ok,
        controllable=ctrl,
        observable=obs,
        sylvester_residual=res,
        sylvester_ok=syl_ok,
        verdict=spectra_ok and ctrl and obs and syl_ok,
    )


# ---------------------------------------------------------------- JSON


def _vector(obj, path: str, length: int) -> np.ndarray:
    if not isinstance(obj, list):
        raise ParseError("expected vector (list of complex scalars)", path)
    vals = [jsonio.decode_complex(v, f"{path}[{k}]") for k, v in enumerate(obj)]
    if len(vals) != length:
        raise ParseError(f"has length {len(vals)}, expected {length}", path)
    return np.array(vals, dtype=complex)


def _count(doc: dict, key: str) -> int:
    v = doc.get(key)
    if not isinstance(v, int) or isinstance(v, bool) or v < 0:
        raise ParseError("expected nonnegative integer", key)
    return v


def _parse_simple(doc: dict) -> SimpleData:
    p, m = _count(doc, "p"), _count(doc, "m")
    left, right = doc.get("left", []), doc.get("right", [])
    if not isinstance(left, list):
        raise ParseError("expected list", "left")
    if not isinstance(right, list):
        raise ParseError("expected list", "right")
    lnodes = []
    for i, item in enumerate(left):
        if not isinstance(item, dict):
            raise ParseError("expected object", f"left[{i}]")
        lnodes.append(
            LeftNode(
                jsonio.decode_complex(item.get("z"), f"left[{i}].z"),
                _vector(item.get("x"), f"left[{i}].x", p),
                _vector(item.get("y"), f"left[{i}].y", m),
            )
        )
    rnodes = []
    for j, item in enumerate(right):
        if not isinstance(item, dict):
            raise ParseError("expected object", f"right[{j}]")
        rnodes.append(
            RightNode(
                jsonio.decode_complex(item.get("w"), f"right[{j}].w"),
                _vector(item.get("u"), f"right[{j}].u", m),
                _vector(item.get("v"), f"right[{j}].v", p),
            )
        )
    rho = {}
    raw_rho = doc.get("rho", [])
    if not isinstance(raw_rho, list):
        raise ParseError("expected list", "rho")
    for k, item in enumerate(raw_rho):
        path = f"rho[{k}]"
        if not isinstance(item, dict):
            raise ParseError("expected object", path)
        i, j = item.get("i"), item.get("j")
        if not isinstance(i, int) or not isinstance(j, int):
            raise ParseError("expected integer indices i, j", path)
        if not (0 <= i < len(lnodes) and 0 <= j < len(rnodes)):
            raise ParseError(f"index ({i},{j}) out of range", path)
        rho[(i, j)] = jsonio.decode_complex(item.get("value"), f"{path}.value")
    s = SimpleData(p, m, lnodes, rnodes, rho)
    s.validate()
    return s


def _parse_btoa(doc: dict) -> BTOAData:
    for key in _BTOA_FIELDS:
        if key not in doc:
            raise ParseError("missing field", key)
    Z = jsonio.decode_matrix(doc["Z"], "Z")
    nZ = Z.shape[0]
    if Z.shape[1] != nZ and Z.size:
        raise ParseError(f"must be square, got {Z.shape}", "Z")
    W = jsonio.decode_matrix(doc["W"], "W")
    nW = W.shape[0]
    if W.shape[1] != nW and W.size:
        raise ParseError(f"must be square, got {W.shape}", "W")
    p = doc.get("p")
    m = doc.get("m")
    X = jsonio.decode_matrix(doc["X"], "X", (nZ, p if nZ else None))
    Y = jsonio.decode_matrix(doc["Y"], "Y", (nZ, m if nZ else None))
    if nZ:
        p, m = X.shape[1], Y.shape[1]
    U = jsonio.decode_matrix(doc["U"], "U", (m if nW else None, nW if nW else None))
    V = jsonio.decode_matrix(doc["V"], "V", (p if nW else None, nW if nW else None))
    if nW:
        m, p = U.shape[0], V.shape[0]
    if p is None or m is None:
        raise ParseError("cannot infer p and m from empty data; give \"p\" and \"m\"", "$")
    G = jsonio.decode_matrix(doc["Gamma"], "Gamma", (nZ if nW else None, nW if nZ else None))
    if nZ and nW and G.shape != (nZ, nW):
        raise ParseError(f"has shape {G.shape}, expected ({nZ}, {nW})", "Gamma")
    for key, val in (("p", doc.get("p")), ("m", doc.get("m"))):
        if val is not None and val != {"p": p, "m": m}[key]:
            raise ParseError(f"inconsistent with matrix dimensions", key)
    return BTOAData(Z, X, Y, W, U, V, G, p, m)


def parse_dataset(text: bytes | str) -> SimpleData | BTOAData:
    """Parse a UTF-8 JSON problem document."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"JSON syntax error: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    kind = doc.get("kind")
    if kind == "simple":
        return _parse_simple(doc)
    if kind == "btoa":
        return _parse_btoa(doc)
    raise ParseError("kind must be \"simple\" or \"btoa\"", "kind")


def dataset_to_dict(d: SimpleData | BTOAData) -> dict:
    if isinstance(d, SimpleData):
        return {
            "kind": "simple",
            "p": d.p,
            "m": d.m,
            "left": [
                {"z": jsonio.encode_complex(n.z), "x": [jsonio.encode_complex(v) for v in n.x],
                 "y": [jsonio.encode_complex(v) for v in n.y]}
                for n in d.left
            ],
            "right": [
                {"w": jsonio.encode_complex(n.w), "u": [jsonio.encode_complex(v) for v in n.u],
                 "v": [jsonio.encode_complex(v) for v in n.v]}
                for n in d.right
            ],
            "rho": [
                {"i": i, "j": j, "value": jsonio.encode_complex(val)}
                for (i, j), val in sorted(d.rho.items())
            ],
        }
    if isinstance(d, BTOAData):
        out = {"kind": "btoa", "p": d.p, "m": d.m}
        for key in _BTOA_FIELDS:
            out[key] = jsonio.encode_matrix(getattr(d, key))
        return out
    raise TypeError(f"not a dataset: {type(d).__name__}")


def serialize_dataset(d: SimpleData | BTOAData) -> str:
    return jsonio.dumps(dataset_to_dict(d))


def as_btoa(d: SimpleData | BTOAData) -> BTOAData:
    return aggregate_from_simple(d) if isinstance(d, SimpleData) else d
