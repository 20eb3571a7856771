"""JSON instance files and seeded random instance families.

Complex numbers are stored as ``[re, im]`` pairs; matrices row-major with an explicit
``dim``. An instance bundles ``matrix``, target ``poly`` (``coeffs[k]`` multiplies
``x**k``) and an optional ``state`` (default: first basis vector).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import jsonschema
import numpy as np
from scipy.stats import unitary_group

from .errors import BoundsError, InputParseError, SchemaError
from .linalg import hermitian_eig

FAMILIES = ("dense", "tridiagonal", "laplacian", "lowrank")
MAX_DIM = 64
MAX_DEGREE = 32

_PAIR = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
MATRIX_SCHEMA = {
    "type": "object",
    "properties": {
        "dim": {"type": "integer", "minimum": 1},
        "entries": {"type": "array", "items": _PAIR},
    },
    "required": ["dim", "entries"],
}
POLY_SCHEMA = {
    "type": "object",
    "properties": {"coeffs": {"type": "array", "items": _PAIR}},
    "required": ["coeffs"],
}
STATE_SCHEMA = {
    "type": "object",
    "properties": {"amplitudes": {"type": "array", "items": _PAIR, "minItems": 1}},
    "required": ["amplitudes"],
}
INSTANCE_SCHEMA = {
    "type": "object",
    "properties": {"matrix": MATRIX_SCHEMA, "poly": POLY_SCHEMA, "state": STATE_SCHEMA},
    "required": ["matrix", "poly"],
}


@dataclass
class Instance:
    matrix: np.ndarray
    coeffs: np.ndarray
    state: Optional[np.ndarray] = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def psi(self) -> np.ndarray:
        if self.state is not None:
            return self.state
        e0 = np.zeros(self.dim, dtype=complex)
        e0[0] = 1
        return e0


def encode_complex(values) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=complex).reshape(-1)]


def decode_complex(pairs) -> np.ndarray:
    return np.array([complex(re, im) for re, im in pairs], dtype=complex)


def matrix_to_json(m: np.ndarray) -> dict:
    return {"dim": int(m.shape[0]), "entries": encode_complex(m)}


def poly_to_json(coeffs) -> dict:
    return {"coeffs": encode_complex(coeffs)}


def state_to_json(psi) -> dict:
    return {"amplitudes": encode_complex(psi)}


def instance_to_json(inst: Instance) -> dict:
    doc = {"matrix": matrix_to_json(inst.matrix), "poly": poly_to_json(inst.coeffs)}
    if inst.state is not None:
        doc["state"] = state_to_json(inst.state)
    return doc


def dumps(doc: dict) -> str:
    # repr-based float formatting round-trips bit-exactly
    return json.dumps(doc) + "\n"


def loads(text: str, source: str = "<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputParseError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def read_json(path: Union[str, Path]):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputParseError(f"cannot read {path}: {exc.strerror}") from exc
    return loads(text, str(path))


def _validate(doc, schema: dict, what: str) -> None:
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"invalid {what} at {where}: {exc.message}") from exc


def parse_matrix(doc) -> np.ndarray:
    _validate(doc, MATRIX_SCHEMA, "matrix")
    n = doc["dim"]
    entries = decode_complex(doc["entries"])
    if entries.size != n * n:
        raise SchemaError(f"matrix of dim {n} needs {n * n} entries, got {entries.size}")
    return entries.reshape(n, n)


def parse_poly(doc) -> np.ndarray:
    _validate(doc, POLY_SCHEMA, "polynomial")
    return decode_complex(doc["coeffs"])


def parse_state(doc) -> np.ndarray:
    _validate(doc, STATE_SCHEMA, "state")
    return decode_complex(doc["amplitudes"])


def parse_instance(doc) -> Instance:
    _validate(doc, INSTANCE_SCHEMA, "instance")
    matrix = parse_matrix(doc["matrix"])
    coeffs = parse_poly(doc["poly"])
    state = parse_state(doc["state"]) if "state" in doc else None
    if state is not None and state.size != matrix.shape[0]:
        raise SchemaError(f"state has {state.size} amplitudes, matrix dim is {matrix.shape[0]}")
    return Instance(matrix, coeffs, state)


def _rescale(h: np.ndarray, norm_cap: float) -> np.ndarray:
    norm = float(np.max(np.abs(hermitian_eig(h).eigenvalues)))
    return h if norm == 0 else h * (norm_cap / norm)


def random_hermitian(
    rng: np.random.Generator,
    dim: int,
    family: str = "dense",
    norm_cap: float = 1.0,
    rank: Optional[int] = None,
) -> np.ndarray:
    """A random Hermitian matrix with spectral norm at most ``norm_cap``.

    ``dense`` is GUE-like, ``tridiagonal`` real symmetric, ``laplacian`` the normalized
    Laplacian ``L`` of an Erdos-Renyi graph mapped by ``L - I`` into ``[-1, 1]``, and
    ``lowrank`` has rank ``rank`` (default: random in ``[1, max(1, dim // 2)]``).
    Every family except ``laplacian`` is rescaled to norm exactly ``norm_cap``.
    """
    if not 1 <= dim <= MAX_DIM:
        raise BoundsError(f"dim must lie in [1, {MAX_DIM}], got {dim}")
    if not 0 < norm_cap <= 1:
        raise BoundsError(f"norm_cap must lie in (0, 1], got {norm_cap}")
    if family == "dense":
        g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        return _rescale((g + g.conj().T) / 2, norm_cap)
    if family == "tridiagonal":
        h = np.diag(rng.uniform(-1, 1, dim)).astype(complex)
        off = rng.uniform(-1, 1, dim - 1)
        h += np.diag(off, 1) + np.diag(off, -1)
        return _rescale(h, norm_cap)
    if family == "laplacian":
        adj = np.triu(rng.random((dim, dim)) < 0.5, 1).astype(float)
        adj = adj + adj.T
        deg = adj.sum(axis=1)
        inv_sqrt = np.where(deg > 0, 1 / np.sqrt(np.where(deg > 0, deg, 1)), 0.0)
        lap = np.diag((deg > 0).astype(float)) - inv_sqrt[:, None] * adj * inv_sqrt[None, :]
        # spectrum of the normalized Laplacian lies in [0, 2]
        return ((lap - np.eye(dim)) * norm_cap).astype(complex)
    if family == "lowrank":
        kmax = max(1, dim // 2)
        k = int(rng.integers(1, kmax + 1)) if rank is None else rank
        if not 1 <= k <= kmax:
            raise BoundsError(f"rank must lie in [1, {kmax}] for dim {dim}, got {k}")
        v = unitary_group.rvs(dim, random_state=rng)[:, :k] if dim > 1 else np.ones((1, 1))
        lam = rng.uniform(-1, 1, k)
        return _rescale((v * lam) @ v.conj().T, norm_cap)
    raise BoundsError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


def random_coefficients(rng: np.random.Generator, degree: int, l1_cap: float = 4.0) -> np.ndarray:
    if not 0 <= degree <= MAX_DEGREE:
        raise BoundsError(f"degree must lie in [0, {MAX_DEGREE}], got {degree}")
    c = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    return c * (rng.uniform(0.25, 1.0) * l1_cap / np.sum(np.abs(c)))


def random_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return psi / np.linalg.norm(psi)


def random_instance(
    dim: int,
    degree: int,
    seed: int,
    family: str = "dense",
    norm_cap: float = 1.0,
    rank: Optional[int] = None,
) -> Instance:
    """Deterministic instance: the same arguments always give the same matrices and vectors."""
    if seed < 0:
        raise BoundsError(f"seed must be unsigned, got {seed}")
    rng = np.random.default_rng(seed)
    matrix = random_hermitian(rng, dim, family, norm_cap, rank)
    coeffs = random_coefficients(rng, degree)
    return Instance(matrix, coeffs, random_state(rng, dim))
