"""Dense linear algebra on small finite Hilbert spaces.

States are :class:`StateVector` instances; operators are plain square
complex ``numpy`` arrays. Observables only enter through their spectral
form (:class:`SpectralObservable`), so no eigensolver is ever called.

Basis convention: site 0 is the most significant tensor factor,
``|up> = (1, 0)``, ``|down> = (0, 1)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

STRUCT_TOL = 1e-10
ALGEBRA_TOL = 1e-12
MAX_DIM = 64

SIGMA = {
    "i": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class HilbertError(ValueError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def as_operator(m, dim: int | None = None) -> np.ndarray:
    """Validate ``m`` as a square, finite complex matrix and return a read-only copy."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise HilbertError(f"operator must be square, got shape {a.shape}")
    if a.shape[0] > MAX_DIM:
        raise HilbertError(f"dimension {a.shape[0]} exceeds cap {MAX_DIM}")
    if dim is not None and a.shape[0] != dim:
        raise HilbertError(f"operator dim {a.shape[0]} != {dim}")
    if not np.all(np.isfinite(a)):
        raise HilbertError("operator has non-finite entries")
    return _frozen(a)


@dataclass(frozen=True, eq=False)
class StateVector:
    amps: np.ndarray
    factors: tuple[int, ...] | None = None

    def __post_init__(self):
        a = np.asarray(self.amps, dtype=complex).reshape(-1)
        if a.size == 0 or a.size > MAX_DIM:
            raise HilbertError(f"state dimension {a.size} outside 1..{MAX_DIM}")
        if not np.all(np.isfinite(a)):
            raise HilbertError("state has non-finite amplitudes")
        object.__setattr__(self, "amps", _frozen(a))
        if self.factors is not None:
            f = tuple(int(d) for d in self.factors)
            if int(np.prod(f)) != a.size:
                raise HilbertError(f"factors {f} do not multiply to dim {a.size}")
            object.__setattr__(self, "factors", f)

    @property
    def dim(self) -> int:
        return self.amps.size

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def __repr__(self):
        return f"StateVector(dim={self.dim}, factors={self.factors})"


def normalize(v: StateVector | Sequence[complex], factors=None) -> StateVector:
    amps = v.amps if isinstance(v, StateVector) else np.asarray(v, dtype=complex)
    if factors is None and isinstance(v, StateVector):
        factors = v.factors
    n = np.linalg.norm(amps)
    if n == 0:
        raise HilbertError("cannot normalize the zero vector")
    return StateVector(amps / n, factors)


def state(amps, factors=None) -> StateVector:
    return normalize(np.asarray(amps, dtype=complex), factors)


def product_state(*kets: StateVector) -> StateVector:
    amps = reduce(np.kron, [k.amps for k in kets])
    factors = []
    for k in kets:
        factors.extend(k.factors if k.factors else (k.dim,))
    return StateVector(amps, tuple(factors))


# single-qubit eigenstates, keyed by (axis, eigenvalue)
_S = 1 / np.sqrt(2)
QUBIT = {
    ("z", +1): StateVector([1, 0]),
    ("z", -1): StateVector([0, 1]),
    ("x", +1): StateVector([_S, _S]),
    ("x", -1): StateVector([_S, -_S]),
    ("y", +1): StateVector([_S, 1j * _S]),
    ("y", -1): StateVector([_S, -1j * _S]),
}


def qubit(axis: str, sign: int) -> StateVector:
    return QUBIT[(axis, int(sign))]


def inner(bra: StateVector, ket: StateVector) -> complex:
    """``<bra|ket>``, conjugate-linear in ``bra``."""
    if bra.dim != ket.dim:
        raise HilbertError(f"dimension mismatch: {bra.dim} vs {ket.dim}")
    return complex(np.vdot(bra.amps, ket.amps))


def matrix_element(bra: StateVector, op: np.ndarray, ket: StateVector) -> complex:
    if not (bra.dim == ket.dim == op.shape[0]):
        raise HilbertError("dimension mismatch in matrix element")
    return complex(np.vdot(bra.amps, op @ ket.amps))


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return as_operator(np.kron(as_operator(a), as_operator(b)))


def identity(dim: int) -> np.ndarray:
    return as_operator(np.eye(dim))


def ket_bra(ket: StateVector, bra: StateVector | None = None) -> np.ndarray:
    bra = ket if bra is None else bra
    return as_operator(np.outer(ket.amps, bra.amps.conj()))


def commutator_norm(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a @ b - b @ a))


def is_projector(p: np.ndarray, tol: float = STRUCT_TOL) -> bool:
    return bool(
        np.allclose(p @ p, p, atol=tol, rtol=0) and np.allclose(p, p.conj().T, atol=tol, rtol=0)
    )


@dataclass(frozen=True, eq=False)
class SpectralObservable:
    """Hermitian observable stored together with its spectral projectors."""

    name: str
    op: np.ndarray
    spectrum: tuple[tuple[float, np.ndarray], ...]

    @property
    def dim(self) -> int:
        return self.op.shape[0]

    @property
    def eigenvalues(self) -> tuple[float, ...]:
        return tuple(lam for lam, _ in self.spectrum)

    def projector(self, eigenvalue: float, tol: float = 1e-9) -> np.ndarray:
        for lam, p in self.spectrum:
            if abs(lam - eigenvalue) < tol:
                return p
        raise KeyError(f"{self.name} has no eigenvalue {eigenvalue}")

    def __repr__(self):
        return f"SpectralObservable({self.name!r}, dim={self.dim}, eigenvalues={self.eigenvalues})"


def observable_from_spectrum(
    name: str, spectrum: Iterable[tuple[float, np.ndarray]], tol: float = STRUCT_TOL
) -> SpectralObservable:
    """Build an observable from (eigenvalue, projector) pairs, checking every invariant.

    Zero projectors are dropped.
    """
    pairs = []
    for lam, p in spectrum:
        lam = float(np.real(lam))
        p = as_operator(p)
        if np.linalg.norm(p) <= tol:
            continue
        if not is_projector(p, tol):
            raise HilbertError(f"{name}: spectral component for {lam} is not a projector")
        pairs.append((lam, p))
    if not pairs:
        raise HilbertError(f"{name}: empty spectrum")
    dim = pairs[0][1].shape[0]
    lams = [lam for lam, _ in pairs]
    if len(set(lams)) != len(lams):
        raise HilbertError(f"{name}: eigenvalues must be pairwise distinct, got {lams}")
    total = sum(p for _, p in pairs)
    if not np.allclose(total, np.eye(dim), atol=tol, rtol=0):
        raise HilbertError(f"{name}: projectors do not resolve the identity")
    op = as_operator(sum(lam * p for lam, p in pairs))
    return SpectralObservable(name, op, tuple(pairs))


def involution_observable(name: str, op: np.ndarray, tol: float = STRUCT_TOL) -> SpectralObservable:
    """Observable for a Hermitian ``op`` with ``op @ op = I`` (spectrum within {+1, -1})."""
    op = as_operator(op)
    eye = np.eye(op.shape[0])
    if not np.allclose(op @ op, eye, atol=tol, rtol=0):
        raise HilbertError(f"{name}: operator does not square to the identity")
    if not np.allclose(op, op.conj().T, atol=tol, rtol=0):
        raise HilbertError(f"{name}: operator is not Hermitian")
    return observable_from_spectrum(name, [(1.0, (eye + op) / 2), (-1.0, (eye - op) / 2)], tol)


def projector_observable(name: str, proj: np.ndarray, tol: float = STRUCT_TOL) -> SpectralObservable:
    proj = as_operator(proj)
    if not is_projector(proj, tol):
        raise HilbertError(f"{name}: not a Hermitian idempotent")
    eye = np.eye(proj.shape[0])
    return observable_from_spectrum(name, [(1.0, proj), (0.0, eye - proj)], tol)


def parse_pauli_spec(spec) -> list[tuple[int, str]]:
    """Accept ``[(0, 'x'), (1, 'y')]`` or the text form ``'x@0 y@1'``."""
    if isinstance(spec, str):
        out = []
        for tok in spec.split():
            axis, _, site = tok.partition("@")
            if not site:
                raise HilbertError(f"bad Pauli token {tok!r}, expected axis@site")
            out.append((int(site), axis))
        spec = out
    return [(int(s), str(a).lower()) for s, a in spec]


def pauli_matrix(spec, n_sites: int) -> np.ndarray:
    pairs = parse_pauli_spec(spec)
    sites = [s for s, _ in pairs]
    if len(set(sites)) != len(sites):
        raise HilbertError(f"duplicate site in Pauli spec {pairs}")
    factors = ["i"] * n_sites
    for s, a in pairs:
        if not 0 <= s < n_sites:
            raise HilbertError(f"site {s} out of range for {n_sites} sites")
        if a not in ("x", "y", "z"):
            raise HilbertError(f"unknown Pauli axis {a!r}")
        factors[s] = a
    return as_operator(reduce(np.kron, [SIGMA[a] for a in factors]))


def pauli_string(spec, n_sites: int, name: str | None = None) -> SpectralObservable:
    if name is None:
        name = "".join(f"{a.upper()}{s + 1}" for s, a in parse_pauli_spec(spec)) or "I"
    return involution_observable(name, pauli_matrix(spec, n_sites))
