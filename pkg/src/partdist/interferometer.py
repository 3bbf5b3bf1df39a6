"""Interferometers, output strings, and scattering submatrices.

An m-channel interferometer is a unitary U; feeding one particle into each of
the first n input ports and post-selecting on a collision-free detector
pattern s picks out the n x n submatrix A(s) whose rows are the detector
ports and whose columns are the occupied input ports.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SizeLimitError
from .symgroup import GroupOrdering

__all__ = [
    "Interferometer",
    "OutputString",
    "haar_unitary",
    "submatrix",
    "monomial_vector",
    "MonomialVector",
    "enumerate_outputs",
    "unitary_to_json",
    "unitary_from_json",
    "MAX_OUTPUT_ENUMERATION",
]

MAX_OUTPUT_ENUMERATION = 10**6
UNITARITY_TOL = 1e-10


@dataclass(frozen=True)
class Interferometer:
    """An m-channel unitary, plus the seed used to draw it (None if loaded)."""

    matrix: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        U = np.asarray(self.matrix, dtype=complex)
        if U.ndim != 2 or U.shape[0] != U.shape[1]:
            raise DomainError(f"interferometer matrix must be square, got {U.shape}")
        if not np.allclose(U.conj().T @ U, np.eye(U.shape[0]), atol=UNITARITY_TOL):
            raise DomainError("matrix is not unitary within 1e-10")
        U.setflags(write=False)
        object.__setattr__(self, "matrix", U)

    @property
    def m(self) -> int:
        return int(self.matrix.shape[0])


def haar_unitary(m: int, seed: int | None = None) -> Interferometer:
    """Haar-random unitary: QR of a complex Ginibre matrix with the phases of
    diag(R) absorbed so the distribution is exactly uniform."""
    if m < 1:
        raise DomainError("need at least one channel")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return Interferometer(q * phases, seed)


@dataclass(frozen=True)
class OutputString:
    """Collision-free detection pattern: s[k] in {0, 1} for each channel."""

    s: tuple[int, ...]

    def __post_init__(self):
        if any(x not in (0, 1) for x in self.s):
            raise DomainError(f"output string must be 0/1 valued, got {self.s}")

    @staticmethod
    def from_detectors(m: int, detectors: tuple[int, ...]) -> "OutputString":
        """Build from 1-based detector positions."""
        if any(not (1 <= d <= m) for d in detectors):
            raise DomainError(f"detector positions {detectors} outside 1..{m}")
        if len(set(detectors)) != len(detectors):
            raise DomainError("repeated detector position")
        s = [0] * m
        for d in detectors:
            s[d - 1] = 1
        return OutputString(tuple(s))

    @property
    def m(self) -> int:
        return len(self.s)

    @property
    def n(self) -> int:
        return sum(self.s)

    @property
    def detectors(self) -> tuple[int, ...]:
        """1-based positions of the clicked detectors, ascending."""
        return tuple(k + 1 for k, x in enumerate(self.s) if x)

    def __str__(self) -> str:
        return "".join(map(str, self.s))


def submatrix(
    interferometer: Interferometer,
    s: OutputString,
    input_ports: tuple[int, ...] | None = None,
) -> np.ndarray:
    """Scattering submatrix A(s): rows = clicked detectors, columns = occupied
    input ports (1-based; defaults to ports 1..n)."""
    U = interferometer.matrix
    if s.m != interferometer.m:
        raise DomainError(f"output string length {s.m} != channel count {interferometer.m}")
    n = s.n
    if input_ports is None:
        input_ports = tuple(range(1, n + 1))
    if len(input_ports) != n:
        raise DomainError(f"{n} detectors clicked but {len(input_ports)} input ports given")
    if any(not (1 <= p <= interferometer.m) for p in input_ports):
        raise DomainError("input port outside 1..m")
    rows = [d - 1 for d in s.detectors]
    cols = [p - 1 for p in input_ports]
    return U[np.ix_(rows, cols)]


@dataclass(frozen=True)
class MonomialVector:
    """v[gamma] = A[gamma(1),1] * ... * A[gamma(n),n] over a group ordering."""

    ordering: GroupOrdering
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.values)


def monomial_vector(A, ordering: GroupOrdering) -> MonomialVector:
    A = np.asarray(A)
    n = ordering.n
    if A.shape != (n, n):
        raise DomainError(f"expected a {n}x{n} submatrix, got {A.shape}")
    values = np.prod(A[ordering.images_array, np.arange(n)], axis=1)
    values.setflags(write=False)
    return MonomialVector(ordering, values)


def enumerate_outputs(
    m: int, n: int, max_count: int = MAX_OUTPUT_ENUMERATION
) -> tuple[OutputString, ...]:
    """All C(m, n) collision-free strings, lexicographic in the 0/1 tuples."""
    if not (0 <= n <= m):
        raise DomainError(f"cannot place {n} single clicks among {m} channels")
    count = math.comb(m, n)
    if count > max_count:
        raise SizeLimitError(f"C({m},{n}) = {count} exceeds the limit {max_count}")
    strings = [
        OutputString.from_detectors(m, tuple(d + 1 for d in combo))
        for combo in itertools.combinations(range(m), n)
    ]
    strings.sort(key=lambda x: x.s)
    return tuple(strings)


def unitary_to_json(interferometer: Interferometer, path) -> None:
    """Write the unitary as a JSON array-of-arrays of [re, im] pairs."""
    U = interferometer.matrix
    data = [[[float(z.real), float(z.imag)] for z in row] for row in U]
    with open(path, "w") as fh:
        json.dump(data, fh)


def unitary_from_json(path) -> Interferometer:
    """Load a unitary written by :func:`unitary_to_json`; unitarity is
    re-validated so corrupted files are rejected."""
    with open(path) as fh:
        data = json.load(fh)
    try:
        U = np.array([[complex(re, im) for re, im in row] for row in data])
    except (TypeError, ValueError) as exc:
        raise DomainError(f"malformed unitary file {path}: {exc}") from exc
    return Interferometer(U)
