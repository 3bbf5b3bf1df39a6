"""Arrival times, pairwise overlap (delay) matrices, and time-bin snapping.

Particles are modelled as Gaussian wavepackets; with source bandwidth and
detector resolution folded into a single effective width, the overlap of
particles i and j is

    r_ij = exp(-delta_omega^2 (tau_i - tau_j)^2 / 2),

a positive-semidefinite Gram matrix with unit diagonal.  Snapping arrival
times to the centers of b bins spanning the detection window makes same-bin
overlaps exactly 1, which is what turns block vanishing from an approximate
statement into an exact one.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "ArrivalSpec",
    "DelayPartition",
    "effective_width",
    "delay_matrix",
    "delay_matrix_from_times",
    "discretize",
    "snapped_times",
    "snapped_delay_matrix",
    "occupancy",
]


def effective_width(source_width: float, detector_width: float) -> float:
    """Fold source bandwidth and detector resolution into one Gaussian width:
    1/dw^2 = 1/source^2 + 1/detector^2."""
    if source_width <= 0 or detector_width <= 0:
        raise DomainError("widths must be positive")
    return 1.0 / math.sqrt(1.0 / source_width**2 + 1.0 / detector_width**2)


@dataclass(frozen=True)
class ArrivalSpec:
    """Arrival times within a detection window, plus the binning layout.

    taus are absolute times in [0, window); delta_omega is the effective
    Gaussian width entering the overlap matrix; bins is the number of equal
    time bins the window is divided into.
    """

    taus: tuple[float, ...]
    delta_omega: float
    window: float
    bins: int

    def __post_init__(self):
        taus = tuple(float(t) for t in self.taus)
        object.__setattr__(self, "taus", taus)
        if len(taus) < 1:
            raise DomainError("need at least one particle")
        if self.delta_omega <= 0:
            raise DomainError("delta_omega must be positive")
        if self.window <= 0:
            raise DomainError("window must be positive")
        if int(self.bins) != self.bins or self.bins < 2:
            raise DomainError("bins must be an integer >= 2")
        object.__setattr__(self, "bins", int(self.bins))
        if any(not (0.0 <= t < self.window) for t in taus):
            raise DomainError(f"arrival times must lie in [0, {self.window}) : {taus}")

    @property
    def n(self) -> int:
        return len(self.taus)

    def to_json(self) -> str:
        return json.dumps(
            {
                "taus": list(self.taus),
                "delta_omega": self.delta_omega,
                "window": self.window,
                "bins": self.bins,
            }
        )

    @staticmethod
    def from_json(text: str) -> "ArrivalSpec":
        try:
            data = json.loads(text)
            return ArrivalSpec(
                tuple(data["taus"]),
                float(data["delta_omega"]),
                float(data["window"]),
                int(data["bins"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed arrival spec: {exc}") from exc


@dataclass(frozen=True)
class DelayPartition:
    """Bin-occupancy pattern of the arrival times: the sorted tallies of how
    many particles share each occupied bin, plus the total bin count."""

    partition: tuple[int, ...]
    bins: int

    def __post_init__(self):
        if any(p <= 0 for p in self.partition) or any(
            a < b for a, b in zip(self.partition, self.partition[1:])
        ):
            raise DomainError(f"not a valid occupancy partition: {self.partition}")
        if len(self.partition) > self.bins:
            raise DomainError("more occupied bins than bins available")

    @property
    def n(self) -> int:
        return sum(self.partition)

    @property
    def width(self) -> int:
        """Largest same-bin cluster."""
        return self.partition[0] if self.partition else 0


def delay_matrix_from_times(taus, delta_omega: float) -> np.ndarray:
    """Pairwise Gaussian overlaps for raw (continuous) arrival times."""
    taus = np.asarray(taus, dtype=float)
    diff = np.subtract.outer(taus, taus)
    r = np.exp(-(delta_omega**2) * diff**2 / 2.0)
    r.setflags(write=False)
    return r


def delay_matrix(spec: ArrivalSpec) -> np.ndarray:
    return delay_matrix_from_times(spec.taus, spec.delta_omega)


def discretize(spec: ArrivalSpec) -> tuple[tuple[int, ...], DelayPartition]:
    """Assign each arrival to its time bin.

    Bin c (1-based) covers [(c-1) T/b, c T/b); returns the per-particle bin
    indices together with the resulting delay partition.
    """
    b, T = spec.bins, spec.window
    indices = tuple(min(int(t * b / T) + 1, b) for t in spec.taus)
    tallies = tuple(sorted(Counter(indices).values(), reverse=True))
    return indices, DelayPartition(tallies, b)


def snapped_times(bin_indices: tuple[int, ...], spec: ArrivalSpec) -> tuple[float, ...]:
    """Bin-center times (c - 1/2) T/b for the given bin assignment."""
    b, T = spec.bins, spec.window
    if any(not (1 <= c <= b) for c in bin_indices):
        raise DomainError(f"bin index outside 1..{b}: {bin_indices}")
    return tuple((c - 0.5) * T / b for c in bin_indices)


def snapped_delay_matrix(bin_indices: tuple[int, ...], spec: ArrivalSpec) -> np.ndarray:
    """Overlap matrix after snapping times to bin centers.

    Same-bin pairs get overlap exactly 1.0 (identical snapped times), so the
    matrix is the Gram matrix of only as many distinct wavepackets as there
    are occupied bins.
    """
    return delay_matrix_from_times(snapped_times(bin_indices, spec), spec.delta_omega)


def occupancy(partition, bins: int) -> tuple[int, ...]:
    """Counts (b_0, b_1, ..., b_n): b_i = number of bins holding exactly i
    particles; b_0 counts the empty bins."""
    mu = partition.partition if isinstance(partition, DelayPartition) else tuple(partition)
    if any(p <= 0 for p in mu):
        raise DomainError(f"invalid partition {mu}")
    if bins < len(mu):
        raise DomainError(f"{len(mu)} occupied bins cannot fit into {bins} bins")
    n = sum(mu)
    counts = Counter(mu)
    out = [0] * (n + 1)
    out[0] = bins - len(mu)
    for size, how_many in counts.items():
        out[size] = how_many
    return tuple(out)
