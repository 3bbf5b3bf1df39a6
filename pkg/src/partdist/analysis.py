"""Combinatorics of time-bin collisions and what they cost.

Under uniform random arrivals into b equal time bins, the multiset of bin
occupancies is a random partition of n with an exactly computable rational
probability.  Whenever that partition is dominated by the witness partition
(ceil(n/2), floor(n/2)) — equivalently, no bin holds more than ceil(n/2)
particles — the blocked fermion rate keeps contributions from the widest
irrep blocks, the ones whose evaluation the cost model prices exponentially.
Everything here is exact big-integer arithmetic except the closed-form tail
estimate, which is the point of comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .delays import DelayPartition, occupancy
from .errors import DomainError, PartdistError, SizeLimitError
from .symgroup import (
    conjugate,
    dominates,
    gl_dimension,
    partitions_of,
    standard_tableau_count,
)

__all__ = [
    "witness_partition",
    "requires_witness",
    "catalan",
    "CostEstimate",
    "burgisser_cost",
    "WitnessReport",
    "witness_report",
    "delay_partition_probability",
    "WitnessProbability",
    "witness_probability",
    "analyze_report",
    "MAX_ANALYZE_DEGREE",
]

MAX_ANALYZE_DEGREE = 12


def witness_partition(n: int) -> tuple[int, ...]:
    """The two-row partition (ceil(n/2), floor(n/2)); its conjugate is the
    column shape (2, 2, ..., 2[, 1])."""
    if n < 2:
        raise DomainError("witness partition needs n >= 2")
    return (math.ceil(n / 2), n // 2)


def _as_partition(mu) -> tuple[int, ...]:
    if isinstance(mu, DelayPartition):
        return mu.partition
    mu = tuple(int(p) for p in mu)
    if any(p <= 0 for p in mu) or list(mu) != sorted(mu, reverse=True):
        raise DomainError(f"{mu} is not a partition (positive, sorted descending)")
    return mu


def requires_witness(mu, n: int | None = None) -> bool:
    """True iff a bin-occupancy pattern mu forces the witness-class blocks
    into the kept set — iff mu is dominated by the witness partition, iff no
    bin holds more than ceil(n/2) particles.

    Three deliberately separate routes are evaluated and compared on every
    call; a disagreement would mean a bug, not bad input.
    """
    mu = _as_partition(mu)
    if n is None:
        n = sum(mu)
    elif sum(mu) != n:
        raise DomainError(f"{mu} is not a partition of {n}")
    w = witness_partition(n)

    via_dominance = dominates(w, mu)
    via_width = mu[0] <= math.ceil(n / 2)
    # explicit prefix-sum comparison, written out independently of dominates()
    w_padded = list(w) + [0] * max(0, len(mu) - len(w))
    mu_padded = list(mu) + [0] * max(0, len(w) - len(mu))
    acc_mu = acc_w = 0
    via_prefix = True
    for pm, pw in zip(mu_padded, w_padded):
        acc_mu += pm
        acc_w += pw
        if acc_mu > acc_w:
            via_prefix = False
            break

    if not (via_dominance == via_width == via_prefix):
        raise PartdistError(
            f"witness-detection routes disagree on {mu}: "
            f"{via_dominance}/{via_width}/{via_prefix}"
        )
    return via_dominance


def catalan(k: int) -> int:
    if k < 0:
        raise DomainError("Catalan numbers need k >= 0")
    return math.comb(2 * k, k) // (k + 1)


@dataclass(frozen=True)
class CostEstimate:
    """Operation-count estimate [mult + log2(n)] * n^2 * s * d for evaluating
    one group-function block, with the weight-multiplicity s standing in for
    mult (a deliberate over-approximation used for reporting only)."""

    lam: tuple[int, ...]
    n: int
    s_lam: int
    d_lam: int
    mult_estimate: int
    operations: float
    is_column_pair_shape: bool  # lam = (2, 2, ..., 2): Catalan closed forms apply


def burgisser_cost(lam, n: int | None = None) -> CostEstimate:
    """Cost-model the evaluation of the lam-labelled group-function block.

    For the all-twos column shape (2^k) the tableau count is the Catalan
    number C_k and the GL(2k) dimension is C_k * binom(2k+1, k); both closed
    forms are asserted against the hook formulas on every such call.
    """
    lam = _as_partition(lam)
    if n is None:
        n = sum(lam)
    elif sum(lam) != n:
        raise DomainError(f"{lam} is not a partition of {n}")
    s = standard_tableau_count(lam)
    d = gl_dimension(lam, n)
    pair_shape = set(lam) == {2}
    if pair_shape:
        k = len(lam)
        if s != catalan(k) or (n == 2 * k and d != catalan(k) * math.comb(n + 1, k)):
            raise PartdistError(f"Catalan closed form failed for {lam}")
    ops = (s + math.log2(n)) * n**2 * s * d
    return CostEstimate(lam, n, s, d, s, float(ops), pair_shape)


@dataclass(frozen=True)
class WitnessReport:
    n: int
    witness: tuple[int, ...]
    witness_conjugate: tuple[int, ...]
    mu: tuple[int, ...] | None
    forces_witness: bool | None
    dominant_cost: CostEstimate


def witness_report(n: int, mu=None) -> WitnessReport:
    """Witness partition, its conjugate column shape, whether a given bin
    pattern forces it, and the cost estimate for the dominant block — the one
    labelled by the conjugate shape."""
    w = witness_partition(n)
    wc = conjugate(w)
    forces = None if mu is None else requires_witness(mu, n)
    return WitnessReport(n, w, wc, None if mu is None else _as_partition(mu),
                         forces, burgisser_cost(wc, n))


# ---------------------------------------------------------------------------
# Uniform-arrival bin statistics (exact rationals throughout)


def delay_partition_probability(mu, b: int, n: int | None = None) -> Fraction:
    """Probability that n uniform arrivals into b bins produce occupancy
    pattern mu: multinomial(n; mu) * multinomial(b; bin tallies) / b^n,
    and exactly 0 whenever mu has more parts than there are bins."""
    mu = _as_partition(mu)
    if n is None:
        n = sum(mu)
    elif sum(mu) != n:
        raise DomainError(f"{mu} is not a partition of {n}")
    if b < 1:
        raise DomainError("need at least one bin")
    if b < len(mu):
        return Fraction(0)
    ways_particles = math.factorial(n)
    for part in mu:
        ways_particles //= math.factorial(part)
    ways_bins = math.factorial(b)
    for count in occupancy(mu, b):
        ways_bins //= math.factorial(count)
    return Fraction(ways_particles * ways_bins, b**n)


@dataclass(frozen=True)
class WitnessProbability:
    """Exact and asymptotic probability that uniform arrivals land in a
    witness-forcing pattern (no bin with more than ceil(n/2) particles)."""

    n: int
    b: int
    exact: Fraction
    tail_exact: Fraction
    tail_asymptotic: float
    decaying: bool  # the closed-form tail only decays for b >= 5

    @property
    def exact_float(self) -> float:
        return float(self.exact)


def witness_probability(n: int, b: int) -> WitnessProbability:
    """Sum the exact bin-pattern probabilities over every witness-forcing
    partition of n, against the closed-form tail sqrt(2/(n pi)) (4/b)^(n/2)."""
    if n < 2 or b < 2:
        raise DomainError("need n >= 2 and b >= 2")
    exact = Fraction(0)
    for mu in partitions_of(n):
        if requires_witness(mu, n):
            exact += delay_partition_probability(mu, b, n)
    tail = math.sqrt(2 / (n * math.pi)) * (4 / b) ** (n / 2)
    return WitnessProbability(n, b, exact, 1 - exact, tail, decaying=b >= 5)


def analyze_report(n: int, b: int) -> dict:
    """Full JSON-shaped report: witness data, per-partition probabilities,
    exact total, and the asymptotic tail."""
    if n > MAX_ANALYZE_DEGREE:
        raise SizeLimitError(f"exact enumeration limited to n <= {MAX_ANALYZE_DEGREE}")
    wp = witness_probability(n, b)
    report = witness_report(n)
    rows = []
    for mu in partitions_of(n):
        p = delay_partition_probability(mu, b, n)
        rows.append(
            {
                "mu": list(mu),
                "prob": str(p),
                "prob_float": float(p),
                "requires_witness": requires_witness(mu, n),
            }
        )
    return {
        "n": n,
        "b": b,
        "witness": list(report.witness),
        "witness_conjugate": list(report.witness_conjugate),
        "dominant_cost_operations": report.dominant_cost.operations,
        "partitions": rows,
        "p_exact": str(wp.exact),
        "p_float": wp.exact_float,
        "tail_exact": float(wp.tail_exact),
        "tail_asymptotic": wp.tail_asymptotic,
        "tail_decaying": wp.decaying,
    }
