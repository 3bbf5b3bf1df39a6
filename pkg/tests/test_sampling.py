import csv
import json
import math

import numpy as np
import pytest
from scipy import stats

from partdist.delays import ArrivalSpec
from partdist.errors import DomainError, SizeLimitError
from partdist.interferometer import haar_unitary
from partdist.sampling import (
    build_distribution,
    entropy_bits,
    indistinguishable_fermion_check,
    reference_distinguishable,
    reference_indistinguishable,
    sample,
    to_csv,
    to_jsonl,
    total_variation,
)

SPEC = ArrivalSpec((0.1, 0.42, 0.77), 1.5, 1.0, 8)
EQUAL = ArrivalSpec((0.3, 0.3, 0.3), 1.5, 1.0, 8)
FAR = ArrivalSpec((0.01, 0.45, 0.93), 500.0, 1.0, 8)


@pytest.fixture(scope="module")
def itf():
    return haar_unitary(6, seed=3)


def test_distribution_normalization_and_coverage(itf):
    dist = build_distribution(itf, SPEC, "boson", "direct")
    assert len(dist.entries) == math.comb(6, 3)
    assert len(set(dist.strings)) == len(dist.entries)
    assert dist.probabilities.sum() == pytest.approx(1.0, abs=1e-12)
    assert dist.probabilities.min() >= 0
    assert dist.total_rate == pytest.approx(dist.rates.sum())


@pytest.mark.parametrize("species", ["boson", "fermion"])
def test_engines_build_identical_distributions(itf, species):
    direct = build_distribution(itf, SPEC, species, "direct")
    blocked = build_distribution(itf, SPEC, species, "blocked")
    assert np.abs(direct.probabilities - blocked.probabilities).max() < 1e-11
    snapped_direct = build_distribution(itf, SPEC, species, "direct", snapped=True)
    truncated = build_distribution(itf, SPEC, species, "truncated", snapped=True)
    assert np.abs(snapped_direct.probabilities - truncated.probabilities).max() < 1e-11


def test_truncated_requires_snapping_or_explicit_mu(itf):
    with pytest.raises(DomainError):
        build_distribution(itf, SPEC, "boson", "truncated")
    approx = build_distribution(itf, SPEC, "boson", "truncated", approximate_mu=(2, 1))
    assert approx.probabilities.sum() == pytest.approx(1.0, abs=1e-12)


def test_point_mass_when_channels_equal_particles():
    itf = haar_unitary(3, seed=1)
    dist = build_distribution(itf, SPEC, "boson", "direct")
    assert len(dist.entries) == 1
    s, rate, prob = dist.entries[0]
    assert str(s) == "111" and prob == 1.0


def test_sampling_is_deterministic_and_seed_sensitive(itf):
    dist = build_distribution(itf, SPEC, "boson", "direct")
    a = sample(dist, 100, seed=5)
    b = sample(dist, 100, seed=5)
    c = sample(dist, 100, seed=6)
    assert a == b
    assert a != c


def test_sampling_goodness_of_fit(itf):
    dist = build_distribution(itf, SPEC, "boson", "direct")
    draws = sample(dist, 10_000, seed=0)
    index = {s: i for i, s in enumerate(dist.strings)}
    counts = np.zeros(len(dist.entries))
    for s in draws:
        counts[index[s]] += 1
    # pool tiny-expectation cells to keep the chi-square approximation honest
    expected = dist.probabilities * len(draws)
    keep = expected >= 5
    pooled_counts, pooled_expected = counts[keep], expected[keep]
    if not keep.all():
        pooled_counts = np.append(pooled_counts, counts[~keep].sum())
        pooled_expected = np.append(pooled_expected, expected[~keep].sum())
    result = stats.chisquare(pooled_counts, pooled_expected)
    assert result.pvalue > 0.001


def test_two_seeds_same_marginals(itf):
    dist = build_distribution(itf, SPEC, "boson", "direct")
    emp = []
    for seed in (1, 2):
        draws = sample(dist, 5000, seed=seed)
        emp.append(np.array([draws.count(s) for s in dist.strings]) / 5000)
    assert np.abs(emp[0] - emp[1]).max() < 0.05


def test_fermion_equal_times_matches_determinant_distribution(itf):
    dist = build_distribution(itf, EQUAL, "fermion", "direct")
    report = indistinguishable_fermion_check(dist)
    assert report.classically_easy
    assert report.max_abs_diff < 1e-9


def test_fermion_check_rejects_bosons(itf):
    dist = build_distribution(itf, EQUAL, "boson", "direct")
    with pytest.raises(DomainError):
        indistinguishable_fermion_check(dist)


def test_single_particle_distribution_is_column_weights():
    itf = haar_unitary(4, seed=7)
    spec = ArrivalSpec((0.2,), 1.0, 1.0, 4)
    dist = build_distribution(itf, spec, "fermion", "direct")
    weights = np.abs(itf.matrix[:, 0]) ** 2
    by_detector = {entry[0].detectors[0]: entry[2] for entry in dist.entries}
    probs = [by_detector[k] for k in range(1, 5)]
    assert np.allclose(probs, weights / weights.sum(), atol=1e-12)


def test_hom_fermions_antibunch_completely():
    # two fermions in a two-channel interferometer: the only collision-free
    # string is "11" and it carries all the probability
    itf = haar_unitary(2, seed=2)
    spec = ArrivalSpec((0.5, 0.5), 1.0, 1.0, 4)
    dist = build_distribution(itf, spec, "fermion", "direct")
    assert len(dist.entries) == 1
    assert dist.entries[0][2] == 1.0


def test_boson_equal_times_matches_permanent_reference(itf):
    dist = build_distribution(itf, EQUAL, "boson", "direct")
    ref = reference_indistinguishable(itf, 3, "boson")
    assert total_variation(dist, ref) < 1e-10


def test_species_agree_at_full_distinguishability(itf):
    boson = build_distribution(itf, FAR, "boson", "direct")
    fermion = build_distribution(itf, FAR, "fermion", "direct")
    ref = reference_distinguishable(itf, 3)
    assert np.abs(boson.probabilities - fermion.probabilities).max() < 1e-9
    assert total_variation(boson, ref) < 1e-9


def test_probability_continuity_in_arrival_times(itf):
    base = build_distribution(itf, SPEC, "boson", "direct").probabilities
    shifts = {}
    for eps in (1e-3, 1e-4):
        taus = (SPEC.taus[0] + eps,) + SPEC.taus[1:]
        perturbed = build_distribution(
            itf, ArrivalSpec(taus, SPEC.delta_omega, SPEC.window, SPEC.bins),
            "boson", "direct",
        ).probabilities
        shifts[eps] = np.abs(perturbed - base).max()
    ratio = shifts[1e-3] / shifts[1e-4]
    assert 10 / 3 < ratio < 30  # O(eps) scaling within a factor 3 of linear


def test_size_guards():
    with pytest.raises(SizeLimitError):
        build_distribution(haar_unitary(50, seed=0),
                           ArrivalSpec((0.1,) * 5, 1.0, 1.0, 4), "boson")
    spec8 = ArrivalSpec((0.1,) * 8, 1.0, 1.0, 4)
    with pytest.raises(SizeLimitError):
        build_distribution(haar_unitary(9, seed=0), spec8, "boson")


def test_exports(tmp_path, itf):
    dist = build_distribution(itf, SPEC, "boson", "direct")
    jl = tmp_path / "d.jsonl"
    to_jsonl(dist, jl)
    lines = [json.loads(line) for line in jl.read_text().splitlines()]
    assert len(lines) == 20
    assert set(lines[0]) == {"s", "rate", "prob"}
    assert sum(line["prob"] for line in lines) == pytest.approx(1.0, abs=1e-9)

    cv = tmp_path / "d.csv"
    to_csv(dist, cv)
    with open(cv) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["s", "rate", "prob"]
    assert len(rows) == 21
    # repr round-trips floats exactly
    assert float(rows[1][2]) == dist.entries[0][2]


def test_entropy_and_tv_basics(itf):
    dist = build_distribution(itf, SPEC, "boson", "direct")
    assert 0 < entropy_bits(dist) <= math.log2(len(dist.entries)) + 1e-12
    assert total_variation(dist, dist) == 0
    other = reference_distinguishable(itf, 3)
    tv = total_variation(dist, other)
    assert 0 <= tv <= 1
    small = reference_distinguishable(haar_unitary(5, seed=1), 3)
    with pytest.raises(DomainError):
        total_variation(dist, small)
