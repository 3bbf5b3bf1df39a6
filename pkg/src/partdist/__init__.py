"""Coincidence rates and sampling distributions for partially
distinguishable bosons and fermions in linear interferometers.

The building blocks, bottom to top:

- :mod:`partdist.symgroup` — permutations, partitions, characters, and the
  orthogonal irreducible matrices of the symmetric group;
- :mod:`partdist.matfun` — permanents, immanants, and the irrep-transformed
  matrix functions whose entries fill the diagonal blocks;
- :mod:`partdist.interferometer` — unitaries, Haar samples, output strings,
  scattering submatrices;
- :mod:`partdist.delays` — arrival-time specs, Gaussian-overlap delay
  matrices, time-bin discretization;
- :mod:`partdist.rates` — the n! x n! rate quadratic form and its exact
  block-diagonalized and truncated equivalents;
- :mod:`partdist.sampling` — normalized output distributions and exact
  inverse-CDF sampling;
- :mod:`partdist.analysis` — bin-collision probabilities, the witness
  partition, and the evaluation-cost model.
"""

from .errors import DomainError, NumericalError, PartdistError, SizeLimitError
from .symgroup import (
    Permutation,
    GroupOrdering,
    all_permutations,
    partitions_of,
    conjugate,
    dominates,
    character,
    standard_tableau_count,
    gl_dimension,
    irrep_matrices,
)
from .matfun import determinant, permanent, immanant, dfunction_block, dfunction_direct
from .interferometer import (
    Interferometer,
    OutputString,
    haar_unitary,
    submatrix,
    monomial_vector,
    enumerate_outputs,
    unitary_to_json,
    unitary_from_json,
)
from .delays import (
    ArrivalSpec,
    DelayPartition,
    delay_matrix,
    delay_matrix_from_times,
    discretize,
    snapped_times,
    snapped_delay_matrix,
    effective_width,
)
from .rates import (
    rate_matrix,
    rate_direct,
    rate_direct_streaming,
    build_transform,
    block_decompose,
    rate_blocked,
    rate_truncated,
    truncation_report,
    gamas_vanishes,
    rate_fully_distinguishable,
    reduce_distinguishable_particle,
    rate_via_reduction,
)
from .sampling import (
    OutputDistribution,
    build_distribution,
    sample,
    indistinguishable_fermion_check,
    reference_indistinguishable,
    reference_distinguishable,
    to_jsonl,
    to_csv,
    entropy_bits,
    total_variation,
)
from .analysis import (
    witness_partition,
    requires_witness,
    catalan,
    burgisser_cost,
    witness_report,
    delay_partition_probability,
    witness_probability,
    analyze_report,
)

__version__ = "0.1.0"
