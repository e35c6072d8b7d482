"""Golay and 4^q-QAM Golay sequences with zero autocorrelation zones."""

from .residue import (GaussianInt, Residue, UnitRoot, bit_matrix, bits_of,
                      int_of_bits, root_to_complex)
from .gbf import (CONDITIONS, TAGS, ConditionId, GolayParams, PhaseSeq,
                  check_condition, enumerate_conditions, generate, golay_pair,
                  mirror, parse_permutation, random_instance)
from .qam import (ComplexSeq, OffsetSpec, QamParams, in_constellation,
                  is_qam_complementary, qam_pair, qam_sequence, weights)
from .correlation import (CorrProfile, PartitionSums, PreconditionError,
                          ZaczReport, aperiodic_autocorr, estimate_delay,
                          find_zacz, is_complementary_pair, partition_sums, periodic_autocorr,
                          predicted_zones, profile_to_csv, verify_theorem)
from .search import (SearchResult, SearchSpaceTooLarge, SearchSpec, cardinality,
                     sweep, table8_audit, table8_rows)


__all__ = [name for name in dir() if not name.startswith("_")]
