#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "swucc/determinant.hpp"
#include "swucc/integrals.hpp"
#include "swucc/wavefunction.hpp"

namespace swucc {

/// One exponential factor exp(theta (A - A+)) of the factorized ansatz.
struct UccFactor {
    ExcitationOperator op;
    double theta = 0.0;
    int pool_index = -1;
};

/// Ansatz truncation knobs. m_d = 0 keeps every double factor.
struct AnsatzConfig {
    std::size_t m_d = 0;
    bool include_all_singles = true;
};

/// Factors in application order: the factor at index 0 acts on the reference
/// first. All doubles precede all singles.
struct OrderedAnsatz {
    std::vector<UccFactor> factors;
};

/// Every Sz-conserving spin-orbital single (occupied -> virtual, same spin)
/// followed by every canonical Sz-conserving double (i < j occupied,
/// a < b virtual). Deterministic enumeration order; index into the returned
/// vector is the pool identity.
std::vector<ExcitationOperator> build_pool(int n_orbitals, const Determinant& reference);

/// MP2 amplitudes aligned with a pool: t_ij^ab = <ij||ab> / (eps_i + eps_j -
/// eps_a - eps_b) for doubles, zero for singles. correlation_energy is the
/// standard quarter-sum MP2 energy for cross-checking. Throws on a degenerate
/// denominator (|Delta| < 1e-10), naming the offending quadruple.
struct Mp2Amplitudes {
    std::vector<double> values;  // aligned with the pool
    double correlation_energy = 0.0;
};

Mp2Amplitudes mp2_amplitudes(const IntegralStore& store, const OrbitalEnergies& eps,
                             const Determinant& reference);

/// Doubles sorted by |initial amplitude| descending (ties by pool index),
/// top m_d kept and seeded with their amplitudes, then all singles in pool
/// order with theta = 0. The resulting order is frozen for the lifetime of
/// the ansatz.
OrderedAnsatz order_and_truncate(const std::vector<ExcitationOperator>& pool,
                                 const std::vector<double>& amplitudes,
                                 const AnsatzConfig& config);

/// Applies one UCC factor exactly: on each determinant block the pair
/// (excitation, de-excitation) closes an SU(2), so |D> picks up cos(theta)
/// and the partner determinant +/- sin(theta) with the fermionic phase.
/// Determinants supporting neither direction pass through unchanged.
SparseWavefunction apply_factor(const SparseWavefunction& wf, const UccFactor& factor);

/// Reusable buffers for repeated factor application; one per worker thread.
class FactorWorkspace {
public:
    SparseWavefunction apply(const SparseWavefunction& wf, const UccFactor& factor);

private:
    std::vector<SparseWavefunction::Entry> rotated_;
    std::vector<SparseWavefunction::Entry> created_;
};

/// from_reference, then each factor in order with truncate(policy) after
/// every application.
SparseWavefunction apply_ansatz(const Determinant& reference, const OrderedAnsatz& ansatz,
                                const TruncationPolicy& policy);

/// Parameter JSON: ordered array of {kind, i[, j], a[, b], theta, pool_index}.
void write_parameters_json(const OrderedAnsatz& ansatz, std::ostream& out);
OrderedAnsatz read_parameters_json(std::istream& in);

}  // namespace swucc
