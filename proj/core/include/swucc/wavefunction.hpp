#pragma once

#include <cstddef>
#include <iosfwd>
#include <utility>
#include <vector>

#include "swucc/determinant.hpp"

namespace swucc {

/// Amplitudes with magnitude below this are discarded on construction.
inline constexpr double kAmplitudeDropThreshold = 1e-14;

/// Sparse real-amplitude wavefunction. Entries are kept sorted in canonical
/// determinant order, all determinants share one (n_alpha, n_beta) sector,
/// and no stored amplitude is below the drop threshold. Values are immutable
/// once built; every operation returns a new value.
class SparseWavefunction {
public:
    struct Entry {
        Determinant det;
        double amplitude;
    };

    SparseWavefunction() = default;

    static SparseWavefunction from_reference(const Determinant& reference);

    /// Sorts, merges duplicate determinants by summation, drops sub-threshold
    /// amplitudes, and enforces the common-sector invariant.
    static SparseWavefunction from_entries(std::vector<Entry> entries);

    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    /// 0.0 when the determinant is absent.
    double amplitude(const Determinant& det) const;

    double norm() const;

    /// Shannon entropy of the amplitude distribution, S = -sum |c|^2 ln |c|^2,
    /// over the state as stored (no implicit renormalization).
    double entropy() const;

private:
    friend SparseWavefunction truncate(const SparseWavefunction&, const struct TruncationPolicy&);
    friend class FactorWorkspace;

    std::vector<Entry> entries_;
};

/// Pruning knobs: when the determinant count exceeds n_max, only the n_cut
/// largest-magnitude entries survive.
struct TruncationPolicy {
    std::size_t n_cut;
    std::size_t n_max;

    TruncationPolicy(std::size_t n_cut, std::size_t n_max);

    /// Policy whose trigger never fires.
    static TruncationPolicy unlimited();
};

/// Keeps the n_cut largest |c_I| (ties broken toward the canonically smaller
/// determinant) and renormalizes the survivors to unit norm; identity when
/// the count is within n_max.
SparseWavefunction truncate(const SparseWavefunction& wf, const TruncationPolicy& policy);

/// CSV rows `determinant_alpha,determinant_beta,amplitude` sorted by
/// |amplitude| descending (ties by canonical determinant order).
void write_wavefunction_csv(const SparseWavefunction& wf, int n_orbitals, std::ostream& out);

}  // namespace swucc
