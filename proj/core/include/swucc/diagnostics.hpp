#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "swucc/ansatz.hpp"
#include "swucc/optimizer.hpp"

namespace swucc {

/// One point of a correlation-energy sweep; x is the swept knob value.
struct SweepPoint {
    double x;
    double correlation_energy;
};

struct EnergySweep {
    std::string axis;
    std::vector<SweepPoint> points;
};

struct EntropyPoint {
    std::size_t factor_index;  // 1-based position in application order
    double entropy;
    std::size_t n_det;
};

struct EntropyTrace {
    std::vector<EntropyPoint> points;
};

/// Entropy and determinant count after each factor application (truncation
/// included), one point per factor.
EntropyTrace entropy_trace(const Determinant& reference, const OrderedAnsatz& ansatz,
                           const TruncationPolicy& policy);

/// Replay-time n_max schedule: a fixed trigger, the n_cut value itself, or no
/// pruning at all.
struct NMaxRule {
    enum class Kind { unlimited, fixed, equal_ncut };
    Kind kind = Kind::unlimited;
    std::size_t value = 0;

    static NMaxRule unlimited() { return {Kind::unlimited, 0}; }
    static NMaxRule fixed(std::size_t n_max) { return {Kind::fixed, n_max}; }
    static NMaxRule equal_ncut() { return {Kind::equal_ncut, 0}; }

    TruncationPolicy policy_for(std::size_t n_cut) const;
};

/// Applies the fixed-theta ansatz under each n_cut and records the Rayleigh
/// quotient; no optimization happens.
EnergySweep replay_vs_ncut(const Determinant& reference, const OrderedAnsatz& ansatz,
                           const std::vector<std::size_t>& ncut_values, const NMaxRule& rule,
                           const IntegralStore& store);

/// One full optimization (MP2 initialization) per M_D value.
EnergySweep md_convergence_sweep(const IntegralStore& store,
                                 const std::vector<std::size_t>& md_values,
                                 const TruncationPolicy& policy,
                                 const OptimizerSettings& settings);

/// CSV `x,correlation_energy`.
void write_energy_sweep_csv(const EnergySweep& sweep, std::ostream& out);
/// CSV `factor_index,entropy,n_det`.
void write_entropy_trace_csv(const EntropyTrace& trace, std::ostream& out);

}  // namespace swucc
