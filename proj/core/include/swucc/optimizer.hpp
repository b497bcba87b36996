#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "swucc/ansatz.hpp"
#include "swucc/hamiltonian.hpp"

namespace swucc {

struct OptimizerSettings {
    double gradient_step = 1e-4;      // central-difference step
    double energy_tolerance = 1e-8;   // hartree, change between accepted iterates
    double gradient_tolerance = 1e-6; // hartree per radian, 2-norm
    int max_iterations = 200;
    int workers = 1;  // gradient components evaluated concurrently

    void validate() const;
};

enum class OptimizationStatus { converged_energy, converged_gradient, max_iterations };

std::string to_string(OptimizationStatus status);

struct IterationRecord {
    int iteration;
    double energy;
    double gradient_norm;
    std::size_t n_det;
    double elapsed_seconds;
};

struct OptimizationTrace {
    std::vector<IterationRecord> records;
    OptimizationStatus status = OptimizationStatus::max_iterations;
};

/// Everything the energy functional needs: theta vectors are written into the
/// skeleton's frozen factor order, the state is rebuilt from the reference
/// under the truncation policy, and the Rayleigh quotient is evaluated.
struct ObjectiveContext {
    Determinant reference;
    OrderedAnsatz skeleton;
    TruncationPolicy policy;
    const IntegralStore* store;

    std::size_t parameter_count() const { return skeleton.factors.size(); }

    EnergyReport evaluate_report(std::span<const double> theta) const;
    double objective(std::span<const double> theta) const;

    /// Central differences [E(x+h e_k) - E(x-h e_k)] / 2h. Components are
    /// independent pure evaluations distributed across workers; the result is
    /// bit-identical for any worker count.
    std::vector<double> gradient(std::span<const double> theta, double step, int workers) const;
};

struct MinimizeResult {
    std::vector<double> theta;
    double energy;
    OptimizationTrace trace;
};

/// L-BFGS with an Armijo backtracking line search over the finite-difference
/// gradient. Deterministic; accepted energies decrease monotonically. Throws
/// on a non-finite energy, naming the iterate.
MinimizeResult minimize(std::vector<double> initial_theta, const ObjectiveContext& context,
                        const OptimizerSettings& settings);

/// CSV `iteration,energy,gradient_norm,n_det,elapsed_seconds`.
void write_trace_csv(const OptimizationTrace& trace, std::ostream& out);

}  // namespace swucc
