#include "swucc/optimizer.hpp"

#include "swucc/format.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace swucc {

void OptimizerSettings::validate() const {
    if (gradient_step <= 0 || energy_tolerance <= 0 || gradient_tolerance <= 0 ||
        max_iterations <= 0 || workers <= 0)
        throw std::invalid_argument("optimizer settings must all be positive");
}

std::string to_string(OptimizationStatus status) {
    switch (status) {
        case OptimizationStatus::converged_energy: return "converged_energy";
        case OptimizationStatus::converged_gradient: return "converged_gradient";
        case OptimizationStatus::max_iterations: return "max_iterations";
    }
    return "unknown";
}

EnergyReport ObjectiveContext::evaluate_report(std::span<const double> theta) const {
    if (theta.size() != skeleton.factors.size())
        throw std::invalid_argument("theta vector length does not match the ansatz");
    OrderedAnsatz work = skeleton;
    for (std::size_t k = 0; k < theta.size(); ++k) work.factors[k].theta = theta[k];
    const SparseWavefunction wf = apply_ansatz(reference, work, policy);
    return expectation_energy(wf, *store);
}

double ObjectiveContext::objective(std::span<const double> theta) const {
    return evaluate_report(theta).total_energy;
}

std::vector<double> ObjectiveContext::gradient(std::span<const double> theta, double step,
                                               int workers) const {
    const std::size_t p = theta.size();
    std::vector<double> grad(p, 0.0);

    // Each worker owns a contiguous component block and rolls a prefix state
    // forward through it: the state after factors [0, k) at unperturbed theta
    // is shared by the +h and -h evaluations of component k. The arithmetic
    // per component is identical to two full objective calls, so results are
    // bit-stable across worker counts.
    const auto worker = [&](std::size_t begin, std::size_t end) {
        OrderedAnsatz work = skeleton;
        for (std::size_t k = 0; k < p; ++k) work.factors[k].theta = theta[k];
        FactorWorkspace ws;
        SparseWavefunction prefix = SparseWavefunction::from_reference(reference);
        for (std::size_t k = 0; k < begin; ++k)
            prefix = truncate(ws.apply(prefix, work.factors[k]), policy);
        for (std::size_t k = begin; k < end; ++k) {
            double value[2];
            for (int side = 0; side < 2; ++side) {
                UccFactor perturbed = work.factors[k];
                perturbed.theta = theta[k] + (side == 0 ? step : -step);
                SparseWavefunction state = truncate(ws.apply(prefix, perturbed), policy);
                for (std::size_t m = k + 1; m < p; ++m)
                    state = truncate(ws.apply(state, work.factors[m]), policy);
                value[side] = expectation_energy(state, *store).total_energy;
            }
            grad[k] = (value[0] - value[1]) / (2.0 * step);
            prefix = truncate(ws.apply(prefix, work.factors[k]), policy);
        }
    };

    const int n_threads = std::max(1, std::min<int>(workers, static_cast<int>(p)));
    if (n_threads == 1) {
        worker(0, p);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t)
            pool.emplace_back(worker, p * t / n_threads, p * (t + 1) / n_threads);
        for (auto& t : pool) t.join();
    }
    return grad;
}

namespace {

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (const double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
    return s;
}

// two-loop recursion over the stored (s, y) pairs
std::vector<double> lbfgs_direction(const std::vector<double>& grad,
                                    const std::deque<std::vector<double>>& s_hist,
                                    const std::deque<std::vector<double>>& y_hist) {
    std::vector<double> q = grad;
    const std::size_t m = s_hist.size();
    std::vector<double> alpha(m), rho(m);
    for (std::size_t k = 0; k < m; ++k) rho[k] = 1.0 / dot(y_hist[k], s_hist[k]);
    for (std::size_t k = m; k-- > 0;) {
        alpha[k] = rho[k] * dot(s_hist[k], q);
        for (std::size_t x = 0; x < q.size(); ++x) q[x] -= alpha[k] * y_hist[k][x];
    }
    if (m > 0) {
        const double gamma = dot(s_hist[m - 1], y_hist[m - 1]) / dot(y_hist[m - 1], y_hist[m - 1]);
        for (double& x : q) x *= gamma;
    }
    for (std::size_t k = 0; k < m; ++k) {
        const double beta = rho[k] * dot(y_hist[k], q);
        for (std::size_t x = 0; x < q.size(); ++x) q[x] += (alpha[k] - beta) * s_hist[k][x];
    }
    for (double& x : q) x = -x;
    return q;
}

}  // namespace

MinimizeResult minimize(std::vector<double> theta, const ObjectiveContext& context,
                        const OptimizerSettings& settings) {
    settings.validate();
    if (theta.size() != context.parameter_count())
        throw std::invalid_argument("initial theta length does not match the ansatz");

    const auto t0 = std::chrono::steady_clock::now();
    const auto elapsed = [&t0] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };
    const auto check_finite = [](double e, int iteration) {
        if (!std::isfinite(e))
            throw std::runtime_error("non-finite energy at iterate " + std::to_string(iteration));
    };

    MinimizeResult result;
    EnergyReport report = context.evaluate_report(theta);
    check_finite(report.total_energy, 0);
    std::vector<double> grad = context.gradient(theta, settings.gradient_step, settings.workers);
    double gnorm = norm2(grad);
    result.trace.records.push_back({0, report.total_energy, gnorm, report.n_det, elapsed()});

    std::deque<std::vector<double>> s_hist, y_hist;
    constexpr std::size_t kMemory = 10;
    constexpr double kArmijo = 1e-4;

    OptimizationStatus status = OptimizationStatus::max_iterations;
    if (gnorm < settings.gradient_tolerance) status = OptimizationStatus::converged_gradient;

    int iteration = 0;
    while (status == OptimizationStatus::max_iterations &&
           iteration < settings.max_iterations) {
        ++iteration;
        std::vector<double> direction = lbfgs_direction(grad, s_hist, y_hist);
        double slope = dot(direction, grad);
        if (!(slope < 0.0)) {  // fall back to steepest descent
            direction = grad;
            for (double& x : direction) x = -x;
            slope = -gnorm * gnorm;
        }

        // Armijo backtracking
        double step = 1.0;
        if (s_hist.empty()) {
            const double dnorm = norm2(direction);
            if (dnorm > 1.0) step = 1.0 / dnorm;
        }
        std::vector<double> candidate(theta.size());
        EnergyReport cand_report{};
        bool accepted = false;
        for (int half = 0; half < 40; ++half) {
            for (std::size_t k = 0; k < theta.size(); ++k)
                candidate[k] = theta[k] + step * direction[k];
            cand_report = context.evaluate_report(candidate);
            check_finite(cand_report.total_energy, iteration);
            if (cand_report.total_energy <= report.total_energy + kArmijo * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // no decrease found along a descent direction: energy is converged
            // to line-search resolution
            status = OptimizationStatus::converged_energy;
            break;
        }

        std::vector<double> new_grad =
            context.gradient(candidate, settings.gradient_step, settings.workers);
        std::vector<double> s(theta.size()), y(theta.size());
        for (std::size_t k = 0; k < theta.size(); ++k) {
            s[k] = candidate[k] - theta[k];
            y[k] = new_grad[k] - grad[k];
        }
        const double sy = dot(s, y);
        if (sy > 1e-12 * norm2(s) * norm2(y)) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
            if (s_hist.size() > kMemory) {
                s_hist.pop_front();
                y_hist.pop_front();
            }
        }

        const double previous_energy = report.total_energy;
        theta = candidate;
        report = cand_report;
        grad = std::move(new_grad);
        gnorm = norm2(grad);
        result.trace.records.push_back(
            {iteration, report.total_energy, gnorm, report.n_det, elapsed()});

        if (gnorm < settings.gradient_tolerance)
            status = OptimizationStatus::converged_gradient;
        else if (std::abs(previous_energy - report.total_energy) < settings.energy_tolerance)
            status = OptimizationStatus::converged_energy;
    }

    result.trace.status = status;
    result.theta = std::move(theta);
    result.energy = report.total_energy;
    return result;
}

void write_trace_csv(const OptimizationTrace& trace, std::ostream& out) {
    out << "iteration,energy,gradient_norm,n_det,elapsed_seconds\n";
    char buf[32];
    for (const IterationRecord& r : trace.records) {
        out << r.iteration << ',' << format_double(r.energy) << ','
            << format_double(r.gradient_norm) << ',' << r.n_det << ',';
        std::snprintf(buf, sizeof(buf), "%.6f\n", r.elapsed_seconds);
        out << buf;
    }
}

}  // namespace swucc
