#include "swucc/diagnostics.hpp"

#include "swucc/format.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace swucc {

EntropyTrace entropy_trace(const Determinant& reference, const OrderedAnsatz& ansatz,
                           const TruncationPolicy& policy) {
    EntropyTrace trace;
    trace.points.reserve(ansatz.factors.size());
    SparseWavefunction wf = SparseWavefunction::from_reference(reference);
    FactorWorkspace ws;
    std::size_t index = 0;
    for (const UccFactor& factor : ansatz.factors) {
        wf = ws.apply(wf, factor);
        wf = truncate(wf, policy);
        trace.points.push_back({++index, wf.entropy(), wf.size()});
    }
    return trace;
}

TruncationPolicy NMaxRule::policy_for(std::size_t n_cut) const {
    switch (kind) {
        case Kind::unlimited: return TruncationPolicy::unlimited();
        case Kind::fixed: return TruncationPolicy(n_cut, std::max(n_cut, value));
        case Kind::equal_ncut: return TruncationPolicy(n_cut, n_cut);
    }
    throw std::logic_error("unreachable");
}

EnergySweep replay_vs_ncut(const Determinant& reference, const OrderedAnsatz& ansatz,
                           const std::vector<std::size_t>& ncut_values, const NMaxRule& rule,
                           const IntegralStore& store) {
    EnergySweep sweep;
    sweep.axis = "n_cut";
    for (const std::size_t n_cut : ncut_values) {
        const SparseWavefunction wf = apply_ansatz(reference, ansatz, rule.policy_for(n_cut));
        const EnergyReport report = expectation_energy(wf, store);
        sweep.points.push_back({static_cast<double>(n_cut), report.correlation_energy});
    }
    return sweep;
}

EnergySweep md_convergence_sweep(const IntegralStore& store,
                                 const std::vector<std::size_t>& md_values,
                                 const TruncationPolicy& policy,
                                 const OptimizerSettings& settings) {
    const Determinant reference =
        hartree_fock_reference(store.n_orbitals(), store.n_alpha(), store.n_beta());
    const auto pool = build_pool(store.n_orbitals(), reference);
    const auto eps = orbital_energies(store, reference);
    const auto mp2 = mp2_amplitudes(store, eps, reference);

    // ordered once; each sweep point takes a prefix of the double block, so
    // the axis value is the literal double count (0 = singles only, unlike
    // AnsatzConfig where 0 keeps everything)
    const OrderedAnsatz full = order_and_truncate(pool, mp2.values, AnsatzConfig{});
    std::size_t n_doubles = 0;
    while (n_doubles < full.factors.size() && !full.factors[n_doubles].op.is_single())
        ++n_doubles;

    EnergySweep sweep;
    sweep.axis = "m_d";
    for (const std::size_t md : md_values) {
        OrderedAnsatz skeleton;
        const std::size_t keep = std::min(md, n_doubles);
        skeleton.factors.assign(full.factors.begin(), full.factors.begin() + keep);
        skeleton.factors.insert(skeleton.factors.end(), full.factors.begin() + n_doubles,
                                full.factors.end());
        std::vector<double> theta;
        theta.reserve(skeleton.factors.size());
        for (const UccFactor& f : skeleton.factors) theta.push_back(f.theta);
        const ObjectiveContext context{reference, skeleton, policy, &store};
        const MinimizeResult result = minimize(theta, context, settings);
        const EnergyReport report = context.evaluate_report(result.theta);
        sweep.points.push_back({static_cast<double>(md), report.correlation_energy});
    }
    return sweep;
}

void write_energy_sweep_csv(const EnergySweep& sweep, std::ostream& out) {
    out << "x,correlation_energy\n";
    for (const SweepPoint& p : sweep.points)
        out << format_double(p.x) << ',' << format_double(p.correlation_energy) << '\n';
}

void write_entropy_trace_csv(const EntropyTrace& trace, std::ostream& out) {
    out << "factor_index,entropy,n_det\n";
    for (const EntropyPoint& p : trace.points)
        out << p.factor_index << ',' << format_double(p.entropy) << ',' << p.n_det << '\n';
}

}  // namespace swucc
