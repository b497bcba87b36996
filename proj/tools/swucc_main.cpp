#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "swucc/ansatz.hpp"
#include "swucc/format.hpp"
#include "swucc/diagnostics.hpp"
#include "swucc/hamiltonian.hpp"
#include "swucc/integrals.hpp"
#include "swucc/optimizer.hpp"
#include "swucc/wavefunction.hpp"

namespace {

using swucc::AnsatzConfig;
using swucc::Determinant;
using swucc::EnergyReport;
using swucc::ExcitationOperator;
using swucc::IntegralStore;
using swucc::NMaxRule;
using swucc::OptimizationStatus;
using swucc::OptimizerSettings;
using swucc::OrderedAnsatz;
using swucc::TruncationPolicy;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

struct CommonOptions {
    std::string fcidump;
    std::size_t n_cut = 0;  // 0 disables truncation
    std::size_t n_max = 0;
    std::size_t m_d = 0;  // 0 keeps all doubles
    int max_orbitals = 0;
    int max_iter = 200;
    double grad_step = 1e-4;
    double tol_energy = 1e-8;
    double tol_grad = 1e-6;
    std::string params_in;
    std::string params_out;
    std::string report;
    std::string trace;
    int workers = 0;  // 0 = hardware concurrency
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt, bool with_optimizer) {
    cmd->add_option("--fcidump", opt.fcidump, "FCIDUMP input file")->required();
    cmd->add_option("--n-cut", opt.n_cut, "survivors kept when pruning fires (0 = no pruning)");
    cmd->add_option("--n-max", opt.n_max, "determinant count that triggers pruning (0 = never)");
    cmd->add_option("--m-d", opt.m_d, "double factors retained (0 = all)");
    cmd->add_option("--max-orbitals", opt.max_orbitals,
                    "keep only the lowest spatial orbitals (0 = all)");
    cmd->add_option("--workers", opt.workers, "worker threads (0 = hardware concurrency)");
    if (with_optimizer) {
        cmd->add_option("--max-iter", opt.max_iter, "optimizer iteration cap");
        cmd->add_option("--grad-step", opt.grad_step, "central-difference step");
        cmd->add_option("--tol-energy", opt.tol_energy, "energy convergence tolerance (Ha)");
        cmd->add_option("--tol-grad", opt.tol_grad, "gradient-norm convergence tolerance");
    }
}

TruncationPolicy policy_from(const CommonOptions& opt) {
    if (opt.n_cut == 0 && opt.n_max == 0) return TruncationPolicy::unlimited();
    const std::size_t n_max = opt.n_max == 0 ? static_cast<std::size_t>(-1) : opt.n_max;
    const std::size_t n_cut = opt.n_cut == 0 ? n_max : opt.n_cut;
    return TruncationPolicy(n_cut, n_max);
}

OptimizerSettings settings_from(const CommonOptions& opt) {
    OptimizerSettings s;
    s.gradient_step = opt.grad_step;
    s.energy_tolerance = opt.tol_energy;
    s.gradient_tolerance = opt.tol_grad;
    s.max_iterations = opt.max_iter;
    s.workers = opt.workers > 0
                    ? opt.workers
                    : std::max(1u, std::thread::hardware_concurrency());
    return s;
}

IntegralStore load_store(const CommonOptions& opt) {
    IntegralStore store = swucc::parse_fcidump_file(opt.fcidump);
    if (opt.max_orbitals > 0 && opt.max_orbitals < store.n_orbitals())
        store = swucc::window_orbitals(store, opt.max_orbitals);
    return store;
}

Determinant reference_of(const IntegralStore& store) {
    return swucc::hartree_fock_reference(store.n_orbitals(), store.n_alpha(), store.n_beta());
}

void warn_if_noncanonical(const IntegralStore& store, const Determinant& reference) {
    const double off = swucc::max_offdiagonal_fock(store, reference);
    if (off > 1e-6)
        std::cerr << "warning: max off-diagonal Fock element " << off
                  << " exceeds 1e-6; orbitals are not canonical and MP2 amplitudes are "
                     "approximate\n";
}

/// Writes through a temp file and renames, so failed runs leave no partial file.
void write_file_atomic(const std::string& path,
                       const std::function<void(std::ostream&)>& writer) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file: " + tmp);
        writer(out);
        out.flush();
        if (!out) throw std::runtime_error("failed writing output file: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

void write_or_print(const std::string& path, const std::function<void(std::ostream&)>& writer) {
    if (path.empty())
        writer(std::cout);
    else
        write_file_atomic(path, writer);
}

std::vector<double> initial_theta(const OrderedAnsatz& ansatz) {
    std::vector<double> theta;
    theta.reserve(ansatz.factors.size());
    for (const auto& f : ansatz.factors) theta.push_back(f.theta);
    return theta;
}

/// Enforces operator-set equality between a parameter file and the ansatz the
/// configuration implies; names the first offender.
void check_operator_sets(const OrderedAnsatz& from_file, const OrderedAnsatz& expected) {
    std::set<ExcitationOperator> file_ops, expected_ops;
    for (const auto& f : from_file.factors) file_ops.insert(f.op);
    for (const auto& f : expected.factors) expected_ops.insert(f.op);
    for (const auto& op : file_ops)
        if (!expected_ops.count(op))
            throw std::runtime_error("parameter file operator " + swucc::format_operator(op) +
                                     " is not part of the configured ansatz");
    for (const auto& op : expected_ops)
        if (!file_ops.count(op))
            throw std::runtime_error("configured ansatz operator " + swucc::format_operator(op) +
                                     " is missing from the parameter file");
    if (from_file.factors.size() != expected.factors.size())
        throw std::runtime_error("parameter file repeats an operator");
}

OrderedAnsatz read_params_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open parameter file: " + path);
    return swucc::read_parameters_json(in);
}

/// MP2-seeded ordered ansatz from a store; the standard pipeline front end.
OrderedAnsatz build_skeleton(const IntegralStore& store, const Determinant& reference,
                             std::size_t m_d) {
    const auto pool = swucc::build_pool(store.n_orbitals(), reference);
    const auto eps = swucc::orbital_energies(store, reference);
    const auto mp2 = swucc::mp2_amplitudes(store, eps, reference);
    AnsatzConfig config;
    config.m_d = m_d;
    return swucc::order_and_truncate(pool, mp2.values, config);
}

nlohmann::ordered_json settings_json(const CommonOptions& opt, const OptimizerSettings& s) {
    nlohmann::ordered_json j;
    j["fcidump"] = opt.fcidump;
    j["n_cut"] = opt.n_cut;
    j["n_max"] = opt.n_max;
    j["m_d"] = opt.m_d;
    j["max_orbitals"] = opt.max_orbitals;
    j["gradient_step"] = s.gradient_step;
    j["energy_tolerance"] = s.energy_tolerance;
    j["gradient_tolerance"] = s.gradient_tolerance;
    j["max_iterations"] = s.max_iterations;
    return j;
}

int cmd_optimize(const CommonOptions& opt) {
    const IntegralStore store = load_store(opt);
    const Determinant reference = reference_of(store);
    warn_if_noncanonical(store, reference);

    OrderedAnsatz skeleton = build_skeleton(store, reference, opt.m_d);
    if (!opt.params_in.empty()) {
        OrderedAnsatz supplied = read_params_file(opt.params_in);
        check_operator_sets(supplied, skeleton);
        skeleton = std::move(supplied);  // warm start keeps the file's order and theta
    }

    const TruncationPolicy policy = policy_from(opt);
    const OptimizerSettings settings = settings_from(opt);
    const swucc::ObjectiveContext context{reference, skeleton, policy, &store};
    swucc::MinimizeResult result = minimize(initial_theta(skeleton), context, settings);

    OrderedAnsatz optimized = skeleton;
    for (std::size_t k = 0; k < result.theta.size(); ++k)
        optimized.factors[k].theta = result.theta[k];
    const EnergyReport report = context.evaluate_report(result.theta);

    if (!opt.params_out.empty())
        write_file_atomic(opt.params_out,
                          [&](std::ostream& os) { swucc::write_parameters_json(optimized, os); });
    if (!opt.trace.empty())
        write_file_atomic(opt.trace,
                          [&](std::ostream& os) { swucc::write_trace_csv(result.trace, os); });
    write_or_print(opt.report,
                   [&](std::ostream& os) { swucc::write_energy_report_json(report, os); });

    std::cerr << "optimize: " << to_string(result.trace.status) << " after "
              << result.trace.records.back().iteration << " iterations, E = " << std::scientific
              << result.energy << "\n";
    return result.trace.status == OptimizationStatus::max_iterations ? kExitNotConverged
                                                                     : kExitOk;
}

int cmd_replay(const CommonOptions& opt, const std::vector<std::size_t>& ncut_list,
               const std::string& rule_name) {
    if (ncut_list.empty()) throw std::runtime_error("--ncut-list must not be empty");
    const IntegralStore store = load_store(opt);
    const Determinant reference = reference_of(store);

    const OrderedAnsatz supplied = read_params_file(opt.params_in);
    check_operator_sets(supplied, build_skeleton(store, reference, opt.m_d));

    NMaxRule rule = NMaxRule::unlimited();
    if (rule_name == "fixed") {
        if (opt.n_max == 0) throw std::runtime_error("--n-max-rule fixed requires --n-max");
        rule = NMaxRule::fixed(opt.n_max);
    } else if (rule_name == "ncut") {
        rule = NMaxRule::equal_ncut();
    } else if (rule_name != "unlimited") {
        throw std::runtime_error("unknown --n-max-rule: " + rule_name);
    }

    const swucc::EnergySweep sweep =
        swucc::replay_vs_ncut(reference, supplied, ncut_list, rule, store);

    write_or_print(opt.trace,
                   [&](std::ostream& os) { swucc::write_energy_sweep_csv(sweep, os); });
    if (!opt.report.empty()) {
        nlohmann::ordered_json manifest;
        manifest["command"] = "replay";
        manifest["settings"] = settings_json(opt, settings_from(opt));
        manifest["n_max_rule"] = rule_name;
        manifest["params_in"] = opt.params_in;
        auto& pts = manifest["points"] = nlohmann::ordered_json::array();
        for (const auto& p : sweep.points)
            pts.push_back({{"n_cut", static_cast<std::size_t>(p.x)},
                           {"correlation_energy", p.correlation_energy}});
        write_file_atomic(opt.report,
                          [&](std::ostream& os) { os << manifest.dump(2) << "\n"; });
    }
    return kExitOk;
}

int cmd_entropy_trace(const CommonOptions& opt) {
    const IntegralStore store = load_store(opt);
    const Determinant reference = reference_of(store);
    const OrderedAnsatz supplied = read_params_file(opt.params_in);
    check_operator_sets(supplied, build_skeleton(store, reference, opt.m_d));

    const swucc::EntropyTrace trace =
        swucc::entropy_trace(reference, supplied, policy_from(opt));
    write_or_print(opt.trace,
                   [&](std::ostream& os) { swucc::write_entropy_trace_csv(trace, os); });
    return kExitOk;
}

int cmd_fci(const CommonOptions& opt) {
    const IntegralStore store = load_store(opt);
    const std::size_t dim =
        swucc::fci_dimension(store.n_orbitals(), store.n_alpha(), store.n_beta());
    if (dim > swucc::kFciDimensionCap)
        throw std::runtime_error("FCI sector dimension " + std::to_string(dim) +
                                 " exceeds the cap of " +
                                 std::to_string(swucc::kFciDimensionCap));
    const double energy = swucc::fci_ground_energy(store, store.n_alpha(), store.n_beta());
    write_or_print(opt.report, [&](std::ostream& os) {
        os << "{\n  \"fci_energy\": " << swucc::format_double(energy)
           << ",\n  \"dimension\": " << dim << "\n}\n";
    });
    return kExitOk;
}

int cmd_mp2(const CommonOptions& opt) {
    const IntegralStore store = load_store(opt);
    const Determinant reference = reference_of(store);
    warn_if_noncanonical(store, reference);

    const auto eps = swucc::orbital_energies(store, reference);
    const auto mp2 = swucc::mp2_amplitudes(store, eps, reference);
    const double e_hf = swucc::hartree_fock_energy(store);

    if (!opt.params_out.empty()) {
        const auto pool = swucc::build_pool(store.n_orbitals(), reference);
        AnsatzConfig config;
        config.m_d = opt.m_d;
        const OrderedAnsatz ansatz = swucc::order_and_truncate(pool, mp2.values, config);
        write_file_atomic(opt.params_out,
                          [&](std::ostream& os) { swucc::write_parameters_json(ansatz, os); });
    }
    write_or_print(opt.report, [&](std::ostream& os) {
        os << "{\n  \"e_hf_total\": " << swucc::format_double(e_hf)
           << ",\n  \"e_mp2_corr\": " << swucc::format_double(mp2.correlation_energy)
           << ",\n  \"e_mp2_total\": " << swucc::format_double(e_hf + mp2.correlation_energy)
           << "\n}\n";
    });
    return kExitOk;
}

int cmd_sweep_md(const CommonOptions& opt, const std::vector<std::size_t>& md_list) {
    if (md_list.empty()) throw std::runtime_error("--md-list must not be empty");
    for (std::size_t k = 1; k < md_list.size(); ++k)
        if (md_list[k] <= md_list[k - 1])
            throw std::runtime_error("--md-list must be strictly increasing");
    const IntegralStore store = load_store(opt);
    warn_if_noncanonical(store, reference_of(store));
    const OptimizerSettings settings = settings_from(opt);
    const swucc::EnergySweep sweep =
        swucc::md_convergence_sweep(store, md_list, policy_from(opt), settings);

    write_or_print(opt.trace,
                   [&](std::ostream& os) { swucc::write_energy_sweep_csv(sweep, os); });
    if (!opt.report.empty()) {
        nlohmann::ordered_json manifest;
        manifest["command"] = "sweep-md";
        manifest["settings"] = settings_json(opt, settings);
        auto& pts = manifest["points"] = nlohmann::ordered_json::array();
        for (const auto& p : sweep.points)
            pts.push_back({{"m_d", static_cast<std::size_t>(p.x)},
                           {"correlation_energy", p.correlation_energy}});
        write_file_atomic(opt.report,
                          [&](std::ostream& os) { os << manifest.dump(2) << "\n"; });
    }
    return kExitOk;
}

int cmd_info(const CommonOptions& opt) {
    const IntegralStore store = load_store(opt);
    const Determinant reference = reference_of(store);
    const auto pool = swucc::build_pool(store.n_orbitals(), reference);
    std::size_t n_singles = 0;
    for (const auto& op : pool) n_singles += op.is_single() ? 1 : 0;

    nlohmann::ordered_json j;
    j["n_orbitals"] = store.n_orbitals();
    j["n_electrons"] = store.n_electrons();
    j["ms2"] = store.ms2();
    j["n_alpha"] = store.n_alpha();
    j["n_beta"] = store.n_beta();
    j["core_energy"] = store.core_energy();
    j["hf_energy"] = swucc::hartree_fock_energy(store);
    j["reference"] = swucc::format_determinant(reference, store.n_orbitals());
    j["pool_singles"] = n_singles;
    j["pool_doubles"] = pool.size() - n_singles;
    j["pool_total"] = pool.size();
    j["fci_dimension"] =
        swucc::fci_dimension(store.n_orbitals(), store.n_alpha(), store.n_beta());
    j["max_offdiagonal_fock"] = swucc::max_offdiagonal_fock(store, reference);
    write_or_print(opt.report, [&](std::ostream& os) { os << j.dump(2) << "\n"; });
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse-wavefunction UCCSD circuit solver"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::vector<std::size_t> ncut_list, md_list;
    std::string rule_name = "unlimited";

    auto* optimize = app.add_subcommand("optimize", "variational UCCSD optimization");
    add_common_flags(optimize, opt, true);
    optimize->add_option("--params-in", opt.params_in, "warm-start parameter JSON");
    optimize->add_option("--params-out", opt.params_out, "optimized parameter JSON");
    optimize->add_option("--report", opt.report, "energy report JSON (stdout when omitted)");
    optimize->add_option("--trace", opt.trace, "iteration trace CSV");

    auto* replay = app.add_subcommand("replay", "fixed-parameter energy vs n_cut");
    add_common_flags(replay, opt, false);
    replay->add_option("--params-in", opt.params_in, "parameter JSON")->required();
    replay->add_option("--ncut-list", ncut_list, "n_cut values to replay")
        ->required()
        ->delimiter(',');
    replay->add_option("--n-max-rule", rule_name, "unlimited | fixed | ncut");
    replay->add_option("--trace", opt.trace, "sweep CSV (stdout when omitted)");
    replay->add_option("--report", opt.report, "sweep manifest JSON");

    auto* etrace = app.add_subcommand("entropy-trace", "entropy after each factor");
    add_common_flags(etrace, opt, false);
    etrace->add_option("--params-in", opt.params_in, "parameter JSON")->required();
    etrace->add_option("--trace", opt.trace, "trace CSV (stdout when omitted)");

    auto* fci = app.add_subcommand("fci", "full configuration interaction oracle");
    add_common_flags(fci, opt, false);
    fci->add_option("--report", opt.report, "energy JSON (stdout when omitted)");

    auto* mp2 = app.add_subcommand("mp2", "MP2 energy and initial amplitudes");
    add_common_flags(mp2, opt, false);
    mp2->add_option("--params-out", opt.params_out, "MP2-seeded parameter JSON");
    mp2->add_option("--report", opt.report, "energy JSON (stdout when omitted)");

    auto* sweep = app.add_subcommand("sweep-md", "optimize across M_D values");
    add_common_flags(sweep, opt, true);
    sweep->add_option("--md-list", md_list, "M_D values, strictly increasing")
        ->required()
        ->delimiter(',');
    sweep->add_option("--trace", opt.trace, "sweep CSV (stdout when omitted)");
    sweep->add_option("--report", opt.report, "sweep manifest JSON");

    auto* info = app.add_subcommand("info", "summarize an FCIDUMP");
    add_common_flags(info, opt, false);
    info->add_option("--report", opt.report, "summary JSON (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (optimize->parsed()) return cmd_optimize(opt);
        if (replay->parsed()) return cmd_replay(opt, ncut_list, rule_name);
        if (etrace->parsed()) return cmd_entropy_trace(opt);
        if (fci->parsed()) return cmd_fci(opt);
        if (mp2->parsed()) return cmd_mp2(opt);
        if (sweep->parsed()) return cmd_sweep_md(opt, md_list);
        if (info->parsed()) return cmd_info(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
