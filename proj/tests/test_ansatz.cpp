#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "swucc/ansatz.hpp"
#include "swucc/hamiltonian.hpp"

using namespace swucc;
using namespace swucc::testing;

TEST_CASE("pool cardinalities") {
    // published counts: 315 factors for NH3/STO-3G, 1,424 for CH2O/STO-3G
    const auto nh3 = build_pool(8, hartree_fock_reference(8, 5, 5));
    CHECK(nh3.size() == 315);
    const auto ch2o = build_pool(12, hartree_fock_reference(12, 8, 8));
    CHECK(ch2o.size() == 1424);

    const auto h2 = build_pool(2, hartree_fock_reference(2, 1, 1));
    CHECK(h2.size() == 3);
    std::size_t singles = 0;
    for (const auto& op : h2) singles += op.is_single() ? 1 : 0;
    CHECK(singles == 2);
    // the only H2 double is the opposite-spin pair; no same-spin double exists
    for (const auto& op : h2)
        if (!op.is_single()) {
            CHECK(op.i == 0);
            CHECK(op.j == 1);
            CHECK(op.a == 2);
            CHECK(op.b == 3);
        }
}

TEST_CASE("mp2 amplitudes") {
    SUBCASE("H2 energy matches the manifest") {
        const IntegralStore store = load_fixture("h2_sto3g");
        const Determinant ref = hartree_fock_reference(2, 1, 1);
        const auto mp2 = mp2_amplitudes(store, orbital_energies(store, ref), ref);
        const auto manifest = load_manifest()["h2_sto3g"];
        CHECK(std::abs(mp2.correlation_energy - manifest["e_mp2_corr"].get<double>()) < 1e-8);
    }
    SUBCASE("zero two-electron integrals give zero amplitudes") {
        IntegralStore store(3, 4, 0);
        for (int p = 0; p < 3; ++p) store.set_h1(p, p, -2.0 + 0.7 * p);
        const Determinant ref = hartree_fock_reference(3, 2, 2);
        const auto mp2 = mp2_amplitudes(store, orbital_energies(store, ref), ref);
        CHECK(mp2.correlation_energy == 0.0);
        for (const double v : mp2.values) CHECK(v == 0.0);
    }
    SUBCASE("degenerate denominator is an error naming the quadruple") {
        IntegralStore store(2, 2, 0);  // all orbital energies equal
        store.set_eri(0, 0, 1, 1, 0.1);
        store.set_eri(0, 1, 0, 1, 0.05);
        const Determinant ref = hartree_fock_reference(2, 1, 1);
        try {
            mp2_amplitudes(store, orbital_energies(store, ref), ref);
            FAIL("expected degenerate-denominator error");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find("double(") != std::string::npos);
        }
    }
}

TEST_CASE("order_and_truncate") {
    const Determinant ref = hartree_fock_reference(4, 2, 2);
    const auto pool = build_pool(4, ref);
    std::vector<double> amps(pool.size(), 0.0);
    std::vector<std::size_t> double_idx;
    for (std::size_t k = 0; k < pool.size(); ++k)
        if (!pool[k].is_single()) double_idx.push_back(k);
    REQUIRE(double_idx.size() >= 3);
    amps[double_idx[0]] = -0.2;
    amps[double_idx[1]] = 0.1;
    amps[double_idx[2]] = 0.15;

    SUBCASE("sorted by magnitude, truncated to m_d, singles appended at zero") {
        AnsatzConfig config;
        config.m_d = 2;
        const OrderedAnsatz ansatz = order_and_truncate(pool, amps, config);
        std::size_t n_singles = 0;
        for (const auto& f : ansatz.factors) n_singles += f.op.is_single() ? 1 : 0;
        CHECK(ansatz.factors.size() == 2 + n_singles);
        CHECK(ansatz.factors[0].pool_index == static_cast<int>(double_idx[0]));
        CHECK(ansatz.factors[0].theta == -0.2);
        CHECK(ansatz.factors[1].pool_index == static_cast<int>(double_idx[2]));
        CHECK(ansatz.factors[1].theta == 0.15);
        for (std::size_t k = 2; k < ansatz.factors.size(); ++k) {
            CHECK(ansatz.factors[k].op.is_single());
            CHECK(ansatz.factors[k].theta == 0.0);
        }
    }
    SUBCASE("m_d = 0 keeps every double ahead of the singles") {
        const OrderedAnsatz ansatz = order_and_truncate(pool, amps, AnsatzConfig{});
        CHECK(ansatz.factors.size() == pool.size());
        bool seen_single = false;
        for (const auto& f : ansatz.factors) {
            if (f.op.is_single()) seen_single = true;
            if (seen_single) CHECK(f.op.is_single());
        }
    }
    SUBCASE("equal magnitudes break ties by pool index") {
        std::vector<double> tied(pool.size(), 0.0);
        tied[double_idx[1]] = 0.2;
        tied[double_idx[2]] = -0.2;
        AnsatzConfig config;
        config.m_d = 1;
        const OrderedAnsatz ansatz = order_and_truncate(pool, tied, config);
        CHECK(ansatz.factors[0].pool_index == static_cast<int>(double_idx[1]));
    }
}

TEST_CASE("apply_factor closed form") {
    const Determinant hf = hartree_fock_reference(2, 1, 1);
    const SparseWavefunction wf = SparseWavefunction::from_reference(hf);
    const auto op = ExcitationOperator::make_double(0, 1, 2, 3);
    const auto target = apply_excitation(hf, op);
    REQUIRE(target.has_value());

    SUBCASE("zero angle is the exact identity") {
        const SparseWavefunction out = apply_factor(wf, {op, 0.0, 0});
        REQUIRE(out.size() == 1);
        CHECK(out.amplitude(hf) == 1.0);
    }
    SUBCASE("quarter rotation moves all weight to the partner") {
        const SparseWavefunction out = apply_factor(wf, {op, std::acos(-1.0) / 2, 0});
        CHECK(out.size() == 1);  // cos contribution dropped at threshold
        CHECK(out.amplitude(target->det) ==
              doctest::Approx(static_cast<double>(target->phase)).epsilon(1e-12));
        CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("inverse rotation restores the reference") {
        const SparseWavefunction mid = apply_factor(wf, {op, 0.3, 0});
        CHECK(mid.amplitude(hf) == doctest::Approx(std::cos(0.3)).epsilon(1e-14));
        const SparseWavefunction back = apply_factor(mid, {op, -0.3, 0});
        CHECK(back.size() == 1);
        CHECK(back.amplitude(hf) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

namespace {

SparseWavefunction random_state(const std::vector<Determinant>& dets, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<SparseWavefunction::Entry> entries;
    for (const auto& d : dets)
        if (dist(rng) > -0.3) entries.push_back({d, dist(rng)});
    if (entries.empty()) entries.push_back({dets.front(), 1.0});
    SparseWavefunction wf = SparseWavefunction::from_entries(entries);
    const double n = wf.norm();
    std::vector<SparseWavefunction::Entry> scaled = wf.entries();
    for (auto& e : scaled) e.amplitude /= n;
    return SparseWavefunction::from_entries(scaled);
}

}  // namespace

TEST_CASE("factor unitarity and additivity on random states") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> angle(-3.14159265, 3.14159265);
    const auto dets = enumerate_determinants(4, 2, 2);
    const auto ops = all_canonical_operators(4);
    std::uniform_int_distribution<std::size_t> pick(0, ops.size() - 1);
    for (int trial = 0; trial < 300; ++trial) {
        const SparseWavefunction wf = random_state(dets, rng);
        const UccFactor f1{ops[pick(rng)], angle(rng), 0};
        const SparseWavefunction once = apply_factor(wf, f1);
        CHECK(std::abs(once.norm() - wf.norm()) < 1e-12);

        const double theta2 = angle(rng);
        const SparseWavefunction split =
            apply_factor(once, {f1.op, theta2, 0});
        const SparseWavefunction joint = apply_factor(wf, {f1.op, f1.theta + theta2, 0});
        REQUIRE(split.size() == joint.size());
        for (const auto& e : joint.entries())
            CHECK(std::abs(split.amplitude(e.det) - e.amplitude) < 1e-12);
        for (const auto& e : split.entries()) {
            CHECK(e.det.n_alpha() == 2);
            CHECK(e.det.n_beta() == 2);
        }
    }
}

TEST_CASE("apply_ansatz") {
    SUBCASE("empty ansatz returns the reference") {
        const Determinant hf = hartree_fock_reference(3, 2, 1);
        const SparseWavefunction wf =
            apply_ansatz(hf, OrderedAnsatz{}, TruncationPolicy::unlimited());
        CHECK(wf.size() == 1);
        CHECK(wf.amplitude(hf) == 1.0);
    }
    SUBCASE("H2 at the scan-optimal angle reaches FCI") {
        const IntegralStore store = load_fixture("h2_sto3g");
        const Determinant ref = hartree_fock_reference(2, 1, 1);
        const auto pool = build_pool(2, ref);
        const OrderedAnsatz skeleton =
            order_and_truncate(pool, std::vector<double>(pool.size(), 0.0), AnsatzConfig{});

        // 1-D golden-section scan over the double's angle; singles stay zero
        const auto energy_at = [&](double theta) {
            OrderedAnsatz work = skeleton;
            work.factors[0].theta = theta;
            return expectation_energy(
                       apply_ansatz(ref, work, TruncationPolicy::unlimited()), store)
                .total_energy;
        };
        double lo = -1.0, hi = 1.0;
        const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
        while (hi - lo > 1e-10) {
            const double m1 = hi - phi * (hi - lo);
            const double m2 = lo + phi * (hi - lo);
            if (energy_at(m1) < energy_at(m2))
                hi = m2;
            else
                lo = m1;
        }
        const double e_opt = energy_at(0.5 * (lo + hi));
        CHECK(std::abs(e_opt - fci_ground_energy(store, 1, 1)) < 1e-8);
    }
    SUBCASE("norm is preserved without truncation") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> angle(-0.5, 0.5);
        const Determinant ref = hartree_fock_reference(4, 2, 2);
        const auto pool = build_pool(4, ref);
        OrderedAnsatz ansatz =
            order_and_truncate(pool, std::vector<double>(pool.size(), 0.0), AnsatzConfig{});
        for (auto& f : ansatz.factors) f.theta = angle(rng);
        const SparseWavefunction wf = apply_ansatz(ref, ansatz, TruncationPolicy::unlimited());
        CHECK(std::abs(wf.norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("statevector equivalence against the dense matrix exponential") {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> angle(-0.8, 0.8);
    for (const auto [na, nb] : {std::pair{2, 2}, std::pair{1, 2}, std::pair{3, 1}}) {
        const Determinant ref = hartree_fock_reference(4, na, nb);
        const auto basis = enumerate_determinants(4, na, nb);
        const auto pool = build_pool(4, ref);
        OrderedAnsatz ansatz =
            order_and_truncate(pool, std::vector<double>(pool.size(), 0.0), AnsatzConfig{});
        for (auto& f : ansatz.factors) f.theta = angle(rng);

        const SparseWavefunction sparse =
            apply_ansatz(ref, ansatz, TruncationPolicy::unlimited());

        Eigen::VectorXd state = Eigen::VectorXd::Zero(basis.size());
        const auto ref_at = std::lower_bound(basis.begin(), basis.end(), ref);
        state[ref_at - basis.begin()] = 1.0;
        for (const auto& f : ansatz.factors) {
            const Eigen::MatrixXd gen = oracle_generator(basis, f.op, f.theta);
            state = (oracle_expm(gen) * state).eval();
        }
        for (std::size_t k = 0; k < basis.size(); ++k)
            REQUIRE(std::abs(sparse.amplitude(basis[k]) - state[k]) < 1e-10);
    }
}

TEST_CASE("parameter JSON round trip") {
    const Determinant ref = hartree_fock_reference(3, 2, 1);
    const auto pool = build_pool(3, ref);
    std::vector<double> amps(pool.size());
    for (std::size_t k = 0; k < amps.size(); ++k) amps[k] = 0.01 * static_cast<double>(k) - 0.03;
    AnsatzConfig config;
    config.m_d = 4;
    const OrderedAnsatz ansatz = order_and_truncate(pool, amps, config);

    std::ostringstream out;
    write_parameters_json(ansatz, out);
    std::istringstream in(out.str());
    const OrderedAnsatz redo = read_parameters_json(in);
    REQUIRE(redo.factors.size() == ansatz.factors.size());
    for (std::size_t k = 0; k < ansatz.factors.size(); ++k) {
        CHECK(redo.factors[k].op == ansatz.factors[k].op);
        CHECK(redo.factors[k].theta == ansatz.factors[k].theta);
        CHECK(redo.factors[k].pool_index == ansatz.factors[k].pool_index);
    }
}
