#include "swucc/ansatz.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "swucc/hamiltonian.hpp"

namespace swucc {

std::vector<ExcitationOperator> build_pool(int n_orbitals, const Determinant& reference) {
    const std::uint64_t occ_word = reference.spin_orbital_word();
    std::vector<int> occ, virt;
    for (int s = 0; s < 2 * n_orbitals; ++s)
        ((occ_word >> s & 1) ? occ : virt).push_back(s);

    std::vector<ExcitationOperator> pool;
    for (const int i : occ)
        for (const int a : virt)
            if ((i & 1) == (a & 1)) pool.push_back(ExcitationOperator::make_single(i, a));
    for (std::size_t x = 0; x < occ.size(); ++x)
        for (std::size_t y = x + 1; y < occ.size(); ++y)
            for (std::size_t u = 0; u < virt.size(); ++u)
                for (std::size_t v = u + 1; v < virt.size(); ++v) {
                    const int i = occ[x], j = occ[y], a = virt[u], b = virt[v];
                    if ((i & 1) + (j & 1) != (a & 1) + (b & 1)) continue;
                    pool.push_back(ExcitationOperator::make_double(i, j, a, b));
                }
    return pool;
}

Mp2Amplitudes mp2_amplitudes(const IntegralStore& store, const OrbitalEnergies& eps,
                             const Determinant& reference) {
    const auto pool = build_pool(store.n_orbitals(), reference);
    const SpinOrbitalIntegrals so{store};
    Mp2Amplitudes out;
    out.values.assign(pool.size(), 0.0);
    for (std::size_t k = 0; k < pool.size(); ++k) {
        const auto& op = pool[k];
        if (op.is_single()) continue;
        const double delta = eps.eps[op.i] + eps.eps[op.j] - eps.eps[op.a] - eps.eps[op.b];
        if (std::abs(delta) < 1e-10)
            throw std::runtime_error("degenerate MP2 denominator for " + format_operator(op));
        out.values[k] = so.anti(op.i, op.j, op.a, op.b) / delta;
    }
    // quarter-sum over all spin-orbital quadruples, not just canonical ones
    const std::uint64_t occ_word = reference.spin_orbital_word();
    std::vector<int> occ, virt;
    for (int s = 0; s < 2 * store.n_orbitals(); ++s)
        ((occ_word >> s & 1) ? occ : virt).push_back(s);
    double e2 = 0.0;
    for (const int i : occ)
        for (const int j : occ)
            for (const int a : virt)
                for (const int b : virt) {
                    const double v = so.anti(i, j, a, b);
                    if (v == 0.0) continue;
                    const double delta = eps.eps[i] + eps.eps[j] - eps.eps[a] - eps.eps[b];
                    e2 += 0.25 * v * v / delta;
                }
    out.correlation_energy = e2;
    return out;
}

OrderedAnsatz order_and_truncate(const std::vector<ExcitationOperator>& pool,
                                 const std::vector<double>& amplitudes,
                                 const AnsatzConfig& config) {
    if (amplitudes.size() != pool.size())
        throw std::invalid_argument("amplitude vector does not match the pool");
    std::vector<std::size_t> doubles;
    for (std::size_t k = 0; k < pool.size(); ++k)
        if (!pool[k].is_single()) doubles.push_back(k);
    std::stable_sort(doubles.begin(), doubles.end(), [&](std::size_t x, std::size_t y) {
        const double ax = std::abs(amplitudes[x]);
        const double ay = std::abs(amplitudes[y]);
        if (ax != ay) return ax > ay;
        return x < y;
    });
    if (config.m_d > 0 && doubles.size() > config.m_d) doubles.resize(config.m_d);

    OrderedAnsatz ansatz;
    for (const std::size_t k : doubles)
        ansatz.factors.push_back({pool[k], amplitudes[k], static_cast<int>(k)});
    for (std::size_t k = 0; k < pool.size(); ++k)
        if (pool[k].is_single()) ansatz.factors.push_back({pool[k], 0.0, static_cast<int>(k)});
    return ansatz;
}

SparseWavefunction FactorWorkspace::apply(const SparseWavefunction& wf, const UccFactor& factor) {
    const double cos_t = std::cos(factor.theta);
    const double sin_t = std::sin(factor.theta);
    if (sin_t == 0.0 && cos_t == 1.0) return wf;  // exact identity
    rotated_.clear();
    created_.clear();
    rotated_.reserve(wf.size());
    created_.reserve(wf.size());
    for (const auto& e : wf.entries()) {
        if (const auto exc = apply_excitation(e.det, factor.op)) {
            rotated_.push_back({e.det, e.amplitude * cos_t});
            created_.push_back({exc->det, e.amplitude * exc->phase * sin_t});
        } else if (const auto dex = apply_deexcitation(e.det, factor.op)) {
            rotated_.push_back({e.det, e.amplitude * cos_t});
            created_.push_back({dex->det, -e.amplitude * dex->phase * sin_t});
        } else {
            rotated_.push_back(e);
        }
    }
    std::sort(created_.begin(), created_.end(),
              [](const auto& x, const auto& y) { return x.det < y.det; });

    // merge the det-sorted survivor list with the sorted sin-contributions
    std::vector<SparseWavefunction::Entry> merged;
    merged.reserve(rotated_.size() + created_.size());
    std::size_t r = 0, c = 0;
    const auto emit = [&merged](const Determinant& det, double amp) {
        if (std::abs(amp) >= kAmplitudeDropThreshold) merged.push_back({det, amp});
    };
    while (r < rotated_.size() || c < created_.size()) {
        Determinant det;
        if (c == created_.size() ||
            (r < rotated_.size() && rotated_[r].det < created_[c].det))
            det = rotated_[r].det;
        else
            det = created_[c].det;
        double amp = 0.0;
        while (r < rotated_.size() && rotated_[r].det == det) amp += rotated_[r++].amplitude;
        while (c < created_.size() && created_[c].det == det) amp += created_[c++].amplitude;
        emit(det, amp);
    }
    SparseWavefunction out;
    out.entries_ = std::move(merged);
    return out;
}

SparseWavefunction apply_factor(const SparseWavefunction& wf, const UccFactor& factor) {
    FactorWorkspace ws;
    return ws.apply(wf, factor);
}

SparseWavefunction apply_ansatz(const Determinant& reference, const OrderedAnsatz& ansatz,
                                const TruncationPolicy& policy) {
    SparseWavefunction wf = SparseWavefunction::from_reference(reference);
    FactorWorkspace ws;
    for (const UccFactor& factor : ansatz.factors) {
        wf = ws.apply(wf, factor);
        wf = truncate(wf, policy);
    }
    return wf;
}

void write_parameters_json(const OrderedAnsatz& ansatz, std::ostream& out) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const UccFactor& f : ansatz.factors) {
        nlohmann::ordered_json rec;
        rec["kind"] = f.op.is_single() ? "single" : "double";
        rec["i"] = f.op.i;
        if (!f.op.is_single()) rec["j"] = f.op.j;
        rec["a"] = f.op.a;
        if (!f.op.is_single()) rec["b"] = f.op.b;
        rec["theta"] = f.theta;
        rec["pool_index"] = f.pool_index;
        doc.push_back(std::move(rec));
    }
    out << doc.dump(2) << "\n";
}

OrderedAnsatz read_parameters_json(std::istream& in) {
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("invalid parameter JSON: ") + e.what());
    }
    if (!doc.is_array()) throw std::runtime_error("parameter JSON must be an array");
    OrderedAnsatz ansatz;
    for (const auto& rec : doc) {
        const std::string kind = rec.at("kind").get<std::string>();
        UccFactor f;
        if (kind == "single") {
            f.op = ExcitationOperator::make_single(rec.at("i").get<int>(), rec.at("a").get<int>());
        } else if (kind == "double") {
            f.op = ExcitationOperator::make_double(rec.at("i").get<int>(), rec.at("j").get<int>(),
                                                   rec.at("a").get<int>(), rec.at("b").get<int>());
        } else {
            throw std::runtime_error("unknown factor kind: " + kind);
        }
        f.theta = rec.at("theta").get<double>();
        f.pool_index = rec.at("pool_index").get<int>();
        ansatz.factors.push_back(f);
    }
    return ansatz;
}

}  // namespace swucc
