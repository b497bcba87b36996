#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace swucc::testing {

OccupationList occupation_list(const Determinant& det) {
    OccupationList occ;
    for (int p = 0; p < kMaxOrbitals; ++p) {
        if (det.alpha >> p & 1) occ.push_back(2 * p);
        if (det.beta >> p & 1) occ.push_back(2 * p + 1);
    }
    std::sort(occ.begin(), occ.end());
    return occ;
}

Determinant determinant_from(const OccupationList& occ) {
    Determinant det;
    for (const int s : occ) {
        if (s % 2 == 0)
            det.alpha |= 1u << (s / 2);
        else
            det.beta |= 1u << (s / 2);
    }
    return det;
}

std::optional<std::pair<OccupationList, int>> oracle_annihilate(const OccupationList& occ,
                                                                int s) {
    const auto it = std::find(occ.begin(), occ.end(), s);
    if (it == occ.end()) return std::nullopt;
    const int transpositions = static_cast<int>(it - occ.begin());
    OccupationList out(occ);
    out.erase(out.begin() + transpositions);
    return std::make_pair(out, transpositions % 2 == 0 ? 1 : -1);
}

std::optional<std::pair<OccupationList, int>> oracle_create(const OccupationList& occ, int s) {
    const auto it = std::lower_bound(occ.begin(), occ.end(), s);
    if (it != occ.end() && *it == s) return std::nullopt;
    const int transpositions = static_cast<int>(it - occ.begin());
    OccupationList out(occ);
    out.insert(out.begin() + transpositions, s);
    return std::make_pair(out, transpositions % 2 == 0 ? 1 : -1);
}

std::optional<std::pair<OccupationList, int>> oracle_apply_chain(const OccupationList& occ,
                                                                 const std::vector<int>& chain) {
    OccupationList state = occ;
    int sign = 1;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        const int code = *it;
        std::optional<std::pair<OccupationList, int>> next;
        if (code < 0)
            next = oracle_annihilate(state, -code - 1);
        else
            next = oracle_create(state, code);
        if (!next) return std::nullopt;
        state = std::move(next->first);
        sign *= next->second;
    }
    return std::make_pair(state, sign);
}

namespace {

int ann(int s) { return -s - 1; }
int cre(int s) { return s; }

}  // namespace

std::optional<SignedDeterminant> oracle_apply_excitation(const Determinant& det,
                                                         const ExcitationOperator& op) {
    std::vector<int> chain;
    if (op.is_single())
        chain = {cre(op.a), ann(op.i)};
    else
        chain = {cre(op.a), cre(op.b), ann(op.j), ann(op.i)};
    const auto out = oracle_apply_chain(occupation_list(det), chain);
    if (!out) return std::nullopt;
    return SignedDeterminant{determinant_from(out->first), out->second};
}

std::optional<SignedDeterminant> oracle_apply_deexcitation(const Determinant& det,
                                                           const ExcitationOperator& op) {
    std::vector<int> chain;
    if (op.is_single())
        chain = {cre(op.i), ann(op.a)};
    else
        chain = {cre(op.i), cre(op.j), ann(op.b), ann(op.a)};
    const auto out = oracle_apply_chain(occupation_list(det), chain);
    if (!out) return std::nullopt;
    return SignedDeterminant{determinant_from(out->first), out->second};
}

namespace {

double so_h(const IntegralStore& store, int s, int t) {
    if (s % 2 != t % 2) return 0.0;
    return store.h1(s / 2, t / 2);
}

double so_anti(const IntegralStore& store, int s, int t, int u, int v) {
    double val = 0.0;
    if (s % 2 == u % 2 && t % 2 == v % 2) val += store.eri(s / 2, u / 2, t / 2, v / 2);
    if (s % 2 == v % 2 && t % 2 == u % 2) val -= store.eri(s / 2, v / 2, t / 2, u / 2);
    return val;
}

// With the flipped convention each operator counts occupied orbitals above
// its index; all observables must be invariant under this relabeling.
std::optional<std::pair<OccupationList, int>> apply_chain_convention(
    const OccupationList& occ, const std::vector<int>& chain, bool flip, int n_spin_orbitals) {
    if (!flip) return oracle_apply_chain(occ, chain);
    OccupationList state = occ;
    int sign = 1;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        const int code = *it;
        const int s = code < 0 ? -code - 1 : code;
        const auto pos = std::lower_bound(state.begin(), state.end(), s);
        if (code < 0) {
            if (pos == state.end() || *pos != s) return std::nullopt;
            const int above = static_cast<int>(state.end() - pos) - 1;
            if (above % 2) sign = -sign;
            state.erase(pos);
        } else {
            if (pos != state.end() && *pos == s) return std::nullopt;
            const int above = static_cast<int>(state.end() - pos);
            if (above % 2) sign = -sign;
            state.insert(pos, s);
        }
    }
    (void)n_spin_orbitals;
    return std::make_pair(state, sign);
}

}  // namespace

Eigen::MatrixXd oracle_dense_hamiltonian(const std::vector<Determinant>& basis,
                                         const IntegralStore& store, bool flip_convention) {
    const int n2 = 2 * store.n_orbitals();
    std::map<Determinant, int> index;
    for (std::size_t k = 0; k < basis.size(); ++k) index[basis[k]] = static_cast<int>(k);

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(basis.size(), basis.size());
    for (std::size_t col = 0; col < basis.size(); ++col) {
        const OccupationList occ = occupation_list(basis[col]);
        for (int s = 0; s < n2; ++s)
            for (int t = 0; t < n2; ++t) {
                const double hst = so_h(store, s, t);
                if (hst == 0.0) continue;
                const auto out =
                    apply_chain_convention(occ, {cre(s), ann(t)}, flip_convention, n2);
                if (!out) continue;
                const auto row = index.find(determinant_from(out->first));
                if (row == index.end()) continue;
                h(row->second, col) += hst * out->second;
            }
        for (int s = 0; s < n2; ++s)
            for (int t = 0; t < n2; ++t)
                for (int u = 0; u < n2; ++u)
                    for (int v = 0; v < n2; ++v) {
                        const double elem = so_anti(store, s, t, u, v);
                        if (elem == 0.0) continue;
                        const auto out = apply_chain_convention(
                            occ, {cre(s), cre(t), ann(v), ann(u)}, flip_convention, n2);
                        if (!out) continue;
                        const auto row = index.find(determinant_from(out->first));
                        if (row == index.end()) continue;
                        h(row->second, col) += 0.25 * elem * out->second;
                    }
    }
    return h;
}

Eigen::MatrixXd oracle_generator(const std::vector<Determinant>& basis,
                                 const ExcitationOperator& op, double theta) {
    std::map<Determinant, int> index;
    for (std::size_t k = 0; k < basis.size(); ++k) index[basis[k]] = static_cast<int>(k);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(basis.size(), basis.size());
    for (std::size_t col = 0; col < basis.size(); ++col) {
        if (const auto exc = oracle_apply_excitation(basis[col], op)) {
            const auto row = index.find(exc->det);
            if (row != index.end()) g(row->second, col) += theta * exc->phase;
        }
        if (const auto dex = oracle_apply_deexcitation(basis[col], op)) {
            const auto row = index.find(dex->det);
            if (row != index.end()) g(row->second, col) -= theta * dex->phase;
        }
    }
    return g;
}

Eigen::MatrixXd oracle_expm(const Eigen::MatrixXd& m) {
    const double norm = m.norm();
    int squarings = 0;
    while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
    const Eigen::MatrixXd a = m / std::pow(2.0, squarings);
    Eigen::MatrixXd result = Eigen::MatrixXd::Identity(m.rows(), m.cols());
    Eigen::MatrixXd term = result;
    for (int k = 1; k <= 30; ++k) {
        term = (term * a / static_cast<double>(k)).eval();
        result += term;
        if (term.norm() < 1e-18) break;
    }
    for (int k = 0; k < squarings; ++k) result = (result * result).eval();
    return result;
}

IntegralStore random_integral_store(int n_orbitals, int n_electrons, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    IntegralStore store(n_orbitals, n_electrons, n_electrons % 2, dist(rng));
    for (int p = 0; p < n_orbitals; ++p)
        for (int q = 0; q <= p; ++q) store.set_h1(p, q, dist(rng));
    for (int p = 0; p < n_orbitals; ++p)
        for (int q = 0; q <= p; ++q)
            for (int r = 0; r <= p; ++r)
                for (int s = 0; s <= r; ++s) {
                    if (r * (r + 1) / 2 + s > p * (p + 1) / 2 + q) continue;
                    store.set_eri(p, q, r, s, dist(rng));
                }
    return store;
}

std::vector<ExcitationOperator> all_canonical_operators(int n_orbitals) {
    const int n2 = 2 * n_orbitals;
    std::vector<ExcitationOperator> ops;
    for (int i = 0; i < n2; ++i)
        for (int a = 0; a < n2; ++a)
            if (i != a && (i % 2) == (a % 2)) ops.push_back(ExcitationOperator::make_single(i, a));
    for (int i = 0; i < n2; ++i)
        for (int j = i + 1; j < n2; ++j)
            for (int a = 0; a < n2; ++a)
                for (int b = a + 1; b < n2; ++b) {
                    if (a == i || a == j || b == i || b == j) continue;
                    if ((i % 2) + (j % 2) != (a % 2) + (b % 2)) continue;
                    ops.push_back(ExcitationOperator::make_double(i, j, a, b));
                }
    return ops;
}

}  // namespace swucc::testing
