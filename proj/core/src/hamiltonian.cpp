#include "swucc/hamiltonian.hpp"

#include "swucc/format.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace swucc {

namespace {

// Sign of moving |from> to |to> through the listed annihilations/creations,
// applied right-to-left on the spin-orbital word.
int alignment_sign(std::uint64_t word, const int* holes, const int* parts, int n) {
    int phase = 1;
    for (int k = 0; k < n; ++k) {
        const std::uint64_t bit = 1ull << holes[k];
        if (std::popcount(word & (bit - 1)) & 1) phase = -phase;
        word &= ~bit;
    }
    for (int k = 0; k < n; ++k) {
        const std::uint64_t bit = 1ull << parts[k];
        if (std::popcount(word & (bit - 1)) & 1) phase = -phase;
        word |= bit;
    }
    return phase;
}

double diagonal_element(std::uint64_t word, const SpinOrbitalIntegrals& so) {
    int occ[64];
    int n = 0;
    for (std::uint64_t w = word; w;) {
        const int s = std::countr_zero(w);
        occ[n++] = s;
        w &= w - 1;
    }
    double val = 0.0;
    for (int x = 0; x < n; ++x) {
        val += so.h(occ[x], occ[x]);
        for (int y = x + 1; y < n; ++y) val += so.anti(occ[x], occ[y], occ[x], occ[y]);
    }
    return val;
}

double offdiagonal_element(std::uint64_t w1, std::uint64_t w2, const SpinOrbitalIntegrals& so) {
    const std::uint64_t x = w1 ^ w2;
    const int nx = std::popcount(x);
    if (nx > 4) return 0.0;
    if (nx == 2) {
        const int hole = std::countr_zero(x & w2);
        const int part = std::countr_zero(x & w1);
        const int sign = alignment_sign(w2, &hole, &part, 1);
        double val = so.h(part, hole);
        for (std::uint64_t w = w1 & w2; w;) {
            const int u = std::countr_zero(w);
            val += so.anti(part, u, hole, u);
            w &= w - 1;
        }
        return sign * val;
    }
    // degree 2: holes h1 < h2 from w2, particles p1 < p2 from w1;
    // sign of <w1| p1+ p2+ h2- h1- |w2>
    std::uint64_t hw = x & w2;
    const int h1 = std::countr_zero(hw);
    hw &= hw - 1;
    const int h2 = std::countr_zero(hw);
    std::uint64_t pw = x & w1;
    const int p1 = std::countr_zero(pw);
    pw &= pw - 1;
    const int p2 = std::countr_zero(pw);
    const int holes[2] = {h1, h2};
    const int parts[2] = {p2, p1};
    const int sign = alignment_sign(w2, holes, parts, 2);
    return sign * so.anti(p1, p2, h1, h2);
}

}  // namespace

double matrix_element(const Determinant& d1, const Determinant& d2, const IntegralStore& store) {
    if (d1.n_alpha() != d2.n_alpha() || d1.n_beta() != d2.n_beta())
        throw std::invalid_argument("matrix element between different (n_alpha, n_beta) sectors");
    const SpinOrbitalIntegrals so{store};
    const std::uint64_t w1 = d1.spin_orbital_word();
    const std::uint64_t w2 = d2.spin_orbital_word();
    if (w1 == w2) return diagonal_element(w1, so);
    return offdiagonal_element(w1, w2, so);
}

double hartree_fock_energy(const IntegralStore& store) {
    const Determinant ref =
        hartree_fock_reference(store.n_orbitals(), store.n_alpha(), store.n_beta());
    return store.core_energy() + matrix_element(ref, ref, store);
}

EnergyReport expectation_energy(const SparseWavefunction& wf, const IntegralStore& store) {
    if (wf.empty()) throw std::invalid_argument("expectation energy of an empty wavefunction");
    const auto& entries = wf.entries();
    const std::size_t n = entries.size();
    const SpinOrbitalIntegrals so{store};

    std::vector<std::uint64_t> words(n);
    std::vector<std::uint32_t> alphas(n), betas(n);
    std::vector<double> amps(n);
    for (std::size_t k = 0; k < n; ++k) {
        words[k] = entries[k].det.spin_orbital_word();
        alphas[k] = entries[k].det.alpha;
        betas[k] = entries[k].det.beta;
        amps[k] = entries[k].amplitude;
    }

    double numerator = 0.0;
    double denominator = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        numerator += amps[k] * amps[k] * diagonal_element(words[k], so);
        denominator += amps[k] * amps[k];
    }
    if (denominator <= 0.0)
        throw std::invalid_argument("expectation energy of a zero-norm wavefunction");
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t ai = alphas[i];
        const std::uint32_t bi = betas[i];
        const std::uint64_t wi = words[i];
        const double ci = amps[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            const int da = std::popcount(ai ^ alphas[j]);
            if (da > 4) continue;
            if (da + std::popcount(bi ^ betas[j]) > 4) continue;
            const double elem = offdiagonal_element(wi, words[j], so);
            if (elem != 0.0) numerator += 2.0 * ci * amps[j] * elem;
        }
    }

    EnergyReport report;
    report.total_energy = store.core_energy() + numerator / denominator;

    const Determinant ref = hartree_fock_reference(
        store.n_orbitals(), entries.front().det.n_alpha(), entries.front().det.n_beta());
    report.correlation_energy =
        report.total_energy - (store.core_energy() + matrix_element(ref, ref, store));
    report.norm = std::sqrt(denominator);
    report.n_det = n;
    return report;
}

std::size_t fci_dimension(int n_orbitals, int n_alpha, int n_beta) {
    const auto choose = [](int n, int k) -> std::size_t {
        if (k < 0 || k > n) return 0;
        std::size_t r = 1;
        for (int x = 1; x <= k; ++x) r = r * static_cast<std::size_t>(n - k + x) / x;
        return r;
    };
    return choose(n_orbitals, n_alpha) * choose(n_orbitals, n_beta);
}

namespace {

// Matrix-free y = H x over a sector basis.
void apply_hamiltonian(const std::vector<std::uint64_t>& words, const std::vector<double>& diag,
                       const SpinOrbitalIntegrals& so, const Eigen::VectorXd& x,
                       Eigen::VectorXd& y) {
    const std::size_t n = words.size();
    for (std::size_t i = 0; i < n; ++i) y[i] = diag[i] * x[i];
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t wi = words[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::popcount(wi ^ words[j]) > 4) continue;
            const double elem = offdiagonal_element(wi, words[j], so);
            if (elem != 0.0) {
                y[i] += elem * x[j];
                y[j] += elem * x[i];
            }
        }
    }
}

double lanczos_lowest(const std::vector<std::uint64_t>& words, const std::vector<double>& diag,
                      const SpinOrbitalIntegrals& so) {
    const std::size_t n = words.size();
    const int max_iter = 400;
    std::vector<Eigen::VectorXd> basis;
    std::vector<double> alpha, beta;

    Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0);
    // deterministic symmetry-breaking perturbation
    for (std::size_t k = 0; k < n; ++k) v[k] += 1e-3 * static_cast<double>(k % 7);
    v.normalize();

    double prev = 0.0;
    Eigen::VectorXd w(n);
    for (int it = 0; it < max_iter; ++it) {
        basis.push_back(v);
        apply_hamiltonian(words, diag, so, v, w);
        alpha.push_back(v.dot(w));
        // full reorthogonalization keeps the small basis numerically clean
        for (const auto& b : basis) w -= b.dot(w) * b;
        for (const auto& b : basis) w -= b.dot(w) * b;
        const double norm = w.norm();

        const int m = static_cast<int>(alpha.size());
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (int k = 0; k < m; ++k) {
            t(k, k) = alpha[k];
            if (k > 0) t(k, k - 1) = t(k - 1, k) = beta[k - 1];
        }
        const double lowest = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(t)
                                  .eigenvalues()(0);
        if (it > 2 && std::abs(lowest - prev) < 1e-12) return lowest;
        prev = lowest;
        if (norm < 1e-12) return lowest;  // invariant subspace exhausted
        beta.push_back(norm);
        v = w / norm;
    }
    return prev;
}

}  // namespace

double fci_ground_energy(const IntegralStore& store, int n_alpha, int n_beta) {
    const std::size_t dim = fci_dimension(store.n_orbitals(), n_alpha, n_beta);
    if (dim == 0) throw std::invalid_argument("empty determinant sector");
    if (dim > kFciDimensionCap)
        throw std::invalid_argument("FCI sector dimension " + std::to_string(dim) +
                                    " exceeds the cap of " + std::to_string(kFciDimensionCap));
    const auto dets = enumerate_determinants(store.n_orbitals(), n_alpha, n_beta);
    const SpinOrbitalIntegrals so{store};
    std::vector<std::uint64_t> words(dim);
    for (std::size_t k = 0; k < dim; ++k) words[k] = dets[k].spin_orbital_word();

    if (dim <= 4096) {
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
        for (std::size_t i = 0; i < dim; ++i) {
            h(i, i) = diagonal_element(words[i], so);
            for (std::size_t j = i + 1; j < dim; ++j) {
                if (std::popcount(words[i] ^ words[j]) > 4) continue;
                const double elem = offdiagonal_element(words[i], words[j], so);
                h(i, j) = h(j, i) = elem;
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
        return solver.eigenvalues()(0) + store.core_energy();
    }

    std::vector<double> diag(dim);
    for (std::size_t k = 0; k < dim; ++k) diag[k] = diagonal_element(words[k], so);
    return lanczos_lowest(words, diag, so) + store.core_energy();
}

void write_energy_report_json(const EnergyReport& report, std::ostream& out) {
    out << "{\n  \"total_energy\": " << format_double(report.total_energy)
        << ",\n  \"correlation_energy\": " << format_double(report.correlation_energy)
        << ",\n  \"norm\": " << format_double(report.norm) << ",\n  \"n_det\": "
        << report.n_det << "\n}\n";
}

}  // namespace swucc
