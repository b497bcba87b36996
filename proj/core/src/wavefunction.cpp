#include "swucc/wavefunction.hpp"

#include "swucc/format.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace swucc {

SparseWavefunction SparseWavefunction::from_reference(const Determinant& reference) {
    SparseWavefunction wf;
    wf.entries_.push_back({reference, 1.0});
    return wf;
}

SparseWavefunction SparseWavefunction::from_entries(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const Entry& x, const Entry& y) { return x.det < y.det; });
    SparseWavefunction wf;
    wf.entries_.reserve(entries.size());
    for (std::size_t k = 0; k < entries.size();) {
        Entry merged = entries[k];
        for (++k; k < entries.size() && entries[k].det == merged.det; ++k)
            merged.amplitude += entries[k].amplitude;
        if (std::abs(merged.amplitude) >= kAmplitudeDropThreshold)
            wf.entries_.push_back(merged);
    }
    if (!wf.entries_.empty()) {
        const int na = wf.entries_.front().det.n_alpha();
        const int nb = wf.entries_.front().det.n_beta();
        for (const Entry& e : wf.entries_)
            if (e.det.n_alpha() != na || e.det.n_beta() != nb)
                throw std::invalid_argument(
                    "wavefunction entries must share one (n_alpha, n_beta) sector");
    }
    return wf;
}

double SparseWavefunction::amplitude(const Determinant& det) const {
    const auto it = std::lower_bound(
        entries_.begin(), entries_.end(), det,
        [](const Entry& e, const Determinant& d) { return e.det < d; });
    if (it != entries_.end() && it->det == det) return it->amplitude;
    return 0.0;
}

double SparseWavefunction::norm() const {
    double s = 0.0;
    for (const Entry& e : entries_) s += e.amplitude * e.amplitude;
    return std::sqrt(s);
}

double SparseWavefunction::entropy() const {
    double s = 0.0;
    for (const Entry& e : entries_) {
        const double p = e.amplitude * e.amplitude;
        if (p > 0.0) s -= p * std::log(p);
    }
    return s;
}

TruncationPolicy::TruncationPolicy(std::size_t n_cut, std::size_t n_max)
    : n_cut(n_cut), n_max(n_max) {
    if (n_cut == 0 || n_cut > n_max)
        throw std::invalid_argument("truncation policy requires 0 < n_cut <= n_max");
}

TruncationPolicy TruncationPolicy::unlimited() {
    return TruncationPolicy(static_cast<std::size_t>(-1), static_cast<std::size_t>(-1));
}

SparseWavefunction truncate(const SparseWavefunction& wf, const TruncationPolicy& policy) {
    if (wf.size() <= policy.n_max) return wf;
    const auto& entries = wf.entries_;
    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), 0);
    // survivors: largest |c| first, canonically smaller determinant on ties;
    // entries_ is det-sorted, so index order is the canonical tie-break
    std::partial_sort(order.begin(), order.begin() + policy.n_cut, order.end(),
                      [&](std::size_t x, std::size_t y) {
                          const double ax = std::abs(entries[x].amplitude);
                          const double ay = std::abs(entries[y].amplitude);
                          if (ax != ay) return ax > ay;
                          return x < y;
                      });
    std::vector<std::size_t> kept(order.begin(), order.begin() + policy.n_cut);
    std::sort(kept.begin(), kept.end());
    double norm2 = 0.0;
    for (const std::size_t k : kept) norm2 += entries[k].amplitude * entries[k].amplitude;
    const double scale = 1.0 / std::sqrt(norm2);
    SparseWavefunction out;
    out.entries_.reserve(kept.size());
    for (const std::size_t k : kept)
        out.entries_.push_back({entries[k].det, entries[k].amplitude * scale});
    return out;
}

void write_wavefunction_csv(const SparseWavefunction& wf, int n_orbitals, std::ostream& out) {
    std::vector<std::size_t> order(wf.size());
    std::iota(order.begin(), order.end(), 0);
    const auto& entries = wf.entries();
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        const double ax = std::abs(entries[x].amplitude);
        const double ay = std::abs(entries[y].amplitude);
        if (ax != ay) return ax > ay;
        return x < y;
    });
    out << "determinant_alpha,determinant_beta,amplitude\n";
    for (const std::size_t k : order) {
        const auto& e = entries[k];
        for (int p = 0; p < n_orbitals; ++p) out << ((e.det.alpha >> p & 1) ? '1' : '0');
        out << ',';
        for (int p = 0; p < n_orbitals; ++p) out << ((e.det.beta >> p & 1) ? '1' : '0');
        out << ',' << format_double(e.amplitude) << '\n';
    }
}

}  // namespace swucc
