#include "swucc/determinant.hpp"

#include <sstream>
#include <stdexcept>

namespace swucc {

namespace {

// Spreads the low 32 bits of x onto the even bit positions of a 64-bit word.
std::uint64_t spread_even(std::uint32_t x) {
    std::uint64_t w = x;
    w = (w | (w << 16)) & 0x0000FFFF0000FFFFull;
    w = (w | (w << 8)) & 0x00FF00FF00FF00FFull;
    w = (w | (w << 4)) & 0x0F0F0F0F0F0F0F0Full;
    w = (w | (w << 2)) & 0x3333333333333333ull;
    w = (w | (w << 1)) & 0x5555555555555555ull;
    return w;
}

std::uint32_t compress_even(std::uint64_t w) {
    w &= 0x5555555555555555ull;
    w = (w | (w >> 1)) & 0x3333333333333333ull;
    w = (w | (w >> 2)) & 0x0F0F0F0F0F0F0F0Full;
    w = (w | (w >> 4)) & 0x00FF00FF00FF00FFull;
    w = (w | (w >> 8)) & 0x0000FFFF0000FFFFull;
    w = (w | (w >> 16)) & 0x00000000FFFFFFFFull;
    return static_cast<std::uint32_t>(w);
}

// Annihilates spin orbital s in-place; false when s is unoccupied.
bool annihilate(std::uint64_t& word, int s, int& phase) {
    const std::uint64_t bit = 1ull << s;
    if (!(word & bit)) return false;
    if (std::popcount(word & (bit - 1)) & 1) phase = -phase;
    word &= ~bit;
    return true;
}

// Creates spin orbital s in-place; false when s is already occupied.
bool create(std::uint64_t& word, int s, int& phase) {
    const std::uint64_t bit = 1ull << s;
    if (word & bit) return false;
    if (std::popcount(word & (bit - 1)) & 1) phase = -phase;
    word |= bit;
    return true;
}

void check_spin_orbital(int s) {
    if (s < 0 || s >= 2 * kMaxOrbitals)
        throw std::invalid_argument("spin-orbital index out of range: " + std::to_string(s));
}

}  // namespace

std::uint64_t Determinant::spin_orbital_word() const {
    return spread_even(alpha) | (spread_even(beta) << 1);
}

Determinant Determinant::from_spin_orbital_word(std::uint64_t word) {
    return Determinant{compress_even(word), compress_even(word >> 1)};
}

ExcitationOperator ExcitationOperator::make_single(int i, int a) {
    check_spin_orbital(i);
    check_spin_orbital(a);
    if (i == a) throw std::invalid_argument("single excitation with i == a");
    if ((i & 1) != (a & 1))
        throw std::invalid_argument("single excitation must conserve spin projection");
    return ExcitationOperator{Kind::Single, i, -1, a, -1};
}

ExcitationOperator ExcitationOperator::make_double(int i, int j, int a, int b) {
    check_spin_orbital(i);
    check_spin_orbital(j);
    check_spin_orbital(a);
    check_spin_orbital(b);
    if (!(i < j && a < b))
        throw std::invalid_argument("double excitation must be canonical: i < j, a < b");
    if (i == a || i == b || j == a || j == b)
        throw std::invalid_argument("double excitation index sets must be disjoint");
    if ((i & 1) + (j & 1) != (a & 1) + (b & 1))
        throw std::invalid_argument("double excitation must conserve spin projection");
    return ExcitationOperator{Kind::Double, i, j, a, b};
}

Determinant hartree_fock_reference(int n_orbitals, int n_alpha, int n_beta) {
    if (n_orbitals < 0 || n_orbitals > kMaxOrbitals)
        throw std::invalid_argument("orbital count out of range");
    if (n_alpha < 0 || n_beta < 0 || n_alpha > n_orbitals || n_beta > n_orbitals)
        throw std::invalid_argument("electron count exceeds orbital count");
    const auto fill = [](int n) {
        return n == 0 ? 0u : (n == 32 ? ~0u : (1u << n) - 1u);
    };
    return Determinant{fill(n_alpha), fill(n_beta)};
}

std::optional<SignedDeterminant> apply_excitation(const Determinant& det,
                                                  const ExcitationOperator& op) {
    std::uint64_t word = det.spin_orbital_word();
    int phase = 1;
    // a_dag(a) a_dag(b) a(j) a(i), rightmost first
    if (!annihilate(word, op.i, phase)) return std::nullopt;
    if (op.kind == ExcitationOperator::Kind::Double) {
        if (!annihilate(word, op.j, phase)) return std::nullopt;
        if (!create(word, op.b, phase)) return std::nullopt;
    }
    if (!create(word, op.a, phase)) return std::nullopt;
    return SignedDeterminant{Determinant::from_spin_orbital_word(word), phase};
}

std::optional<SignedDeterminant> apply_deexcitation(const Determinant& det,
                                                    const ExcitationOperator& op) {
    std::uint64_t word = det.spin_orbital_word();
    int phase = 1;
    // a_dag(i) a_dag(j) a(b) a(a), rightmost first
    if (!annihilate(word, op.a, phase)) return std::nullopt;
    if (op.kind == ExcitationOperator::Kind::Double) {
        if (!annihilate(word, op.b, phase)) return std::nullopt;
        if (!create(word, op.j, phase)) return std::nullopt;
    }
    if (!create(word, op.i, phase)) return std::nullopt;
    return SignedDeterminant{Determinant::from_spin_orbital_word(word), phase};
}

int excitation_degree(const Determinant& d1, const Determinant& d2) {
    return (std::popcount(d1.alpha ^ d2.alpha) + std::popcount(d1.beta ^ d2.beta)) / 2;
}

std::vector<Determinant> enumerate_determinants(int n_orbitals, int n_alpha, int n_beta) {
    if (n_orbitals < 0 || n_orbitals > kMaxOrbitals)
        throw std::invalid_argument("orbital count out of range");
    if (n_alpha > n_orbitals || n_beta > n_orbitals)
        throw std::invalid_argument("electron count exceeds orbital count");
    const auto masks = [n_orbitals](int n) {
        std::vector<std::uint32_t> out;
        if (n == 0) {
            out.push_back(0);
            return out;
        }
        // ascending enumeration of n-bit subsets via Gosper's hack,
        // in 64-bit arithmetic so the increment never wraps
        std::uint64_t v = (1ull << n) - 1ull;
        const std::uint64_t limit = 1ull << n_orbitals;
        while (v < limit) {
            out.push_back(static_cast<std::uint32_t>(v));
            const std::uint64_t t = v | (v - 1);
            v = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
        }
        return out;
    };
    const auto alphas = masks(n_alpha);
    const auto betas = masks(n_beta);
    std::vector<Determinant> dets;
    dets.reserve(alphas.size() * betas.size());
    for (const auto a : alphas)
        for (const auto b : betas) dets.push_back(Determinant{a, b});
    return dets;
}

std::string format_determinant(const Determinant& det, int n_orbitals) {
    std::string out = "a:";
    for (int p = 0; p < n_orbitals; ++p) out += (det.alpha >> p & 1) ? '1' : '0';
    out += " b:";
    for (int p = 0; p < n_orbitals; ++p) out += (det.beta >> p & 1) ? '1' : '0';
    return out;
}

std::string format_operator(const ExcitationOperator& op) {
    std::ostringstream os;
    if (op.is_single())
        os << "single(i=" << op.i << ",a=" << op.a << ")";
    else
        os << "double(i=" << op.i << ",j=" << op.j << ",a=" << op.a << ",b=" << op.b << ")";
    return os.str();
}

}  // namespace swucc
