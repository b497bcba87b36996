#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace swucc {

/// Hard cap on spatial orbitals; occupation masks are single 32-bit words.
inline constexpr int kMaxOrbitals = 32;

/// Slater determinant as a pair of occupation bitmasks over spatial orbitals.
/// Bit p of alpha (beta) set means spatial orbital p holds an alpha (beta)
/// electron. Ordering is lexicographic on (alpha, beta).
struct Determinant {
    std::uint32_t alpha = 0;
    std::uint32_t beta = 0;

    friend auto operator<=>(const Determinant&, const Determinant&) = default;

    int n_alpha() const { return std::popcount(alpha); }
    int n_beta() const { return std::popcount(beta); }

    /// Spin-orbital occupation word under s = 2p + sigma (alpha on even bits).
    std::uint64_t spin_orbital_word() const;
    static Determinant from_spin_orbital_word(std::uint64_t word);
};

/// Determinant plus the fermionic sign picked up by an operator application.
struct SignedDeterminant {
    Determinant det;
    int phase = 1;  // +1 or -1
};

/// Particle-hole excitation operator in spin-orbital indices (s = 2p + sigma).
/// Doubles are canonical: i < j, a < b. Spin projection is conserved and the
/// occupied/virtual index sets are disjoint.
struct ExcitationOperator {
    enum class Kind : std::uint8_t { Single, Double };

    Kind kind = Kind::Single;
    int i = -1;
    int j = -1;  // -1 for singles
    int a = -1;
    int b = -1;  // -1 for singles

    friend auto operator<=>(const ExcitationOperator&, const ExcitationOperator&) = default;

    static ExcitationOperator make_single(int i, int a);
    static ExcitationOperator make_double(int i, int j, int a, int b);

    bool is_single() const { return kind == Kind::Single; }
};

/// Aufbau filling: the lowest n_alpha / n_beta spatial orbitals occupied.
Determinant hartree_fock_reference(int n_orbitals, int n_alpha, int n_beta);

/// Applies a_dag(a) [a_dag(b)] a(j) a(i) right-to-left, accumulating the
/// fermionic sign (-1)^(occupied below s) at each step. Empty result when an
/// annihilated orbital is unoccupied or a created one is occupied.
std::optional<SignedDeterminant> apply_excitation(const Determinant& det,
                                                  const ExcitationOperator& op);

/// Adjoint of apply_excitation: a_dag(i) [a_dag(j)] a(b) a(a).
std::optional<SignedDeterminant> apply_deexcitation(const Determinant& det,
                                                    const ExcitationOperator& op);

/// Half the Hamming distance of the occupation masks.
int excitation_degree(const Determinant& d1, const Determinant& d2);

/// All determinants of the (n_alpha, n_beta) sector, canonical ascending order.
std::vector<Determinant> enumerate_determinants(int n_orbitals, int n_alpha, int n_beta);

/// Renders `a:<bits> b:<bits>` with little-endian bit strings of length n_orbitals.
std::string format_determinant(const Determinant& det, int n_orbitals);

std::string format_operator(const ExcitationOperator& op);

}  // namespace swucc
