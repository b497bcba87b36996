#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "swucc/determinant.hpp"

namespace swucc {

/// Molecular integrals in the spatial-orbital basis, chemists' notation.
/// One- and two-electron tables are stored once per symmetry-equivalence
/// class: h_pq = h_qp and (pq|rs) is 8-fold symmetric. Immutable after
/// construction and safe for concurrent reads.
class IntegralStore {
public:
    IntegralStore(int n_orbitals, int n_electrons, int ms2, double core_energy = 0.0);

    int n_orbitals() const { return n_orbitals_; }
    int n_electrons() const { return n_electrons_; }
    int ms2() const { return ms2_; }
    double core_energy() const { return core_energy_; }

    int n_alpha() const { return (n_electrons_ + ms2_) / 2; }
    int n_beta() const { return (n_electrons_ - ms2_) / 2; }

    void set_core_energy(double value) { core_energy_ = value; }

    /// 0-based spatial indices, unchecked beyond asserts; hot path.
    double h1(int p, int q) const { return one_electron_[p * n_orbitals_ + q]; }
    double eri(int p, int q, int r, int s) const {
        return two_electron_[canonical_index(p, q, r, s)];
    }

    void set_h1(int p, int q, double value);
    void set_eri(int p, int q, int r, int s, double value);

    std::size_t n_two_electron_classes() const { return two_electron_.size(); }

private:
    std::size_t canonical_index(int p, int q, int r, int s) const;

    int n_orbitals_;
    int n_electrons_;
    int ms2_;
    double core_energy_;
    std::vector<double> one_electron_;  // dense symmetric M x M
    std::vector<double> two_electron_;  // canonical 8-fold classes
};

/// 1-based accessors matching the FCIDUMP index convention; range-checked.
double get_one_electron(const IntegralStore& store, int p, int q);
double get_two_electron(const IntegralStore& store, int p, int q, int r, int s);

/// Spin-orbital energies, interleaved s = 2p + sigma; size 2M.
struct OrbitalEnergies {
    std::vector<double> eps;
};

/// Diagonal of the Fock operator built from the reference occupation:
/// eps_s = h_ss + sum_t_occ [ (ss|tt) - delta_sigma (st|ts) ].
OrbitalEnergies orbital_energies(const IntegralStore& store, const Determinant& reference);

/// Largest |F_st| over s != t; nonzero values mean non-canonical orbitals.
double max_offdiagonal_fock(const IntegralStore& store, const Determinant& reference);

/// Parses the Knowles-Handy FCIDUMP layout: `&FCI`/`$FCI` header with NORB,
/// NELEC and optional MS2/ORBSYM/ISYM, closed by `&END`, `$END` or `/`,
/// followed by `value i j k l` records (1-based; i=j=k=l=0 is the core
/// energy, k=l=0 a one-electron element, otherwise a two-electron element).
/// Later duplicates overwrite earlier ones. Throws std::runtime_error naming
/// the offending line on malformed input.
IntegralStore parse_fcidump(std::istream& in);
IntegralStore parse_fcidump_file(const std::string& path);

/// Emits a parseable FCIDUMP with one record per stored symmetry class.
void write_fcidump(const IntegralStore& store, std::ostream& out);

/// Keeps the lowest `keep` spatial orbitals, dropping the rest (assumes
/// energy-ordered orbitals; electrons must fit in the window).
IntegralStore window_orbitals(const IntegralStore& store, int keep);

}  // namespace swucc
