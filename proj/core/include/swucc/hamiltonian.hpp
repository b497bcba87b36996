#pragma once

#include <cstddef>
#include <iosfwd>

#include "swucc/determinant.hpp"
#include "swucc/integrals.hpp"
#include "swucc/wavefunction.hpp"

namespace swucc {

/// Energy of a state plus bookkeeping, serialized to JSON by the CLI.
struct EnergyReport {
    double total_energy;        // hartree, includes core energy
    double correlation_energy;  // total minus the aufbau-reference total
    double norm;
    std::size_t n_det;
};

/// Spin-orbital views of a spatial-orbital integral store under s = 2p + sigma.
/// h(s,t) is spin-diagonal; anti(s,t,u,v) is the antisymmetrized element
/// <st||uv> assembled from chemists' integrals.
struct SpinOrbitalIntegrals {
    const IntegralStore& store;

    double h(int s, int t) const {
        if ((s ^ t) & 1) return 0.0;
        return store.h1(s >> 1, t >> 1);
    }

    double anti(int s, int t, int u, int v) const {
        double val = 0.0;
        if (((s ^ u) & 1) == 0 && ((t ^ v) & 1) == 0)
            val += store.eri(s >> 1, u >> 1, t >> 1, v >> 1);
        if (((s ^ v) & 1) == 0 && ((t ^ u) & 1) == 0)
            val -= store.eri(s >> 1, v >> 1, t >> 1, u >> 1);
        return val;
    }
};

/// Slater-Condon matrix element <d1|H|d2> excluding the core energy.
/// Zero beyond excitation degree 2. Throws on electron-count mismatch.
double matrix_element(const Determinant& d1, const Determinant& d2, const IntegralStore& store);

/// Total energy of the aufbau reference in the store's (n_alpha, n_beta)
/// sector, core energy included.
double hartree_fock_energy(const IntegralStore& store);

/// Rayleigh quotient core + <psi|H|psi>/<psi|psi> over an O(N^2) pair loop
/// with an XOR-popcount early exit. Valid for unnormalized states; throws on
/// an empty or zero-norm wavefunction.
EnergyReport expectation_energy(const SparseWavefunction& wf, const IntegralStore& store);

/// Largest sector dimension fci_ground_energy will diagonalize.
inline constexpr std::size_t kFciDimensionCap = 40000;

std::size_t fci_dimension(int n_orbitals, int n_alpha, int n_beta);

/// Lowest eigenvalue of the full (n_alpha, n_beta) sector Hamiltonian plus
/// the core energy. Dense eigensolve for small sectors, Lanczos above that;
/// both converged well past 1e-10. Throws when the sector exceeds the cap.
double fci_ground_energy(const IntegralStore& store, int n_alpha, int n_beta);

void write_energy_report_json(const EnergyReport& report, std::ostream& out);

}  // namespace swucc
