#pragma once

#include <vector>

#include "annni/pauli.hpp"
#include "annni/qsim.hpp"

namespace annni {

// ANNNI chain parameters, open boundary conditions, energy unit J = 1.
struct AnnniParams {
    int n_spins = 0;
    double kappa = 0.0; // next-nearest coupling, dimensionless
    double h = 0.0;     // transverse field, dimensionless

    void validate() const; // even N >= 2, kappa >= 0, h >= 0
};

// Hamiltonian terms for an open chain of n spins: X_i X_{i+1} with unit
// coefficient (n-1 terms), kappa * X_i X_{i+2} (n-2 terms) and h * Z_i
// (n terms). The next-nearest coupling enters with a positive sign so the
// two XX sums compete; that frustration is what produces the antiphase and
// the multicritical point at kappa = 0.5.
std::vector<PauliString> annni_terms(int n_spins, double kappa, double h);

// Validating wrapper around annni_terms.
std::vector<PauliString> build_annni(const AnnniParams& p);

struct SpectrumResult {
    std::vector<double> energies;    // ascending, first m eigenvalues
    std::vector<StateVector> states; // matching eigenvectors when requested

    double gap() const; // energies[1] - energies[0]; requires m >= 2
};

// Lowest m eigenvalues (and optional eigenvectors) of the dense 2^N x 2^N
// matrix. Dense diagonalization only; N <= 14 enforced.
SpectrumResult exact_spectrum(const AnnniParams& p, int m, bool want_states = false);

// |(e_vqe - e_exact) / e_exact|
double relative_energy_error(double e_vqe, double e_exact);

// Dense real symmetric matrix of a Y-free Pauli sum, row-major, dim 2^N.
// Shared by exact_spectrum and the test oracles.
std::vector<double> terms_to_dense(const std::vector<PauliString>& terms,
                                   int n_qubits);

} // namespace annni
