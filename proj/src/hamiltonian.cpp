#include "annni/hamiltonian.hpp"

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "annni/errors.hpp"

namespace annni {

namespace {
constexpr int kMaxDenseQubits = 14;
}

void AnnniParams::validate() const {
    if (n_spins < 2) throw validation_error("ANNNI chain needs at least 2 spins");
    if (n_spins % 2 != 0) throw validation_error("ANNNI chain length must be even");
    if (kappa < 0.0 || h < 0.0)
        throw validation_error("ANNNI couplings kappa and h must be nonnegative");
}

std::vector<PauliString> annni_terms(int n_spins, double kappa, double h) {
    if (n_spins < 2) throw validation_error("ANNNI chain needs at least 2 spins");
    std::vector<PauliString> terms;
    terms.reserve(3 * n_spins);
    for (int i = 0; i + 1 < n_spins; ++i)
        terms.emplace_back(1.0, std::vector<std::pair<int, Pauli>>{
                                    {i, Pauli::X}, {i + 1, Pauli::X}});
    if (kappa != 0.0) {
        for (int i = 0; i + 2 < n_spins; ++i)
            terms.emplace_back(kappa, std::vector<std::pair<int, Pauli>>{
                                          {i, Pauli::X}, {i + 2, Pauli::X}});
    }
    if (h != 0.0) {
        for (int i = 0; i < n_spins; ++i)
            terms.emplace_back(h, std::vector<std::pair<int, Pauli>>{{i, Pauli::Z}});
    }
    return terms;
}

std::vector<PauliString> build_annni(const AnnniParams& p) {
    p.validate();
    return annni_terms(p.n_spins, p.kappa, p.h);
}

std::vector<double> terms_to_dense(const std::vector<PauliString>& terms,
                                   int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxDenseQubits)
        throw resource_error("dense matrix limited to 1.." +
                             std::to_string(kMaxDenseQubits) + " qubits");
    const std::size_t dim = std::size_t{1} << n_qubits;
    std::vector<double> m(dim * dim, 0.0);
    for (const PauliString& term : terms) {
        term.validate(n_qubits);
        std::size_t flip = 0, sign_mask = 0;
        for (const auto& [q, p] : term.sites) {
            const std::size_t bit = std::size_t{1} << (n_qubits - 1 - q);
            switch (p) {
            case Pauli::X: flip |= bit; break;
            case Pauli::Z: sign_mask |= bit; break;
            case Pauli::Y:
                throw std::invalid_argument("terms_to_dense: Y not supported "
                                            "(matrix would be complex)");
            }
        }
        for (std::size_t col = 0; col < dim; ++col) {
            const bool neg = std::popcount(col & sign_mask) & 1;
            m[(col ^ flip) * dim + col] += neg ? -term.coefficient : term.coefficient;
        }
    }
    return m;
}

double SpectrumResult::gap() const {
    if (energies.size() < 2)
        throw std::out_of_range("gap requires at least two eigenvalues");
    return energies[1] - energies[0];
}

SpectrumResult exact_spectrum(const AnnniParams& p, int m, bool want_states) {
    p.validate();
    if (m < 1) throw validation_error("exact_spectrum: m must be >= 1");
    if (p.n_spins > kMaxDenseQubits)
        throw resource_error("exact_spectrum: dense diagonalization capped at N=" +
                             std::to_string(kMaxDenseQubits));
    const std::size_t dim = std::size_t{1} << p.n_spins;
    if (static_cast<std::size_t>(m) > dim)
        throw validation_error("exact_spectrum: m exceeds matrix dimension");

    const std::vector<double> dense = terms_to_dense(build_annni(p), p.n_spins);
    Eigen::Map<const Eigen::MatrixXd> mat(dense.data(), dim, dim);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        mat, want_states ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("exact_spectrum: eigensolver failed");

    SpectrumResult out;
    out.energies.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + m);
    if (want_states) {
        out.states.reserve(m);
        for (int k = 0; k < m; ++k) {
            std::vector<cdouble> amps(dim);
            for (std::size_t i = 0; i < dim; ++i)
                amps[i] = solver.eigenvectors()(i, k);
            out.states.emplace_back(p.n_spins, std::move(amps));
        }
    }
    return out;
}

double relative_energy_error(double e_vqe, double e_exact) {
    if (e_exact == 0.0)
        throw validation_error("relative_energy_error: exact energy is zero");
    return std::abs((e_vqe - e_exact) / e_exact);
}

} // namespace annni
