#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "annni/errors.hpp"
#include "annni/hamiltonian.hpp"
#include "annni/phasemap.hpp"
#include "test_helpers.hpp"

using namespace annni;
using annni::testing::kron_hamiltonian;

TEST_CASE("term lists of the open chain") {
    SUBCASE("kappa = h = 0 leaves only the nearest-neighbor bonds") {
        const auto terms = build_annni({4, 0.0, 0.0});
        REQUIRE(terms.size() == 3);
        for (const auto& t : terms) {
            CHECK(t.coefficient == 1.0);
            CHECK(t.sites.size() == 2);
            CHECK(t.sites[1].first - t.sites[0].first == 1);
        }
    }
    SUBCASE("term counting at N=4, kappa=0.5, h=1") {
        const auto terms = build_annni({4, 0.5, 1.0});
        int nn = 0, nnn = 0, field = 0;
        for (const auto& t : terms) {
            if (t.sites.size() == 1) {
                CHECK(t.coefficient == 1.0);
                ++field;
            } else if (t.sites[1].first - t.sites[0].first == 1) {
                CHECK(t.coefficient == 1.0);
                ++nn;
            } else {
                CHECK(std::abs(t.coefficient) == 0.5);
                ++nnn;
            }
        }
        CHECK(nn == 3);
        CHECK(nnn == 2);
        CHECK(field == 4);
    }
    SUBCASE("N=2 has no next-nearest pair") {
        for (const auto& t : build_annni({2, 0.7, 0.0}))
            CHECK(t.sites[1].first - t.sites[0].first == 1);
    }
    SUBCASE("odd N is rejected") {
        CHECK_THROWS_AS(build_annni({5, 0.0, 0.0}), validation_error);
    }
}

TEST_CASE("frustration: the two XX couplings compete") {
    // Classical check at h=0: below kappa=0.5 the x-Neel configuration wins,
    // above it the period-4 configuration does. With an unfrustrated sign
    // the same configuration would win everywhere and the whole phase
    // diagram would collapse.
    auto classical_energy = [](int n, double kappa, const std::vector<int>& s) {
        double e = 0.0;
        for (int i = 0; i + 1 < n; ++i) e += s[i] * s[i + 1];
        for (int i = 0; i + 2 < n; ++i) e += kappa * s[i] * s[i + 2];
        return e;
    };
    const int n = 8;
    std::vector<int> neel(n), period4(n);
    for (int i = 0; i < n; ++i) neel[i] = i % 2 == 0 ? 1 : -1;
    const int pat[4] = {1, -1, -1, 1};
    for (int i = 0; i < n; ++i) period4[i] = pat[i % 4];

    for (double kappa : {0.2, 0.8}) {
        const SpectrumResult spec = exact_spectrum({n, kappa, 0.0}, 1);
        const double expected = std::min(classical_energy(n, kappa, neel),
                                         classical_energy(n, kappa, period4));
        CHECK(spec.energies[0] == doctest::Approx(expected).epsilon(1e-10));
    }
    CHECK(classical_energy(n, 0.2, neel) < classical_energy(n, 0.2, period4));
    CHECK(classical_energy(n, 0.8, period4) < classical_energy(n, 0.8, neel));
}

TEST_CASE("exact spectrum oracle values") {
    SUBCASE("N=2, kappa=0, h=1: ground energy -sqrt(5)") {
        const SpectrumResult spec = exact_spectrum({2, 0.0, 1.0}, 2);
        CHECK(spec.energies[0] == doctest::Approx(-std::sqrt(5.0)).epsilon(1e-12));
    }
    SUBCASE("N=2, h=0: degenerate pair at -1") {
        const SpectrumResult spec = exact_spectrum({2, 0.0, 0.0}, 2);
        CHECK(spec.energies[0] == doctest::Approx(-1.0));
        CHECK(spec.gap() == doctest::Approx(0.0));
    }
    SUBCASE("h=0, kappa=0: all bonds satisfied, energy -(N-1)") {
        for (int n : {2, 4, 6}) {
            const SpectrumResult spec = exact_spectrum({n, 0.0, 0.0}, 1);
            CHECK(spec.energies[0] == doctest::Approx(-(n - 1.0)).epsilon(1e-12));
        }
    }
    SUBCASE("eigenvectors satisfy H psi = E psi") {
        const AnnniParams p{4, 0.3, 0.7};
        const SpectrumResult spec = exact_spectrum(p, 3, true);
        const Observable ham = build_annni(p);
        for (int k = 0; k < 3; ++k) {
            std::vector<cdouble> h_psi(spec.states[k].dim(), 0.0);
            apply_observable(ham, 4, spec.states[k].amplitudes(), h_psi);
            for (std::size_t i = 0; i < h_psi.size(); ++i)
                CHECK(std::abs(h_psi[i] - spec.energies[k] *
                                              spec.states[k].amplitudes()[i]) < 1e-9);
        }
    }
    SUBCASE("resource cap") {
        CHECK_THROWS_AS(exact_spectrum({16, 0.0, 0.0}, 1), resource_error);
    }
}

TEST_CASE("dense matrix is symmetric and matches the Kronecker oracle") {
    // even-N restriction relaxed for the matrix builder itself
    for (int n : {2, 3, 4}) {
        const auto terms = annni_terms(n, 0.37, 0.81);
        const auto dense = terms_to_dense(terms, n);
        const std::size_t dim = std::size_t{1} << n;
        Eigen::Map<const Eigen::MatrixXd> m(dense.data(), dim, dim);
        CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);

        const Eigen::MatrixXd oracle = kron_hamiltonian(terms, n);
        CHECK((m - oracle).cwiseAbs().maxCoeff() < 1e-10);

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> a(m);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> b(oracle);
        CHECK((a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("gap map: degeneracy only near h=0 and the boundary curves") {
    const int nk = 8, nh = 8;
    const double k_step = 1.0 / (nk - 1), h_step = 2.0 / (nh - 1);
    auto near_exempt_region = [&](double kappa, double h) {
        if (h <= h_step + 1e-12) return true;
        if (kappa < 0.5 && std::abs(h - h_ising(kappa)) <= h_step) return true;
        if (kappa > 0.5 && std::abs(h - h_commensurate(kappa)) <= h_step) return true;
        if (std::abs(kappa - 0.5) <= k_step && h <= 2.0 * h_step) return true;
        return false;
    };
    for (int ik = 0; ik < nk; ++ik) {
        for (int ih = 0; ih < nh; ++ih) {
            const double kappa = ik * k_step, h = ih * h_step;
            const SpectrumResult spec = exact_spectrum({6, kappa, h}, 2);
            if (!near_exempt_region(kappa, h)) {
                INFO("kappa=", kappa, " h=", h, " gap=", spec.gap());
                CHECK(spec.gap() > 1e-6);
            } else if (h == 0.0) {
                // bit-flip symmetry: exactly degenerate on the axis
                CHECK(spec.gap() < 1e-9);
            }
        }
    }
}

TEST_CASE("relative energy error") {
    CHECK(relative_energy_error(-9.9, -10.0) == doctest::Approx(0.01));
    CHECK(relative_energy_error(-10.0, -10.0) == 0.0);
    CHECK(relative_energy_error(-2.23, -2.2360679) ==
          doctest::Approx(0.002714).epsilon(1e-3));
    CHECK_THROWS_AS(relative_energy_error(1.0, 0.0), validation_error);
}
