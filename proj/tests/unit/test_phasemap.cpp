#include <doctest.h>

#include <cmath>
#include <set>

#include "annni/phasemap.hpp"

using namespace annni;

TEST_CASE("transition-line formulas") {
    CHECK(h_ising(0.0) == 1.0); // removable singularity
    CHECK(h_ising(0.25) == doctest::Approx(3.0 * (1.0 - std::sqrt(2.0 / 3.0))));
    CHECK(h_ising(0.25) == doctest::Approx(0.5505).epsilon(1e-3));
    CHECK(h_ising(0.4999) == doctest::Approx(0.0).epsilon(1e-2));
    CHECK(h_ising(1e-9) == doctest::Approx(1.0).epsilon(1e-6));

    CHECK(h_commensurate(0.75) == doctest::Approx(1.05 * std::sqrt(0.25 * 0.65)));
    CHECK(h_commensurate(0.75) == doctest::Approx(0.4233).epsilon(1e-3));
    CHECK(h_commensurate(1.0) == doctest::Approx(0.7045).epsilon(1e-3));
    CHECK(h_commensurate(0.5 + 1e-9) == doctest::Approx(0.0).epsilon(1e-3));

    CHECK(h_bkt(0.5) == 0.0);
    CHECK(h_pe(0.5) == doctest::Approx(0.0));
    CHECK(h_pe(0.25) == doctest::Approx(0.75));

    CHECK_THROWS_AS(h_ising(0.5), std::domain_error);
    CHECK_THROWS_AS(h_ising(-0.1), std::domain_error);
    CHECK_THROWS_AS(h_commensurate(0.5), std::domain_error);
    CHECK_THROWS_AS(h_pe(0.0), std::domain_error);
}

TEST_CASE("analytical labels") {
    CHECK(analytical_label(0.0, 0.5) == PhaseLabel::Ferromagnetic);
    CHECK(analytical_label(0.0, 1.5) == PhaseLabel::Paramagnetic);
    CHECK(analytical_label(0.75, 0.0) == PhaseLabel::Antiphase);
    CHECK(analytical_label(0.75, 1.9) == PhaseLabel::Paramagnetic);
    CHECK(analytical_label(0.5, 0.0) == PhaseLabel::Ferromagnetic); // tie-break
    CHECK(analytical_label(0.5, 0.1) == PhaseLabel::Paramagnetic);
    CHECK_THROWS_AS(analytical_label(1.2, 0.5), std::domain_error);
    CHECK_THROWS_AS(analytical_label(0.5, 2.5), std::domain_error);
}

TEST_CASE("boundary continuity at the multicritical point") {
    CHECK(h_ising(0.499999) < 1e-4);
    CHECK(h_commensurate(0.500001) < 1e-2);
}

TEST_CASE("samplers stay on the marginal axes with consistent labels") {
    for (SamplerScheme scheme : {SamplerScheme::GC, SamplerScheme::G2, SamplerScheme::U}) {
        const auto points = sample_training_set({scheme, 37, 0.05, 42});
        CHECK(points.size() == 37);
        for (const LabeledPoint& pt : points) {
            const bool on_axis = pt.kappa == 0.0 || pt.h == 0.0;
            CHECK(on_axis);
            CHECK(pt.label == axis_label(pt.kappa, pt.h));
            CHECK(pt.kappa >= 0.0);
            CHECK(pt.kappa <= 1.0);
            CHECK(pt.h >= 0.0);
            CHECK(pt.h <= 2.0);
        }
    }
}

TEST_CASE("U splits evenly across the two segments") {
    const auto points = sample_training_set({SamplerScheme::U, 2, 0.05, 1});
    REQUIRE(points.size() == 2);
    CHECK(points[0].kappa == 0.0);
    CHECK(points[1].h == 0.0);

    const auto odd = sample_training_set({SamplerScheme::U, 7, 0.05, 1});
    int on_ising_axis = 0;
    for (const auto& pt : odd)
        if (pt.kappa == 0.0) ++on_ising_axis;
    CHECK(on_ising_axis == 4); // remainder goes to the earlier segment
}

TEST_CASE("GC with sigma=0 hits the critical anchors and the tie-breaks") {
    const auto points = sample_training_set({SamplerScheme::GC, 4, 0.0, 9});
    REQUIRE(points.size() == 4);
    CHECK(points[0].kappa == 0.0);
    CHECK(points[0].h == 1.0);
    CHECK(points[0].label == PhaseLabel::Ferromagnetic); // lower-h phase
    CHECK(points[2].kappa == 0.5);
    CHECK(points[2].h == 0.0);
    CHECK(points[2].label == PhaseLabel::Ferromagnetic); // lower-kappa phase
}

TEST_CASE("G2 splits n across the four mid-phase anchors") {
    const auto points = sample_training_set({SamplerScheme::G2, 40, 0.05, 3});
    int near[4] = {0, 0, 0, 0};
    for (const auto& pt : points) {
        if (pt.kappa == 0.0 && std::abs(pt.h - 1.5) < 0.5) ++near[0];
        if (pt.kappa == 0.0 && std::abs(pt.h - 0.5) < 0.5) ++near[1];
        if (pt.h == 0.0 && std::abs(pt.kappa - 0.25) < 0.2) ++near[2];
        if (pt.h == 0.0 && std::abs(pt.kappa - 0.75) < 0.2) ++near[3];
    }
    for (int c : near) CHECK(c == 10);
}

TEST_CASE("samplers are deterministic under a fixed seed") {
    const SamplerSpec spec{SamplerScheme::G2, 12, 0.05, 2024};
    const auto a = sample_training_set(spec);
    const auto b = sample_training_set(spec);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].kappa == b[i].kappa);
        CHECK(a[i].h == b[i].h);
    }
}

TEST_CASE("one-hot encoding") {
    const LabeledPoint pt{0.0, 0.2, PhaseLabel::Ferromagnetic};
    CHECK(pt.one_hot() == std::array<double, 3>{1.0, 0.0, 0.0});
}

TEST_CASE("fidelity matrix on a slice") {
    // tiny dataset, fast budget
    VqeConfig cfg;
    cfg.rounds = 2;
    cfg.steps_per_round = 60;
    cfg.seed = 8;
    const GroundStateDataset ds =
        build_dataset(4, 3, make_grid(4, 3), cfg, Recycling::Sweep);

    const FidelityMatrix m = fidelity_matrix(ds, {SliceSpec::Axis::FixedH, 0.29});
    CHECK(m.size() == 4);
    CHECK(m.snapped_value == ds.grid.h[0]); // nearest node to 0.29 on {0,1,2}
    for (std::size_t i = 0; i < m.size(); ++i) {
        CHECK(m.at(i, i) == 1.0);
        for (std::size_t j = 0; j < m.size(); ++j) {
            CHECK(m.at(i, j) == doctest::Approx(m.at(j, i)).epsilon(1e-12));
            CHECK(m.at(i, j) >= 0.0);
            CHECK(m.at(i, j) <= 1.0 + 1e-12);
        }
    }

    const FidelityMatrix mk = fidelity_matrix(ds, {SliceSpec::Axis::FixedKappa, 1.0});
    CHECK(mk.size() == 3);
}
