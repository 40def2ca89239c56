#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "annni/errors.hpp"
#include "annni/qcnn.hpp"
#include "test_helpers.hpp"

using namespace annni;
using annni::testing::branch_enumeration_marginal;

namespace {

GroundStateDataset tiny_dataset(int n_qubits, int nk, int nh, std::uint64_t seed,
                                int steps = 80) {
    VqeConfig cfg;
    cfg.rounds = 2;
    cfg.steps_per_round = steps;
    cfg.seed = seed;
    return build_dataset(n_qubits, HeaAnsatz::default_depth(n_qubits),
                         make_grid(nk, nh), cfg, Recycling::Sweep);
}

} // namespace

TEST_CASE("architecture halves the active register down to two qubits") {
    SUBCASE("N=6: 6 -> 3 -> 2, two blocks") {
        const QcnnArchitecture arch = build_qcnn(6);
        REQUIRE(arch.blocks.size() == 2);
        CHECK(arch.blocks[0].active == std::vector<int>{0, 1, 2, 3, 4, 5});
        CHECK(arch.blocks[1].active == std::vector<int>{1, 3, 5});
        CHECK(arch.blocks[1].passthrough == 5);
        CHECK(arch.final_active == std::array<int, 2>{3, 5});
        // 6 initial + (2+6+9) + (2+3+3) + 6 fully connected
        CHECK(arch.n_params == 37);
    }
    SUBCASE("N=12: 12 -> 6 -> 3 -> 2, three blocks") {
        const QcnnArchitecture arch = build_qcnn(12);
        CHECK(arch.blocks.size() == 3);
        CHECK(arch.blocks[1].active.size() == 6);
        CHECK(arch.blocks[2].active.size() == 3);
    }
    SUBCASE("N=4: one block") {
        const QcnnArchitecture arch = build_qcnn(4);
        CHECK(arch.blocks.size() == 1);
        CHECK(arch.final_active == std::array<int, 2>{1, 3});
        CHECK(arch.n_params == 4 + (2 + 4 + 6) + 6);
    }
    SUBCASE("unsupported sizes") {
        CHECK_THROWS_AS(build_qcnn(5), validation_error);
        CHECK_THROWS_AS(build_qcnn(2), validation_error);
    }
}

TEST_CASE("convolution sublayers share one angle per offset") {
    const QcnnArchitecture arch = build_qcnn(6);
    const QcnnBlock& b0 = arch.blocks[0];
    CHECK(b0.conv_offset0.pairs ==
          std::vector<std::array<int, 2>>{{0, 1}, {2, 3}, {4, 5}});
    CHECK(b0.conv_offset1.pairs == std::vector<std::array<int, 2>>{{1, 2}, {3, 4}});
    const QcnnBlock& b1 = arch.blocks[1];
    CHECK(b1.conv_offset0.pairs == std::vector<std::array<int, 2>>{{1, 3}});
    CHECK(b1.conv_offset1.pairs == std::vector<std::array<int, 2>>{{3, 5}});
}

TEST_CASE("measured qubits are never touched again") {
    for (int n : {4, 6, 8, 12}) {
        const QcnnArchitecture arch = build_qcnn(n);
        std::set<int> measured;
        for (const QcnnBlock& b : arch.blocks)
            for (const PoolSpec& pool : b.pools) measured.insert(pool.measured);
        // once a measured qubit has been conditioned on, it may appear only
        // as a CRY control
        std::set<int> conditioned;
        for (const GateOp& op : arch.fragment().ops) {
            const bool is_cry =
                op.kind == GateKind::CRY1 || op.kind == GateKind::CRY0;
            if (is_cry && measured.count(op.q0)) {
                conditioned.insert(op.q0);
                CHECK(conditioned.count(op.q1) == 0);
                continue;
            }
            CHECK(conditioned.count(op.q0) == 0);
            if (op.q1 >= 0) CHECK(conditioned.count(op.q1) == 0);
        }
        CHECK(conditioned == measured);
    }
}

TEST_CASE("zero-angle fragment reduces to the fully connected CX") {
    const QcnnArchitecture arch = build_qcnn(6);
    const std::vector<double> zeros(arch.n_params, 0.0);

    std::mt19937_64 rng(5);
    const Circuit prep = annni::testing::random_circuit(rng, 6, 25, 5);
    std::vector<double> prep_params(5);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double& p : prep_params) p = dist(rng);

    StateVector via_fragment(6);
    via_fragment.apply(prep, prep_params);
    via_fragment.apply(arch.fragment(), zeros);

    StateVector direct(6);
    direct.apply(prep, prep_params);
    direct.apply(GateOp::cnot(arch.final_active[0], arch.final_active[1]));

    for (std::size_t i = 0; i < direct.dim(); ++i)
        CHECK(std::abs(via_fragment.amplitudes()[i] - direct.amplitudes()[i]) < 1e-12);
}

TEST_CASE("deferred measurement equals explicit branch enumeration") {
    // the module's core correctness oracle: N=4, 20 random parameter sets
    const QcnnArchitecture arch = build_qcnn(4);
    std::mt19937_64 rng(314159);
    std::uniform_real_distribution<double> dist(-M_PI, M_PI);
    for (int trial = 0; trial < 20; ++trial) {
        StateVector input(4);
        const Circuit prep = annni::testing::random_circuit(rng, 4, 18, 6);
        std::vector<double> prep_params(6);
        for (double& p : prep_params) p = dist(rng);
        input.apply(prep, prep_params);

        std::vector<double> params(arch.n_params);
        for (double& p : params) p = dist(rng);

        StateVector deferred = input;
        deferred.apply(arch.fragment(), params);
        const std::vector<double> via_circuit =
            basis_probabilities(deferred, {arch.final_active[0], arch.final_active[1]});
        const std::vector<double> via_branches =
            branch_enumeration_marginal(input, arch, params);
        for (int m = 0; m < 4; ++m)
            CHECK(std::abs(via_circuit[m] - via_branches[m]) < 1e-10);
    }
}

TEST_CASE("predictions are normalized and expose the physical argmax") {
    const GroundStateDataset ds = tiny_dataset(4, 3, 3, 21);
    const QcnnArchitecture arch = build_qcnn(4);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> dist(-M_PI, M_PI);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> params(arch.n_params);
        for (double& p : params) p = dist(rng);
        for (std::size_t idx = 0; idx < ds.entries.size(); ++idx) {
            const PhasePrediction pred = predict(ds, idx, arch, params);
            double sum = 0.0;
            for (double p : pred.p) {
                CHECK(p >= -1e-12);
                sum += p;
            }
            CHECK(std::abs(sum - 1.0) < 1e-10);
            const int arg = static_cast<int>(pred.label()) + 1;
            CHECK(pred.p[arg] >= pred.p[1]);
            CHECK(pred.p[arg] >= pred.p[2]);
            CHECK(pred.p[arg] >= pred.p[3]);
        }
    }
    // parameter-length mismatch is structural
    CHECK_THROWS_AS(predict(ds, 0, arch, std::vector<double>(3, 0.0)),
                    std::invalid_argument);
}

TEST_CASE("cross entropy oracle values") {
    std::vector<PhasePrediction> preds;
    std::vector<PhaseLabel> labels;

    preds.push_back({{0.0, 1.0, 0.0, 0.0}});
    labels.push_back(PhaseLabel::Ferromagnetic);
    CHECK(cross_entropy(preds, labels) == doctest::Approx(0.0));

    preds[0] = {{0.25, 0.25, 0.25, 0.25}};
    CHECK(cross_entropy(preds, labels) == doctest::Approx(std::log(4.0)));
    CHECK(cross_entropy(preds, labels) == doctest::Approx(1.3863).epsilon(1e-4));

    preds[0] = {{0.2, 0.5, 0.2, 0.1}};
    CHECK(cross_entropy(preds, labels) == doctest::Approx(-std::log(0.5)));
    CHECK(cross_entropy(preds, labels) == doctest::Approx(0.6931).epsilon(1e-4));

    // clamp keeps zero probabilities finite
    preds[0] = {{1.0, 0.0, 0.0, 0.0}};
    CHECK(std::isfinite(cross_entropy(preds, labels)));
}

TEST_CASE("one training epoch moves the parameters") {
    const GroundStateDataset ds = tiny_dataset(4, 3, 3, 13);
    TrainConfig cfg;
    cfg.epochs = 1;
    cfg.seed = 4;
    const std::vector<LabeledPoint> pts = sample_training_set({SamplerScheme::U, 6, 0.05, 4});
    const TrainedQcnn model = train_qcnn(ds, pts, cfg);
    const std::vector<double> init = random_angles(model.arch.n_params, cfg.seed);
    CHECK(model.params != init);
    CHECK(model.loss_trace.size() == 1);
    CHECK(model.points.size() == 6);

    CHECK_THROWS_AS(train_qcnn(ds, {}, cfg), validation_error);
}

TEST_CASE("training reduces the loss (statistical over 3 seeds)") {
    const GroundStateDataset ds = tiny_dataset(4, 5, 5, 99, 120);
    double first = 0.0, last = 0.0;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        TrainConfig cfg;
        cfg.epochs = 60;
        cfg.seed = seed;
        const auto pts = sample_training_set({SamplerScheme::U, 10, 0.05, seed});
        const TrainedQcnn model = train_qcnn(ds, pts, cfg);
        first += model.loss_trace.front() / 3.0;
        last += model.loss_trace.back() / 3.0;
    }
    INFO("mean first=", first, " mean last=", last);
    CHECK(last <= first);
}

TEST_CASE("training points snap to grid nodes and keep their labels") {
    const GroundStateDataset ds = tiny_dataset(4, 5, 5, 55);
    TrainConfig cfg;
    cfg.epochs = 1;
    cfg.seed = 2;
    const auto pts = sample_training_set({SamplerScheme::G2, 8, 0.05, 2});
    const TrainedQcnn model = train_qcnn(ds, pts, cfg);
    for (const TrainingPoint& tp : model.points) {
        CHECK(tp.grid_index == ds.nearest_index(tp.sample.kappa, tp.sample.h));
        CHECK(tp.sample.label == axis_label(tp.sample.kappa, tp.sample.h));
    }
}

TEST_CASE("evaluate counts argmax agreement with the analytical labels") {
    const GroundStateDataset ds = tiny_dataset(4, 4, 4, 33);
    const QcnnArchitecture arch = build_qcnn(4);
    const std::vector<double> params = random_angles(arch.n_params, 77);
    const Evaluation ev = evaluate(ds, arch, params);
    CHECK(ev.grid.size() == 16);
    CHECK(ev.truth.size() == 16);
    std::size_t agree = 0;
    for (std::size_t i = 0; i < 16; ++i)
        if (ev.grid[i].label() == ev.truth[i]) ++agree;
    CHECK(ev.accuracy == doctest::Approx(agree / 16.0));
    // evaluation is deterministic and thread-count independent
    const Evaluation ev2 = evaluate(ds, arch, params, 2);
    CHECK(ev2.accuracy == ev.accuracy);
    for (std::size_t i = 0; i < 16; ++i)
        CHECK(ev2.grid[i].p == ev.grid[i].p);
}
