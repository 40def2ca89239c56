#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "annni/phasemap.hpp"
#include "annni/qsim.hpp"
#include "annni/vqe.hpp"

namespace annni {

// One pooled pair: the first (measured) qubit is conditioned on, the second
// survives. Realized by deferred measurement: RX(phi) on the kept qubit,
// then CRY(theta1) conditioned on the measured qubit being |1> and
// CRY(theta0) conditioned on |0>. The measured qubit is never touched again.
struct PoolSpec {
    int measured = -1;
    int kept = -1;
    int p_phi = -1;
    int p_theta1 = -1;
    int p_theta0 = -1;
};

// Convolution sublayer C(theta) = RY(theta) x RY(theta): one angle shared by
// every pair of the sublayer.
struct ConvSpec {
    std::vector<std::array<int, 2>> pairs;
    int param = -1;
};

struct QcnnBlock {
    std::vector<int> active; // qubits entering the block
    ConvSpec conv_offset0;
    ConvSpec conv_offset1;
    std::vector<int> rot_params; // free RY column, one per active qubit
    std::vector<PoolSpec> pools;
    std::optional<int> passthrough; // odd leftover qubit, unpooled
};

// Architecture: initial free RY column on all qubits, then halving blocks
// until exactly two qubits remain, then the fully connected two-qubit gate
// F = (RY RX RY on each qubit) after CX. The two-qubit output marginal maps
// |00> -> garbage, |01> -> ferromagnetic, |10> -> paramagnetic,
// |11> -> antiphase, with final_active[0] as the most significant bit.
struct QcnnArchitecture {
    int n_qubits = 0;
    std::vector<int> initial_rot_params;
    std::vector<QcnnBlock> blocks;
    std::array<int, 2> final_active{-1, -1};
    std::array<int, 6> fc_params{};
    int n_params = 0;

    Circuit fragment() const;
};

// Supported sizes: even N >= 4, N <= 16.
QcnnArchitecture build_qcnn(int n_qubits);

struct PhasePrediction {
    // garbage, ferromagnetic, paramagnetic, antiphase
    std::array<double, 4> p{};

    PhaseLabel label() const; // argmax over the three physical classes
    double garbage_prob() const { return p[0]; }
};

PhasePrediction predict(const GroundStateDataset& ds, std::size_t idx,
                        const QcnnArchitecture& arch,
                        std::span<const double> qcnn_params);

// Mean over samples of -sum_j y_j log p_j with j running over the three
// physical classes; probabilities are clamped at 1e-12 before the log.
double cross_entropy(const std::vector<PhasePrediction>& predictions,
                     const std::vector<PhaseLabel>& labels);

struct TrainConfig {
    int epochs = 600;
    double lr = 0.08;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TrainingPoint {
    LabeledPoint sample;     // as drawn on the marginal axis
    std::size_t grid_index;  // nearest dataset node actually used
};

struct TrainedQcnn {
    QcnnArchitecture arch;
    std::vector<double> params;
    std::vector<double> loss_trace; // per epoch, before that epoch's update
    std::vector<TrainingPoint> points;
};

// Full-batch ADAM on the cross entropy through the composite circuit
// (baked VQE state preparation followed by the QCNN fragment).
TrainedQcnn train_qcnn(const GroundStateDataset& ds,
                       const std::vector<LabeledPoint>& training_set,
                       const TrainConfig& cfg);

struct Evaluation {
    double accuracy = 0.0;
    std::vector<PhasePrediction> grid; // kappa-major, h fastest
    std::vector<PhaseLabel> truth;     // analytical labels
    double mean_garbage = 0.0;
};

Evaluation evaluate(const GroundStateDataset& ds, const QcnnArchitecture& arch,
                    std::span<const double> params, int jobs = 1);

} // namespace annni
