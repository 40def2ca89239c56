#pragma once

#include <cstdint>
#include <vector>

#include "annni/qcnn.hpp"
#include "annni/qsim.hpp"
#include "annni/vqe.hpp"

namespace annni {

// Quantum autoencoder: one free RY column on all qubits, then D = 3 layers
// of CX_{i in q_kept -> j in q_trash} (cyclic pairing shifted by the layer
// index), CZ between all trash pairs, and an independent RZ column.
// n_params = 4N.
struct EncoderArchitecture {
    int n_qubits = 0;
    int k = 0; // kept-register size, floor(N/2)
    std::vector<int> q_kept;
    std::vector<int> q_trash;
    int depth = 3;
    int n_params = 0;

    Circuit fragment() const;
};

EncoderArchitecture build_encoder(int n_qubits);

// C = 1/2 sum_{j in q_trash} (1 - <Z_j>), the expected Hamming weight of the
// trash register; bounded by [0, N - k].
double anomaly_score(const StateVector& state, const EncoderArchitecture& arch);

struct EncoderTrainResult {
    EncoderArchitecture arch;
    std::vector<double> params; // best seen during training
    double final_score = 0.0;   // score of the returned params
    std::vector<double> trace;  // per-epoch score
    bool converged = false;     // final_score < 0.05
    bool reference_near_critical = false;
};

// ADAM minimizes the anomaly score of the reference dataset state. If the
// budget runs out before the 0.05 gate the best parameters seen are still
// returned, with converged = false.
EncoderTrainResult train_encoder(const GroundStateDataset& ds,
                                 std::size_t reference_idx, const TrainConfig& cfg);

// Anomaly score of every grid point's VQE state through the encoder.
std::vector<double> score_map(const GroundStateDataset& ds,
                              const EncoderArchitecture& arch,
                              std::span<const double> params, int jobs = 1);

} // namespace annni
