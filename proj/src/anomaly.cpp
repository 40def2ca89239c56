#include "annni/anomaly.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "annni/adam.hpp"
#include "annni/errors.hpp"

namespace annni {

EncoderArchitecture build_encoder(int n_qubits) {
    if (n_qubits < 2 || n_qubits > kMaxQubits)
        throw validation_error("build_encoder: N must be in [2, " +
                               std::to_string(kMaxQubits) + "]");
    EncoderArchitecture arch;
    arch.n_qubits = n_qubits;
    arch.k = n_qubits / 2;
    for (int q = 0; q < arch.k; ++q) arch.q_kept.push_back(q);
    for (int q = arch.k; q < n_qubits; ++q) arch.q_trash.push_back(q);
    arch.n_params = n_qubits + arch.depth * n_qubits;
    return arch;
}

Circuit EncoderArchitecture::fragment() const {
    Circuit c;
    c.n_qubits = n_qubits;
    c.n_params = n_params;
    int pc = 0;
    for (int q = 0; q < n_qubits; ++q) c.ops.push_back(GateOp::ry(q, pc++));
    const int n_trash = static_cast<int>(q_trash.size());
    for (int layer = 0; layer < depth; ++layer) {
        // every kept qubit entangles a trash qubit; the pairing rotates
        // with the layer so each trash qubit is hit in every layer
        for (int i = 0; i < static_cast<int>(q_kept.size()); ++i)
            c.ops.push_back(GateOp::cnot(q_kept[i], q_trash[(i + layer) % n_trash]));
        for (std::size_t a = 0; a < q_trash.size(); ++a)
            for (std::size_t b = a + 1; b < q_trash.size(); ++b)
                c.ops.push_back(GateOp::cz(q_trash[a], q_trash[b]));
        for (int q = 0; q < n_qubits; ++q) c.ops.push_back(GateOp::rz(q, pc++));
    }
    return c;
}

namespace {

// score = (|q_trash| + sum_j <-Z_j>) / 2, so the trainable part is an
// ordinary expectation value
Observable trash_observable(const EncoderArchitecture& arch) {
    Observable obs;
    for (int j : arch.q_trash)
        obs.emplace_back(-0.5, std::vector<std::pair<int, Pauli>>{{j, Pauli::Z}});
    return obs;
}

} // namespace

double anomaly_score(const StateVector& state, const EncoderArchitecture& arch) {
    if (state.n_qubits() != arch.n_qubits)
        throw std::invalid_argument("anomaly_score: state/encoder size mismatch");
    return 0.5 * static_cast<double>(arch.q_trash.size()) +
           expectation(state, trash_observable(arch));
}

EncoderTrainResult train_encoder(const GroundStateDataset& ds,
                                 std::size_t reference_idx, const TrainConfig& cfg) {
    cfg.validate();
    constexpr double kConvergenceGate = 0.05;

    EncoderTrainResult res;
    res.arch = build_encoder(ds.n_qubits);
    const AnnniParams ref = ds.params_at(reference_idx);
    res.reference_near_critical = near_critical(ref.kappa, ref.h);

    const Circuit composite =
        concat(bake(ds.ansatz().circuit(), ds.entries.at(reference_idx).params),
               res.arch.fragment());
    const Observable obs = trash_observable(res.arch);
    const double offset = 0.5 * static_cast<double>(res.arch.q_trash.size());

    std::vector<double> params = random_angles(res.arch.n_params, cfg.seed);
    std::vector<double> grad(params.size());
    AdjointWorkspace ws;
    AdamOptimizer adam(params.size(), cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps);

    res.params = params;
    res.final_score = std::numeric_limits<double>::infinity();
    res.trace.reserve(cfg.epochs);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double score =
            offset + energy_and_gradient(composite, params, obs, grad, ws);
        if (!std::isfinite(score))
            throw optimization_error("encoder score diverged", epoch);
        res.trace.push_back(score);
        if (score < res.final_score) {
            res.final_score = score;
            res.params = params;
        }
        adam.step(params, grad, cfg.lr);
    }
    // one more look at the post-update parameters
    {
        StateVector psi(ds.n_qubits);
        psi.apply(composite, params);
        const double score = anomaly_score(psi, res.arch);
        if (score < res.final_score) {
            res.final_score = score;
            res.params = params;
        }
    }
    res.converged = res.final_score < kConvergenceGate;
    return res;
}

std::vector<double> score_map(const GroundStateDataset& ds,
                              const EncoderArchitecture& arch,
                              std::span<const double> params, int jobs) {
    if (params.size() != static_cast<std::size_t>(arch.n_params))
        throw std::invalid_argument("score_map: parameter vector length mismatch");
    const std::size_t total = ds.entries.size();
    std::vector<double> scores(total);
    const Circuit hea = ds.ansatz().circuit();
    const Circuit fragment = arch.fragment();

    auto eval_point = [&](std::size_t idx) {
        StateVector psi(ds.n_qubits);
        psi.apply(hea, ds.entries[idx].params);
        psi.apply(fragment, params);
        scores[idx] = anomaly_score(psi, arch);
    };

    const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(total)));
    if (n_threads == 1) {
        for (std::size_t idx = 0; idx < total; ++idx) eval_point(idx);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t idx = next.fetch_add(1);
                    if (idx >= total) return;
                    eval_point(idx);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    return scores;
}

} // namespace annni
