#include "annni/qcnn.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "annni/adam.hpp"
#include "annni/errors.hpp"

namespace annni {

namespace {
constexpr double kProbClamp = 1e-12;
} // namespace

QcnnArchitecture build_qcnn(int n_qubits) {
    if (n_qubits < 4 || n_qubits > kMaxQubits || n_qubits % 2 != 0)
        throw validation_error("build_qcnn: supported sizes are even N in [4, " +
                               std::to_string(kMaxQubits) + "]");

    QcnnArchitecture arch;
    arch.n_qubits = n_qubits;
    int pc = 0;

    arch.initial_rot_params.resize(n_qubits);
    for (int q = 0; q < n_qubits; ++q) arch.initial_rot_params[q] = pc++;

    std::vector<int> active(n_qubits);
    for (int q = 0; q < n_qubits; ++q) active[q] = q;

    while (active.size() > 2) {
        QcnnBlock block;
        block.active = active;

        block.conv_offset0.param = pc++;
        for (std::size_t i = 0; i + 1 < active.size(); i += 2)
            block.conv_offset0.pairs.push_back({active[i], active[i + 1]});
        block.conv_offset1.param = pc++;
        for (std::size_t i = 1; i + 1 < active.size(); i += 2)
            block.conv_offset1.pairs.push_back({active[i], active[i + 1]});

        block.rot_params.resize(active.size());
        for (int& p : block.rot_params) p = pc++;

        std::vector<int> next;
        for (std::size_t i = 0; i + 1 < active.size(); i += 2) {
            PoolSpec pool;
            pool.measured = active[i];
            pool.kept = active[i + 1];
            pool.p_phi = pc++;
            pool.p_theta1 = pc++;
            pool.p_theta0 = pc++;
            block.pools.push_back(pool);
            next.push_back(pool.kept);
        }
        if (active.size() % 2 != 0) {
            block.passthrough = active.back();
            next.push_back(active.back());
        }
        arch.blocks.push_back(std::move(block));
        active = std::move(next);
    }

    arch.final_active = {active[0], active[1]};
    for (int& p : arch.fc_params) p = pc++;
    arch.n_params = pc;
    return arch;
}

Circuit QcnnArchitecture::fragment() const {
    Circuit c;
    c.n_qubits = n_qubits;
    c.n_params = n_params;
    for (int q = 0; q < n_qubits; ++q)
        c.ops.push_back(GateOp::ry(q, initial_rot_params[q]));
    for (const QcnnBlock& b : blocks) {
        for (const auto& pair : b.conv_offset0.pairs) {
            c.ops.push_back(GateOp::ry(pair[0], b.conv_offset0.param));
            c.ops.push_back(GateOp::ry(pair[1], b.conv_offset0.param));
        }
        for (const auto& pair : b.conv_offset1.pairs) {
            c.ops.push_back(GateOp::ry(pair[0], b.conv_offset1.param));
            c.ops.push_back(GateOp::ry(pair[1], b.conv_offset1.param));
        }
        for (std::size_t i = 0; i < b.active.size(); ++i)
            c.ops.push_back(GateOp::ry(b.active[i], b.rot_params[i]));
        for (const PoolSpec& pool : b.pools) {
            c.ops.push_back(GateOp::rx(pool.kept, pool.p_phi));
            c.ops.push_back(GateOp::cry(pool.measured, pool.kept, pool.p_theta1, 1));
            c.ops.push_back(GateOp::cry(pool.measured, pool.kept, pool.p_theta0, 0));
        }
    }
    // F = (RY RX RY on each output qubit) applied after CX
    c.ops.push_back(GateOp::cnot(final_active[0], final_active[1]));
    for (int i = 0; i < 2; ++i) {
        const int q = final_active[i];
        c.ops.push_back(GateOp::ry(q, fc_params[3 * i]));
        c.ops.push_back(GateOp::rx(q, fc_params[3 * i + 1]));
        c.ops.push_back(GateOp::ry(q, fc_params[3 * i + 2]));
    }
    return c;
}

PhaseLabel PhasePrediction::label() const {
    int best = 1;
    for (int j = 2; j <= 3; ++j)
        if (p[j] > p[best]) best = j;
    return static_cast<PhaseLabel>(best - 1);
}

namespace {

PhasePrediction prediction_from_state(const StateVector& psi,
                                      const QcnnArchitecture& arch) {
    const std::vector<double> probs = basis_probabilities(
        psi, {arch.final_active[0], arch.final_active[1]});
    return PhasePrediction{{probs[0], probs[1], probs[2], probs[3]}};
}

} // namespace

PhasePrediction predict(const GroundStateDataset& ds, std::size_t idx,
                        const QcnnArchitecture& arch,
                        std::span<const double> qcnn_params) {
    if (ds.n_qubits != arch.n_qubits)
        throw std::invalid_argument("predict: dataset/architecture size mismatch");
    if (qcnn_params.size() != static_cast<std::size_t>(arch.n_params))
        throw std::invalid_argument("predict: parameter vector length must be " +
                                    std::to_string(arch.n_params));
    StateVector psi = ds.state(idx);
    psi.apply(arch.fragment(), qcnn_params);
    return prediction_from_state(psi, arch);
}

double cross_entropy(const std::vector<PhasePrediction>& predictions,
                     const std::vector<PhaseLabel>& labels) {
    if (predictions.empty() || predictions.size() != labels.size())
        throw std::invalid_argument("cross_entropy: size mismatch");
    double loss = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double p = predictions[i].p[static_cast<int>(labels[i]) + 1];
        loss -= std::log(std::max(p, kProbClamp));
    }
    return loss / static_cast<double>(predictions.size());
}

void TrainConfig::validate() const {
    if (epochs < 1) throw validation_error("TrainConfig: epochs must be >= 1");
    if (lr <= 0.0) throw validation_error("TrainConfig: lr must be positive");
}

TrainedQcnn train_qcnn(const GroundStateDataset& ds,
                       const std::vector<LabeledPoint>& training_set,
                       const TrainConfig& cfg) {
    cfg.validate();
    if (training_set.empty()) throw validation_error("train_qcnn: empty training set");

    TrainedQcnn model;
    model.arch = build_qcnn(ds.n_qubits);
    model.params = random_angles(model.arch.n_params, cfg.seed);
    model.loss_trace.reserve(cfg.epochs);

    const Circuit fragment = model.arch.fragment();
    const Circuit hea = ds.ansatz().circuit();
    const std::vector<int> out_qubits{model.arch.final_active[0],
                                      model.arch.final_active[1]};

    // snap samples to grid nodes; the label stays with the drawn point
    struct Sample {
        Circuit composite; // baked VQE prep + trainable fragment
        int label_outcome; // index into the 4-outcome marginal
    };
    std::vector<Sample> samples;
    samples.reserve(training_set.size());
    for (const LabeledPoint& pt : training_set) {
        const std::size_t idx = ds.nearest_index(pt.kappa, pt.h);
        model.points.push_back({pt, idx});
        samples.push_back({concat(bake(hea, ds.entries[idx].params), fragment),
                           static_cast<int>(pt.label) + 1});
    }

    AdamOptimizer adam(model.params.size(), cfg.adam_beta1, cfg.adam_beta2,
                       cfg.adam_eps);
    std::vector<double> grad(model.params.size());
    std::vector<double> grad_sample(model.params.size());
    AdjointWorkspace ws;
    const double inv_n = 1.0 / static_cast<double>(samples.size());

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double loss = 0.0;
        for (const Sample& s : samples) {
            const auto per_sample = [&](std::span<const double> probs,
                                        std::span<double> dp) {
                const double p = std::max(probs[s.label_outcome], kProbClamp);
                dp[s.label_outcome] = -1.0 / p;
                return -std::log(p);
            };
            loss += loss_and_gradient(s.composite, model.params, out_qubits,
                                      per_sample, grad_sample, ws);
            for (std::size_t i = 0; i < grad.size(); ++i)
                grad[i] += grad_sample[i];
        }
        loss *= inv_n;
        if (!std::isfinite(loss)) throw optimization_error("QCNN loss diverged", epoch);
        for (double& g : grad) g *= inv_n;
        model.loss_trace.push_back(loss);
        adam.step(model.params, grad, cfg.lr);
    }
    return model;
}

Evaluation evaluate(const GroundStateDataset& ds, const QcnnArchitecture& arch,
                    std::span<const double> params, int jobs) {
    if (params.size() != static_cast<std::size_t>(arch.n_params))
        throw std::invalid_argument("evaluate: parameter vector length mismatch");
    const std::size_t total = ds.entries.size();
    Evaluation ev;
    ev.grid.resize(total);
    ev.truth.resize(total);

    const Circuit fragment = arch.fragment();
    const Circuit hea = ds.ansatz().circuit();
    auto eval_point = [&](std::size_t idx) {
        StateVector psi(ds.n_qubits);
        psi.apply(hea, ds.entries[idx].params);
        psi.apply(fragment, params);
        ev.grid[idx] = prediction_from_state(psi, arch);
        const AnnniParams p = ds.params_at(idx);
        ev.truth[idx] = analytical_label(p.kappa, p.h);
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

    std::size_t correct = 0;
    double garbage = 0.0;
    for (std::size_t idx = 0; idx < total; ++idx) {
        if (ev.grid[idx].label() == ev.truth[idx]) ++correct;
        garbage += ev.grid[idx].garbage_prob();
    }
    ev.accuracy = static_cast<double>(correct) / static_cast<double>(total);
    ev.mean_garbage = garbage / static_cast<double>(total);
    return ev;
}

} // namespace annni
