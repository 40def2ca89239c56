#include "annni/vqe.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <random>
#include <thread>

#include <nlohmann/json.hpp>

#include "annni/adam.hpp"
#include "annni/errors.hpp"

namespace annni {

namespace {

std::uint64_t point_seed(std::uint64_t seed, std::size_t idx) {
    return splitmix64(seed ^ splitmix64(idx + 0x706f696e74ULL));
}

} // namespace

Circuit HeaAnsatz::circuit() const {
    Circuit c;
    c.n_qubits = n_qubits;
    c.n_params = n_params();
    c.ops.reserve(static_cast<std::size_t>(depth + 1) * (2 * n_qubits - 1));
    for (int d = 0; d < depth; ++d) {
        for (int q = 0; q < n_qubits; ++q)
            c.ops.push_back(GateOp::ry(q, d * n_qubits + q));
        for (int q = 0; q + 1 < n_qubits; ++q)
            c.ops.push_back(GateOp::cnot(q, q + 1));
    }
    for (int q = 0; q < n_qubits; ++q)
        c.ops.push_back(GateOp::ry(q, depth * n_qubits + q));
    return c;
}

double VqeConfig::round_lr(int round) const {
    if (rounds <= 1) return lr_start;
    return lr_start + (lr_end - lr_start) * round / (rounds - 1);
}

void VqeConfig::validate() const {
    if (rounds < 1) throw validation_error("VqeConfig: rounds must be >= 1");
    if (steps_per_round < 0)
        throw validation_error("VqeConfig: steps_per_round must be >= 0");
    if (lr_start <= 0.0 || lr_end <= 0.0)
        throw validation_error("VqeConfig: learning rates must be positive");
    if (trace_stride < 1) throw validation_error("VqeConfig: trace_stride >= 1");
}

std::vector<double> random_angles(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-M_PI, M_PI);
    std::vector<double> out(n);
    for (double& v : out) v = dist(rng);
    return out;
}

VqeResult vqe_optimize(const AnnniParams& p, const HeaAnsatz& ansatz,
                       std::vector<double> init_params, const VqeConfig& cfg) {
    p.validate();
    cfg.validate();
    if (ansatz.n_qubits != p.n_spins)
        throw std::invalid_argument("vqe_optimize: ansatz/Hamiltonian size mismatch");
    if (init_params.size() != static_cast<std::size_t>(ansatz.n_params()))
        throw std::invalid_argument("vqe_optimize: init_params length must be " +
                                    std::to_string(ansatz.n_params()));

    const Circuit circuit = ansatz.circuit();
    const Observable ham = build_annni(p);

    VqeResult res;
    res.params = std::move(init_params);
    res.energy_trace.reserve(
        static_cast<std::size_t>(cfg.rounds) * cfg.steps_per_round / cfg.trace_stride + 1);

    std::vector<double> grad(circuit.n_params, 0.0);
    AdjointWorkspace ws;
    AdamOptimizer adam(res.params.size(), cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps);

    long step = 0;
    for (int round = 0; round < cfg.rounds; ++round) {
        adam.reset(); // each round is a fresh ADAM run at its own rate
        const double lr = cfg.round_lr(round);
        for (int s = 0; s < cfg.steps_per_round; ++s, ++step) {
            const double e = energy_and_gradient(circuit, res.params, ham, grad, ws);
            if (!std::isfinite(e))
                throw optimization_error("VQE energy diverged", step);
            for (double g : grad)
                if (!std::isfinite(g))
                    throw optimization_error("VQE gradient diverged", step);
            if (step % cfg.trace_stride == 0) res.energy_trace.push_back(e);
            adam.step(res.params, grad, lr);
        }
    }
    res.steps = step;

    StateVector psi(p.n_spins);
    psi.apply(circuit, res.params);
    res.energy = expectation(psi, ham);
    return res;
}

GridSpec make_grid(int nk, int nh) {
    if (nk < 1 || nh < 1) throw validation_error("grid needs at least one node per axis");
    GridSpec g;
    g.kappa.resize(nk);
    g.h.resize(nh);
    for (int i = 0; i < nk; ++i) g.kappa[i] = nk == 1 ? 0.0 : i * (1.0 / (nk - 1));
    for (int i = 0; i < nh; ++i) g.h[i] = nh == 1 ? 0.0 : i * (2.0 / (nh - 1));
    return g;
}

AnnniParams GroundStateDataset::params_at(std::size_t idx) const {
    const std::size_t nh = grid.h.size();
    return {n_qubits, grid.kappa[idx / nh], grid.h[idx % nh]};
}

StateVector GroundStateDataset::state(std::size_t idx) const {
    StateVector psi(n_qubits);
    psi.apply(ansatz().circuit(), entries.at(idx).params);
    return psi;
}

std::size_t GroundStateDataset::nearest_index(double kappa, double h) const {
    auto nearest = [](const std::vector<double>& axis, double v) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < axis.size(); ++i)
            if (std::abs(axis[i] - v) < std::abs(axis[best] - v)) best = i;
        return best;
    };
    return grid.index(nearest(grid.kappa, kappa), nearest(grid.h, h));
}

GroundStateDataset build_dataset(int n_qubits, int depth, const GridSpec& grid,
                                 const VqeConfig& cfg, Recycling recycling, int jobs,
                                 const ProgressFn& progress) {
    AnnniParams{n_qubits, 0.0, 0.0}.validate();
    cfg.validate();
    if (depth < 1) throw validation_error("build_dataset: depth must be >= 1");
    if (grid.kappa.empty() || grid.h.empty())
        throw validation_error("build_dataset: empty grid");

    GroundStateDataset ds;
    ds.n_qubits = n_qubits;
    ds.depth = depth;
    ds.grid = grid;
    ds.config = cfg;
    ds.recycling = recycling;
    ds.entries.resize(grid.points());

    const HeaAnsatz ansatz{n_qubits, depth};
    const std::size_t total = grid.points();

    auto solve_point = [&](std::size_t idx, std::vector<double> init) {
        const AnnniParams p = ds.params_at(idx);
        try {
            VqeResult r = vqe_optimize(p, ansatz, std::move(init), cfg);
            ds.entries[idx] = {std::move(r.params), r.energy,
                               std::numeric_limits<double>::quiet_NaN(),
                               std::numeric_limits<double>::quiet_NaN(), r.steps};
        } catch (const optimization_error& err) {
            throw optimization_error("grid point (kappa=" + std::to_string(p.kappa) +
                                         ", h=" + std::to_string(p.h) +
                                         "): " + err.what(),
                                     err.step());
        }
    };

    if (recycling == Recycling::Sweep) {
        // serpentine visit order; each point seeds from its predecessor
        std::vector<std::size_t> order;
        order.reserve(total);
        for (std::size_t ik = 0; ik < grid.kappa.size(); ++ik) {
            for (std::size_t j = 0; j < grid.h.size(); ++j) {
                const std::size_t ih = (ik % 2 == 0) ? j : grid.h.size() - 1 - j;
                order.push_back(grid.index(ik, ih));
            }
        }
        std::size_t done = 0;
        for (std::size_t k = 0; k < order.size(); ++k) {
            std::vector<double> init =
                k == 0 ? random_angles(ansatz.n_params(),
                                       point_seed(cfg.seed, order[0]))
                       : ds.entries[order[k - 1]].params;
            solve_point(order[k], std::move(init));
            if (progress) progress(++done, total);
        }
        return ds;
    }

    // Independent points, each with its own seed; safe to run in parallel.
    const int n_threads =
        std::max(1, std::min<int>(jobs, static_cast<int>(total)));
    if (n_threads == 1) {
        for (std::size_t idx = 0; idx < total; ++idx) {
            solve_point(idx, random_angles(ansatz.n_params(), point_seed(cfg.seed, idx)));
            if (progress) progress(idx + 1, total);
        }
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr first_error;
        std::mutex mtx;
        std::atomic<std::size_t> next{0}, done{0};
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t idx = next.fetch_add(1);
                    if (idx >= total) return;
                    try {
                        solve_point(idx, random_angles(ansatz.n_params(),
                                                       point_seed(cfg.seed, idx)));
                    } catch (...) {
                        std::lock_guard lock(mtx);
                        if (!first_error) first_error = std::current_exception();
                        return;
                    }
                    const std::size_t d = done.fetch_add(1) + 1;
                    if (progress) {
                        std::lock_guard lock(mtx);
                        progress(d, total);
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }
    return ds;
}

ValidationReport validate_dataset(GroundStateDataset& ds) {
    constexpr double kDegenerate = 1e-8;
    ValidationReport report;
    report.delta_e.resize(ds.entries.size());
    report.fidelity_exact.resize(ds.entries.size());

    const std::size_t dim = std::size_t{1} << ds.n_qubits;
    const int m = static_cast<int>(std::min<std::size_t>(dim, 8));

    double sum = 0.0;
    std::size_t below = 0;
    for (std::size_t idx = 0; idx < ds.entries.size(); ++idx) {
        const AnnniParams p = ds.params_at(idx);
        const SpectrumResult spec = exact_spectrum(p, m, /*want_states=*/true);
        DatasetEntry& e = ds.entries[idx];

        e.delta_e = relative_energy_error(e.energy, spec.energies[0]);
        const StateVector psi = ds.state(idx);
        double fid = 0.0;
        for (int k = 0; k < m; ++k) {
            if (spec.energies[k] - spec.energies[0] > kDegenerate) break;
            fid += fidelity(spec.states[k], psi);
        }
        e.fidelity_exact = fid;

        report.delta_e[idx] = e.delta_e;
        report.fidelity_exact[idx] = fid;
        report.max_delta_e = std::max(report.max_delta_e, e.delta_e);
        sum += e.delta_e;
        if (e.delta_e < 0.01) ++below;
    }
    report.mean_delta_e = sum / static_cast<double>(ds.entries.size());
    report.frac_below_1pc =
        static_cast<double>(below) / static_cast<double>(ds.entries.size());
    return report;
}

namespace {

nlohmann::json config_to_json(const VqeConfig& cfg) {
    return {{"rounds", cfg.rounds},
            {"steps_per_round", cfg.steps_per_round},
            {"lr_start", cfg.lr_start},
            {"lr_end", cfg.lr_end},
            {"adam_beta1", cfg.adam_beta1},
            {"adam_beta2", cfg.adam_beta2},
            {"adam_eps", cfg.adam_eps},
            {"seed", cfg.seed},
            {"trace_stride", cfg.trace_stride}};
}

VqeConfig config_from_json(const nlohmann::json& j) {
    VqeConfig cfg;
    cfg.rounds = j.at("rounds").get<int>();
    cfg.steps_per_round = j.at("steps_per_round").get<int>();
    cfg.lr_start = j.at("lr_start").get<double>();
    cfg.lr_end = j.at("lr_end").get<double>();
    cfg.adam_beta1 = j.at("adam_beta1").get<double>();
    cfg.adam_beta2 = j.at("adam_beta2").get<double>();
    cfg.adam_eps = j.at("adam_eps").get<double>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.trace_stride = j.at("trace_stride").get<int>();
    return cfg;
}

void write_doubles(std::ofstream& out, const double* data, std::size_t n) {
    out.write(reinterpret_cast<const char*>(data),
              static_cast<std::streamsize>(n * sizeof(double)));
}

void read_doubles(std::ifstream& in, double* data, std::size_t n) {
    in.read(reinterpret_cast<char*>(data),
            static_cast<std::streamsize>(n * sizeof(double)));
    if (!in) throw validation_error("dataset file truncated");
}

} // namespace

void save_dataset(const GroundStateDataset& ds, const std::string& path) {
    const std::size_t n_params = ds.ansatz().n_params();
    nlohmann::json header{{"format", "annni-gsd"},
                          {"version", 1},
                          {"n_qubits", ds.n_qubits},
                          {"depth", ds.depth},
                          {"grid_kappa", ds.grid.kappa},
                          {"grid_h", ds.grid.h},
                          {"recycling", ds.recycling == Recycling::Sweep ? "sweep" : "none"},
                          {"config", config_to_json(ds.config)},
                          {"n_params", n_params},
                          {"n_points", ds.entries.size()}};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << header.dump() << '\n';
    for (const DatasetEntry& e : ds.entries) {
        if (e.params.size() != n_params)
            throw std::invalid_argument("save_dataset: entry parameter length mismatch");
        write_doubles(out, e.params.data(), n_params);
        const double tail[4] = {e.energy, e.delta_e, e.fidelity_exact,
                                static_cast<double>(e.converged_steps)};
        write_doubles(out, tail, 4);
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

GroundStateDataset load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw validation_error("dataset file is empty");
    nlohmann::json header = nlohmann::json::parse(line, nullptr, false);
    if (header.is_discarded() || header.value("format", "") != "annni-gsd")
        throw validation_error("not an annni-gsd dataset file: " + path);
    if (header.at("version").get<int>() != 1)
        throw validation_error("unsupported dataset version");

    GroundStateDataset ds;
    ds.n_qubits = header.at("n_qubits").get<int>();
    ds.depth = header.at("depth").get<int>();
    ds.grid.kappa = header.at("grid_kappa").get<std::vector<double>>();
    ds.grid.h = header.at("grid_h").get<std::vector<double>>();
    ds.recycling = header.at("recycling").get<std::string>() == "sweep"
                       ? Recycling::Sweep
                       : Recycling::None;
    ds.config = config_from_json(header.at("config"));

    const std::size_t n_params = header.at("n_params").get<std::size_t>();
    const std::size_t n_points = header.at("n_points").get<std::size_t>();
    if (n_params != static_cast<std::size_t>(ds.ansatz().n_params()) ||
        n_points != ds.grid.points())
        throw validation_error("dataset header is inconsistent");

    ds.entries.resize(n_points);
    for (DatasetEntry& e : ds.entries) {
        e.params.resize(n_params);
        read_doubles(in, e.params.data(), n_params);
        double tail[4];
        read_doubles(in, tail, 4);
        e.energy = tail[0];
        e.delta_e = tail[1];
        e.fidelity_exact = tail[2];
        e.converged_steps = static_cast<long>(tail[3]);
    }
    return ds;
}

} // namespace annni
