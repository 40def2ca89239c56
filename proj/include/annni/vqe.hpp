#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "annni/hamiltonian.hpp"
#include "annni/qsim.hpp"

namespace annni {

// Hardware-efficient ansatz: D repetitions of one RY column (independent
// parameters) followed by the linear CNOT chain CX_{i,i+1}, 0 <= i < N-1,
// closed by one final RY column. Without the final column the circuit ends
// in bare CNOTs and cannot adjust the last local frames, which caps the
// reachable accuracy near the antiphase boundary at the percent level.
// n_params = N * (D + 1) exactly.
struct HeaAnsatz {
    int n_qubits = 0;
    int depth = 0;

    // D = N/2 + 3 reproduces the reference depths D=6 at N=6 and D=9 at N=12.
    static int default_depth(int n_qubits) { return n_qubits / 2 + 3; }

    int n_params() const { return n_qubits * (depth + 1); }
    Circuit circuit() const;
};

struct VqeConfig {
    int rounds = 5;
    int steps_per_round = 1000;
    double lr_start = 0.3;
    double lr_end = 0.1;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    std::uint64_t seed = 0;
    int trace_stride = 1; // record every k-th step energy

    // Learning rate of round r: linear interpolation from lr_start to lr_end.
    double round_lr(int round) const;
    void validate() const;
};

struct VqeResult {
    std::vector<double> params;
    double energy = 0.0;
    std::vector<double> energy_trace;
    long steps = 0;
};

// rounds x steps_per_round ADAM updates on <psi(theta)|H|psi(theta)>; each
// round restarts the ADAM moments at that round's learning rate.
VqeResult vqe_optimize(const AnnniParams& p, const HeaAnsatz& ansatz,
                       std::vector<double> init_params, const VqeConfig& cfg);

// Uniform angles in [-pi, pi) from a dedicated stream.
std::vector<double> random_angles(std::size_t n, std::uint64_t seed);

struct GridSpec {
    std::vector<double> kappa; // ascending in [0, 1]
    std::vector<double> h;     // ascending in [0, 2]

    std::size_t points() const { return kappa.size() * h.size(); }
    std::size_t index(std::size_t ik, std::size_t ih) const {
        return ik * h.size() + ih;
    }
};

// nk x nh nodes, linspace over the phase-diagram window [0,1] x [0,2].
GridSpec make_grid(int nk, int nh);

enum class Recycling : std::uint8_t { None, Sweep };

struct DatasetEntry {
    std::vector<double> params;
    double energy = 0.0;
    double delta_e = std::numeric_limits<double>::quiet_NaN();
    double fidelity_exact = std::numeric_limits<double>::quiet_NaN();
    long converged_steps = 0;
};

struct GroundStateDataset {
    int n_qubits = 0;
    int depth = 0;
    GridSpec grid;
    VqeConfig config;
    Recycling recycling = Recycling::Sweep;
    std::vector<DatasetEntry> entries; // kappa-major, h fastest

    HeaAnsatz ansatz() const { return {n_qubits, depth}; }
    AnnniParams params_at(std::size_t idx) const;
    // The prepared VQE state |psi(theta; kappa, h)>.
    StateVector state(std::size_t idx) const;
    std::size_t nearest_index(double kappa, double h) const;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

// Serpentine kappa-major sweep (alternating h direction). With
// Recycling::Sweep every point after the first starts from the converged
// parameters of its serpentine predecessor, which is always a grid
// 4-neighbor; with Recycling::None every point starts from seeded random
// angles and points may be solved in parallel.
GroundStateDataset build_dataset(int n_qubits, int depth, const GridSpec& grid,
                                 const VqeConfig& cfg, Recycling recycling,
                                 int jobs = 1, const ProgressFn& progress = {});

struct ValidationReport {
    std::vector<double> delta_e;        // per point, kappa-major
    std::vector<double> fidelity_exact; // vs the degenerate ground subspace
    double max_delta_e = 0.0;
    double mean_delta_e = 0.0;
    double frac_below_1pc = 0.0;
};

// Fills delta_e / fidelity_exact on the dataset entries via exact
// diagonalization. At a degenerate ground level the fidelity is taken
// against the projector onto the whole subspace.
ValidationReport validate_dataset(GroundStateDataset& ds);

// Single-file layout: one JSON header line, then fixed-size little-endian
// float64 records per grid point (params, energy, delta_e, fidelity_exact,
// converged_steps); see README for the exact layout.
void save_dataset(const GroundStateDataset& ds, const std::string& path);
GroundStateDataset load_dataset(const std::string& path);

} // namespace annni
