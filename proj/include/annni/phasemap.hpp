#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "annni/vqe.hpp"

namespace annni {

enum class PhaseLabel : std::uint8_t { Ferromagnetic = 0, Paramagnetic = 1, Antiphase = 2 };

const char* phase_name(PhaseLabel label);

// Ising transition line, valid for kappa in [0, 0.5); the removable
// singularity at kappa = 0 evaluates to the Ising critical field h = 1.
double h_ising(double kappa);

// Commensurate-incommensurate line for kappa > 0.5.
double h_commensurate(double kappa);

// Overlay-only lines: never used as classification truth.
double h_bkt(double kappa);
double h_pe(double kappa); // kappa > 0

// Three-phase ground truth on the window [0,1] x [0,2]. Ties on the
// boundary lines resolve to the lower-h phase; (0.5, 0) resolves to
// Ferromagnetic.
PhaseLabel analytical_label(double kappa, double h);

// Rough proximity check against the transition lines and the multicritical
// point, used to warn about poor anomaly-detection reference choices.
bool near_critical(double kappa, double h, double tol = 0.15);

enum class SamplerScheme : std::uint8_t { GC, G2, U };

const char* scheme_name(SamplerScheme s);

// Marginal-axis training-set sampler. Gaussian schemes draw a 1-D normal
// displacement along the anchor's axis, clipped to the segment; U draws
// uniformly on the two segments {0} x [0,2] and [0,1] x {0}. n is the total
// sample count, split evenly across anchors/segments with the remainder
// going to the earlier ones.
struct SamplerSpec {
    SamplerScheme scheme = SamplerScheme::U;
    int n = 0;
    double sigma = 0.05;
    std::uint64_t seed = 0;
};

struct LabeledPoint {
    double kappa = 0.0;
    double h = 0.0;
    PhaseLabel label = PhaseLabel::Ferromagnetic;

    std::array<double, 3> one_hot() const;
};

// Label restricted to the integrable axes: on kappa = 0, Ferromagnetic iff
// h <= 1; on h = 0, Ferromagnetic iff kappa <= 0.5, Antiphase otherwise.
PhaseLabel axis_label(double kappa, double h);

std::vector<LabeledPoint> sample_training_set(const SamplerSpec& spec);

struct SliceSpec {
    enum class Axis : std::uint8_t { FixedH, FixedKappa };
    Axis axis = Axis::FixedH;
    double value = 0.0;
};

struct FidelityMatrix {
    SliceSpec slice;
    double snapped_value = 0.0;      // grid node actually used
    std::vector<double> axis_values; // coordinates along the varying axis
    std::vector<double> values;      // row-major square, unit diagonal

    std::size_t size() const { return axis_values.size(); }
    double at(std::size_t i, std::size_t j) const { return values[i * size() + j]; }
};

// Pairwise |<psi_i|psi_j>|^2 between all VQE states on a grid slice. The
// fixed coordinate snaps to the nearest grid node.
FidelityMatrix fidelity_matrix(const GroundStateDataset& ds, const SliceSpec& slice);

} // namespace annni
