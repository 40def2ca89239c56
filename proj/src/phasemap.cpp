#include "annni/phasemap.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "annni/errors.hpp"

namespace annni {

const char* phase_name(PhaseLabel label) {
    switch (label) {
    case PhaseLabel::Ferromagnetic: return "ferromagnetic";
    case PhaseLabel::Paramagnetic: return "paramagnetic";
    case PhaseLabel::Antiphase: return "antiphase";
    }
    return "?";
}

double h_ising(double kappa) {
    if (kappa < 0.0 || kappa >= 0.5)
        throw std::domain_error("h_ising defined for kappa in [0, 0.5)");
    if (kappa == 0.0) return 1.0; // removable singularity
    const double radicand = (1.0 - 3.0 * kappa + 4.0 * kappa * kappa) / (1.0 - kappa);
    return (1.0 - kappa) / kappa * (1.0 - std::sqrt(radicand));
}

double h_commensurate(double kappa) {
    if (kappa <= 0.5)
        throw std::domain_error("h_commensurate defined for kappa > 0.5");
    return 1.05 * std::sqrt((kappa - 0.5) * (kappa - 0.1));
}

double h_bkt(double kappa) { return 1.05 * (kappa - 0.5); }

double h_pe(double kappa) {
    if (kappa <= 0.0) throw std::domain_error("h_pe defined for kappa > 0");
    return 1.0 / (4.0 * kappa) - kappa;
}

PhaseLabel analytical_label(double kappa, double h) {
    if (kappa < 0.0 || kappa > 1.0 || h < 0.0 || h > 2.0)
        throw std::domain_error("analytical_label window is [0,1] x [0,2]");
    // points exactly on a line take the lower-h phase
    if (kappa < 0.5)
        return h <= h_ising(kappa) ? PhaseLabel::Ferromagnetic
                                   : PhaseLabel::Paramagnetic;
    if (kappa > 0.5)
        return h <= h_commensurate(kappa) ? PhaseLabel::Antiphase
                                          : PhaseLabel::Paramagnetic;
    // multicritical column: both boundaries reach h = 0
    return h > 0.0 ? PhaseLabel::Paramagnetic : PhaseLabel::Ferromagnetic;
}

bool near_critical(double kappa, double h, double tol) {
    if (std::hypot(kappa - 0.5, h) < tol) return true;
    if (kappa < 0.5 && std::abs(h - h_ising(kappa)) < tol) return true;
    if (kappa > 0.5 && std::abs(h - h_commensurate(kappa)) < tol) return true;
    return false;
}

const char* scheme_name(SamplerScheme s) {
    switch (s) {
    case SamplerScheme::GC: return "gc";
    case SamplerScheme::G2: return "g2";
    case SamplerScheme::U: return "u";
    }
    return "?";
}

std::array<double, 3> LabeledPoint::one_hot() const {
    std::array<double, 3> y{0.0, 0.0, 0.0};
    y[static_cast<int>(label)] = 1.0;
    return y;
}

PhaseLabel axis_label(double kappa, double h) {
    // exact critical points take the lower-h / lower-kappa phase
    if (kappa == 0.0)
        return h <= 1.0 ? PhaseLabel::Ferromagnetic : PhaseLabel::Paramagnetic;
    if (h == 0.0)
        return kappa <= 0.5 ? PhaseLabel::Ferromagnetic : PhaseLabel::Antiphase;
    throw std::domain_error("axis_label: point is not on a marginal axis");
}

namespace {

struct Anchor {
    double kappa, h;
    bool along_h; // Gaussian displacement along h (kappa = 0 axis) or kappa
};

// n split across m buckets, remainder to the earlier ones
std::vector<int> even_split(int n, int m) {
    std::vector<int> counts(m, n / m);
    for (int i = 0; i < n % m; ++i) ++counts[i];
    return counts;
}

} // namespace

std::vector<LabeledPoint> sample_training_set(const SamplerSpec& spec) {
    if (spec.n < 1) throw validation_error("sampler needs n >= 1");
    if (spec.sigma < 0.0) throw validation_error("sampler sigma must be >= 0");

    std::mt19937_64 rng(spec.seed);
    std::vector<LabeledPoint> out;
    out.reserve(spec.n);

    auto push = [&](double kappa, double h) {
        out.push_back({kappa, h, axis_label(kappa, h)});
    };

    if (spec.scheme == SamplerScheme::U) {
        const std::vector<int> counts = even_split(spec.n, 2);
        std::uniform_real_distribution<double> on_h(0.0, 2.0);
        std::uniform_real_distribution<double> on_kappa(0.0, 1.0);
        for (int i = 0; i < counts[0]; ++i) push(0.0, on_h(rng));
        for (int i = 0; i < counts[1]; ++i) push(on_kappa(rng), 0.0);
        return out;
    }

    const std::vector<Anchor> anchors =
        spec.scheme == SamplerScheme::GC
            ? std::vector<Anchor>{{0.0, 1.0, true}, {0.5, 0.0, false}}
            : std::vector<Anchor>{{0.0, 1.5, true},
                                  {0.0, 0.5, true},
                                  {0.25, 0.0, false},
                                  {0.75, 0.0, false}};
    const std::vector<int> counts = even_split(spec.n, static_cast<int>(anchors.size()));
    std::normal_distribution<double> noise(0.0, 1.0);
    for (std::size_t a = 0; a < anchors.size(); ++a) {
        for (int i = 0; i < counts[a]; ++i) {
            const double d = spec.sigma * noise(rng);
            if (anchors[a].along_h) {
                push(0.0, std::clamp(anchors[a].h + d, 0.0, 2.0));
            } else {
                push(std::clamp(anchors[a].kappa + d, 0.0, 1.0), 0.0);
            }
        }
    }
    return out;
}

FidelityMatrix fidelity_matrix(const GroundStateDataset& ds, const SliceSpec& slice) {
    const bool fixed_h = slice.axis == SliceSpec::Axis::FixedH;
    const std::vector<double>& fixed_axis = fixed_h ? ds.grid.h : ds.grid.kappa;
    const std::vector<double>& free_axis = fixed_h ? ds.grid.kappa : ds.grid.h;

    std::size_t fixed_idx = 0;
    for (std::size_t i = 1; i < fixed_axis.size(); ++i)
        if (std::abs(fixed_axis[i] - slice.value) <
            std::abs(fixed_axis[fixed_idx] - slice.value))
            fixed_idx = i;

    FidelityMatrix out;
    out.slice = slice;
    out.snapped_value = fixed_axis[fixed_idx];
    out.axis_values = free_axis;

    std::vector<StateVector> states;
    states.reserve(free_axis.size());
    for (std::size_t i = 0; i < free_axis.size(); ++i)
        states.push_back(
            ds.state(fixed_h ? ds.grid.index(i, fixed_idx) : ds.grid.index(fixed_idx, i)));

    const std::size_t n = states.size();
    out.values.assign(n * n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double f = fidelity(states[i], states[j]);
            out.values[i * n + j] = f;
            out.values[j * n + i] = f;
        }
    }
    return out;
}

} // namespace annni
