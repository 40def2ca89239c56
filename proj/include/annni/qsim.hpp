#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "annni/pauli.hpp"

namespace annni {

using cdouble = std::complex<double>;

// Dense amplitudes only; 2^16 complex doubles is the largest state we allow.
inline constexpr int kMaxQubits = 16;

enum class GateKind : std::uint8_t {
    RX,   // exp(-i theta sx / 2)
    RY,   // exp(-i theta sy / 2)
    RZ,   // exp(-i theta sz / 2)
    CNOT, // control q0, target q1
    CZ,   // symmetric
    CRY1, // RY on q1 when q0 is |1>
    CRY0  // RY on q1 when q0 is |0>
};

bool is_rotation(GateKind k);
const char* gate_name(GateKind k);

// A single gate. Rotations carry exactly one of param_index / fixed_angle;
// CNOT and CZ carry neither.
struct GateOp {
    GateKind kind{};
    int q0 = -1; // rotation target, or control of a two-qubit gate
    int q1 = -1; // target of a two-qubit gate
    int param_index = -1;
    std::optional<double> fixed_angle;

    static GateOp rx(int q, int param);
    static GateOp ry(int q, int param);
    static GateOp rz(int q, int param);
    static GateOp rx_fixed(int q, double angle);
    static GateOp ry_fixed(int q, double angle);
    static GateOp rz_fixed(int q, double angle);
    static GateOp cnot(int control, int target);
    static GateOp cz(int a, int b);
    static GateOp cry(int control, int target, int param, int control_value);

    // Angle of a resolved rotation; throws if a referenced parameter is
    // missing.
    double angle(std::span<const double> params) const;
    void validate(int n_qubits, int n_params) const;
};

// Ordered gate list with a parameter-index map. Qubit 0 is the most
// significant bit of the basis index throughout the toolkit.
struct Circuit {
    int n_qubits = 0;
    int n_params = 0;
    std::vector<GateOp> ops;

    void validate() const;
};

// b appended after a; b's parameter indices are shifted by a.n_params.
Circuit concat(const Circuit& a, const Circuit& b);

// All rotations resolved to fixed angles; the result has n_params == 0.
Circuit bake(const Circuit& c, std::span<const double> params);

class StateVector {
  public:
    explicit StateVector(int n_qubits); // |0...0>
    StateVector(int n_qubits, std::vector<cdouble> amplitudes);

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    std::span<const cdouble> amplitudes() const { return amps_; }
    std::span<cdouble> amplitudes() { return amps_; }

    void apply(const GateOp& op, std::span<const double> params = {});
    void apply(const Circuit& c, std::span<const double> params = {});

    double norm_sq() const;

  private:
    int n_qubits_;
    std::vector<cdouble> amps_;
};

// <psi|H|psi> for a Hermitian Pauli sum; the imaginary residue must stay
// below 1e-10 and is discarded.
double expectation(const StateVector& state, const Observable& observable);

// Marginal distribution over the listed qubits, all others traced out.
// The first listed qubit is the most significant bit of the outcome index.
std::vector<double> basis_probabilities(const StateVector& state,
                                        const std::vector<int>& qubits);

// |<a|b>|^2
double fidelity(const StateVector& a, const StateVector& b);

// Collapses `qubit` to `outcome`, renormalizes, and returns the Born
// probability of that branch. A zero-probability branch leaves the state
// zeroed and returns 0.
double project_qubit(StateVector& state, int qubit, int outcome);

// out += H|in>
void apply_observable(const Observable& observable, int n_qubits,
                      std::span<const cdouble> in, std::span<cdouble> out);

// Scalar loss over the marginal probabilities of designated qubits. The
// callback receives p, must fill dloss/dp, and returns the loss value.
using ProbLossFn =
    std::function<double(std::span<const double> probs, std::span<double> dloss_dp)>;

// Reverse-mode (adjoint) derivative of <psi(theta)|H|psi(theta)> for every
// parameter. Gates sharing a parameter index accumulate. Exact for the
// rotation generators, including the controlled rotations.
std::vector<double> gradient(const Circuit& c, std::span<const double> params,
                             const Observable& observable);

// Same pass but also returns the energy; grad_out.size() == c.n_params.
double energy_and_gradient(const Circuit& c, std::span<const double> params,
                           const Observable& observable, std::span<double> grad_out);

// Adjoint derivative of loss(basis_probabilities(qubits)).
std::vector<double> gradient(const Circuit& c, std::span<const double> params,
                             const std::vector<int>& qubits, const ProbLossFn& loss,
                             double* loss_out = nullptr);

// Reusable buffers for the optimization hot loops.
struct AdjointWorkspace {
    std::vector<cdouble> psi;
    std::vector<cdouble> lam;
};

double energy_and_gradient(const Circuit& c, std::span<const double> params,
                           const Observable& observable, std::span<double> grad_out,
                           AdjointWorkspace& ws);

double loss_and_gradient(const Circuit& c, std::span<const double> params,
                         const std::vector<int>& qubits, const ProbLossFn& loss,
                         std::span<double> grad_out, AdjointWorkspace& ws);

} // namespace annni
