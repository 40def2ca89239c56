#include "annni/qsim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "annni/errors.hpp"

namespace annni {

namespace {

constexpr cdouble kI{0.0, 1.0};

std::size_t qubit_mask(int n_qubits, int q) {
    return std::size_t{1} << (n_qubits - 1 - q);
}

// 2x2 unitary on one qubit, blocked over the partner stride.
void apply_1q(std::span<cdouble> amps, std::size_t mask, cdouble u00, cdouble u01,
              cdouble u10, cdouble u11) {
    const std::size_t dim = amps.size();
    for (std::size_t base = 0; base < dim; base += 2 * mask) {
        for (std::size_t i = base; i < base + mask; ++i) {
            const cdouble a0 = amps[i];
            const cdouble a1 = amps[i + mask];
            amps[i] = u00 * a0 + u01 * a1;
            amps[i + mask] = u10 * a0 + u11 * a1;
        }
    }
}

// RY restricted to the subspace where the control bit equals `value`.
void apply_controlled_ry(std::span<cdouble> amps, std::size_t cmask, std::size_t tmask,
                         int value, double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const std::size_t dim = amps.size();
    const std::size_t want = value ? cmask : 0;
    for (std::size_t base = 0; base < dim; base += 2 * tmask) {
        for (std::size_t i = base; i < base + tmask; ++i) {
            if ((i & cmask) != want) continue;
            const cdouble a0 = amps[i];
            const cdouble a1 = amps[i + tmask];
            amps[i] = c * a0 - s * a1;
            amps[i + tmask] = s * a0 + c * a1;
        }
    }
}

void apply_resolved(std::span<cdouble> amps, int n_qubits, const GateOp& op,
                    double theta) {
    switch (op.kind) {
    case GateKind::RX: {
        const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
        apply_1q(amps, qubit_mask(n_qubits, op.q0), c, -kI * s, -kI * s, c);
        break;
    }
    case GateKind::RY: {
        const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
        apply_1q(amps, qubit_mask(n_qubits, op.q0), c, -s, s, c);
        break;
    }
    case GateKind::RZ: {
        const cdouble e0 = std::exp(-kI * (theta / 2.0));
        const cdouble e1 = std::exp(kI * (theta / 2.0));
        apply_1q(amps, qubit_mask(n_qubits, op.q0), e0, 0.0, 0.0, e1);
        break;
    }
    case GateKind::CNOT: {
        const std::size_t cm = qubit_mask(n_qubits, op.q0);
        const std::size_t tm = qubit_mask(n_qubits, op.q1);
        for (std::size_t i = 0; i < amps.size(); ++i) {
            if ((i & cm) && !(i & tm)) std::swap(amps[i], amps[i | tm]);
        }
        break;
    }
    case GateKind::CZ: {
        const std::size_t both =
            qubit_mask(n_qubits, op.q0) | qubit_mask(n_qubits, op.q1);
        for (std::size_t i = 0; i < amps.size(); ++i) {
            if ((i & both) == both) amps[i] = -amps[i];
        }
        break;
    }
    case GateKind::CRY1:
        apply_controlled_ry(amps, qubit_mask(n_qubits, op.q0),
                            qubit_mask(n_qubits, op.q1), 1, theta);
        break;
    case GateKind::CRY0:
        apply_controlled_ry(amps, qubit_mask(n_qubits, op.q0),
                            qubit_mask(n_qubits, op.q1), 0, theta);
        break;
    }
}

void apply_circuit(std::span<cdouble> amps, const Circuit& c,
                   std::span<const double> params) {
    for (const GateOp& op : c.ops) {
        apply_resolved(amps, c.n_qubits, op,
                       is_rotation(op.kind) ? op.angle(params) : 0.0);
    }
}

void undo_gate(std::span<cdouble> amps, int n_qubits, const GateOp& op, double theta) {
    if (is_rotation(op.kind)) {
        apply_resolved(amps, n_qubits, op, -theta);
    } else {
        apply_resolved(amps, n_qubits, op, 0.0); // CNOT, CZ are involutions
    }
}

// Im <lam| G |psi> for the gate's generator G: the bare Pauli for RX/RY/RZ,
// the control-projected sy for CRY0/CRY1.
double generator_overlap_im(std::span<const cdouble> lam, std::span<const cdouble> psi,
                            int n_qubits, const GateOp& op) {
    const std::size_t dim = psi.size();
    double acc = 0.0;
    switch (op.kind) {
    case GateKind::RX: {
        const std::size_t m = qubit_mask(n_qubits, op.q0);
        for (std::size_t base = 0; base < dim; base += 2 * m) {
            for (std::size_t i = base; i < base + m; ++i) {
                // G psi = (psi1, psi0) on each pair
                acc += std::imag(std::conj(lam[i]) * psi[i + m] +
                                 std::conj(lam[i + m]) * psi[i]);
            }
        }
        return acc;
    }
    case GateKind::RY: {
        const std::size_t m = qubit_mask(n_qubits, op.q0);
        for (std::size_t base = 0; base < dim; base += 2 * m) {
            for (std::size_t i = base; i < base + m; ++i) {
                // G psi = (-i psi1, i psi0)
                acc += std::imag(std::conj(lam[i]) * (-kI * psi[i + m]) +
                                 std::conj(lam[i + m]) * (kI * psi[i]));
            }
        }
        return acc;
    }
    case GateKind::RZ: {
        const std::size_t m = qubit_mask(n_qubits, op.q0);
        for (std::size_t base = 0; base < dim; base += 2 * m) {
            for (std::size_t i = base; i < base + m; ++i) {
                acc += std::imag(std::conj(lam[i]) * psi[i] -
                                 std::conj(lam[i + m]) * psi[i + m]);
            }
        }
        return acc;
    }
    case GateKind::CRY1:
    case GateKind::CRY0: {
        const std::size_t cm = qubit_mask(n_qubits, op.q0);
        const std::size_t tm = qubit_mask(n_qubits, op.q1);
        const std::size_t want = op.kind == GateKind::CRY1 ? cm : 0;
        for (std::size_t base = 0; base < dim; base += 2 * tm) {
            for (std::size_t i = base; i < base + tm; ++i) {
                if ((i & cm) != want) continue;
                acc += std::imag(std::conj(lam[i]) * (-kI * psi[i + tm]) +
                                 std::conj(lam[i + tm]) * (kI * psi[i]));
            }
        }
        return acc;
    }
    default:
        throw std::invalid_argument("gate has no generator");
    }
}

// Shared reverse pass: lam must hold A|psi_final>, psi the final state.
void adjoint_backward(const Circuit& c, std::span<const double> params,
                      std::span<cdouble> psi, std::span<cdouble> lam,
                      std::span<double> grad_out) {
    std::fill(grad_out.begin(), grad_out.end(), 0.0);
    for (auto it = c.ops.rbegin(); it != c.ops.rend(); ++it) {
        const GateOp& op = *it;
        const double theta = is_rotation(op.kind) ? op.angle(params) : 0.0;
        if (is_rotation(op.kind) && op.param_index >= 0) {
            grad_out[op.param_index] += generator_overlap_im(lam, psi, c.n_qubits, op);
        }
        undo_gate(psi, c.n_qubits, op, theta);
        undo_gate(lam, c.n_qubits, op, theta);
    }
}

cdouble inner(std::span<const cdouble> a, std::span<const cdouble> b) {
    cdouble acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

} // namespace

bool is_rotation(GateKind k) {
    return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ ||
           k == GateKind::CRY1 || k == GateKind::CRY0;
}

const char* gate_name(GateKind k) {
    switch (k) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
    case GateKind::CRY1: return "CRY1";
    case GateKind::CRY0: return "CRY0";
    }
    return "?";
}

GateOp GateOp::rx(int q, int param) { return {GateKind::RX, q, -1, param, {}}; }
GateOp GateOp::ry(int q, int param) { return {GateKind::RY, q, -1, param, {}}; }
GateOp GateOp::rz(int q, int param) { return {GateKind::RZ, q, -1, param, {}}; }
GateOp GateOp::rx_fixed(int q, double a) { return {GateKind::RX, q, -1, -1, a}; }
GateOp GateOp::ry_fixed(int q, double a) { return {GateKind::RY, q, -1, -1, a}; }
GateOp GateOp::rz_fixed(int q, double a) { return {GateKind::RZ, q, -1, -1, a}; }
GateOp GateOp::cnot(int control, int target) {
    return {GateKind::CNOT, control, target, -1, {}};
}
GateOp GateOp::cz(int a, int b) { return {GateKind::CZ, a, b, -1, {}}; }
GateOp GateOp::cry(int control, int target, int param, int control_value) {
    return {control_value ? GateKind::CRY1 : GateKind::CRY0, control, target, param, {}};
}

double GateOp::angle(std::span<const double> params) const {
    if (fixed_angle) return *fixed_angle;
    if (param_index < 0 || static_cast<std::size_t>(param_index) >= params.size())
        throw std::out_of_range("missing parameter for " +
                                std::string(gate_name(kind)));
    return params[param_index];
}

void GateOp::validate(int n_qubits, int n_params) const {
    auto check_qubit = [&](int q) {
        if (q < 0 || q >= n_qubits)
            throw std::out_of_range("qubit index " + std::to_string(q) +
                                    " out of range for " + std::to_string(n_qubits) +
                                    " qubits");
    };
    check_qubit(q0);
    if (is_rotation(kind)) {
        const bool has_param = param_index >= 0;
        if (has_param == fixed_angle.has_value())
            throw std::invalid_argument(
                "rotation must carry exactly one of param_index / fixed_angle");
        if (has_param && param_index >= n_params)
            throw std::out_of_range("param_index out of range");
    } else {
        if (param_index >= 0 || fixed_angle)
            throw std::invalid_argument("CNOT/CZ carry no angle");
    }
    if (kind == GateKind::CNOT || kind == GateKind::CZ || kind == GateKind::CRY1 ||
        kind == GateKind::CRY0) {
        check_qubit(q1);
        if (q0 == q1) throw std::invalid_argument("two-qubit gate needs distinct qubits");
    }
}

void Circuit::validate() const {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
        throw resource_error("circuit must act on 1.." + std::to_string(kMaxQubits) +
                             " qubits");
    for (const GateOp& op : ops) op.validate(n_qubits, n_params);
}

Circuit concat(const Circuit& a, const Circuit& b) {
    if (a.n_qubits != b.n_qubits)
        throw std::invalid_argument("concat: qubit counts differ");
    Circuit out = a;
    out.n_params = a.n_params + b.n_params;
    out.ops.reserve(a.ops.size() + b.ops.size());
    for (GateOp op : b.ops) {
        if (op.param_index >= 0) op.param_index += a.n_params;
        out.ops.push_back(op);
    }
    return out;
}

Circuit bake(const Circuit& c, std::span<const double> params) {
    Circuit out;
    out.n_qubits = c.n_qubits;
    out.n_params = 0;
    out.ops.reserve(c.ops.size());
    for (GateOp op : c.ops) {
        if (is_rotation(op.kind)) {
            op.fixed_angle = op.angle(params);
            op.param_index = -1;
        }
        out.ops.push_back(op);
    }
    return out;
}

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
        throw resource_error("state vector limited to 1.." +
                             std::to_string(kMaxQubits) + " qubits");
    amps_.assign(std::size_t{1} << n_qubits, 0.0);
    amps_[0] = 1.0;
}

StateVector::StateVector(int n_qubits, std::vector<cdouble> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
        throw resource_error("state vector limited to 1.." +
                             std::to_string(kMaxQubits) + " qubits");
    if (amps_.size() != std::size_t{1} << n_qubits)
        throw std::invalid_argument("amplitude vector length must be 2^n_qubits");
}

void StateVector::apply(const GateOp& op, std::span<const double> params) {
    op.validate(n_qubits_, static_cast<int>(params.size()));
    apply_resolved(amps_, n_qubits_, op,
                   is_rotation(op.kind) ? op.angle(params) : 0.0);
}

void StateVector::apply(const Circuit& c, std::span<const double> params) {
    if (c.n_qubits != n_qubits_)
        throw std::invalid_argument("circuit/state qubit counts differ");
    if (static_cast<int>(params.size()) < c.n_params)
        throw std::out_of_range("parameter vector shorter than circuit n_params");
    apply_circuit(amps_, c, params);
}

double StateVector::norm_sq() const {
    double acc = 0.0;
    for (const cdouble& a : amps_) acc += std::norm(a);
    return acc;
}

double expectation(const StateVector& state, const Observable& observable) {
    for (const PauliString& t : observable) t.validate(state.n_qubits());
    std::vector<cdouble> h_psi(state.dim(), 0.0);
    apply_observable(observable, state.n_qubits(), state.amplitudes(), h_psi);
    const cdouble e = inner(state.amplitudes(), h_psi);
    if (std::abs(e.imag()) > 1e-10)
        throw std::runtime_error("expectation has imaginary residue " +
                                 std::to_string(e.imag()));
    return e.real();
}

std::vector<double> basis_probabilities(const StateVector& state,
                                        const std::vector<int>& qubits) {
    if (qubits.empty()) throw validation_error("basis_probabilities: empty qubit list");
    std::vector<std::size_t> masks;
    masks.reserve(qubits.size());
    for (int q : qubits) {
        if (q < 0 || q >= state.n_qubits())
            throw std::out_of_range("basis_probabilities: qubit out of range");
        const std::size_t m = qubit_mask(state.n_qubits(), q);
        if (std::find(masks.begin(), masks.end(), m) != masks.end())
            throw validation_error("basis_probabilities: duplicate qubit index");
        masks.push_back(m);
    }
    std::vector<double> probs(std::size_t{1} << qubits.size(), 0.0);
    const auto amps = state.amplitudes();
    for (std::size_t x = 0; x < amps.size(); ++x) {
        std::size_t outcome = 0;
        for (std::size_t m : masks) outcome = (outcome << 1) | ((x & m) ? 1 : 0);
        probs[outcome] += std::norm(amps[x]);
    }
    return probs;
}

double fidelity(const StateVector& a, const StateVector& b) {
    if (a.n_qubits() != b.n_qubits())
        throw std::invalid_argument("fidelity: qubit counts differ");
    return std::norm(inner(a.amplitudes(), b.amplitudes()));
}

double project_qubit(StateVector& state, int qubit, int outcome) {
    if (qubit < 0 || qubit >= state.n_qubits())
        throw std::out_of_range("project_qubit: qubit out of range");
    if (outcome != 0 && outcome != 1)
        throw std::invalid_argument("project_qubit: outcome must be 0 or 1");
    const std::size_t m = qubit_mask(state.n_qubits(), qubit);
    auto amps = state.amplitudes();
    double p = 0.0;
    for (std::size_t x = 0; x < amps.size(); ++x) {
        const bool keep = ((x & m) != 0) == (outcome == 1);
        if (keep) p += std::norm(amps[x]);
    }
    const double scale = p > 0.0 ? 1.0 / std::sqrt(p) : 0.0;
    for (std::size_t x = 0; x < amps.size(); ++x) {
        const bool keep = ((x & m) != 0) == (outcome == 1);
        amps[x] = keep ? amps[x] * scale : 0.0;
    }
    return p;
}

void apply_observable(const Observable& observable, int n_qubits,
                      std::span<const cdouble> in, std::span<cdouble> out) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    if (in.size() != dim || out.size() != dim)
        throw std::invalid_argument("apply_observable: dimension mismatch");
    for (const PauliString& term : observable) {
        std::size_t flip = 0, sign_mask = 0;
        int n_y = 0;
        for (const auto& [q, p] : term.sites) {
            const std::size_t m = qubit_mask(n_qubits, q);
            switch (p) {
            case Pauli::X: flip |= m; break;
            case Pauli::Y:
                flip |= m;
                sign_mask |= m;
                ++n_y;
                break;
            case Pauli::Z: sign_mask |= m; break;
            }
        }
        // per-Y factor is i*(-1)^bit; fold the i powers into one constant
        cdouble prefactor = term.coefficient;
        for (int k = 0; k < n_y; ++k) prefactor *= kI;
        for (std::size_t x = 0; x < dim; ++x) {
            const bool neg = std::popcount(x & sign_mask) & 1;
            out[x ^ flip] += (neg ? -prefactor : prefactor) * in[x];
        }
    }
}

double energy_and_gradient(const Circuit& c, std::span<const double> params,
                           const Observable& observable, std::span<double> grad_out,
                           AdjointWorkspace& ws) {
    const std::size_t dim = std::size_t{1} << c.n_qubits;
    if (grad_out.size() != static_cast<std::size_t>(c.n_params))
        throw std::invalid_argument("grad_out size must equal n_params");
    ws.psi.assign(dim, 0.0);
    ws.psi[0] = 1.0;
    apply_circuit(ws.psi, c, params);
    ws.lam.assign(dim, 0.0);
    apply_observable(observable, c.n_qubits, ws.psi, ws.lam);
    const double energy = inner(ws.psi, ws.lam).real();
    adjoint_backward(c, params, ws.psi, ws.lam, grad_out);
    return energy;
}

double energy_and_gradient(const Circuit& c, std::span<const double> params,
                           const Observable& observable, std::span<double> grad_out) {
    AdjointWorkspace ws;
    return energy_and_gradient(c, params, observable, grad_out, ws);
}

std::vector<double> gradient(const Circuit& c, std::span<const double> params,
                             const Observable& observable) {
    c.validate();
    for (const PauliString& t : observable) t.validate(c.n_qubits);
    std::vector<double> grad(c.n_params, 0.0);
    energy_and_gradient(c, params, observable, grad);
    return grad;
}

double loss_and_gradient(const Circuit& c, std::span<const double> params,
                         const std::vector<int>& qubits, const ProbLossFn& loss,
                         std::span<double> grad_out, AdjointWorkspace& ws) {
    if (!loss) throw validation_error("loss functional not specified");
    const std::size_t dim = std::size_t{1} << c.n_qubits;
    ws.psi.assign(dim, 0.0);
    ws.psi[0] = 1.0;
    apply_circuit(ws.psi, c, params);

    StateVector tmp(c.n_qubits, std::vector<cdouble>(ws.psi.begin(), ws.psi.end()));
    const std::vector<double> probs = basis_probabilities(tmp, qubits);
    std::vector<double> dloss(probs.size(), 0.0);
    const double value = loss(probs, dloss);

    // lam = A|psi> with A diagonal, A_xx = dloss/dp_{outcome(x)}
    std::vector<std::size_t> masks;
    masks.reserve(qubits.size());
    for (int q : qubits) masks.push_back(qubit_mask(c.n_qubits, q));
    ws.lam.assign(dim, 0.0);
    for (std::size_t x = 0; x < dim; ++x) {
        std::size_t outcome = 0;
        for (std::size_t m : masks) outcome = (outcome << 1) | ((x & m) ? 1 : 0);
        ws.lam[x] = dloss[outcome] * ws.psi[x];
    }
    adjoint_backward(c, params, ws.psi, ws.lam, grad_out);
    return value;
}

std::vector<double> gradient(const Circuit& c, std::span<const double> params,
                             const std::vector<int>& qubits, const ProbLossFn& loss,
                             double* loss_out) {
    c.validate();
    std::vector<double> grad(c.n_params, 0.0);
    AdjointWorkspace ws;
    const double value = loss_and_gradient(c, params, qubits, loss, grad, ws);
    if (loss_out) *loss_out = value;
    return grad;
}

} // namespace annni
