#include "annni/pauli.hpp"

#include <algorithm>
#include <stdexcept>

namespace annni {

char pauli_char(Pauli p) {
    switch (p) {
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
    }
    return '?';
}

PauliString::PauliString(double coeff, std::vector<std::pair<int, Pauli>> s)
    : coefficient(coeff), sites(std::move(s)) {
    std::sort(sites.begin(), sites.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
}

void PauliString::validate(int n_qubits) const {
    if (sites.empty()) throw std::invalid_argument("PauliString: empty site list");
    int prev = -1;
    for (const auto& [q, p] : sites) {
        (void)p;
        if (q < 0 || q >= n_qubits)
            throw std::out_of_range("PauliString: site index out of range");
        if (q == prev) throw std::invalid_argument("PauliString: duplicate site");
        prev = q;
    }
}

std::string PauliString::to_string() const {
    std::string out = std::to_string(coefficient) + " *";
    for (const auto& [q, p] : sites) {
        out += ' ';
        out += pauli_char(p);
        out += std::to_string(q);
    }
    return out;
}

} // namespace annni
