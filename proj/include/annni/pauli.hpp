#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace annni {

enum class Pauli : std::uint8_t { X, Y, Z };

char pauli_char(Pauli p);

// One term of a Hermitian operator: coefficient times a tensor product of
// single-site Pauli matrices. Sites are (qubit, axis) pairs with strictly
// increasing, distinct qubit indices.
struct PauliString {
    double coefficient = 1.0;
    std::vector<std::pair<int, Pauli>> sites;

    PauliString() = default;
    PauliString(double coeff, std::vector<std::pair<int, Pauli>> s);

    // Throws std::invalid_argument on duplicate/negative sites or indices
    // >= n_qubits.
    void validate(int n_qubits) const;

    std::string to_string() const;
};

using Observable = std::vector<PauliString>;

} // namespace annni
