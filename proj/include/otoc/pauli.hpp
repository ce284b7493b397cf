#pragma once

#include <string>

#include "otoc/rbm.hpp"

namespace otoc {

enum class Pauli { x, y, z };

struct PauliOp {
    Pauli pauli = Pauli::x;
    int site = 0;
};

// Applies the operator through the RBM parameter-update rules. The sigma_x
// and sigma_y results equal the operator action exactly; sigma_z carries
// the global factor i noted in rbm.hpp.
RbmState apply_pauli(const RbmState& psi, PauliOp op);

char pauli_name(Pauli p);
Pauli pauli_from_name(const std::string& name);

}  // namespace otoc
