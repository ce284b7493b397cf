#include "otoc/pauli.hpp"

#include <stdexcept>

namespace otoc {

RbmState apply_pauli(const RbmState& psi, PauliOp op) {
    switch (op.pauli) {
        case Pauli::x: return apply_sigma_x(psi, op.site);
        case Pauli::y: return apply_sigma_y(psi, op.site);
        case Pauli::z: return apply_sigma_z(psi, op.site);
    }
    throw std::logic_error("pauli: unreachable");
}

char pauli_name(Pauli p) {
    switch (p) {
        case Pauli::x: return 'x';
        case Pauli::y: return 'y';
        case Pauli::z: return 'z';
    }
    return '?';
}

Pauli pauli_from_name(const std::string& name) {
    if (name == "x" || name == "X") return Pauli::x;
    if (name == "y" || name == "Y") return Pauli::y;
    if (name == "z" || name == "Z") return Pauli::z;
    throw std::invalid_argument("pauli: unknown operator name '" + name + "'");
}

}  // namespace otoc
