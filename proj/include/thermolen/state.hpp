#pragma once

#include <Eigen/Dense>

namespace thermolen {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

/// A point (T, v) on the equilibrium surface, in K and m^3/mol.
template <typename Scalar = double>
struct StatePoint {
    Scalar T;
    Scalar v;
};

/// Sign class of a tangent vector under the Helmholtz metric.
enum class CausalCharacter {
    volume_like,      ///< positive squared length
    temperature_like, ///< negative squared length
    null_like         ///< squared length zero within tolerance
};

inline const char* to_string(CausalCharacter c) {
    switch (c) {
        case CausalCharacter::volume_like: return "volume_like";
        case CausalCharacter::temperature_like: return "temperature_like";
        case CausalCharacter::null_like: return "null_like";
    }
    return "unknown";
}

/// Displacement (dT, dv) at a state point together with its sign class.
template <typename Scalar = double>
struct TangentVector {
    Scalar dT;
    Scalar dv;
    CausalCharacter character;
};

} // namespace thermolen
