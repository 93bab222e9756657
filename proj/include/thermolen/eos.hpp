#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <thermolen/errors.hpp>
#include <thermolen/state.hpp>

namespace thermolen {

/// Pressure as a truncated expansion in inverse molar volume,
///
///     p(T, v) = RT/v + RT*B/v^2 + RT*C/v^3 + ... + RT*Z/v^n,
///
/// or the excluded-volume variant p = RT/(v - b).  Coefficients are the
/// values at a fixed reference temperature; optional per-coefficient
/// temperature derivatives are consumed only by the response functions.
/// Instances are immutable after construction.
template <typename Scalar = double>
class VirialEos {
public:
    static constexpr int max_order = 8;

    /// Truncated expansion of order coefficients.size() + 1.
    /// An empty coefficient list gives the ideal gas.
    explicit VirialEos(Scalar gas_constant, std::vector<Scalar> coefficients = {})
        : gas_constant_(gas_constant), coefficients_(std::move(coefficients)) {
        if (!(gas_constant_ > Scalar(0)))
            throw ConfigError("gas constant must be positive");
        if (order() > max_order)
            throw ConfigError("truncation order exceeds supported maximum (8)");
    }

    /// p = RT/(v - b).  No series coefficients are allowed alongside b.
    static VirialEos quasi_ideal(Scalar gas_constant, Scalar excluded_volume) {
        VirialEos eos(gas_constant);
        if (!(excluded_volume >= Scalar(0)))
            throw ConfigError("excluded volume must be non-negative");
        eos.excluded_volume_ = excluded_volume;
        return eos;
    }

    /// Copy of this model carrying dX_k/dT (and optionally d2X_k/dT2) for
    /// each series coefficient.  List lengths must match the coefficients.
    VirialEos with_coefficient_derivatives(std::vector<Scalar> first,
                                           std::vector<Scalar> second = {}) const {
        if (excluded_volume_)
            throw ConfigError("excluded-volume model has no series coefficients");
        if (first.size() != coefficients_.size())
            throw ConfigError("coefficient dT list length must equal coefficient count");
        if (!second.empty() && second.size() != coefficients_.size())
            throw ConfigError("coefficient d2T list length must equal coefficient count");
        VirialEos eos(*this);
        eos.coeff_dT_ = std::move(first);
        if (!second.empty()) eos.coeff_d2T_ = std::move(second);
        return eos;
    }

    Scalar gas_constant() const { return gas_constant_; }
    /// Truncation order n >= 1 (n = 1 for both ideal and excluded-volume).
    int order() const { return static_cast<int>(coefficients_.size()) + 1; }
    const std::vector<Scalar>& coefficients() const { return coefficients_; }
    const std::optional<Scalar>& excluded_volume() const { return excluded_volume_; }
    const std::optional<std::vector<Scalar>>& coeff_dT() const { return coeff_dT_; }
    const std::optional<std::vector<Scalar>>& coeff_d2T() const { return coeff_d2T_; }

private:
    Scalar gas_constant_;
    std::vector<Scalar> coefficients_; // B, C, D, ... (values at the working temperature)
    std::optional<Scalar> excluded_volume_;
    std::optional<std::vector<Scalar>> coeff_dT_;
    std::optional<std::vector<Scalar>> coeff_d2T_;
};

/// Throws DomainError unless T > 0, v > 0 and v > b.
template <typename Scalar>
void validate_state(const VirialEos<Scalar>& eos, const StatePoint<Scalar>& s) {
    if (!(s.T > Scalar(0))) throw DomainError("temperature must be positive");
    if (!(s.v > Scalar(0))) throw DomainError("molar volume must be positive");
    if (eos.excluded_volume() && !(s.v > *eos.excluded_volume()))
        throw DomainError("molar volume must exceed the excluded volume");
}

template <typename Scalar>
Scalar pressure(const VirialEos<Scalar>& eos, const StatePoint<Scalar>& s) {
    validate_state(eos, s);
    const Scalar rt = eos.gas_constant() * s.T;
    if (eos.excluded_volume()) return rt / (s.v - *eos.excluded_volume());
    const Scalar inv_v = Scalar(1) / s.v;
    Scalar p = rt * inv_v;
    Scalar pw = inv_v;
    for (const Scalar c : eos.coefficients()) {
        pw *= inv_v;
        p += rt * c * pw;
    }
    return p;
}

/// Exact (dp/dv)_T, term-by-term:  -RT/v^2 - 2RT*B/v^3 - ... - n*RT*Z/v^(n+1),
/// or -RT/(v-b)^2.  Negative on mechanically stable states.
template <typename Scalar>
Scalar dp_dv(const VirialEos<Scalar>& eos, const StatePoint<Scalar>& s) {
    validate_state(eos, s);
    const Scalar rt = eos.gas_constant() * s.T;
    if (eos.excluded_volume()) {
        const Scalar d = s.v - *eos.excluded_volume();
        return -rt / (d * d);
    }
    const Scalar inv_v = Scalar(1) / s.v;
    Scalar pw = inv_v * inv_v;
    Scalar slope = rt * pw; // accumulates -(dp/dv)
    Scalar k = Scalar(2);
    for (const Scalar c : eos.coefficients()) {
        pw *= inv_v;
        slope += k * rt * c * pw;
        k += Scalar(1);
    }
    return -slope;
}

/// Exact (dp/dT)_v including coefficient temperature derivatives:
/// each term RT*X_k(T)/v^k differentiates to R*(X_k + T*dX_k/dT)/v^k.
/// Requires coefficient dT data whenever series coefficients exist.
template <typename Scalar>
Scalar dp_dT(const VirialEos<Scalar>& eos, const StatePoint<Scalar>& s) {
    validate_state(eos, s);
    const Scalar r = eos.gas_constant();
    if (eos.excluded_volume()) return r / (s.v - *eos.excluded_volume());
    if (!eos.coefficients().empty() && !eos.coeff_dT())
        throw ConfigError("coefficient temperature derivatives required for dp_dT; "
                          "supply coeff_dT (zeros for constant coefficients)");
    const Scalar inv_v = Scalar(1) / s.v;
    Scalar d = r * inv_v;
    Scalar pw = inv_v;
    for (std::size_t i = 0; i < eos.coefficients().size(); ++i) {
        pw *= inv_v;
        d += r * (eos.coefficients()[i] + s.T * (*eos.coeff_dT())[i]) * pw;
    }
    return d;
}

namespace detail {

/// Antiderivative of p at fixed T:  RT*[ln v - sum_k X_k / ((k-1) v^(k-1))],
/// or RT*ln(v - b).  Work is always a difference of this, which makes it
/// exactly antisymmetric in the volume pair.
template <typename Scalar>
Scalar work_antiderivative(const VirialEos<Scalar>& eos, Scalar T, Scalar v) {
    using std::log;
    const Scalar rt = eos.gas_constant() * T;
    if (eos.excluded_volume()) return rt * log(v - *eos.excluded_volume());
    const Scalar inv_v = Scalar(1) / v;
    Scalar a = log(v);
    Scalar pw = Scalar(1);
    Scalar km1 = Scalar(1);
    for (const Scalar c : eos.coefficients()) {
        pw *= inv_v;
        a -= c * pw / km1;
        km1 += Scalar(1);
    }
    return rt * a;
}

} // namespace detail

/// Isothermal work int_{v1}^{v2} p dv via the closed-form antiderivative.
template <typename Scalar>
Scalar work(const VirialEos<Scalar>& eos, Scalar T, Scalar v1, Scalar v2) {
    validate_state(eos, StatePoint<Scalar>{T, v1});
    validate_state(eos, StatePoint<Scalar>{T, v2});
    return detail::work_antiderivative(eos, T, v2) - detail::work_antiderivative(eos, T, v1);
}

/// f(T, v) - f(T, v_ref) = -int_{v_ref}^{v} p dv'.  The additive function
/// of temperature alone is never materialized.
template <typename Scalar>
Scalar helmholtz_relative(const VirialEos<Scalar>& eos, Scalar T, Scalar v_ref, Scalar v) {
    return -work(eos, T, v_ref, v);
}

} // namespace thermolen
