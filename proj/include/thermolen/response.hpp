#pragma once

#include <cmath>
#include <functional>

#include <thermolen/eos.hpp>
#include <thermolen/errors.hpp>
#include <thermolen/state.hpp>

namespace thermolen {

/// The four response functions at a state point.  kappa_T and c_v are
/// positive on mechanically stable states; c_p is tied to the others by
/// c_p - c_v = v*T*alpha^2 / kappa_T.
template <typename Scalar = double>
struct ResponseSet {
    Scalar c_v;     ///< molar heat capacity at constant volume
    Scalar c_p;     ///< molar heat capacity at constant pressure
    Scalar alpha;   ///< thermal expansion coefficient, 1/K
    Scalar kappa_T; ///< isothermal compressibility, 1/Pa
};

/// Residual of the c_p identity, |c_p - c_v - v*T*alpha^2/kappa_T|.
template <typename Scalar>
Scalar mayer_residual(const ResponseSet<Scalar>& r, const StatePoint<Scalar>& s) {
    using std::abs;
    return abs(r.c_p - r.c_v - s.v * s.T * r.alpha * r.alpha / r.kappa_T);
}

/// Heat-capacity model for c_v(T): a user constant or a linear function
/// of temperature.  The equation of state itself fixes alpha and kappa_T;
/// c_v is the one response the pressure surface cannot determine.
template <typename Scalar = double>
class CvModel {
public:
    static CvModel constant(Scalar value) { return CvModel(value, Scalar(0)); }
    static CvModel linear_in_T(Scalar offset, Scalar slope) { return CvModel(offset, slope); }

    Scalar operator()(Scalar T) const { return offset_ + slope_ * T; }
    Scalar offset() const { return offset_; }
    Scalar slope() const { return slope_; }

private:
    CvModel(Scalar offset, Scalar slope) : offset_(offset), slope_(slope) {}
    Scalar offset_;
    Scalar slope_;
};

/// Response functions derived from the equation of state:
///
///     kappa_T = -1 / (v * (dp/dv)_T)
///     alpha   = -(dp/dT)_v / (v * (dp/dv)_T)
///     c_p     = c_v + v*T*alpha^2 / kappa_T   (identity by construction)
///
/// Requires (dp/dv)_T < 0; series models additionally need coefficient
/// temperature-derivative data (zeros for constant coefficients).
template <typename Scalar>
ResponseSet<Scalar> from_eos(const VirialEos<Scalar>& eos, const StatePoint<Scalar>& s,
                             const CvModel<Scalar>& cv_model) {
    const Scalar slope = dp_dv(eos, s);
    if (!(slope < Scalar(0)))
        throw StabilityError("state is mechanically unstable: (dp/dv)_T >= 0",
                             static_cast<double>(s.v), static_cast<double>(s.v));
    const Scalar dpdT = dp_dT(eos, s);
    const Scalar c_v = cv_model(s.T);
    if (!(c_v > Scalar(0)))
        throw DomainError("heat-capacity model yields non-positive c_v");
    ResponseSet<Scalar> r;
    r.c_v = c_v;
    r.kappa_T = Scalar(-1) / (s.v * slope);
    r.alpha = -dpdT / (s.v * slope);
    r.c_p = r.c_v + s.v * s.T * r.alpha * r.alpha / r.kappa_T;
    return r;
}

/// Convenience overload: monatomic-style constant c_v = (3/2) R.
template <typename Scalar>
ResponseSet<Scalar> from_eos(const VirialEos<Scalar>& eos, const StatePoint<Scalar>& s) {
    return from_eos(eos, s, CvModel<Scalar>::constant(Scalar(1.5) * eos.gas_constant()));
}

/// Source of response functions along a path.
template <typename Scalar = double>
using ResponseProvider = std::function<ResponseSet<Scalar>(const StatePoint<Scalar>&)>;

template <typename Scalar>
ResponseProvider<Scalar> make_response_provider(const VirialEos<Scalar>& eos,
                                                const CvModel<Scalar>& cv_model) {
    return [eos, cv_model](const StatePoint<Scalar>& s) { return from_eos(eos, s, cv_model); };
}

template <typename Scalar>
ResponseProvider<Scalar> make_response_provider(const VirialEos<Scalar>& eos) {
    return make_response_provider(eos, CvModel<Scalar>::constant(Scalar(1.5) * eos.gas_constant()));
}

} // namespace thermolen
