#pragma once

#include <array>
#include <cmath>

#include <thermolen/errors.hpp>
#include <thermolen/response.hpp>
#include <thermolen/state.hpp>

namespace thermolen {

/// Hessian of the molar Helmholtz potential in (T, v) at one state point,
///
///     | -c_v/T        -alpha/kappa_T |
///     | -alpha/kappa_T   1/(v*kappa_T) |
///
/// together with its full closed-form spectral data.  On stable states the
/// two eigenvalues straddle zero, so the tangent plane carries a Lorentzian
/// inner product.
template <typename Scalar = double>
struct MetricAtPoint {
    Scalar eta11;
    Scalar eta12; ///< either off-diagonal slot
    Scalar eta22;

    Scalar det;
    Scalar delta; ///< eigenvalue gap squared, (eta11 - eta22)^2 + 4*eta12^2

    Scalar lambda1; ///< smaller eigenvalue (negative on stable states)
    Scalar lambda2; ///< larger eigenvalue

    Vector2<Scalar> xi1; ///< eigenvector of lambda1, unnormalized
    Vector2<Scalar> xi2; ///< eigenvector of lambda2, unnormalized

    Matrix2<Scalar> P;      ///< eigenvector columns (xi1, xi2)
    Matrix2<Scalar> P_inv;
    Matrix2<Scalar> Lambda; ///< diag(lambda1, lambda2)
};

enum class MetricSignature { lorentzian, degenerate, riemannian };

inline const char* to_string(MetricSignature s) {
    switch (s) {
        case MetricSignature::lorentzian: return "lorentzian";
        case MetricSignature::degenerate: return "degenerate";
        case MetricSignature::riemannian: return "riemannian";
    }
    return "unknown";
}

template <typename Scalar = double>
struct MetricTolerances {
    Scalar degeneracy = Scalar(1e-10); ///< relative to the max-abs metric entry
    Scalar null = Scalar(1e-10);       ///< relative, for the null classification band
    Scalar diagonal = Scalar(1e-12);   ///< off-diagonal negligibility threshold
};

template <typename Scalar>
Scalar max_abs_entry(const MetricAtPoint<Scalar>& m) {
    using std::abs;
    using std::max;
    return max(max(abs(m.eta11), abs(m.eta22)), abs(m.eta12));
}

/// Metric components alone, without the spectral data.  Shared by the
/// full assembly and by path integrands that only need the line element.
template <typename Scalar>
std::array<Scalar, 3> metric_components(const ResponseSet<Scalar>& r, const StatePoint<Scalar>& s) {
    return {-r.c_v / s.T, -r.alpha / r.kappa_T, Scalar(1) / (s.v * r.kappa_T)};
}

/// Builds the metric and its closed-form eigensystem.
///
/// The eigenvalue pair is (trace -/+ sqrt(delta))/2 with the smaller root
/// recovered as det / larger to avoid cancellation; eigenvectors use the
/// single slope parameter
///     k = (kappa_T / 2 alpha) * [(1/(v kappa_T) + c_v/T) - sqrt(delta)]
/// giving xi1 = (1, -k), xi2 = (k, 1).  When the off-diagonal entry is
/// negligible the metric is already diagonal and the basis is axis-aligned.
///
/// Throws DomainError for invalid states or a c_p identity residual above
/// 1e-9 * |c_p|, and DegeneracyError when an eigenvalue sits at zero
/// within tolerance.
template <typename Scalar>
MetricAtPoint<Scalar> assemble(const ResponseSet<Scalar>& r, const StatePoint<Scalar>& s,
                               const MetricTolerances<Scalar>& tol = {}) {
    using std::abs;
    using std::max;
    using std::min;
    using std::sqrt;

    if (!(s.T > Scalar(0)) || !(s.v > Scalar(0)))
        throw DomainError("metric requires positive temperature and volume");
    if (r.kappa_T == Scalar(0)) throw DomainError("kappa_T must be nonzero");
    if (mayer_residual(r, s) > Scalar(1e-9) * abs(r.c_p))
        throw DomainError("response set violates the c_p - c_v identity");

    MetricAtPoint<Scalar> m;
    const auto [e11, e12, e22] = metric_components(r, s);
    m.eta11 = e11;
    m.eta12 = e12;
    m.eta22 = e22;
    m.det = e11 * e22 - e12 * e12;

    // gap term via the response functions; tests cross-check the
    // component form (eta11 - eta22)^2 + 4 eta12^2 against it
    const Scalar g = Scalar(1) / (s.v * r.kappa_T) + r.c_v / s.T;
    const Scalar cross = Scalar(2) * r.alpha / r.kappa_T;
    m.delta = g * g + cross * cross;
    const Scalar root = sqrt(m.delta);

    const Scalar trace = e11 + e22;
    if (trace == Scalar(0) && root == Scalar(0)) {
        m.lambda1 = m.lambda2 = Scalar(0);
    } else {
        const Scalar big = (trace >= Scalar(0)) ? (trace + root) / Scalar(2)
                                                : (trace - root) / Scalar(2);
        const Scalar small = m.det / big;
        m.lambda1 = (big <= small) ? big : small;
        m.lambda2 = (big <= small) ? small : big;
    }

    const Scalar scale = max_abs_entry(m);
    if (min(abs(m.lambda1), abs(m.lambda2)) <= tol.degeneracy * scale)
        throw DegeneracyError("metric eigenvalue is zero within tolerance");

    if (abs(e12) <= tol.diagonal * max(abs(e11), abs(e22))) {
        // already diagonal; eigenbasis is axis-aligned
        const bool plain = e11 <= e22;
        m.lambda1 = plain ? e11 : e22;
        m.lambda2 = plain ? e22 : e11;
        m.xi1 = plain ? Vector2<Scalar>(1, 0) : Vector2<Scalar>(0, 1);
        m.xi2 = plain ? Vector2<Scalar>(0, 1) : Vector2<Scalar>(1, 0);
        m.P << m.xi1, m.xi2;
        m.P_inv = m.P;
    } else {
        // (g - root) cancels when the off-diagonal is small relative to g;
        // rewrite through the product (g - root)(g + root) = -cross^2
        const Scalar bracket =
            (g >= Scalar(0)) ? -(cross * cross) / (g + root) : g - root;
        const Scalar k = -bracket / (Scalar(2) * e12);
        m.xi1 = Vector2<Scalar>(1, -k);
        m.xi2 = Vector2<Scalar>(k, 1);
        m.P << Scalar(1), k, -k, Scalar(1);
        const Scalar inv_norm = Scalar(1) / (Scalar(1) + k * k);
        m.P_inv << inv_norm, -k * inv_norm, k * inv_norm, inv_norm;
    }
    m.Lambda << m.lambda1, Scalar(0), Scalar(0), m.lambda2;
    return m;
}

template <typename Scalar>
MetricAtPoint<Scalar> assemble(const VirialEos<Scalar>& eos, const StatePoint<Scalar>& s,
                               const CvModel<Scalar>& cv_model,
                               const MetricTolerances<Scalar>& tol = {}) {
    return assemble(from_eos(eos, s, cv_model), s, tol);
}

/// Sign of the determinant decides the tangent-space geometry: one
/// eigenvalue of each sign gives the Lorentzian plane.
template <typename Scalar>
MetricSignature signature(const MetricAtPoint<Scalar>& m,
                          const MetricTolerances<Scalar>& tol = {}) {
    const Scalar scale = max_abs_entry(m);
    using std::abs;
    if (abs(m.det) <= tol.degeneracy * scale * scale) return MetricSignature::degenerate;
    return m.det < Scalar(0) ? MetricSignature::lorentzian : MetricSignature::riemannian;
}

/// Squared length of the displacement (dT, dv) under the metric.
template <typename Scalar>
Scalar quadratic_form(const MetricAtPoint<Scalar>& m, Scalar dT, Scalar dv) {
    return m.eta11 * dT * dT + Scalar(2) * m.eta12 * dT * dv + m.eta22 * dv * dv;
}

template <typename Scalar = double>
struct ClassifiedVector {
    TangentVector<Scalar> vector;
    Scalar q; ///< squared length under the metric
};

/// Assigns volume-like (q > 0), temperature-like (q < 0) or null
/// (|q| below tol * |vector|^2 * max-abs entry).  The character is
/// invariant under rescaling the vector.
template <typename Scalar>
ClassifiedVector<Scalar> classify_vector(const MetricAtPoint<Scalar>& m, Scalar dT, Scalar dv,
                                         const MetricTolerances<Scalar>& tol = {}) {
    if (dT == Scalar(0) && dv == Scalar(0))
        throw DomainError("cannot classify the zero vector");
    using std::abs;
    const Scalar q = quadratic_form(m, dT, dv);
    const Scalar band = tol.null * (dT * dT + dv * dv) * max_abs_entry(m);
    CausalCharacter character;
    if (abs(q) <= band)
        character = CausalCharacter::null_like;
    else
        character = q > Scalar(0) ? CausalCharacter::volume_like
                                  : CausalCharacter::temperature_like;
    return {TangentVector<Scalar>{dT, dv, character}, q};
}

/// The two light-cone slopes dv/dT, i.e. the real roots of
/// eta22 x^2 + 2 eta12 x + eta11 = 0, ascending.  Requires a Lorentzian
/// point (the discriminant is -4 det > 0 there).
template <typename Scalar>
std::array<Scalar, 2> null_directions(const MetricAtPoint<Scalar>& m,
                                      const MetricTolerances<Scalar>& tol = {}) {
    if (signature(m, tol) != MetricSignature::lorentzian)
        throw DomainError("null directions exist only at Lorentzian points");
    using std::sqrt;
    const Scalar disc = m.eta12 * m.eta12 - m.eta11 * m.eta22; // = -det > 0
    const Scalar root = sqrt(disc);
    // larger-magnitude root first, companion by Vieta
    const Scalar u = (m.eta12 >= Scalar(0)) ? -(m.eta12 + root) : -(m.eta12 - root);
    const Scalar x1 = u / m.eta22;
    const Scalar x2 = m.eta11 / u;
    return x1 <= x2 ? std::array<Scalar, 2>{x1, x2} : std::array<Scalar, 2>{x2, x1};
}

template <typename Scalar = double>
struct PseudoUnit {
    Vector2<Scalar> unit;
    int sign; ///< +1 volume-like, -1 temperature-like
};

/// Rescales xi to squared length +/-1; vectors of imaginary length pick up
/// the negative sign.  Null vectors cannot be normalized.
template <typename Scalar>
PseudoUnit<Scalar> pseudo_normalize(const MetricAtPoint<Scalar>& m, const Vector2<Scalar>& xi,
                                    const MetricTolerances<Scalar>& tol = {}) {
    using std::abs;
    using std::sqrt;
    const Scalar q = quadratic_form(m, xi[0], xi[1]);
    const Scalar band = tol.null * xi.squaredNorm() * max_abs_entry(m);
    if (abs(q) <= band)
        throw DegeneracyError("cannot pseudo-normalize a null vector");
    return {xi / sqrt(abs(q)), q > Scalar(0) ? 1 : -1};
}

} // namespace thermolen
