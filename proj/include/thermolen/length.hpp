#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <thermolen/eos.hpp>
#include <thermolen/errors.hpp>
#include <thermolen/metric.hpp>
#include <thermolen/quad.hpp>
#include <thermolen/response.hpp>
#include <thermolen/state.hpp>

namespace thermolen {

enum class LengthMethod { closed_form, quadrature, theorem_decomposition };

inline const char* to_string(LengthMethod m) {
    switch (m) {
        case LengthMethod::closed_form: return "closed_form";
        case LengthMethod::quadrature: return "quadrature";
        case LengthMethod::theorem_decomposition: return "theorem_decomposition";
    }
    return "unknown";
}

enum class TheoremForm { sum_35, sum_36 };

/// Isotherm length result.  Lengths are magnitudes: inputs with v1 > v2
/// are computed over the ascending interval and marked reversed.
template <typename Scalar = double>
struct LengthReport {
    Scalar value = Scalar(0);
    LengthMethod method = LengthMethod::quadrature;
    Scalar err_estimate = Scalar(0); ///< 0 for closed forms
    Scalar work = Scalar(0);         ///< isothermal work over the ascending interval
    std::vector<std::pair<std::string, Scalar>> decomposition;
    bool reversed = false;
};

namespace detail {

/// S(v) = 1 + 2 X2/v + 3 X3/v^2 + ...; the stability factor in
/// -dp/dv = RT S(v) / v^2.  Positive S is mechanical stability.
template <typename Scalar>
Scalar stability_sum(const VirialEos<Scalar>& eos, Scalar v) {
    const Scalar inv_v = Scalar(1) / v;
    Scalar s = Scalar(1);
    Scalar pw = inv_v;
    Scalar k = Scalar(2);
    for (Scalar c : eos.coefficients()) {
        s += k * c * pw;
        pw *= inv_v;
        k += Scalar(1);
    }
    return s;
}

/// d/dv of S(v)^{-1/2}, derived analytically:
///   (1/2) S^{-3/2} * sum_{k>=2} k (k-1) X_k v^{-k}.
template <typename Scalar>
Scalar xi_derivative(const VirialEos<Scalar>& eos, Scalar v) {
    using std::sqrt;
    const Scalar inv_v = Scalar(1) / v;
    Scalar num = Scalar(0);
    Scalar pw = inv_v * inv_v;
    Scalar k = Scalar(2);
    for (Scalar c : eos.coefficients()) {
        num += k * (k - Scalar(1)) * c * pw;
        pw *= inv_v;
        k += Scalar(1);
    }
    const Scalar s = stability_sum(eos, v);
    return num / (Scalar(2) * s * sqrt(s));
}

template <typename Scalar>
[[noreturn]] void throw_stability(Scalar a, Scalar b) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "mechanical stability fails: dp_dv >= 0 inside [%.17g, %.17g]",
                  static_cast<double>(a), static_cast<double>(b));
    throw StabilityError(buf, static_cast<double>(a), static_cast<double>(b));
}

/// Samples dp_dv on [lo, hi] and bisects any detected sign change down to
/// a tight bracket before throwing.
template <typename Scalar>
void require_stable(const VirialEos<Scalar>& eos, Scalar T, Scalar lo, Scalar hi) {
    const int n = 64;
    auto unstable = [&](Scalar v) {
        return !(dp_dv(eos, StatePoint<Scalar>{T, v}) < Scalar(0));
    };
    Scalar prev = lo;
    for (int i = 0; i <= n; ++i) {
        const Scalar x = (i == n) ? hi : lo + (hi - lo) * Scalar(i) / Scalar(n);
        if (unstable(x)) {
            if (i == 0) throw_stability(lo, lo);
            Scalar a = prev;
            Scalar b = x;
            for (int it = 0; it < 200 && b - a > Scalar(1e-12) * (hi - lo); ++it) {
                const Scalar m = a + (b - a) / Scalar(2);
                if (unstable(m))
                    b = m;
                else
                    a = m;
            }
            throw_stability(a, b);
        }
        prev = x;
    }
}

} // namespace detail

/// Screens [lo, hi] for mechanical stability: 65 uniform samples of dp_dv,
/// with any sign change bisected to a tight bracket carried by the thrown
/// StabilityError.  No-op when every sample is stable.
template <typename Scalar>
void require_stable_interval(const VirialEos<Scalar>& eos, Scalar T, Scalar lo, Scalar hi) {
    detail::require_stable(eos, T, lo, hi);
}

/// The closed antiderivative evaluations for truncation orders 1..3.
/// Pure formula kernels over an ascending volume interval; the
/// isotherm_length_closed dispatcher handles ordering, stability
/// screening and report assembly.
namespace closed_forms {

template <typename Scalar>
Scalar ideal(Scalar R, Scalar T, Scalar v1, Scalar v2) {
    using std::log;
    using std::sqrt;
    return sqrt(R * T) * log(v2 / v1);
}

template <typename Scalar>
Scalar quasi_ideal(Scalar R, Scalar b, Scalar T, Scalar v1, Scalar v2) {
    using std::log;
    using std::sqrt;
    return sqrt(R * T) * log((v2 - b) / (v1 - b));
}

namespace detail {
template <typename Scalar>
Scalar rho(Scalar B, Scalar v) {
    const Scalar s = Scalar(1) + Scalar(2) * B / v;
    if (!(s > Scalar(0)))
        throw DomainError("two-coefficient closed form requires 1 + 2B/v > 0; use quadrature");
    using std::sqrt;
    return sqrt(s);
}
} // namespace detail

/// Compact two-coefficient form, rho_i = sqrt(1 + 2B/v_i):
///   L = 2 sqrt(RT) [ ln( sqrt(v2/v1) (rho2+1)/(rho1+1) ) - (rho2 - rho1) ].
template <typename Scalar>
Scalar n2_compact(Scalar R, Scalar B, Scalar T, Scalar v1, Scalar v2) {
    using std::log;
    using std::sqrt;
    const Scalar r1 = detail::rho(B, v1);
    const Scalar r2 = detail::rho(B, v2);
    return Scalar(2) * sqrt(R * T) *
           (log(sqrt(v2 / v1) * (r2 + Scalar(1)) / (r1 + Scalar(1))) - (r2 - r1));
}

/// Work-anchored two-coefficient form; algebraically identical to
/// n2_compact, kept for cross-checking.
template <typename Scalar>
Scalar n2_work_form(Scalar R, Scalar B, Scalar T, Scalar v1, Scalar v2) {
    using std::log;
    using std::sqrt;
    const Scalar r1 = detail::rho(B, v1);
    const Scalar r2 = detail::rho(B, v2);
    const Scalar bv = B * (v2 - v1) / (v1 * v2);
    const Scalar W = R * T * (log(v2 / v1) + bv);
    const Scalar srt = sqrt(R * T);
    return W / srt +
           srt * (log((Scalar(1) + B / v2 + r2) / (Scalar(1) + B / v1 + r1)) - bv -
                  Scalar(2) * (r2 - r1));
}

/// Interaction correction: the two-coefficient length minus its ideal part.
template <typename Scalar>
Scalar n2_interaction(Scalar R, Scalar B, Scalar T, Scalar v1, Scalar v2) {
    using std::log;
    using std::sqrt;
    const Scalar r1 = detail::rho(B, v1);
    const Scalar r2 = detail::rho(B, v2);
    return sqrt(R * T) * (log((Scalar(1) + B / v2 + r2) / (Scalar(1) + B / v1 + r1)) -
                          Scalar(2) * (r2 - r1));
}

/// Three-coefficient antiderivative with Q(v) = v^2 + 2Bv + 3C:
///   L = sqrt(RT) [ ln((sqrt(Q2)+v2+B)/(sqrt(Q1)+v1+B))
///       + (B/sqrt(3C)) ( ln(arg2/arg1) - ln(v2/v1) )
///       - (sqrt(S(v2)) - sqrt(S(v1))) ],   arg_i = sqrt(3C)sqrt(Q_i) - B v_i - 3C.
/// Each logarithm argument keeps one sign over any interval where Q > 0,
/// so endpoint positivity checks cover the interior.
template <typename Scalar>
Scalar n3(Scalar R, Scalar B, Scalar C, Scalar T, Scalar v1, Scalar v2) {
    using std::log;
    using std::sqrt;
    if (!(C > Scalar(0)))
        throw DomainError("three-coefficient closed form requires C > 0; use quadrature");
    auto Q = [&](Scalar v) { return v * v + Scalar(2) * B * v + Scalar(3) * C; };
    auto S = [&](Scalar v) {
        return Scalar(1) + Scalar(2) * B / v + Scalar(3) * C / (v * v);
    };
    const Scalar Q1 = Q(v1);
    const Scalar Q2 = Q(v2);
    if (!(Q1 > Scalar(0)) || !(Q2 > Scalar(0)))
        throw DomainError("three-coefficient closed form requires v^2 + 2Bv + 3C > 0; use quadrature");
    const Scalar sq1 = sqrt(Q1);
    const Scalar sq2 = sqrt(Q2);
    const Scalar sc = sqrt(Scalar(3) * C);
    const Scalar f1 = sq1 + v1 + B;
    const Scalar f2 = sq2 + v2 + B;
    const Scalar a1 = sc * sq1 - B * v1 - Scalar(3) * C;
    const Scalar a2 = sc * sq2 - B * v2 - Scalar(3) * C;
    if (!(f1 > Scalar(0)) || !(f2 > Scalar(0)) || !(a1 > Scalar(0)) || !(a2 > Scalar(0)))
        throw DomainError("logarithm argument not positive in the three-coefficient closed form; use quadrature");
    return sqrt(R * T) * (log(f2 / f1) + (B / sc) * (log(a2 / a1) - log(v2 / v1)) -
                          (sqrt(S(v2)) - sqrt(S(v1))));
}

} // namespace closed_forms

/// Isotherm length by adaptive quadrature of sqrt(-dp/dv); works for any
/// truncation order.  Throws StabilityError (with a bracketing interval)
/// if dp_dv >= 0 anywhere on the sampled interval.
template <typename Scalar>
LengthReport<Scalar> isotherm_length_quadrature(const VirialEos<Scalar>& eos, Scalar T,
                                                Scalar v1, Scalar v2,
                                                const QuadratureConfig<Scalar>& cfg = {}) {
    validate_state(eos, StatePoint<Scalar>{T, v1});
    validate_state(eos, StatePoint<Scalar>{T, v2});
    LengthReport<Scalar> rep;
    rep.method = LengthMethod::quadrature;
    if (v1 == v2) return rep;
    rep.reversed = v1 > v2;
    const Scalar lo = rep.reversed ? v2 : v1;
    const Scalar hi = rep.reversed ? v1 : v2;
    detail::require_stable(eos, T, lo, hi);
    auto integrand = [&](Scalar v) {
        using std::sqrt;
        return sqrt(-dp_dv(eos, StatePoint<Scalar>{T, v}));
    };
    const QuadratureResult<Scalar> r = integrate(integrand, lo, hi, cfg);
    rep.value = r.value;
    rep.err_estimate = r.err_estimate;
    rep.work = work(eos, T, lo, hi);
    return rep;
}

/// Isotherm length in closed form for truncation orders 1..3 and the
/// excluded-volume model.  Trailing zero coefficients are dropped before
/// dispatch, so a two-coefficient model with B = 0 reproduces the ideal
/// value bit for bit.  Orders above 3 throw UnsupportedOrderError.
template <typename Scalar>
LengthReport<Scalar> isotherm_length_closed(const VirialEos<Scalar>& eos, Scalar T,
                                            Scalar v1, Scalar v2) {
    validate_state(eos, StatePoint<Scalar>{T, v1});
    validate_state(eos, StatePoint<Scalar>{T, v2});
    LengthReport<Scalar> rep;
    rep.method = LengthMethod::closed_form;
    if (v1 == v2) return rep;
    rep.reversed = v1 > v2;
    const Scalar lo = rep.reversed ? v2 : v1;
    const Scalar hi = rep.reversed ? v1 : v2;
    const Scalar R = eos.gas_constant();
    rep.work = work(eos, T, lo, hi);
    if (eos.excluded_volume()) {
        rep.value = closed_forms::quasi_ideal(R, *eos.excluded_volume(), T, lo, hi);
        return rep;
    }
    std::vector<Scalar> coeffs = eos.coefficients();
    while (!coeffs.empty() && coeffs.back() == Scalar(0)) coeffs.pop_back();
    const int n = static_cast<int>(coeffs.size()) + 1;
    if (n > 3)
        throw UnsupportedOrderError("closed forms cover truncation orders 1 to 3; use quadrature");
    if (n >= 2) detail::require_stable(eos, T, lo, hi);
    if (n == 1) {
        rep.value = closed_forms::ideal(R, T, lo, hi);
    } else if (n == 2) {
        const Scalar B = coeffs[0];
        rep.value = closed_forms::n2_compact(R, B, T, lo, hi);
        rep.decomposition.emplace_back("ideal", closed_forms::ideal(R, T, lo, hi));
        rep.decomposition.emplace_back("interaction",
                                       closed_forms::n2_interaction(R, B, T, lo, hi));
    } else {
        rep.value = closed_forms::n3(R, coeffs[0], coeffs[1], T, lo, hi);
    }
    return rep;
}

/// Closed form when one applies and is in-domain, quadrature otherwise.
/// Stability errors propagate: no method can integrate across a
/// sign change of dp_dv.
template <typename Scalar>
LengthReport<Scalar> isotherm_length_auto(const VirialEos<Scalar>& eos, Scalar T, Scalar v1,
                                          Scalar v2, const QuadratureConfig<Scalar>& cfg = {}) {
    try {
        return isotherm_length_closed(eos, T, v1, v2);
    } catch (const UnsupportedOrderError&) {
    } catch (const DomainError&) {
        // closed-form validity gap; quadrature either succeeds or rethrows
        // the same state error
    }
    return isotherm_length_quadrature(eos, T, v1, v2, cfg);
}

/// Isotherm length through the decomposition identities, for any order.
///
/// sum_36:  L = sqrt(RT) sum_{k=1..n} k X_k I_k,  I_k = int v^{-k} S^{-1/2} dv;
///          per-term values reported.
/// sum_35:  L = (n/sqrt(RT)) [ W(v2) xi(v2) - int W(v) xi'(v) dv ]
///              - sqrt(RT) sum_{k=1..n-1} (n-k) X_k I_k
///          with xi = S^{-1/2} and W(v) the running work from the lower
///          endpoint, so the boundary term at v1 drops out.
/// Both agree with direct quadrature; tests enforce that.
template <typename Scalar>
LengthReport<Scalar> isotherm_length_theorem(const VirialEos<Scalar>& eos, Scalar T, Scalar v1,
                                             Scalar v2, TheoremForm form,
                                             const QuadratureConfig<Scalar>& cfg = {}) {
    if (eos.excluded_volume())
        throw ConfigError("theorem decompositions apply to the virial family only; "
                          "use closed or quadrature for the excluded-volume model");
    validate_state(eos, StatePoint<Scalar>{T, v1});
    validate_state(eos, StatePoint<Scalar>{T, v2});
    LengthReport<Scalar> rep;
    rep.method = LengthMethod::theorem_decomposition;
    if (v1 == v2) return rep;
    rep.reversed = v1 > v2;
    const Scalar lo = rep.reversed ? v2 : v1;
    const Scalar hi = rep.reversed ? v1 : v2;
    detail::require_stable(eos, T, lo, hi);

    using std::abs;
    using std::pow;
    using std::sqrt;
    const Scalar srt = sqrt(eos.gas_constant() * T);
    const int n = eos.order();
    const std::vector<Scalar>& X = eos.coefficients(); // X[k-2] holds X_k, k >= 2
    auto coeff = [&](int k) { return k == 1 ? Scalar(1) : X[static_cast<size_t>(k) - 2]; };
    rep.work = work(eos, T, lo, hi);

    auto I = [&](int k) {
        auto f = [&](Scalar v) {
            return pow(v, Scalar(-k)) / sqrt(detail::stability_sum(eos, v));
        };
        return integrate(f, lo, hi, cfg);
    };

    Scalar total = Scalar(0);
    Scalar err = Scalar(0);
    if (form == TheoremForm::sum_36) {
        for (int k = 1; k <= n; ++k) {
            Scalar term = Scalar(0);
            if (coeff(k) != Scalar(0)) {
                const QuadratureResult<Scalar> r = I(k);
                term = srt * Scalar(k) * coeff(k) * r.value;
                err += srt * Scalar(k) * abs(coeff(k)) * r.err_estimate;
            }
            total += term;
            rep.decomposition.emplace_back("k=" + std::to_string(k), term);
        }
    } else {
        const Scalar xi_hi = Scalar(1) / sqrt(detail::stability_sum(eos, hi));
        const Scalar boundary = Scalar(n) / srt * rep.work * xi_hi;
        auto f_parts = [&](Scalar v) {
            return work(eos, T, lo, v) * detail::xi_derivative(eos, v);
        };
        const QuadratureResult<Scalar> rp = integrate(f_parts, lo, hi, cfg);
        const Scalar parts = -Scalar(n) / srt * rp.value;
        err += Scalar(n) / srt * rp.err_estimate;
        total = boundary + parts;
        rep.decomposition.emplace_back("boundary", boundary);
        rep.decomposition.emplace_back("by_parts", parts);
        for (int k = 1; k <= n - 1; ++k) {
            Scalar term = Scalar(0);
            if (coeff(k) != Scalar(0)) {
                const QuadratureResult<Scalar> r = I(k);
                term = -srt * Scalar(n - k) * coeff(k) * r.value;
                err += srt * Scalar(n - k) * abs(coeff(k)) * r.err_estimate;
            }
            total += term;
            rep.decomposition.emplace_back("k=" + std::to_string(k), term);
        }
    }
    rep.value = total;
    rep.err_estimate = err;
    return rep;
}

/// A smooth parametrized curve in the (T, v) plane with exact derivatives.
template <typename Scalar = double>
struct PathSpec {
    std::function<Scalar(Scalar)> T_of_xi;
    std::function<Scalar(Scalar)> v_of_xi;
    std::function<Scalar(Scalar)> dT_dxi;
    std::function<Scalar(Scalar)> dv_dxi;
    Scalar xi_i;
    Scalar xi_f;
};

template <typename Scalar = double>
struct PathSegment {
    Scalar xi_begin;
    Scalar xi_end;
    CausalCharacter character;
    Scalar magnitude; ///< integral of sqrt(|q|) over the segment
    Scalar err_estimate;
};

template <typename Scalar = double>
struct PathOptions {
    int samples = 257;          ///< initial scan resolution for sign changes
    Scalar null_band = Scalar(1e-12); ///< |q| <= band * maxabs(eta) * |dx/dxi|^2 counts as null
    Scalar bisect_tol = Scalar(1e-12); ///< absolute width in xi for boundary location
};

/// Splits a path into maximal runs of constant causal character and
/// integrates sqrt(|q|) over each, where
///   q(xi) = eta11 T'^2 + 2 eta12 T' v' + eta22 v'^2
/// is the squared line element.  The quadratic form is not positive
/// definite, so q may change sign along the way; boundaries found in the
/// scan are sharpened by bisection.  Values of q inside the null band are
/// treated as exact zeros, making genuinely light-like runs integrate to
/// zero instead of accumulating roundoff.
template <typename Scalar>
std::vector<PathSegment<Scalar>> path_length(const ResponseProvider<Scalar>& responses,
                                             const PathSpec<Scalar>& path,
                                             const QuadratureConfig<Scalar>& cfg = {},
                                             const PathOptions<Scalar>& opt = {}) {
    if (path.xi_i == path.xi_f) return {};
    if (!(path.xi_i < path.xi_f))
        throw DomainError("path parameter bounds must satisfy xi_i < xi_f");
    if (opt.samples < 2) throw ConfigError("path scan needs at least 2 samples");

    auto q_eff = [&](Scalar xi) {
        using std::abs;
        using std::max;
        const StatePoint<Scalar> s{path.T_of_xi(xi), path.v_of_xi(xi)};
        const Scalar tp = path.dT_dxi(xi);
        const Scalar vp = path.dv_dxi(xi);
        const auto [e11, e12, e22] = metric_components(responses(s), s);
        const Scalar q = e11 * tp * tp + Scalar(2) * e12 * tp * vp + e22 * vp * vp;
        const Scalar scale =
            max(max(abs(e11), abs(e12)), abs(e22)) * (tp * tp + vp * vp);
        return abs(q) <= opt.null_band * scale ? Scalar(0) : q;
    };
    auto character_at = [&](Scalar xi) {
        const Scalar q = q_eff(xi);
        if (q == Scalar(0)) return CausalCharacter::null_like;
        return q > Scalar(0) ? CausalCharacter::volume_like : CausalCharacter::temperature_like;
    };

    const int n = opt.samples - 1;
    std::vector<Scalar> xs(static_cast<size_t>(n) + 1);
    std::vector<CausalCharacter> cs(xs.size());
    for (int i = 0; i <= n; ++i) {
        xs[static_cast<size_t>(i)] =
            (i == n) ? path.xi_f : path.xi_i + (path.xi_f - path.xi_i) * Scalar(i) / Scalar(n);
        cs[static_cast<size_t>(i)] = character_at(xs[static_cast<size_t>(i)]);
    }

    std::vector<Scalar> cuts{path.xi_i};
    std::vector<CausalCharacter> kinds{cs[0]};
    for (int i = 0; i < n; ++i) {
        if (cs[static_cast<size_t>(i)] == cs[static_cast<size_t>(i) + 1]) continue;
        Scalar a = xs[static_cast<size_t>(i)];
        Scalar b = xs[static_cast<size_t>(i) + 1];
        for (int it = 0; it < 200 && b - a > opt.bisect_tol; ++it) {
            const Scalar m = a + (b - a) / Scalar(2);
            if (character_at(m) == cs[static_cast<size_t>(i)])
                a = m;
            else
                b = m;
        }
        cuts.push_back(a + (b - a) / Scalar(2));
        kinds.push_back(cs[static_cast<size_t>(i) + 1]);
    }
    cuts.push_back(path.xi_f);

    std::vector<PathSegment<Scalar>> segments;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i] < cuts[i + 1])) continue; // adjacent transitions collapsed
        auto f = [&](Scalar xi) {
            using std::abs;
            using std::sqrt;
            return sqrt(abs(q_eff(xi)));
        };
        const QuadratureResult<Scalar> r = integrate(f, cuts[i], cuts[i + 1], cfg);
        segments.push_back({cuts[i], cuts[i + 1], kinds[i], r.value, r.err_estimate});
    }
    return segments;
}

} // namespace thermolen
