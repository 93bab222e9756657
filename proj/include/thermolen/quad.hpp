#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

#include <thermolen/errors.hpp>

namespace thermolen {

/// Controls for the adaptive integrator.  The returned error estimate
/// satisfies err <= max(abs_tol, rel_tol * |value|) on success.
template <typename Scalar = double>
struct QuadratureConfig {
    Scalar rel_tol = Scalar(1e-10);
    Scalar abs_tol = Scalar(1e-14);
    int max_depth = 60;
};

template <typename Scalar = double>
struct QuadratureResult {
    Scalar value;
    Scalar err_estimate;
    long evaluations; ///< integrand evaluations performed
};

namespace detail {

// Gauss 7 / Kronrod 15 pair.  Nodes are the non-negative half; odd indices
// of x_gk are Kronrod-only abscissae, even indices the embedded Gauss ones.
template <typename Scalar>
struct GK15 {
    static constexpr std::array<Scalar, 8> x_gk = {
        Scalar(0.991455371120812639206854697526329L),
        Scalar(0.949107912342758524526189684047851L),
        Scalar(0.864864423359769072789712788640926L),
        Scalar(0.741531185599394439863864773280788L),
        Scalar(0.586087235467691130294144838258730L),
        Scalar(0.405845151377397166906606412076961L),
        Scalar(0.207784955007898467600689403773245L),
        Scalar(0.0L)};
    static constexpr std::array<Scalar, 8> w_gk = {
        Scalar(0.022935322010529224963732008058970L),
        Scalar(0.063092092629978553290700663189204L),
        Scalar(0.104790010322250183839876322541518L),
        Scalar(0.140653259715525918745189590510238L),
        Scalar(0.169004726639267902826583426598550L),
        Scalar(0.190350578064785409913256402421014L),
        Scalar(0.204432940075298892414161999234649L),
        Scalar(0.209482141084727828012999174891714L)};
    static constexpr std::array<Scalar, 4> w_g = {
        Scalar(0.129484966168869693270611432679082L),
        Scalar(0.279705391489276667901467771423780L),
        Scalar(0.381830050505118944950369775488975L),
        Scalar(0.417959183673469387755102040816327L)};
};

/// One 15-point panel on [a, b]; returns the Kronrod value and |K15 - G7|
/// as the local error estimate.
template <typename Scalar, typename F>
std::pair<Scalar, Scalar> gk15_panel(F&& f, Scalar a, Scalar b, long& evals) {
    using Rule = GK15<Scalar>;
    const Scalar mid = (a + b) / Scalar(2);
    const Scalar half = (b - a) / Scalar(2);

    const Scalar fc = f(mid);
    Scalar kronrod = Rule::w_gk[7] * fc;
    Scalar gauss = Rule::w_g[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const Scalar dx = half * Rule::x_gk[i];
        const Scalar fsum = f(mid - dx) + f(mid + dx);
        kronrod += Rule::w_gk[i] * fsum;
        if (i % 2 == 1) gauss += Rule::w_g[i / 2] * fsum;
    }
    evals += 15;
    using std::abs;
    return {half * kronrod, abs(half * (kronrod - gauss))};
}

template <typename Scalar, typename F>
void gk15_adapt(F&& f, Scalar a, Scalar b, Scalar tol, int depth, int max_depth,
                Scalar& value, Scalar& err, long& evals) {
    using std::abs;
    using std::max;
    const auto [panel_value, panel_err] = gk15_panel(f, a, b, evals);
    const Scalar width_floor =
        Scalar(4) * std::numeric_limits<Scalar>::epsilon() * max(abs(a), abs(b));
    if (panel_err <= tol || b - a <= width_floor) {
        value += panel_value;
        err += panel_err;
        return;
    }
    if (depth >= max_depth) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "quadrature did not converge on [%.17g, %.17g] within depth %d",
                      static_cast<double>(a), static_cast<double>(b), max_depth);
        throw ConvergenceError(msg);
    }
    const Scalar mid = (a + b) / Scalar(2);
    // left before right keeps the accumulation order fixed
    gk15_adapt(f, a, mid, tol / Scalar(2), depth + 1, max_depth, value, err, evals);
    gk15_adapt(f, mid, b, tol / Scalar(2), depth + 1, max_depth, value, err, evals);
}

} // namespace detail

/// Adaptive bisection with an embedded Gauss 7 / Kronrod 15 pair per panel.
/// Deterministic: identical inputs produce identical values and estimates.
/// Throws ConvergenceError when max_depth is reached with the local target
/// still unmet; integrand exceptions propagate unchanged.
template <typename Scalar, typename F>
QuadratureResult<Scalar> integrate(F&& f, Scalar a, Scalar b,
                                   const QuadratureConfig<Scalar>& cfg = {}) {
    if (!(cfg.rel_tol > Scalar(0)) || !(cfg.abs_tol > Scalar(0)) || cfg.max_depth < 1)
        throw ConfigError("quadrature tolerances must be positive and max_depth >= 1");
    if (a == b) return {Scalar(0), Scalar(0), 0};
    if (a > b) throw DomainError("integration bounds must satisfy a < b");

    using std::abs;
    using std::max;
    long evals = 0;
    // Rough whole-interval value fixes the first global tolerance target.
    Scalar target = abs(detail::gk15_panel(f, a, b, evals).first);
    for (int round = 0; round < 2; ++round) {
        Scalar tol = max(cfg.abs_tol, cfg.rel_tol * target);
        Scalar value = Scalar(0);
        Scalar err = Scalar(0);
        detail::gk15_adapt(f, a, b, tol, 0, cfg.max_depth, value, err, evals);
        if (err <= max(cfg.abs_tol, cfg.rel_tol * abs(value)))
            return {value, err, evals};
        target = abs(value); // rough value was off; retry against the refined one
    }
    throw ConvergenceError("quadrature error estimate exceeds the requested tolerance");
}

} // namespace thermolen
