#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <thermolen/thermolen.hpp>

#include "config.hpp"

namespace {

using thermolen::cli::json;
using thermolen::cli::LoadedConfig;

std::string fmt(double x, bool machine) {
    char buf[40];
    std::snprintf(buf, sizeof buf, machine ? "%.17g" : "%.6g", x);
    return buf;
}

double rel_dev(double a, double b) {
    if (a == b) return 0.0;
    const double denom = std::max(std::abs(a), std::abs(b));
    return denom == 0.0 ? 0.0 : std::abs(a - b) / denom;
}

struct LengthArgs {
    std::string config;
    double T = 0, v1 = 0, v2 = 0;
    std::string method = "auto";
    bool machine = false;
};

int cmd_length(const LengthArgs& a) {
    const LoadedConfig lc = thermolen::cli::load_config(a.config);
    thermolen::LengthReport<double> rep;
    if (a.method == "auto")
        rep = thermolen::isotherm_length_auto(lc.eos, a.T, a.v1, a.v2, lc.quad);
    else if (a.method == "closed")
        rep = thermolen::isotherm_length_closed(lc.eos, a.T, a.v1, a.v2);
    else if (a.method == "quadrature")
        rep = thermolen::isotherm_length_quadrature(lc.eos, a.T, a.v1, a.v2, lc.quad);
    else if (a.method == "theorem35")
        rep = thermolen::isotherm_length_theorem(lc.eos, a.T, a.v1, a.v2,
                                                 thermolen::TheoremForm::sum_35, lc.quad);
    else
        rep = thermolen::isotherm_length_theorem(lc.eos, a.T, a.v1, a.v2,
                                                 thermolen::TheoremForm::sum_36, lc.quad);

    if (a.machine) {
        json out;
        out["command"] = "length";
        out["T"] = a.T;
        out["v1"] = a.v1;
        out["v2"] = a.v2;
        out["method_requested"] = a.method;
        out["L"] = rep.value;
        out["method"] = thermolen::to_string(rep.method);
        out["err_estimate"] = rep.err_estimate;
        out["work"] = rep.work;
        out["reversed"] = rep.reversed;
        json dec = json::object();
        for (const auto& [name, value] : rep.decomposition) dec[name] = value;
        out["decomposition"] = dec;
        std::cout << out.dump() << "\n";
    } else {
        std::printf("L            = %s\n", fmt(rep.value, false).c_str());
        std::printf("method       = %s\n", thermolen::to_string(rep.method));
        std::printf("err_estimate = %s\n", fmt(rep.err_estimate, false).c_str());
        std::printf("work         = %s\n", fmt(rep.work, false).c_str());
        std::printf("reversed     = %s\n", rep.reversed ? "true" : "false");
        for (const auto& [name, value] : rep.decomposition)
            std::printf("term %-12s = %s\n", name.c_str(), fmt(value, false).c_str());
    }
    return 0;
}

struct MetricArgs {
    std::string config;
    double T = 0, v = 0;
    double dT = 0, dv = 0;
    bool have_dT = false, have_dv = false;
    bool machine = false;
};

int cmd_metric(const MetricArgs& a) {
    const LoadedConfig lc = thermolen::cli::load_config(a.config);
    const thermolen::StatePoint<double> s{a.T, a.v};
    const thermolen::ResponseSet<double> r = thermolen::from_eos(lc.eos, s, lc.cv);
    const auto [e11, e12, e22] = thermolen::metric_components(r, s);

    json out;
    out["command"] = "metric";
    out["T"] = a.T;
    out["v"] = a.v;
    out["eta11"] = e11;
    out["eta12"] = e12;
    out["eta22"] = e22;

    bool degenerate = false;
    thermolen::MetricAtPoint<double> m;
    try {
        m = thermolen::assemble(r, s, lc.metric_tol);
    } catch (const thermolen::DegeneracyError&) {
        degenerate = true;
        m.eta11 = e11;
        m.eta12 = e12;
        m.eta22 = e22;
        m.det = e11 * e22 - e12 * e12;
        const double g = e22 - e11;
        m.delta = g * g + 4.0 * e12 * e12;
    }
    out["det"] = m.det;
    out["delta"] = m.delta;

    if (!degenerate) {
        const char* sig = thermolen::to_string(thermolen::signature(m, lc.metric_tol));
        const double det_ref = -r.c_p / (s.T * s.v * r.kappa_T);
        const double res_det = rel_dev(m.det, det_ref);
        const double res_mayer = thermolen::mayer_residual(r, s) / std::abs(r.c_p);
        const Eigen::Matrix2d recon = m.P * m.Lambda * m.P_inv;
        Eigen::Matrix2d eta;
        eta << e11, e12, e12, e22;
        const double res_recon =
            (recon - eta).cwiseAbs().maxCoeff() / thermolen::max_abs_entry(m);
        out["lambda1"] = m.lambda1;
        out["lambda2"] = m.lambda2;
        out["xi1"] = {m.xi1[0], m.xi1[1]};
        out["xi2"] = {m.xi2[0], m.xi2[1]};
        out["signature"] = sig;
        out["residuals"] = {{"det_identity", res_det},
                            {"mayer", res_mayer},
                            {"reconstruction", res_recon}};
        if (!a.machine) {
            std::printf("T        = %s\n", fmt(a.T, false).c_str());
            std::printf("v        = %s\n", fmt(a.v, false).c_str());
            std::printf("eta11    = %s\n", fmt(e11, false).c_str());
            std::printf("eta12    = %s\n", fmt(e12, false).c_str());
            std::printf("eta22    = %s\n", fmt(e22, false).c_str());
            std::printf("det      = %s\n", fmt(m.det, false).c_str());
            std::printf("delta    = %s\n", fmt(m.delta, false).c_str());
            std::printf("lambda1  = %s\n", fmt(m.lambda1, false).c_str());
            std::printf("lambda2  = %s\n", fmt(m.lambda2, false).c_str());
            std::printf("xi1      = (%s, %s)\n", fmt(m.xi1[0], false).c_str(),
                        fmt(m.xi1[1], false).c_str());
            std::printf("xi2      = (%s, %s)\n", fmt(m.xi2[0], false).c_str(),
                        fmt(m.xi2[1], false).c_str());
            std::printf("signature = %s\n", sig);
            std::printf("residual det_identity   = %s\n", fmt(res_det, false).c_str());
            std::printf("residual mayer          = %s\n", fmt(res_mayer, false).c_str());
            std::printf("residual reconstruction = %s\n", fmt(res_recon, false).c_str());
        }
    } else {
        out["signature"] = "degenerate";
        if (!a.machine) {
            std::printf("T        = %s\n", fmt(a.T, false).c_str());
            std::printf("v        = %s\n", fmt(a.v, false).c_str());
            std::printf("eta11    = %s\n", fmt(e11, false).c_str());
            std::printf("eta12    = %s\n", fmt(e12, false).c_str());
            std::printf("eta22    = %s\n", fmt(e22, false).c_str());
            std::printf("det      = %s\n", fmt(m.det, false).c_str());
            std::printf("delta    = %s\n", fmt(m.delta, false).c_str());
            std::printf("signature = degenerate\n");
            std::printf("note: eigenvalue at zero within tolerance; spectral data suppressed\n");
        }
    }

    if (a.have_dT || a.have_dv) {
        if (!(a.have_dT && a.have_dv))
            throw thermolen::ConfigError("--dT and --dv must be given together");
        const auto cls = thermolen::classify_vector(m, a.dT, a.dv, lc.metric_tol);
        out["vector"] = {{"dT", a.dT},
                         {"dv", a.dv},
                         {"q", cls.q},
                         {"character", thermolen::to_string(cls.vector.character)}};
        if (!a.machine)
            std::printf("vector (dT=%s, dv=%s): q = %s, character = %s\n",
                        fmt(a.dT, false).c_str(), fmt(a.dv, false).c_str(),
                        fmt(cls.q, false).c_str(), thermolen::to_string(cls.vector.character));
    }
    if (a.machine) std::cout << out.dump() << "\n";
    return 0;
}

struct WorkArgs {
    std::string config;
    double T = 0, v1 = 0, v2 = 0;
    bool machine = false;
};

int cmd_work(const WorkArgs& a) {
    const LoadedConfig lc = thermolen::cli::load_config(a.config);
    const double W = thermolen::work(lc.eos, a.T, a.v1, a.v2);
    if (a.machine) {
        json out;
        out["command"] = "work";
        out["T"] = a.T;
        out["v1"] = a.v1;
        out["v2"] = a.v2;
        out["W"] = W;
        std::cout << out.dump() << "\n";
    } else {
        std::printf("W = %s\n", fmt(W, false).c_str());
    }
    return 0;
}

struct ClassifyArgs {
    std::string config;
    double T = 0, v = 0, dT = 0, dv = 0;
    bool machine = false;
};

int cmd_classify(const ClassifyArgs& a) {
    const LoadedConfig lc = thermolen::cli::load_config(a.config);
    const thermolen::StatePoint<double> s{a.T, a.v};
    const thermolen::ResponseSet<double> r = thermolen::from_eos(lc.eos, s, lc.cv);
    const auto [e11, e12, e22] = thermolen::metric_components(r, s);
    thermolen::MetricAtPoint<double> m;
    m.eta11 = e11;
    m.eta12 = e12;
    m.eta22 = e22;
    m.det = e11 * e22 - e12 * e12;
    const auto cls = thermolen::classify_vector(m, a.dT, a.dv, lc.metric_tol);
    if (a.machine) {
        json out;
        out["command"] = "classify";
        out["T"] = a.T;
        out["v"] = a.v;
        out["dT"] = a.dT;
        out["dv"] = a.dv;
        out["q"] = cls.q;
        out["character"] = thermolen::to_string(cls.vector.character);
        std::cout << out.dump() << "\n";
    } else {
        std::printf("q = %s\n", fmt(cls.q, false).c_str());
        std::printf("character = %s\n", thermolen::to_string(cls.vector.character));
    }
    return 0;
}

struct SweepArgs {
    std::string config;
    double T = 0, vmin = 0, vmax = 0;
    int steps = 0;
    std::string out_path;
};

int cmd_sweep(const SweepArgs& a) {
    const LoadedConfig lc = thermolen::cli::load_config(a.config);
    if (!(a.vmin < a.vmax))
        throw thermolen::DomainError("sweep requires vmin < vmax");
    if (a.steps < 1) throw thermolen::ConfigError("sweep requires steps >= 1");
    thermolen::validate_state(lc.eos, thermolen::StatePoint<double>{a.T, a.vmin});
    thermolen::validate_state(lc.eos, thermolen::StatePoint<double>{a.T, a.vmax});
    thermolen::require_stable_interval(lc.eos, a.T, a.vmin, a.vmax);

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!a.out_path.empty()) {
        file.open(a.out_path);
        if (!file) throw thermolen::ConfigError("cannot open output file: " + a.out_path);
        os = &file;
    }
    auto integrand = [&](double v) {
        return std::sqrt(-thermolen::dp_dv(lc.eos, thermolen::StatePoint<double>{a.T, v}));
    };
    *os << "v,p,dp_dv,integrand,L_cumulative,W_cumulative\n";
    double L = 0.0;
    double v_prev = a.vmin;
    for (int i = 0; i <= a.steps; ++i) {
        const double v =
            (i == a.steps) ? a.vmax : a.vmin + (a.vmax - a.vmin) * double(i) / double(a.steps);
        if (i > 0) L += thermolen::integrate(integrand, v_prev, v, lc.quad).value;
        const thermolen::StatePoint<double> s{a.T, v};
        const double W = thermolen::work(lc.eos, a.T, a.vmin, v);
        *os << fmt(v, true) << ',' << fmt(thermolen::pressure(lc.eos, s), true) << ','
            << fmt(thermolen::dp_dv(lc.eos, s), true) << ',' << fmt(integrand(v), true) << ','
            << fmt(i == 0 ? 0.0 : L, true) << ',' << fmt(W, true) << "\n";
        v_prev = v;
    }
    return 0;
}

struct VerifyRow {
    std::string formula;
    double T, v1, v2;
    bool has_values;
    double value, reference, dev;
    std::string verdict;
};

struct VerifyArgs {
    std::string config;
    std::string grid;
    bool csv = false;
    bool machine = false;
};

int cmd_verify(const VerifyArgs& a) {
    const LoadedConfig lc = thermolen::cli::load_config(a.config);
    if (a.csv && a.machine)
        throw thermolen::ConfigError("choose one of --csv and --json");
    const thermolen::cli::VerifyGrid grid =
        a.grid.empty() ? thermolen::cli::VerifyGrid{} : thermolen::cli::parse_grid(a.grid);

    const auto& eos = lc.eos;
    std::vector<double> coeffs = eos.coefficients();
    while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
    const int order = static_cast<int>(coeffs.size()) + 1;
    const bool quasi = eos.excluded_volume().has_value();
    const double R = eos.gas_constant();

    std::vector<VerifyRow> rows;
    auto push = [&](const std::string& formula, double T, double v1, double v2, double value,
                    double reference, double tol, const char* flag_verdict = "FLAG") {
        const double dev = rel_dev(value, reference);
        rows.push_back({formula, T, v1, v2, true, value, reference, dev,
                        dev <= tol ? "PASS" : flag_verdict});
    };

    for (double T : grid.Ts) {
        for (const auto& [v1, v2] : grid.intervals) {
            const auto quad = thermolen::isotherm_length_quadrature(eos, T, v1, v2, lc.quad);
            const double srt = std::sqrt(R * T);
            if (quasi) {
                const auto closed = thermolen::isotherm_length_closed(eos, T, v1, v2);
                push("quasi_closed_vs_quadrature", T, v1, v2, closed.value, quad.value, 1e-8);
                push("work_identity", T, v1, v2, closed.value * srt, closed.work, 1e-10);
            } else {
                if (order == 1) {
                    const auto closed = thermolen::isotherm_length_closed(eos, T, v1, v2);
                    push("ideal_closed_vs_quadrature", T, v1, v2, closed.value, quad.value,
                         1e-8);
                    push("work_identity", T, v1, v2, closed.value * srt, closed.work, 1e-10);
                } else if (order == 2) {
                    const double B = coeffs[0];
                    const auto closed = thermolen::isotherm_length_closed(eos, T, v1, v2);
                    push("n2_compact_vs_quadrature", T, v1, v2, closed.value, quad.value,
                         1e-8);
                    push("n2_work_form_vs_compact", T, v1, v2,
                         thermolen::closed_forms::n2_work_form(R, B, T, v1, v2), closed.value,
                         1e-10);
                    double dec_sum = 0.0;
                    for (const auto& [name, val] : closed.decomposition) dec_sum += val;
                    push("n2_decomposition_sum", T, v1, v2, dec_sum, closed.value, 1e-10);
                } else if (order == 3) {
                    try {
                        const auto closed = thermolen::isotherm_length_closed(eos, T, v1, v2);
                        push("n3_closed_vs_quadrature", T, v1, v2, closed.value, quad.value,
                             1e-8, "FLAG(n3-closed-discrepancy)");
                    } catch (const thermolen::DomainError&) {
                        rows.push_back({"n3_closed_vs_quadrature", T, v1, v2, false, 0.0, 0.0,
                                        0.0, "DOMAIN"});
                    }
                }
                const auto t35 = thermolen::isotherm_length_theorem(
                    eos, T, v1, v2, thermolen::TheoremForm::sum_35, lc.quad);
                const auto t36 = thermolen::isotherm_length_theorem(
                    eos, T, v1, v2, thermolen::TheoremForm::sum_36, lc.quad);
                push("theorem_sum_35_vs_quadrature", T, v1, v2, t35.value, quad.value, 1e-8);
                push("theorem_sum_36_vs_quadrature", T, v1, v2, t36.value, quad.value, 1e-8);
            }
        }
    }

    int n_pass = 0, n_flag = 0, n_domain = 0;
    for (const auto& r : rows) {
        if (r.verdict == "PASS")
            ++n_pass;
        else if (r.verdict == "DOMAIN")
            ++n_domain;
        else
            ++n_flag;
    }

    if (a.machine) {
        json out;
        out["command"] = "verify";
        json jrows = json::array();
        for (const auto& r : rows) {
            json jr;
            jr["formula"] = r.formula;
            jr["T"] = r.T;
            jr["v1"] = r.v1;
            jr["v2"] = r.v2;
            if (r.has_values) {
                jr["value"] = r.value;
                jr["reference"] = r.reference;
                jr["rel_dev"] = r.dev;
            }
            jr["verdict"] = r.verdict;
            jrows.push_back(jr);
        }
        out["rows"] = jrows;
        out["summary"] = {{"rows", rows.size()},
                          {"pass", n_pass},
                          {"flag", n_flag},
                          {"domain", n_domain}};
        std::cout << out.dump() << "\n";
    } else if (a.csv) {
        std::printf("formula,T,v1,v2,value,reference,rel_dev,verdict\n");
        for (const auto& r : rows) {
            if (r.has_values)
                std::printf("%s,%s,%s,%s,%s,%s,%s,%s\n", r.formula.c_str(),
                            fmt(r.T, true).c_str(), fmt(r.v1, true).c_str(),
                            fmt(r.v2, true).c_str(), fmt(r.value, true).c_str(),
                            fmt(r.reference, true).c_str(), fmt(r.dev, true).c_str(),
                            r.verdict.c_str());
            else
                std::printf("%s,%s,%s,%s,,,,%s\n", r.formula.c_str(), fmt(r.T, true).c_str(),
                            fmt(r.v1, true).c_str(), fmt(r.v2, true).c_str(),
                            r.verdict.c_str());
        }
    } else {
        for (const auto& r : rows) {
            if (r.has_values)
                std::printf("%-30s T=%-7s [%s, %s]  value=%-14s ref=%-14s dev=%-10s %s\n",
                            r.formula.c_str(), fmt(r.T, false).c_str(),
                            fmt(r.v1, false).c_str(), fmt(r.v2, false).c_str(),
                            fmt(r.value, false).c_str(), fmt(r.reference, false).c_str(),
                            fmt(r.dev, false).c_str(), r.verdict.c_str());
            else
                std::printf("%-30s T=%-7s [%s, %s]  %s\n", r.formula.c_str(),
                            fmt(r.T, false).c_str(), fmt(r.v1, false).c_str(),
                            fmt(r.v2, false).c_str(), r.verdict.c_str());
        }
        std::printf("summary: rows=%zu pass=%d flag=%d domain=%d\n", rows.size(), n_pass,
                    n_flag, n_domain);
    }
    return n_flag > 0 ? 5 : 0;
}

template <typename F>
int run_guarded(F&& f) {
    try {
        return f();
    } catch (const thermolen::StabilityError& e) {
        std::fprintf(stderr, "stability error: %s\n", e.what());
        return 3;
    } catch (const thermolen::ConvergenceError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 4;
    } catch (const thermolen::DegeneracyError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 4;
    } catch (const thermolen::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"thermolen: Helmholtz-metric geometry and thermodynamic length for "
                 "virial equations of state"};
    app.require_subcommand(1);

    LengthArgs la;
    CLI::App* length = app.add_subcommand("length", "isotherm length between two volumes");
    length->add_option("--config", la.config, "EOS config file")->required();
    length->add_option("--T", la.T, "temperature")->required();
    length->add_option("--v1", la.v1, "initial molar volume")->required();
    length->add_option("--v2", la.v2, "final molar volume")->required();
    length->add_option("--method", la.method, "auto|closed|quadrature|theorem35|theorem36")
        ->check(CLI::IsMember({"auto", "closed", "quadrature", "theorem35", "theorem36"}));
    length->add_flag("--json", la.machine, "machine-readable output");

    MetricArgs ma;
    CLI::App* metric = app.add_subcommand("metric", "metric and spectral data at a state");
    metric->add_option("--config", ma.config, "EOS config file")->required();
    metric->add_option("--T", ma.T, "temperature")->required();
    metric->add_option("--v", ma.v, "molar volume")->required();
    CLI::Option* odT = metric->add_option("--dT", ma.dT, "tangent dT for classification");
    CLI::Option* odv = metric->add_option("--dv", ma.dv, "tangent dv for classification");
    metric->add_flag("--json", ma.machine, "machine-readable output");

    WorkArgs wa;
    CLI::App* work = app.add_subcommand("work", "isothermal work between two volumes");
    work->add_option("--config", wa.config, "EOS config file")->required();
    work->add_option("--T", wa.T, "temperature")->required();
    work->add_option("--v1", wa.v1, "initial molar volume")->required();
    work->add_option("--v2", wa.v2, "final molar volume")->required();
    work->add_flag("--json", wa.machine, "machine-readable output");

    ClassifyArgs ca;
    CLI::App* classify = app.add_subcommand("classify", "causal character of a tangent vector");
    classify->add_option("--config", ca.config, "EOS config file")->required();
    classify->add_option("--T", ca.T, "temperature")->required();
    classify->add_option("--v", ca.v, "molar volume")->required();
    classify->add_option("--dT", ca.dT, "tangent dT")->required();
    classify->add_option("--dv", ca.dv, "tangent dv")->required();
    classify->add_flag("--json", ca.machine, "machine-readable output");

    SweepArgs sa;
    CLI::App* sweep = app.add_subcommand("sweep", "CSV sweep along an isotherm");
    sweep->add_option("--config", sa.config, "EOS config file")->required();
    sweep->add_option("--T", sa.T, "temperature")->required();
    sweep->add_option("--vmin", sa.vmin, "lower molar volume")->required();
    sweep->add_option("--vmax", sa.vmax, "upper molar volume")->required();
    sweep->add_option("--steps", sa.steps, "number of uniform intervals")->required();
    sweep->add_option("--out", sa.out_path, "output file (default stdout)");

    VerifyArgs va;
    CLI::App* verify = app.add_subcommand("verify", "closed forms against the quadrature oracle");
    verify->add_option("--config", va.config, "EOS config file")->required();
    verify->add_option("--grid", va.grid,
                       "grid override, e.g. \"T=100,300;v=0.012:0.018,0.012:0.12\"");
    verify->add_flag("--csv", va.csv, "CSV output");
    verify->add_flag("--json", va.machine, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    ma.have_dT = odT->count() > 0;
    ma.have_dv = odv->count() > 0;

    if (*length) return run_guarded([&] { return cmd_length(la); });
    if (*metric) return run_guarded([&] { return cmd_metric(ma); });
    if (*work) return run_guarded([&] { return cmd_work(wa); });
    if (*classify) return run_guarded([&] { return cmd_classify(ca); });
    if (*sweep) return run_guarded([&] { return cmd_sweep(sa); });
    if (*verify) return run_guarded([&] { return cmd_verify(va); });
    return 2;
}
