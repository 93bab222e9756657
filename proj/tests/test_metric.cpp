#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include <thermolen/eos.hpp>
#include <thermolen/errors.hpp>
#include <thermolen/metric.hpp>
#include <thermolen/response.hpp>

using thermolen::assemble;
using thermolen::CausalCharacter;
using thermolen::DegeneracyError;
using thermolen::DomainError;
using thermolen::MetricAtPoint;
using thermolen::MetricSignature;
using thermolen::ResponseSet;
using thermolen::StatePoint;
using thermolen::VirialEos;

namespace {
const double R = 8.314;

std::vector<VirialEos<double>> model_zoo() {
    return {VirialEos<double>(R, {}),
            VirialEos<double>(R, {-1e-4}).with_coefficient_derivatives({0.0}),
            VirialEos<double>(R, {1e-4}).with_coefficient_derivatives({0.0}),
            VirialEos<double>(R, {-1e-4, 2e-8}).with_coefficient_derivatives({0.0, 0.0}),
            VirialEos<double>(R, {-1e-4, 2e-8}).with_coefficient_derivatives({2e-7, -1e-11})};
}

Eigen::Matrix2d as_matrix(const MetricAtPoint<double>& m) {
    Eigen::Matrix2d eta;
    eta << m.eta11, m.eta12, m.eta12, m.eta22;
    return eta;
}
} // namespace

TEST_CASE("components written out by hand at one state") {
    const VirialEos<double> eos(R, {});
    const StatePoint<double> s{300.0, 0.02};
    const auto r = thermolen::from_eos(eos, s);
    const auto [e11, e12, e22] = thermolen::metric_components(r, s);
    CHECK(e11 == doctest::Approx(-1.5 * R / s.T).epsilon(1e-14));
    CHECK(e12 == doctest::Approx(-R / s.v).epsilon(1e-14));
    CHECK(e22 == doctest::Approx(R * s.T / (s.v * s.v)).epsilon(1e-14));
}

TEST_CASE("spectral data against the dense symmetric eigensolver") {
    int samples = 0;
    for (const auto& eos : model_zoo()) {
        for (double T : {100.0, 300.0, 1000.0}) {
            for (double v : {0.012, 0.018, 0.03, 0.07, 0.12}) {
                const StatePoint<double> s{T, v};
                const auto m = assemble(eos, s, thermolen::CvModel<double>::constant(1.5 * R));
                const double scale = thermolen::max_abs_entry(m);

                Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(as_matrix(m));
                REQUIRE(es.info() == Eigen::Success);
                // the oracle's own accuracy is eps * ||eta||, so compare
                // absolutely against that scale
                CHECK(std::abs(m.lambda1 - es.eigenvalues()[0]) <= 1e-12 * scale);
                CHECK(std::abs(m.lambda2 - es.eigenvalues()[1]) <= 1e-12 * scale);

                // exact invariants pin the small eigenvalue far below the
                // oracle's floor
                CHECK(m.lambda1 * m.lambda2 ==
                      doctest::Approx(m.det).epsilon(1e-13));
                CHECK(m.lambda1 + m.lambda2 ==
                      doctest::Approx(m.eta11 + m.eta22).epsilon(1e-13));

                // eigenvector residuals, scale-relative
                const Eigen::Vector2d r1 =
                    as_matrix(m) * m.xi1 - m.lambda1 * m.xi1;
                const Eigen::Vector2d r2 =
                    as_matrix(m) * m.xi2 - m.lambda2 * m.xi2;
                CHECK(r1.cwiseAbs().maxCoeff() <= 1e-12 * scale * m.xi1.norm());
                CHECK(r2.cwiseAbs().maxCoeff() <= 1e-12 * scale * m.xi2.norm());

                // delta equals the component form
                const double g = m.eta11 - m.eta22;
                CHECK(m.delta ==
                      doctest::Approx(g * g + 4.0 * m.eta12 * m.eta12).epsilon(1e-13));
                ++samples;
            }
        }
    }
    CHECK(samples == 75);
}

TEST_CASE("stable states carry one negative and one positive direction") {
    for (const auto& eos : model_zoo()) {
        for (double T : {100.0, 300.0, 1000.0}) {
            for (double v : {0.012, 0.05, 0.12}) {
                const auto m =
                    assemble(eos, StatePoint<double>{T, v},
                             thermolen::CvModel<double>::constant(1.5 * R));
                CHECK(m.lambda1 < 0.0);
                CHECK(m.lambda2 > 0.0);
                CHECK(thermolen::signature(m) == MetricSignature::lorentzian);
                CHECK(m.det < 0.0);
                // determinant identity in response terms
                const auto r = thermolen::from_eos(
                    eos, StatePoint<double>{T, v},
                    thermolen::CvModel<double>::constant(1.5 * R));
                CHECK(m.det ==
                      doctest::Approx(-r.c_p / (T * v * r.kappa_T)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("reconstruction from the eigenbasis") {
    const auto eos = VirialEos<double>(R, {-1e-4}).with_coefficient_derivatives({0.0});
    for (double T : {150.0, 600.0}) {
        for (double v : {0.012, 0.09}) {
            const auto m = assemble(eos, StatePoint<double>{T, v},
                                    thermolen::CvModel<double>::constant(1.5 * R));
            const Eigen::Matrix2d recon = m.P * m.Lambda * m.P_inv;
            const double err = (recon - as_matrix(m)).cwiseAbs().maxCoeff();
            CHECK(err <= 1e-12 * thermolen::max_abs_entry(m));
            // P columns are the stored eigenvectors
            CHECK(m.P.col(0) == m.xi1);
            CHECK(m.P.col(1) == m.xi2);
            CHECK((m.P * m.P_inv - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() <=
                  1e-14);
        }
    }
}

TEST_CASE("vanishing expansion coefficient gives the axis-aligned branch") {
    // alpha = 0 with a consistent c_p = c_v
    const StatePoint<double> s{300.0, 0.02};
    SUBCASE("plain diagonal order") {
        const ResponseSet<double> r{12.471, 12.471, 0.0, 8e-6};
        const auto m = assemble(r, s);
        CHECK(m.eta12 == 0.0);
        CHECK(m.lambda1 == m.eta11);
        CHECK(m.lambda2 == m.eta22);
        CHECK(m.xi1[0] == 1.0);
        CHECK(m.xi1[1] == 0.0);
        CHECK(m.xi2[0] == 0.0);
        CHECK(m.xi2[1] == 1.0);
        CHECK(m.P == Eigen::Matrix2d::Identity());
    }
    SUBCASE("swapped diagonal order") {
        // negative compressibility pushes eta22 below eta11
        const ResponseSet<double> r{12.471, 12.471, 0.0, -8e-6};
        const auto m = assemble(r, s);
        CHECK(m.lambda1 == m.eta22);
        CHECK(m.lambda2 == m.eta11);
        CHECK(m.xi1[0] == 0.0);
        CHECK(m.xi1[1] == 1.0);
        CHECK(thermolen::signature(m) == MetricSignature::riemannian);
        const Eigen::Matrix2d recon = m.P * m.Lambda * m.P_inv;
        CHECK((recon - as_matrix(m)).cwiseAbs().maxCoeff() <=
              1e-14 * thermolen::max_abs_entry(m));
    }
}

TEST_CASE("assemble validates its inputs") {
    const StatePoint<double> s{300.0, 0.02};
    SUBCASE("identity violation") {
        ResponseSet<double> r{12.471, 12.471, 1.0 / 300.0, 0.02 / (R * 300.0)};
        // c_p deliberately inconsistent with alpha and kappa_T
        CHECK_THROWS_AS(assemble(r, s), DomainError);
    }
    SUBCASE("invalid state") {
        const ResponseSet<double> r{12.471, 12.471, 0.0, 8e-6};
        CHECK_THROWS_AS(assemble(r, StatePoint<double>{-1.0, 0.02}), DomainError);
        CHECK_THROWS_AS(assemble(r, StatePoint<double>{300.0, 0.0}), DomainError);
    }
    SUBCASE("zero compressibility") {
        const ResponseSet<double> r{12.471, 12.471, 0.0, 0.0};
        CHECK_THROWS_AS(assemble(r, s), DomainError);
    }
    SUBCASE("eigenvalue at zero within tolerance") {
        // enormous kappa_T sends eta22 to zero while eta11 stays finite
        const ResponseSet<double> r{12.471, 12.471, 0.0, 1e280};
        CHECK_THROWS_AS(assemble(r, s), DegeneracyError);
    }
}

TEST_CASE("signature of hand-built metrics") {
    MetricAtPoint<double> m;
    m.eta11 = -1.0;
    m.eta12 = 0.0;
    m.eta22 = 2.0;
    m.det = -2.0;
    CHECK(thermolen::signature(m) == MetricSignature::lorentzian);
    m.eta11 = 1.0;
    m.det = 2.0;
    CHECK(thermolen::signature(m) == MetricSignature::riemannian);
    m.det = 1e-30;
    CHECK(thermolen::signature(m) == MetricSignature::degenerate);
}

TEST_CASE("causal classification") {
    const VirialEos<double> eos(R, {});
    const StatePoint<double> s{300.0, 0.02};
    const auto m = assemble(eos, s, thermolen::CvModel<double>::constant(1.5 * R));

    SUBCASE("coordinate directions") {
        const auto iso_v = thermolen::classify_vector(m, 1.0, 0.0);
        CHECK(iso_v.vector.character == CausalCharacter::temperature_like);
        CHECK(iso_v.q == doctest::Approx(m.eta11).epsilon(1e-15));
        const auto iso_T = thermolen::classify_vector(m, 0.0, 1e-4);
        CHECK(iso_T.vector.character == CausalCharacter::volume_like);
        CHECK(iso_T.q > 0.0);
    }
    SUBCASE("character is invariant under rescaling") {
        const auto a = thermolen::classify_vector(m, 1.0, 2e-4);
        const auto b = thermolen::classify_vector(m, 1e6, 200.0);
        CHECK(a.vector.character == b.vector.character);
        CHECK(b.q == doctest::Approx(1e12 * a.q).epsilon(1e-12));
    }
    SUBCASE("null directions classify as null") {
        const auto slopes = thermolen::null_directions(m);
        for (double x : slopes) {
            const auto c = thermolen::classify_vector(m, 1.0, x);
            CHECK(c.vector.character == CausalCharacter::null_like);
        }
    }
    SUBCASE("zero vector rejected") {
        CHECK_THROWS_AS(thermolen::classify_vector(m, 0.0, 0.0), DomainError);
    }
}

TEST_CASE("null directions solve the cone quadratic") {
    const VirialEos<double> eos(R, {});
    SUBCASE("ideal-gas slopes have a closed form") {
        // eta22 x^2 + 2 eta12 x + eta11 = 0 reduces to
        // x = v (2 +/- sqrt(10)) / (2T) for c_v = 1.5 R
        for (double T : {100.0, 300.0}) {
            for (double v : {0.012, 0.06}) {
                const auto m = assemble(eos, StatePoint<double>{T, v},
                                        thermolen::CvModel<double>::constant(1.5 * R));
                const auto slopes = thermolen::null_directions(m);
                const double lo = v * (2.0 - std::sqrt(10.0)) / (2.0 * T);
                const double hi = v * (2.0 + std::sqrt(10.0)) / (2.0 * T);
                CHECK(slopes[0] == doctest::Approx(lo).epsilon(1e-12));
                CHECK(slopes[1] == doctest::Approx(hi).epsilon(1e-12));
            }
        }
    }
    SUBCASE("roots satisfy the quadratic to roundoff") {
        const auto eos2 =
            VirialEos<double>(R, {-1e-4}).with_coefficient_derivatives({0.0});
        const auto m = assemble(eos2, StatePoint<double>{300.0, 0.02},
                                thermolen::CvModel<double>::constant(1.5 * R));
        for (double x : thermolen::null_directions(m)) {
            const double res = m.eta22 * x * x + 2.0 * m.eta12 * x + m.eta11;
            CHECK(std::abs(res) <=
                  1e-12 * thermolen::max_abs_entry(m) * (1.0 + x * x));
        }
    }
    SUBCASE("no real cone off the Lorentzian regime") {
        MetricAtPoint<double> m;
        m.eta11 = 1.0;
        m.eta12 = 0.0;
        m.eta22 = 2.0;
        m.det = 2.0;
        CHECK_THROWS_AS(thermolen::null_directions(m), DomainError);
    }
}

TEST_CASE("pseudo-normalization") {
    const VirialEos<double> eos(R, {});
    const auto m = assemble(eos, StatePoint<double>{300.0, 0.02},
                            thermolen::CvModel<double>::constant(1.5 * R));
    const auto u1 = thermolen::pseudo_normalize(m, m.xi1);
    CHECK(u1.sign == -1);
    CHECK(thermolen::quadratic_form(m, u1.unit[0], u1.unit[1]) ==
          doctest::Approx(-1.0).epsilon(1e-12));
    const auto u2 = thermolen::pseudo_normalize(m, m.xi2);
    CHECK(u2.sign == 1);
    CHECK(thermolen::quadratic_form(m, u2.unit[0], u2.unit[1]) ==
          doctest::Approx(1.0).epsilon(1e-12));

    const auto slopes = thermolen::null_directions(m);
    const thermolen::Vector2<double> null_vec(1.0, slopes[0]);
    CHECK_THROWS_AS(thermolen::pseudo_normalize(m, null_vec), DegeneracyError);
}
