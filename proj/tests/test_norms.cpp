#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qet/norms.hpp"
#include "qet/rng.hpp"

#include <cmath>

using namespace qet;

namespace {

RVec random_abs_unit(Eigen::Index d, RandomStream& rng) {
    RVec v(d);
    for (Eigen::Index i = 0; i < d; ++i) v[i] = std::fabs(rng.normal());
    return v / v.norm();
}

double lq_norm(const RVec& v, double q) {
    if (std::isinf(q)) return v.cwiseAbs().maxCoeff();
    double s = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += std::pow(std::fabs(v[i]), q);
    return std::pow(s, 1.0 / q);
}

} // namespace

TEST_CASE("amp_to_prob conversion bound holds on random instances") {
    RandomStream rng(100, 0);
    for (double q : {2.0, 4.0, std::numeric_limits<double>::infinity()}) {
        double t = amp_to_prob_t(q);
        int violations = 0;
        for (int trial = 0; trial < 2000; ++trial) {
            Eigen::Index d = 2 + Eigen::Index(rng.uniform_int(14));
            RVec alpha = random_abs_unit(d, rng);
            double eps = 0.001 + 0.2 * rng.uniform();
            // perturbation rescaled so the l_q error is exactly <= eps
            RVec noise(d);
            for (Eigen::Index i = 0; i < d; ++i) noise[i] = rng.normal();
            double nn = lq_norm(noise, q);
            if (nn > 0) noise *= (eps * rng.uniform()) / nn;
            RVec est = (alpha + noise).cwiseAbs();
            RVec p_hat = amp_to_prob(est, q);
            RVec p = alpha.cwiseProduct(alpha);
            if (lq_norm(p_hat - p, t) > 4.0 * eps + 1e-12) ++violations;
        }
        CHECK(violations == 0);
    }
}

TEST_CASE("amp_to_prob output is a probability vector") {
    RandomStream rng(101, 0);
    RVec est(5);
    for (int i = 0; i < 5; ++i) est[i] = rng.uniform();
    RVec p = amp_to_prob(est, 2.0);
    CHECK(p.minCoeff() >= 0.0);
    CHECK(p.sum() == doctest::Approx(1.0));
}

TEST_CASE("threshold_truncate obeys the l_q truncation bound") {
    RandomStream rng(102, 0);
    const double s = 2.0;
    int violations = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        Eigen::Index d = 4 + Eigen::Index(rng.uniform_int(28));
        Vec alpha(d);
        for (Eigen::Index i = 0; i < d; ++i) alpha[i] = cplx(rng.normal(), rng.normal());
        alpha /= alpha.norm();             // l_2 norm = 1 = gamma
        double eta = 0.001 + 0.1 * rng.uniform();
        Vec est = alpha;
        for (Eigen::Index i = 0; i < d; ++i)
            est[i] += cplx(eta * (2 * rng.uniform() - 1) / std::sqrt(2.0),
                           eta * (2 * rng.uniform() - 1) / std::sqrt(2.0));
        Vec out = threshold_truncate(est, eta);
        for (double q : {3.0, 4.0, 8.0}) {
            double err = 0;
            for (Eigen::Index i = 0; i < d; ++i)
                err += std::pow(std::abs(alpha[i] - out[i]), q);
            err = std::pow(err, 1.0 / q);
            if (err > truncate_error_bound(eta, 1.0, q, s, d) + 1e-12) ++violations;
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("precision helpers satisfy their defining inequalities") {
    // linf_precision_for_lq: plugging eta back into the truncation bound
    // gives at most 3*eps (the repair constant of the truncation bound).
    for (double eps : {0.3, 0.1, 0.01}) {
        for (double q : {3.0, 4.0, 10.0}) {
            Eigen::Index d = 64;
            double eta = linf_precision_for_lq(eps, q, 2.0, d);
            CHECK(eta > 0.0);
            CHECK(truncate_error_bound(eta, 1.0, q, 2.0, d) <= 3.0 * eps * (1.0 + 1e-9));
        }
    }
    for (double eps : {0.3, 0.05}) {
        for (double q : {2.0, 4.0}) {
            for (int r : {1, 3}) {
                double eta = opnorm_precision_for_schatten(eps, q, r);
                CHECK(eta > 0.0);
                CHECK(eta <= eps);
            }
        }
    }
}

TEST_CASE("psd_rank_project always yields a PSD, rank-limited, trace-bounded matrix") {
    RandomStream rng(103, 0);
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::Index d = 2 + Eigen::Index(rng.uniform_int(7));
        int r = 1 + int(rng.uniform_int(uint64_t(d)));
        Mat est(d, d);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j)
                est(i, j) = cplx(rng.normal(), rng.normal());
        est = ((est + est.adjoint().eval()) / 2.0).eval();
        double eta = 0.1 * rng.uniform();
        Mat out = psd_rank_project(est, eta, r);
        Eigen::SelfAdjointEigenSolver<Mat> es(out);
        CHECK(es.eigenvalues().minCoeff() >= -1e-12);
        int rank = 0;
        for (Eigen::Index i = 0; i < d; ++i)
            if (es.eigenvalues()[i] > 1e-12) ++rank;
        CHECK(rank <= r);
        CHECK(es.eigenvalues().sum() <= 1.0 + 1e-12);
        CHECK((out - out.adjoint()).norm() < 1e-12);
    }
}

TEST_CASE("psd_rank_project recovers a clean rank-1 state") {
    Ket psi = Ket::basis(4, 2);
    Mat rho = psi.amps * psi.amps.adjoint();
    Mat out = psd_rank_project(rho, 0.0, 1);
    CHECK((out - rho).norm() < 1e-12);
}

TEST_CASE("trace_bound_from_purification reduces correctly") {
    RandomStream rng(104, 0);
    Eigen::Index dA = 3, dB = 2;
    Vec a(dA * dB), b(dA * dB);
    for (Eigen::Index i = 0; i < dA * dB; ++i) {
        a[i] = cplx(rng.normal(), rng.normal());
        b[i] = cplx(rng.normal(), rng.normal());
    }
    Ket pa{a / a.norm()}, pb{b / b.norm()};
    auto [red, tdist] = trace_bound_from_purification(pa, pb, dA, dB);
    CHECK(red.mat.rows() == dA);
    CHECK(std::abs(red.mat.trace() - cplx(1.0, 0.0)) < 1e-12);
    CHECK(tdist >= 0.0);
    CHECK(tdist <= 1.0 + 1e-12);
    // identical purifications give zero distance
    auto [red2, t2] = trace_bound_from_purification(pa, pa, dA, dB);
    CHECK(t2 == doctest::Approx(0.0).epsilon(1e-12));
    // the reduced state of a product |psi>|0> is |psi><psi|
    Vec psi(3);
    psi << cplx(0.6, 0.0), cplx(0.0, 0.8), cplx(0.0, 0.0);
    Vec prod = Vec::Zero(6);
    for (Eigen::Index i = 0; i < 3; ++i) prod[i * 2] = psi[i];
    auto [red3, t3] = trace_bound_from_purification(Ket{prod}, Ket{prod}, 3, 2);
    CHECK((red3.mat - psi * psi.adjoint()).norm() < 1e-12);
    (void)t3;
}

TEST_CASE("subgaussian opnorm stats respect the deterministic bound") {
    RandomStream rng(105, 0);
    OpNormStats st = subgaussian_opnorm_stats(16, 0.05, 200, rng, {0.5, 0.99});
    CHECK(st.deterministic_bound == doctest::Approx(0.05 * 16));
    CHECK(st.mean > 0.0);
    CHECK(st.mean <= st.deterministic_bound);
    CHECK(st.quantiles.at(0.5) <= st.quantiles.at(0.99));
    CHECK(st.quantiles.at(0.99) <= st.deterministic_bound + 1e-12);
    // concentration: the norm should scale like sqrt(d), far below eps*d
    CHECK(st.quantiles.at(0.99) < 0.05 * 3.0 * std::sqrt(16.0));
}
