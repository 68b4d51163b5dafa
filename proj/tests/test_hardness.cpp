#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qet/hardness.hpp"
#include "qet/rng.hpp"

#include <cmath>

using namespace qet;

namespace {
}

TEST_CASE("field arithmetic helpers") {
    CHECK(powmod(3, 4, 7) == 4);
    CHECK(powmod(2, 0, 5) == 1);
    CHECK(legendre_symbol(2, 7) == 1);   // 3^2 = 2 mod 7
    CHECK(legendre_symbol(3, 7) == -1);
    CHECK(legendre_symbol(0, 7) == 0);
    for (long d : {5L, 11L})
        for (long a = 1; a < d; ++a)
            CHECK((a * mod_inverse(a, d)) % d == 1);
}

TEST_CASE("gauss sum closed form matches direct summation") {
    for (long d : {3L, 5L, 7L, 11L}) {
        for (long a = 1; a < d; ++a) {
            for (long b = 0; b < d; ++b) {
                cplx direct = gauss_sum_direct(a, b, d);
                cplx closed = gauss_sum_closed(a, b, d);
                CHECK(std::abs(direct - closed) < 1e-9);
                CHECK(std::abs(std::abs(direct) - std::sqrt(double(d))) < 1e-9);
            }
        }
    }
}

TEST_CASE("probset distributions are valid and the spectrum matches") {
    const Eigen::Index d = 12;
    for (double eps : {0.01, 0.05}) {
        std::vector<int> b(size_t(d / 2));
        for (size_t i = 0; i < b.size(); ++i) b[i] = int(i % 2);
        double tot = 0.0;
        for (Eigen::Index i = 0; i < d / 2; ++i)
            for (int c = 0; c < 2; ++c) {
                double p = probset_prob(b, i, c, d, eps);
                CHECK(p >= 0.0);
                tot += p;
            }
        CHECK(tot == doctest::Approx(1.0).epsilon(1e-12));
        // honest separation between b_i = 0 and b_i = 1 rows: 24 eps / d in l1
        double sep = 0.0;
        std::vector<int> b2 = b;
        b2[0] ^= 1;
        for (int c = 0; c < 2; ++c)
            sep += std::fabs(probset_prob(b, 0, c, d, eps) -
                             probset_prob(b2, 0, c, d, eps));
        CHECK(sep == doctest::Approx(24.0 * eps / double(d)).epsilon(1e-12));

        ProbsetFamily fam = probset_build(d, eps);
        double cpcm = std::sqrt((1.0 + 6.0 * eps) * (1.0 - 6.0 * eps));
        CHECK(fam.top_eig == doctest::Approx((3.0 + cpcm) / 4.0).epsilon(1e-12));
        CHECK(fam.small_eig ==
              doctest::Approx((1.0 - cpcm) / (2.0 * double(d))).epsilon(1e-12));
        // direct diagonalization agrees with the closed form
        REQUIRE(fam.sigma_eigs.size() > 0);
        CHECK(std::fabs(fam.sigma_eigs.maxCoeff() - fam.top_eig) < 1e-9);
        CHECK(fam.entropy == doctest::Approx(fam.entropy_direct).epsilon(1e-7));
        CHECK(fam.entropy <= fam.entropy_bound + 1e-12);
        CHECK(fam.entropy > 0.0);
    }
}

TEST_CASE("phase-oracle distribution decodes exactly at zero noise") {
    RandomStream rng(800, 0);
    const double eps = 0.02;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> x(16);
        for (auto& v : x) v = int(rng.uniform_int(2));
        RVec p = phase_to_dist(x, eps);
        CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(p.minCoeff() >= 0.0);
        auto back = phase_decode(p, eps);
        REQUIRE(back.size() == x.size());
        for (size_t j = 0; j < x.size(); ++j) CHECK(back[j] == x[j]);
    }
    // bit gap: |p_{j,0}(x_j=0) - p_{j,0}(x_j=1)| = sin(8 pi eps)/(2d) per the
    // half-angle identity, so an l1 error below half of that decodes j right.
    std::vector<int> x0(16, 0), x1(16, 0);
    x1[0] = 1;
    RVec p0 = phase_to_dist(x0, eps), p1 = phase_to_dist(x1, eps);
    double gap = std::fabs(p0[0] - p1[0]);
    CHECK(gap == doctest::Approx(std::sin(8.0 * kPi * eps) / (2.0 * 16.0))
                     .epsilon(1e-9));
}

TEST_CASE("MUB family: unitarity, unbiasedness, norms") {
    for (long d : {3L, 5L, 7L}) {
        long r = d;
        MubFamily fam = mub_build(d, r);
        REQUIRE(long(fam.U.size()) == r);
        for (long j = 0; j < r; ++j) {
            Mat uu = fam.U[size_t(j)].adjoint() * fam.U[size_t(j)];
            CHECK((uu - Mat::Identity(d, d)).norm() < 1e-10);
        }
        // mutual unbiasedness: all overlaps have modulus 1/sqrt(d)
        for (long j = 0; j < r; ++j)
            for (long jp = 0; jp < r; ++jp) {
                if (j == jp) continue;
                const Mat& al = fam.alpha[size_t(j)][size_t(jp)];
                for (long k = 0; k < d; ++k)
                    for (long kp = 0; kp < d; ++kp)
                        CHECK(std::abs(std::abs(al(k, kp)) - 1.0 / std::sqrt(double(d)))
                              < 1e-10);
            }
        CHECK(fam.A.rows() == d * r);
        Eigen::SelfAdjointEigenSolver<RMat> es(fam.A);
        CHECK(es.eigenvalues().cwiseAbs().maxCoeff() <= 2.0 * double(d) + 1e-9);
        CHECK(fam.A.squaredNorm() <= 4.0 * double(d * d * d * r) + 1e-9);
        // M has spectrum in {0, +-d} (A = Re M + dI is PSD with eigs in {0,d,2d})
        double lo = es.eigenvalues().minCoeff();
        CHECK(lo >= -1e-9);
    }
}

TEST_CASE("MUB eigenvectors and eigenvalues are exact") {
    for (long d : {3L, 5L, 7L}) {
        MubFamily fam = mub_build(d, d);
        for (long l = 0; l < d; ++l) {
            for (long m = 0; m < d; ++m) {
                Vec v = mub_eigenvector(fam, l, m);
                double lam = mub_eigenvalue(fam, l, m);
                Vec mv = fam.M * v;
                CHECK((mv - lam * v).norm() < 1e-9 * std::max(1.0, v.norm()));
                // eigenvalue magnitude is 0 or d
                CHECK((std::fabs(lam) < 1e-9 ||
                       std::fabs(std::fabs(lam) - double(d)) < 1e-9));
            }
        }
    }
}

TEST_CASE("rho embedding: unit states and the quadratic Frobenius identity") {
    RandomStream rng(801, 0);
    const long d = 5;
    MubFamily fam = mub_build(d, d);
    std::vector<int> b(size_t(d * d)), bb(size_t(d * d));
    for (auto& v : b) v = int(rng.uniform_int(2));
    bb = b;
    for (size_t i = 0; i < bb.size(); i += 3) bb[i] ^= 1;

    for (double eps : {0.01, 0.003, 0.001}) {
        auto [psi, rho] = rho_embed(b, fam, eps);
        CHECK(psi.amps.norm() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(rho.rows() == 2 * d);
        CHECK(std::abs(rho.trace() - cplx(1.0, 0.0)) < 1e-10);
        auto [psi2, rho2] = rho_embed(bb, fam, eps);
        // ||rho_b - rho_bb||_F^2 = (eps^2 / (2 d^2 r^2)) delta^T A delta + O(eps^4)
        RVec delta(d * d);
        for (long i = 0; i < d * d; ++i)
            delta[i] = 2.0 * double(b[size_t(i)] - bb[size_t(i)]);
        double quad = delta.transpose() * fam.A * delta;
        double pred = eps * eps / (2.0 * double(d * d) * double(d * d)) * quad;
        double actual = (rho - rho2).squaredNorm();
        // residual is O(eps^4): generous envelope 50 * eps^4 * d^2 r
        CHECK(std::fabs(actual - pred) <=
              50.0 * std::pow(eps, 4) * double(d * d) * double(d) + 1e-13);
    }
}

TEST_CASE("delta quadratic statistics match the closed-form mean") {
    RandomStream rng(802, 0);
    const long d = 5;
    MubFamily fam = mub_build(d, d);
    DeltaQuadStats st = delta_quadratic_stats(fam, 20000, rng);
    CHECK(st.mean_exact == doctest::Approx(2.0 * double(d * d) * double(d)));
    CHECK(st.mean_mc == doctest::Approx(st.mean_exact).epsilon(0.05));
    CHECK(st.tail_frac <= 0.05);
    CHECK(st.trials == 20000);
}
