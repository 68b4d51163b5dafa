#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qet/phaseest.hpp"
#include "qet/rng.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <numeric>

using namespace qet;

namespace {

double dist2pi(double a) {
    double r = std::fmod(std::fabs(a), 2.0 * kPi);
    return std::min(r, 2.0 * kPi - r);
}
} // namespace

TEST_CASE("outcome probabilities are a distribution and match the statevector") {
    for (long M : {4L, 8L, 32L}) {
        for (double phi : {0.0, 0.7, 3.9}) {
            for (double u : {0.0, 0.31, 0.875}) {
                auto p = pe_outcome_probs(phi, M, u);
                REQUIRE(Eigen::Index(p.size()) == M);
                double s = std::accumulate(p.begin(), p.end(), 0.0);
                CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
                auto sv = pe_statevector_probs(phi, M, u);
                for (long j = 0; j < M; ++j)
                    CHECK(p[size_t(j)] == doctest::Approx(sv[size_t(j)]).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("pe_density integrates to 1 over the symmetric offset and peaks at zero") {
    for (long M : {8L, 64L}) {
        double s = 0.0;
        const int grid = 200000;
        for (int i = 0; i < grid; ++i) {
            double x = kPi * (i + 0.5) / grid;
            s += 2.0 * pe_density(x, M) * (kPi / grid);
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-4));
        CHECK(pe_density(0.0, M) > pe_density(0.5, M));
    }
}

TEST_CASE("suppressed PE concentrates (reduced-trial margins)") {
    RandomStream rng(300, 0);
    const int trials = 40000;
    // Pr[|err| <= 2 pi / M] targets from the output density, with generous
    // slack for the reduced trial count.
    struct Row { long M; double target; };
    for (Row row : {Row{8, 0.30}, Row{16, 0.57}, Row{64, 0.75}}) {
        int hits = 0;
        double phi = 1.234;
        for (int t = 0; t < trials; ++t) {
            double est = suppressed_pe(PhaseInstance{phi, row.M, n_infinite}, rng);
            if (dist2pi(est - phi) <= 2.0 * kPi / double(row.M)) ++hits;
        }
        double frac = double(hits) / trials;
        CHECK(frac >= row.target - 0.02);
    }
}

TEST_CASE("lambda closed form matches Monte Carlo") {
    RandomStream rng(301, 0);
    for (long M : {8L, 16L, 64L}) {
        LambdaTable t = lambda_mc(M, 0, 100000, rng);
        CHECK(std::fabs(t.lambda - lambda_factor(M)) <= 5.0 * t.std_err + 1e-4);
        CHECK(t.std_err > 0.0);
        CHECK(t.mc_samples == 100000);
    }
    CHECK(lambda_factor(16) == doctest::Approx(0.9375));
}

TEST_CASE("Algorithm 2 is unbiased in the circular mean") {
    RandomStream rng(302, 0);
    const long M = 8;
    const int m = 3;
    const double phi = 2.1;
    std::complex<double> acc(0.0, 0.0);
    const int trials = 60000;
    for (int t = 0; t < trials; ++t) {
        double est = boosted_unbiased_pe(phi, M, m, rng);
        acc += std::exp(std::complex<double>(0.0, est - phi));
    }
    acc /= double(trials);
    // E[e^{i(est-phi)}] is real positive (unbiased direction)
    CHECK(std::fabs(acc.imag()) < 5.0 / std::sqrt(double(trials)));
    CHECK(acc.real() > 0.5);
}

TEST_CASE("Algorithm 3 output is close to the phase with high probability") {
    RandomStream rng(303, 0);
    const long M = 64;
    const int m = 8, n = 12;
    const double phi = 0.456;
    int hits = 0;
    const int trials = 20000;
    std::complex<double> acc(0.0, 0.0);
    for (int t = 0; t < trials; ++t) {
        double est = boosted_suppressed_pe(phi, M, m, n, rng);
        if (dist2pi(est - phi) <= 2.0 * kPi / double(M)) ++hits;
        acc += std::exp(std::complex<double>(0.0, est - phi));
    }
    CHECK(double(hits) / trials > 0.95);
    // circular bias bound: |Im E| <= 32 pi (m+1) 2^{-n} plus MC noise
    double bound = 32.0 * kPi * double(m + 1) * std::pow(2.0, -n);
    CHECK(std::fabs((acc / double(trials)).imag()) <=
          bound + 5.0 / std::sqrt(double(trials)));
}

TEST_CASE("unbiased probability estimate has the right mean") {
    RandomStream rng(304, 0);
    const long M = 16;
    const double lambda = lambda_factor(M);
    for (double p : {0.1, 0.5, 0.9}) {
        double acc = 0.0, acc2 = 0.0;
        const int trials = 120000;
        for (int t = 0; t < trials; ++t) {
            double v = unbiased_prob_estimate(p, M, 0, lambda, rng);
            acc += v;
            acc2 += v * v;
        }
        double mean = acc / trials;
        double se = std::sqrt((acc2 / trials - mean * mean) / trials);
        CHECK(std::fabs(mean - p) <= 5.0 * se + 1e-3);
    }
}

TEST_CASE("low-depth parameters and averaged estimate") {
    auto [M, m] = low_depth_params(1024);
    CHECK((M & (M - 1)) == 0);  // power of two
    CHECK(M >= 2);
    CHECK(m >= 1);
    CHECK(M * (2 * m + 1) <= 4 * 1024);  // depth budget respected up to constants

    RandomStream rng(305, 0);
    auto [M2, m2] = low_depth_params(256);
    LambdaTable lt = lambda_mc(M2, m2, 20000, rng);
    double acc = 0.0;
    const int reps = 400;
    for (int t = 0; t < reps; ++t)
        acc += low_depth_prob_estimate(0.3, 256, 8, lt.lambda, rng);
    CHECK(acc / reps == doctest::Approx(0.3).epsilon(0.15));
}

TEST_CASE("lambda cache file roundtrip") {
    std::string path = "lambda_cache_test_tmp.txt";
    RandomStream rng(306, 0);
    {
        LambdaCache cache(path);
        LambdaTable t = cache.get(8, 0, 20000, rng);
        CHECK(t.M == 8);
        CHECK(t.mc_samples == 20000);
        cache.save();
    }
    {
        LambdaCache cache(path);
        REQUIRE(cache.records().size() == 1);
        RandomStream rng2(999, 0);
        // cached: returned without recomputation regardless of rng
        LambdaTable t = cache.get(8, 0, 20000, rng2);
        CHECK(t.mc_samples == 20000);
        CHECK(std::fabs(t.lambda - lambda_factor(8)) < 0.01);
    }
    std::remove(path.c_str());
}
