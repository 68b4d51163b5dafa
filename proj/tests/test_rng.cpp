#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qet/rng.hpp"

#include <cmath>
#include <vector>

using namespace qet;

TEST_CASE("streams are deterministic and independent") {
    RandomStream a(42, 7), b(42, 7), c(42, 8);
    bool same = true, diff = false;
    for (int i = 0; i < 1000; ++i) {
        uint64_t xa = a.next_u64();
        same = same && (xa == b.next_u64());
        diff = diff || (xa != c.next_u64());
    }
    CHECK(same);
    CHECK(diff);
    RandomStream s = RandomStream(42, 0).substream(3);
    RandomStream s2 = RandomStream(42, 0).substream(3);
    CHECK(s.next_u64() == s2.next_u64());
}

TEST_CASE("uniform moments") {
    RandomStream rng(1, 0);
    double m1 = 0, m2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        m1 += u;
        m2 += u * u;
    }
    CHECK(m1 / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(m2 / n == doctest::Approx(1.0 / 3.0).epsilon(0.01));
}

TEST_CASE("binomial small-n matches exact pmf") {
    RandomStream rng(3, 0);
    const int n = 200000;
    std::vector<int> hist(11, 0);
    for (int i = 0; i < n; ++i) ++hist[size_t(rng.binomial(10, 0.3))];
    // exact pmf by recurrence
    double p = 0.3, pk = std::pow(0.7, 10);
    for (int k = 0; k <= 10; ++k) {
        CHECK(double(hist[size_t(k)]) / n ==
              doctest::Approx(pk).epsilon(0.0).scale(1.0).epsilon(0.15 + 1e-9));
        pk *= (double(10 - k) / double(k + 1)) * (p / (1 - p));
    }
}

TEST_CASE("binomial large-n mean and variance, non-degenerate") {
    RandomStream rng(5, 0);
    // regression: this configuration previously collapsed to a constant
    const uint64_t n = 16000;
    const double p = 1.0 / 3.0;
    double m1 = 0, m2 = 0;
    uint64_t lo = n, hi = 0;
    const int trials = 20000;
    for (int i = 0; i < trials; ++i) {
        uint64_t k = rng.binomial(n, p);
        m1 += double(k);
        m2 += double(k) * double(k);
        lo = std::min(lo, k);
        hi = std::max(hi, k);
    }
    m1 /= trials;
    m2 = m2 / trials - m1 * m1;
    CHECK(m1 == doctest::Approx(double(n) * p).epsilon(0.01));
    CHECK(m2 == doctest::Approx(double(n) * p * (1 - p)).epsilon(0.1));
    CHECK(hi > lo);  // not a point mass
    CHECK(rng.binomial(100, 0.0) == 0);
    CHECK(rng.binomial(100, 1.0) == 100);
}

TEST_CASE("multinomial totals and marginal mean") {
    RandomStream rng(9, 0);
    std::vector<double> probs{0.5, 0.25, 0.125, 0.125};
    double mean0 = 0;
    for (int t = 0; t < 2000; ++t) {
        auto counts = rng.multinomial(1000, probs);
        uint64_t tot = 0;
        for (uint64_t c : counts) tot += c;
        CHECK(tot == 1000);
        mean0 += double(counts[0]);
    }
    CHECK(mean0 / 2000.0 == doctest::Approx(500.0).epsilon(0.01));
}

TEST_CASE("normal moments") {
    RandomStream rng(11, 0);
    double m1 = 0, m2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double x = rng.normal();
        m1 += x;
        m2 += x * x;
    }
    CHECK(std::fabs(m1 / n) < 0.01);
    CHECK(m2 / n == doctest::Approx(1.0).epsilon(0.02));
}
