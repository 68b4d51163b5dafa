#include "qet/gradest.hpp"

#include <algorithm>
#include <cmath>

namespace qet {

namespace {

double median_of(std::vector<double> v) {
    std::nth_element(v.begin(), v.begin() + long(v.size() / 2), v.end());
    return v[v.size() / 2];
}

double grid_point(long k, long B) { return (double(k) + 0.5) / double(B) - 0.5; }

} // namespace

PhaseValueOracle linear_phase_oracle(const std::vector<double>& g, int b) {
    PhaseValueOracle o;
    o.b = b;
    o.d = int(g.size());
    o.good_fraction = 1.0;
    o.linear = true;
    o.linear_g = g;
    o.f = [g](const std::vector<double>& x) {
        double s = 0.0;
        for (size_t i = 0; i < g.size(); ++i) s += g[i] * x[i];
        return s;
    };
    return o;
}

Ket jordan_state(const std::vector<double>& g, int b, int d,
                 const PhaseValueOracle* oracle) {
    require(b >= 1 && d >= 1 && d * b <= 22, "jordan_state: register too large");
    long B = 1L << b;
    long dim = 1;
    for (int i = 0; i < d; ++i) dim *= B;
    if (!oracle) {
        require(int(g.size()) == d, "jordan_state: gradient dimension mismatch");
        for (double gi : g)
            require(std::abs(gi) <= 1.0 / 3.0 + 1e-12, "jordan_state: ||g||_inf <= 1/3");
    }
    Vec amps(dim);
    double norm = 1.0 / std::sqrt(double(dim));
    std::vector<double> x(static_cast<size_t>(d));
    for (long idx = 0; idx < dim; ++idx) {
        long rem = idx;
        for (int i = d - 1; i >= 0; --i) {
            x[size_t(i)] = grid_point(rem % B, B);
            rem /= B;
        }
        double phase;
        if (oracle) {
            phase = 2.0 * kPi * (double(B) / 8.0) * oracle->f(x);
        } else {
            double ip = 0.0;
            for (int i = 0; i < d; ++i) ip += g[size_t(i)] * x[size_t(i)];
            phase = 2.0 * kPi * double(B) * ip;
        }
        amps(idx) = norm * cplx(std::cos(phase), std::sin(phase));
    }
    return Ket(std::move(amps));
}

std::vector<double> jordan_measure(const Ket& state, int b, int d, RandomStream& rng) {
    long B = 1L << b;
    Ket out = qft_grid(state, b, d, /*inverse=*/true);
    std::vector<double> p(size_t(out.dim()));
    for (long i = 0; i < out.dim(); ++i) p[size_t(i)] = std::norm(out.amps(i));
    long idx = long(sample_index(p, rng));
    std::vector<double> labels(static_cast<size_t>(d));
    for (int i = d - 1; i >= 0; --i) {
        labels[size_t(i)] = grid_point(idx % B, B);
        idx /= B;
    }
    return labels;
}

double jordan_coord_sample(double g, int b, RandomStream& rng) {
    long B = 1L << b;
    // The single-register outcome law is the phase-estimation sinc kernel at
    // theta = 2 pi g + pi - pi/B (the grid offset folded into the phase).
    double theta = 2.0 * kPi * g + kPi - kPi / double(B);
    long k = pe_sample_outcome(theta, B, rng);
    return grid_point(k, B);
}

GradEstimate block_to_grad(const PhaseValueOracle& oracle, double eps, double delta,
                           RandomStream& rng) {
    require(eps > 0.0 && eps <= 1.0 / 6.0 && delta > 0.0 && delta <= 1.0 / 6.0,
            "block_to_grad: eps, delta in (0, 1/6]");
    int b = int(std::ceil(std::log2(24.0 / eps)));
    require(oracle.b == b, "block_to_grad: oracle grid must use b = ceil(log2(24/eps))");
    double beta = 1.0 / 48.0;
    require(oracle.good_fraction >= 1.0 - beta * beta - 1e-12,
            "block_to_grad: oracle good_fraction below 1 - beta^2");
    int d = oracle.d;
    long B = 1L << b;
    int m = std::max(1, int(std::ceil(10.0 * std::log(double(d) / delta))));
    int reps = 2 * m + 1;

    std::vector<std::vector<double>> per_coord(static_cast<size_t>(d));
    for (auto& v : per_coord) v.reserve(size_t(reps));
    if (oracle.linear) {
        for (int r = 0; r < reps; ++r)
            for (int i = 0; i < d; ++i)
                per_coord[size_t(i)].push_back(
                    8.0 * jordan_coord_sample(oracle.linear_g[size_t(i)] / 8.0, b, rng));
    } else {
        Ket psi = jordan_state({}, b, d, &oracle);
        for (int r = 0; r < reps; ++r) {
            auto labels = jordan_measure(psi, b, d, rng);
            for (int i = 0; i < d; ++i) per_coord[size_t(i)].push_back(8.0 * labels[size_t(i)]);
        }
    }
    GradEstimate est;
    est.k.resize(size_t(d));
    for (int i = 0; i < d; ++i)
        est.k[size_t(i)] = std::clamp(median_of(per_coord[size_t(i)]), -4.0, 4.0);
    // One Hamiltonian-simulation state preparation per repetition, each with
    // Theta(B/8) controlled oracle uses; the d coordinates share the state.
    est.oracle_queries = uint64_t(reps) * uint64_t((B + 7) / 8);
    return est;
}

GradEstimate unbiased_block_to_grad(const PhaseValueOracle& oracle, double eps,
                                    double delta, RandomStream& rng) {
    require(eps > 0.0 && eps <= 1.0 / 6.0 && delta > 0.0 && delta <= 1.0 / 6.0,
            "unbiased_block_to_grad: eps, delta in (0, 1/6]");
    require(oracle.linear, "unbiased_block_to_grad: only the linear oracle path is supported");
    int b = int(std::ceil(std::log2(16.0 / eps)));
    require(oracle.b == b,
            "unbiased_block_to_grad: oracle grid must use b = ceil(log2(16/eps))");
    int d = oracle.d;
    double beta = delta / (96.0 * std::ceil(std::log(6.0 * d / delta)) + 12.0);
    require(oracle.good_fraction >= 1.0 - beta * beta - 1e-12,
            "unbiased_block_to_grad: oracle good_fraction below 1 - beta^2");
    long B = 1L << b;
    int m = 4 * int(std::ceil(std::log(6.0 * d / delta)));
    int n = int(std::ceil(std::log2(96.0 * d * (m + 1) / delta)));

    GradEstimate est;
    est.k.resize(size_t(d));
    for (int i = 0; i < d; ++i) {
        double phi = std::fmod(2.0 * kPi * oracle.linear_g[size_t(i)] / 8.0, 2.0 * kPi);
        if (phi < 0.0) phi += 2.0 * kPi;
        double bar = boosted_suppressed_pe(phi, B, m, n, rng);
        est.k[size_t(i)] = std::clamp(8.0 * wrap_pm_pi(bar) / (2.0 * kPi), -4.0, 4.0);
    }
    // 2m+1 state preparations, each with O(B/8 + log(1/beta)) oracle uses;
    // the d coordinates are read from the same batch of states.
    est.oracle_queries =
        uint64_t(2 * m + 1) *
        uint64_t((B + 7) / 8 + long(std::ceil(std::log2(1.0 / beta))));
    return est;
}

} // namespace qet
