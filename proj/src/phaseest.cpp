#include "qet/phaseest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace qet {

namespace {

// sinc-squared kernel: Pr-mass of an outcome at angular offset Delta,
//   K(Delta) = sin^2(M Delta / 2) / (M^2 sin^2(Delta / 2)),
// with the removable singularity K(0) = 1.  Sums to 1 over the M outcomes.
double pe_kernel(double delta, long M) {
    double h = 0.5 * wrap_pm_pi(delta);
    double s = std::sin(h);
    if (std::abs(s) < 1e-12) return 1.0;
    double num = std::sin(double(M) * h);
    return (num * num) / (double(M) * double(M) * s * s);
}

} // namespace

// Sample j in [M] with Pr[j] = K(theta - 2 pi j / M).  Scans outward from the
// peak, so the expected number of evaluated terms is O(log M).
long pe_sample_outcome(double theta, long M, RandomStream& rng) {
    double u = rng.uniform();
    double step = 2.0 * kPi / double(M);
    long j0 = long(std::floor(theta / step + 0.5));
    double acc = 0.0;
    long last = j0;
    for (long offs = 0; offs <= M; ++offs) {
        // visit j0, j0+1, j0-1, j0+2, j0-2, ...
        for (int sgn = 0; sgn < (offs == 0 ? 1 : 2); ++sgn) {
            long j = (sgn == 0) ? j0 + offs : j0 - offs;
            long jm = ((j % M) + M) % M;
            acc += pe_kernel(theta - step * double(j), M);
            last = jm;
            if (u < acc) return jm;
        }
        if (offs > 0 && offs >= (M + 1) / 2) break;  // all M outcomes visited
    }
    return last;  // numerically exhausted: the final scanned outcome
}

double pe_density(double delta, long M) {
    require(delta >= 0.0 && delta <= kPi + 1e-12, "pe_density: delta in [0, pi]");
    return double(M) / (2.0 * kPi) * pe_kernel(delta, M);
}

std::vector<double> pe_outcome_probs(double phi, long M, double u) {
    std::vector<double> p(static_cast<size_t>(M));
    for (long j = 0; j < M; ++j)
        p[size_t(j)] = pe_kernel(phi - 2.0 * kPi * (double(j) + u) / double(M), M);
    return p;
}

std::vector<double> pe_statevector_probs(double phi, long M, double u) {
    // |psi> = (1/sqrt(M)) sum_k e^{i (phi - 2 pi u / M) k} |k>, then inverse
    // DFT over Z_M and a computational-basis measurement.
    double theta = phi - 2.0 * kPi * u / double(M);
    Vec psi(M);
    for (long k = 0; k < M; ++k)
        psi(k) = cplx(std::cos(theta * double(k)), std::sin(theta * double(k))) /
                 std::sqrt(double(M));
    std::vector<double> out(static_cast<size_t>(M));
    for (long j = 0; j < M; ++j) {
        cplx acc = 0.0;
        for (long k = 0; k < M; ++k) {
            double ph = -2.0 * kPi * double(j) * double(k) / double(M);
            acc += cplx(std::cos(ph), std::sin(ph)) * psi(k);  // (F_M)^dag
        }
        out[size_t(j)] = std::norm(acc) / double(M);
    }
    return out;
}

double suppressed_pe(const PhaseInstance& inst, RandomStream& rng) {
    require(inst.M >= 2 && (inst.M & (inst.M - 1)) == 0, "suppressed_pe: M must be a power of 2");
    double u;
    if (inst.n == n_infinite) {
        u = rng.uniform();
    } else {
        require(inst.n >= 1 && inst.n <= 62, "suppressed_pe: n out of range");
        uint64_t N = uint64_t(1) << inst.n;
        u = double(rng.uniform_int(N)) / double(N);
    }
    double theta = inst.phi - 2.0 * kPi * u / double(inst.M);
    long j = pe_sample_outcome(theta, inst.M, rng);
    double out = std::fmod(2.0 * kPi * (double(j) + u) / double(inst.M), 2.0 * kPi);
    if (out < 0.0) out += 2.0 * kPi;
    return out;
}

double boosted_unbiased_pe(double phi, long M, int m, RandomStream& rng) {
    require(m >= 1, "boosted_unbiased_pe: m must be >= 1");
    int cnt = 2 * m + 1;
    std::vector<double> v(static_cast<size_t>(cnt));
    PhaseInstance inst{phi, M, n_infinite};
    for (int i = 0; i < cnt; ++i) v[size_t(i)] = suppressed_pe(inst, rng);
    std::sort(v.begin(), v.end());
    // Combined list of the estimates and their 2*pi-shifted copies; any
    // width-minimal window of m+1 consecutive points covers m+1 distinct
    // estimates via I or I + 2*pi.
    std::vector<double> w;
    w.reserve(static_cast<size_t>(2 * cnt));
    for (double x : v) w.push_back(x - 2.0 * kPi);
    for (double x : v) w.push_back(x);
    double best = 1e300;
    std::vector<std::pair<double, double>> ties;
    for (size_t i = 0; i + size_t(m) < w.size(); ++i) {
        double a = w[i], b = w[i + size_t(m)];
        double width = b - a;
        if (width < best - 1e-15) {
            best = width;
            ties.clear();
            ties.emplace_back(a, b);
        } else if (width <= best + 1e-15) {
            ties.emplace_back(a, b);
        }
    }
    auto [a, b] = ties.size() == 1 ? ties[0] : ties[rng.uniform_int(ties.size())];
    double r = (a + b) / 2.0;
    if (a + b < 0.0) r += 2.0 * kPi;
    if (r >= 2.0 * kPi) r -= 2.0 * kPi;
    if (r < 0.0) r += 2.0 * kPi;
    return r;
}

double boosted_suppressed_pe(double phi, long M, int m, int n, RandomStream& rng) {
    require(m >= 1, "boosted_suppressed_pe: m must be >= 1");
    require(double(n) >= std::log2(kPi * double(m)),
            "boosted_suppressed_pe: requires n >= log2(pi*m)");
    int cnt = 2 * m + 1;
    std::vector<double> v(static_cast<size_t>(cnt));
    PhaseInstance inst{phi, M, n};
    for (int i = 0; i < cnt; ++i) v[size_t(i)] = suppressed_pe(inst, rng);
    // d_j = m-th smallest circular distance to the other estimates.
    std::vector<double> wgt(static_cast<size_t>(cnt));
    double W = 0.0;
    std::vector<double> dist;
    dist.reserve(static_cast<size_t>(cnt - 1));
    for (int j = 0; j < cnt; ++j) {
        dist.clear();
        for (int k = 0; k < cnt; ++k)
            if (k != j) dist.push_back(dist_2pi(v[size_t(j)] - v[size_t(k)]));
        std::nth_element(dist.begin(), dist.begin() + (m - 1), dist.end());
        double dj = dist[size_t(m - 1)];
        wgt[size_t(j)] = std::exp(-(double(m) * double(M) / 4.0) * dj);
        W += wgt[size_t(j)];
    }
    double u = rng.uniform() * W;
    double acc = 0.0;
    for (int j = 0; j < cnt; ++j) {
        acc += wgt[size_t(j)];
        if (u < acc) return v[size_t(j)];
    }
    return v[size_t(cnt - 1)];
}

double lambda_factor(long M) { return 1.0 - 1.0 / double(M); }

namespace {
constexpr int kLambdaShiftDigits = 40;  // shift precision used for boosted lambda
}

LambdaTable lambda_mc(long M, int m, uint64_t samples, RandomStream& rng) {
    require(samples >= 10000, "lambda_mc: samples must be >= 1e4");
    double sum = 0.0, sumsq = 0.0;
    for (uint64_t i = 0; i < samples; ++i) {
        double est = (m == 0)
                         ? suppressed_pe(PhaseInstance{0.0, M, n_infinite}, rng)
                         : boosted_suppressed_pe(0.0, M, m, kLambdaShiftDigits, rng);
        double x = std::cos(est);
        sum += x;
        sumsq += x * x;
    }
    double mean = sum / double(samples);
    double var = std::max(0.0, sumsq / double(samples) - mean * mean);
    LambdaTable t;
    t.M = M;
    t.m = m;
    t.lambda = mean;
    t.mc_samples = samples;
    t.seed = rng.seed();
    t.std_err = std::sqrt(var / double(samples));
    return t;
}

LambdaCache::LambdaCache(std::string path) : path_(std::move(path)) {
    if (path_.empty()) return;
    std::ifstream in(path_);
    if (!in) return;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        LambdaTable t;
        if (ss >> t.M >> t.m >> t.lambda >> t.mc_samples >> t.seed >> t.std_err)
            records_.push_back(t);
    }
}

LambdaTable LambdaCache::get(long M, int m, uint64_t samples, RandomStream& rng) {
    for (const auto& t : records_)
        if (t.M == M && t.m == m && t.mc_samples >= samples) return t;
    LambdaTable t = lambda_mc(M, m, samples, rng);
    records_.push_back(t);
    if (!path_.empty()) save();
    return t;
}

void LambdaCache::save() const {
    if (path_.empty()) return;
    std::ofstream out(path_);
    out << "# lambda-cache v1\n# M m lambda samples seed stderr\n";
    out.precision(17);
    for (const auto& t : records_)
        out << t.M << " " << t.m << " " << t.lambda << " " << t.mc_samples << " "
            << t.seed << " " << t.std_err << "\n";
}

double unbiased_prob_estimate(double p, long M, int m, double lambda, RandomStream& rng) {
    require(p >= 0.0 && p <= 1.0, "unbiased_prob_estimate: p in [0,1]");
    double theta = std::asin(std::sqrt(p));
    double sign = (rng.uniform() < 0.5) ? 1.0 : -1.0;
    double phi = std::fmod(sign * 2.0 * theta + 2.0 * kPi, 2.0 * kPi);
    double est = (m == 0) ? suppressed_pe(PhaseInstance{phi, M, n_infinite}, rng)
                          : boosted_suppressed_pe(phi, M, m, kLambdaShiftDigits, rng);
    return 0.5 - std::cos(est) / (2.0 * lambda);
}

std::pair<long, int> low_depth_params(long t) {
    require(t >= 2, "low_depth_params: t must be >= 2");
    double lg = std::max(1.0, std::log2(double(t)));
    long M = 2;
    while (2 * M <= long(std::max(2.0, double(t) / lg))) M *= 2;
    int m = int(std::ceil(lg));
    return {M, m};
}

double low_depth_prob_estimate(double p, long t, int K, double lambda, RandomStream& rng) {
    require(K >= 1, "low_depth_prob_estimate: K must be >= 1");
    auto [M, m] = low_depth_params(t);
    double acc = 0.0;
    for (int k = 0; k < K; ++k) acc += unbiased_prob_estimate(p, M, m, lambda, rng);
    return acc / double(K);
}

} // namespace qet
