// Suppressed-bias phase estimation: the exact output density, the three
// sampling algorithms, lambda calibration and unbiased estimators of e^{i phi}
// and of probabilities, plus the low-depth averaging scheme.
//
// Sampling draws directly from the closed-form outcome distribution of the
// shifted inverse Fourier transform (not from a 2M-dimensional statevector);
// the statevector route is kept for cross-checks at small M.
#pragma once

#include "qet/qcore.hpp"

#include <string>
#include <vector>

namespace qet {

// n_infinite encodes "infinite precision" of the random shift u: the shift is
// drawn as a full 53-bit double.
inline constexpr int n_infinite = -1;

struct PhaseInstance {
    double phi = 0.0;  // true phase in [0, 2*pi)
    long M = 2;        // register size, a power of 2
    int n = n_infinite;  // digits of the random shift, or n_infinite
};

// Output density of one phase-estimation round at offset delta = |phi-est|_2pi:
//   f(delta) = (M / 2 pi) * sinc^2(M delta / 2) / sinc^2(delta / 2).
double pe_density(double delta, long M);

// Exact outcome probabilities Pr[j], j in [M], of Algorithm 1 conditioned on
// the shift u: Pr[j] = sinc-kernel at Delta_j = phi - 2 pi (j + u) / M.
std::vector<double> pe_outcome_probs(double phi, long M, double u);

// One outcome index j in [M] with Pr[j] proportional to the sinc kernel at
// Delta_j = theta - 2*pi*j/M.  Expected number of kernel evaluations is
// O(log M) thanks to an outward scan from the peak.
long pe_sample_outcome(double theta, long M, RandomStream& rng);

// One sample of Algorithm 1; returns the estimate in [0, 2*pi).
double suppressed_pe(const PhaseInstance& inst, RandomStream& rng);

// Algorithm 2: midpoint of the shortest interval covering m+1 of 2m+1
// infinite-precision estimates (unbiased; ties broken uniformly at random).
double boosted_unbiased_pe(double phi, long M, int m, RandomStream& rng);

// Algorithm 3: weighted resampling of 2m+1 finite-precision estimates with
// weights w_j = exp(-(m M / 4) d_j).  Requires n >= log2(pi * m).
double boosted_suppressed_pe(double phi, long M, int m, int n, RandomStream& rng);

// Closed-form lambda for the unboosted estimator: lambda(M) = 1 - 1/M.
double lambda_factor(long M);

struct LambdaTable {
    long M = 0;
    int m = 0;            // 0 = unboosted
    double lambda = 1.0;
    uint64_t mc_samples = 0;
    uint64_t seed = 0;
    double std_err = 0.0;
};

// Monte-Carlo calibration of lambda(M, m) = E[Re e^{i phi_bar}] at phi = 0.
// The boosted case runs Algorithm 3 with the same shift precision that
// unbiased_prob_estimate uses (n = 40).
LambdaTable lambda_mc(long M, int m, uint64_t samples, RandomStream& rng);

// Versioned line-oriented cache of lambda values: load/lookup/append/save.
class LambdaCache {
public:
    explicit LambdaCache(std::string path = "");
    // Returns a cached record, or computes one with `samples` MC draws
    // (appending to the backing file when a path was given).
    LambdaTable get(long M, int m, uint64_t samples, RandomStream& rng);
    const std::vector<LambdaTable>& records() const { return records_; }
    void save() const;

private:
    std::string path_;
    std::vector<LambdaTable> records_;
};

// Unbiased estimate of a probability p via amplitude-estimation eigenphases
// +-2*arcsin(sqrt(p)) and Algorithm 3 (m >= 1) or Algorithm 1 (m = 0):
//   p_hat = 1/2 - Re[e^{i phi_bar}] / (2 lambda).
// The output may fall outside [0, 1].
double unbiased_prob_estimate(double p, long M, int m, double lambda, RandomStream& rng);

// Parameters of the low-depth scheme for depth budget t:
// M = Theta(t / log t) (power of 2), m = Theta(log t).
std::pair<long, int> low_depth_params(long t);

// Average of K independent unbiased probability estimates at depth budget t.
double low_depth_prob_estimate(double p, long t, int K, double lambda, RandomStream& rng);

// Full statevector simulation of one Algorithm 1 round conditioned on shift
// u: builds the M-point state, applies the inverse DFT over Z_M, and returns
// the outcome distribution.  Cross-check for pe_outcome_probs, M <= 256.
std::vector<double> pe_statevector_probs(double phi, long M, double u);

} // namespace qet
