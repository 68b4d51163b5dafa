// Estimate-conversion machinery: amplitude<->probability, l_inf -> l_q
// truncation for normalized vectors, operator -> Schatten with PSD rank
// projection, operator-norm concentration statistics, and the purification
// trace bound.
#pragma once

#include "qet/qcore.hpp"

#include <map>

namespace qet {

// Turn an l_q-norm estimate of |alpha| (a unit vector) into a probability
// estimate: renormalize to unit l_2 norm, then square entrywise.  If the
// input was eps-l_q-close to |alpha|, the output is 4*eps-l_t-close to p
// with t = 1/(1/q + 1/2).
RVec amp_to_prob(const RVec& abs_amp_est, double q);

// Companion exponent: t = 1/(1/q + 1/2).
double amp_to_prob_t(double q);

// Zero all entries with |est_j| < 2*eta.  For an eta-l_inf-close estimate of
// a vector with l_s norm <= gamma this gives, for every q in (s, inf),
//   ||alpha - out||_q <= min{ 4 eta^{(q-s)/q} gamma^{s/q}, 3 d^{1/q} eta }.
Vec threshold_truncate(const Vec& est, double eta);

// The corresponding l_q error bound (gamma = l_s norm bound of the truth).
double truncate_error_bound(double eta, double gamma, double q, double s, Eigen::Index d);

// Precision eta at which an l_inf estimate suffices for an eps-l_q estimate
// of an l_s-normalized vector:  eta = max{ (1/3)(eps/3)^{1/(1-s/q)}, eps/d^{1/q} }.
double linf_precision_for_lq(double eps, double q, double s, Eigen::Index d);

// Operator-norm precision that suffices for an eps-Schatten-q estimate of a
// rank-r state:  eta = max{ (eps/10)^{1/(1-1/q)}, eps/(2 (2r)^{1/q}) }.
double opnorm_precision_for_schatten(double eps, double q, int r);

// The footnote construction: eigendecompose est, subtract eta, clip the
// negative eigenvalues, keep the r largest.  A final safeguard rescales if
// the trace still exceeds 1, so the output is always PSD with rank <= r and
// trace norm <= 1, no matter the input.
Mat psd_rank_project(const Mat& est, double eta, int r);

// Monte-Carlo statistics of the operator norm of a random Hermitian matrix
// with independent mean-zero entries of modulus <= eps (random-sign model).
struct OpNormStats {
    Eigen::Index d = 0;
    double eps = 0.0;
    int trials = 0;
    double deterministic_bound = 0.0;           // eps * d, always valid
    std::map<double, double> quantiles;          // level in (0,1) -> ||E|| value
    double mean = 0.0;
};
OpNormStats subgaussian_opnorm_stats(Eigen::Index d, double eps, int trials,
                                     RandomStream& rng,
                                     const std::vector<double>& levels = {0.5, 0.9, 0.99, 0.999});

// Trace out B from estimate and truth; returns the reduced estimate and the
// exact trace distance (1/2)||rho - rho_tilde||_1.
std::pair<DensityMatrix, double>
trace_bound_from_purification(const Ket& psi_est, const Ket& psi_true,
                              Eigen::Index dA, Eigen::Index dB);

} // namespace qet
