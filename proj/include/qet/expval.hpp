// Simultaneous estimation of many expectation values Tr(E_j rho) from a
// purification oracle, including the bounded matrix-series concentration
// bound that justifies the sqrt(|Sum E_j^2/eps_j^2|) normalization.
#pragma once

#include "qet/common.hpp"
#include "qet/rng.hpp"
#include "qet/blockenc.hpp"

#include <vector>
#include <cstdint>

namespace qet {

// A family of Hermitian observables with per-observable error targets.
// gamma_j = 1/eps_j throughout; nu = |gamma|_1, sigma is the concentration
// normalization max{sqrt(2 |Sum E_j^2/eps_j^2| ln(2d/delta)), 1}, and
// sigma_prime = min{nu, sigma} is the factor the estimator actually pays.
struct ObservableSet {
    std::vector<Mat> E;
    RVec eps_vec;
    double delta = 0.0;
    double nu = 0.0;
    double sigma = 0.0;
    double sigma_prime = 0.0;
};

// Validates Hermiticity (1e-10) and |E_j| <= 1 (1e-8) and fills in the
// derived normalization constants.
ObservableSet make_observable_set(std::vector<Mat> E, RVec eps, double delta);

// Sum_j gamma_j^2 E_j^2, the variance proxy of the matrix series.
Mat sum_weighted_squares(const std::vector<Mat>& E, const RVec& gamma);

struct SeriesTailResult {
    double empirical = 0.0;    // MC estimate of P[|Y| >= t]
    double bound = 0.0;        // 2d exp(-t^2 / (2 v_bound))
    double mc_stderr = 0.0;
    double v_empirical = 0.0;  // |mean of Y^2| over the trials
    double v_bound = 0.0;      // |Sum gamma_j^2 E_j^2|
    uint64_t trials = 0;
};

// Monte-Carlo tail of Y = Sum lambda_j gamma_j E_j with lambda_j iid
// symmetric grid-valued on [-1, 1] (2 G_b, the doubled gradient grid).
SeriesTailResult series_tail_check(const std::vector<Mat>& E, const RVec& gamma,
                                   double t, uint64_t trials, int b,
                                   RandomStream& rng);

struct LinCombBlock {
    Mat A;              // (1/sigma_prime) Sum x_j gamma_j E_j
    bool valid = true;  // false when |Sum 2 x_j gamma_j E_j| > sigma
    CostLedger ledger;
};

// Block of the weighted combination at grid point x in G_b^m; the ledger
// charges ceil((nu/sigma') log(nu/(sigma' eps))) selector calls.
LinCombBlock lincomb_obs_be(const ObservableSet& obs, const RVec& x, double eps);

struct MultiExpResult {
    RVec z;       // clamped estimates, one per observable
    RVec truth;   // exact Tr(rho E_j), for diagnostics
    CostLedger ledger;
    double sigma_prime = 0.0;
};

// Estimates all Tr(rho E_j) to within eps_j simultaneously with probability
// >= 1 - delta, with bias |E[z_j] - Tr(rho E_j)| <= 16 sigma' eps_j delta.
MultiExpResult multi_expectation(const Mat& rho, const ObservableSet& obs,
                                 double delta, RandomStream& rng);

} // namespace qet
