#include "qet/expval.hpp"
#include "qet/gradest.hpp"
#include "qet/qcore.hpp"

#include <algorithm>
#include <cmath>

namespace qet {

namespace {

// Uniform draw from the doubled gradient grid 2*G_b, the symmetric
// grid-valued distribution on [-1, 1] used by the hypergrid sampler.
double grid_lambda(int b, RandomStream& rng) {
    long B = 1L << b;
    long k = long(rng.uniform_int(uint64_t(B)));
    return 2.0 * ((double(k) + 0.5) / double(B) - 0.5);
}

} // namespace

ObservableSet make_observable_set(std::vector<Mat> E, RVec eps, double delta) {
    require(!E.empty(), "make_observable_set: need at least one observable");
    require(eps.size() == Eigen::Index(E.size()),
            "make_observable_set: eps size mismatch");
    require(delta > 0.0 && delta < 1.0, "make_observable_set: delta in (0,1)");
    Eigen::Index d = E[0].rows();
    for (const Mat& Ej : E) {
        require(Ej.rows() == d && Ej.cols() == d,
                "make_observable_set: dimension mismatch");
        require((Ej - Ej.adjoint()).cwiseAbs().maxCoeff() <= kHermTol,
                "make_observable_set: observable not Hermitian");
        require(norm_mat(Ej, q_inf()) <= 1.0 + 1e-8,
                "make_observable_set: observable norm exceeds 1");
    }
    for (Eigen::Index j = 0; j < eps.size(); ++j)
        require(eps(j) > 0.0 && eps(j) <= 2.0,
                "make_observable_set: eps_j in (0,2]");

    ObservableSet obs;
    obs.eps_vec = eps;
    obs.delta = delta;
    RVec gamma = eps.cwiseInverse();
    obs.nu = gamma.lpNorm<1>();
    Mat S = sum_weighted_squares(E, gamma);
    obs.sigma = std::max(
        std::sqrt(2.0 * norm_mat(S, q_inf()) * std::log(2.0 * double(d) / delta)),
        1.0);
    obs.sigma_prime = std::min(obs.nu, obs.sigma);
    obs.E = std::move(E);
    return obs;
}

Mat sum_weighted_squares(const std::vector<Mat>& E, const RVec& gamma) {
    require(gamma.size() == Eigen::Index(E.size()),
            "sum_weighted_squares: gamma size mismatch");
    Eigen::Index d = E[0].rows();
    Mat S = Mat::Zero(d, d);
    for (size_t j = 0; j < E.size(); ++j)
        S += gamma(Eigen::Index(j)) * gamma(Eigen::Index(j)) * E[j] * E[j];
    return S;
}

SeriesTailResult series_tail_check(const std::vector<Mat>& E, const RVec& gamma,
                                   double t, uint64_t trials, int b,
                                   RandomStream& rng) {
    require(!E.empty(), "series_tail_check: empty family");
    require(trials >= 100, "series_tail_check: too few trials");
    require(b >= 1 && b <= 62, "series_tail_check: bad grid resolution");
    Eigen::Index d = E[0].rows();
    size_t m = E.size();

    Mat Svar = sum_weighted_squares(E, gamma);
    SeriesTailResult res;
    res.v_bound = norm_mat(Svar, q_inf());
    res.trials = trials;

    uint64_t hits = 0;
    Mat Y2sum = Mat::Zero(d, d);
    Mat Y(d, d);
    for (uint64_t trial = 0; trial < trials; ++trial) {
        Y.setZero();
        for (size_t j = 0; j < m; ++j)
            Y += grid_lambda(b, rng) * gamma(Eigen::Index(j)) * E[j];
        if (norm_mat(Y, q_inf()) >= t) ++hits;
        Y2sum += Y * Y;
    }
    res.empirical = double(hits) / double(trials);
    res.mc_stderr =
        std::sqrt(std::max(res.empirical * (1.0 - res.empirical), 1e-12) /
                  double(trials));
    res.v_empirical = norm_mat(Y2sum / double(trials), q_inf());
    res.bound = std::min(
        1.0, 2.0 * double(d) * std::exp(-t * t / (2.0 * res.v_bound)));
    return res;
}

LinCombBlock lincomb_obs_be(const ObservableSet& obs, const RVec& x, double eps) {
    require(x.size() == Eigen::Index(obs.E.size()),
            "lincomb_obs_be: grid point dimension mismatch");
    require(eps > 0.0, "lincomb_obs_be: eps > 0");
    Eigen::Index d = obs.E[0].rows();
    RVec gamma = obs.eps_vec.cwiseInverse();

    Mat W = Mat::Zero(d, d);
    for (size_t j = 0; j < obs.E.size(); ++j)
        W += x(Eigen::Index(j)) * gamma(Eigen::Index(j)) * obs.E[j];

    LinCombBlock blk;
    blk.valid = (norm_mat(2.0 * W, q_inf()) <= obs.sigma + 1e-12);
    blk.A = W / obs.sigma_prime;
    double ratio = obs.nu / obs.sigma_prime;
    blk.ledger.queries_U = uint64_t(std::ceil(
        ratio * std::max(1.0, std::log(obs.nu / (obs.sigma_prime * eps)))));
    return blk;
}

MultiExpResult multi_expectation(const Mat& rho, const ObservableSet& obs,
                                 double delta, RandomStream& rng) {
    Eigen::Index d = obs.E[0].rows();
    require(rho.rows() == d && rho.cols() == d,
            "multi_expectation: state dimension mismatch");
    require((rho - rho.adjoint()).cwiseAbs().maxCoeff() <= kHermTol,
            "multi_expectation: state not Hermitian");
    require(std::abs(rho.trace().real() - 1.0) <= 1e-8,
            "multi_expectation: state trace != 1");
    require(delta > 0.0 && delta <= 1.0 / 6.0,
            "multi_expectation: delta in (0, 1/6]");

    size_t m = obs.E.size();
    double sp = obs.sigma_prime;
    double eps_prime = std::min(1.0 / sp, 1.0 / 6.0);

    // The traces inside the simulated phase oracle are exact; all estimator
    // randomness enters through the gradient-estimation machinery.
    MultiExpResult res;
    res.sigma_prime = sp;
    res.truth.resize(Eigen::Index(m));
    std::vector<double> g(m);
    for (size_t j = 0; j < m; ++j) {
        double tr = (rho * obs.E[j]).trace().real();
        res.truth(Eigen::Index(j)) = tr;
        g[j] = tr / (sp * obs.eps_vec(Eigen::Index(j)));
    }

    int b = int(std::ceil(std::log2(16.0 / eps_prime)));
    PhaseValueOracle oracle = linear_phase_oracle(g, b);
    GradEstimate grad = unbiased_block_to_grad(oracle, eps_prime, delta, rng);

    res.z.resize(Eigen::Index(m));
    for (size_t j = 0; j < m; ++j) {
        double zj = grad.k[j] * sp * obs.eps_vec(Eigen::Index(j));
        res.z(Eigen::Index(j)) = std::clamp(zj, -1.0, 1.0);
    }

    // Purification-oracle charge per the query bound with unit constants.
    double logm = std::max(1.0, std::log2(double(m)));
    uint64_t qrho = uint64_t(std::ceil(
        (sp + std::log(logm / delta)) * std::log(double(m) / delta)));
    res.ledger.queries_U = qrho;
    res.ledger.queries_U_dagger = qrho;
    res.ledger.extra_gates = grad.oracle_queries;  // selector-oracle uses
    return res;
}

} // namespace qet
