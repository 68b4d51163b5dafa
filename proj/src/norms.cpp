#include "qet/norms.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>

namespace qet {

double amp_to_prob_t(double q) {
    require(q >= 2.0 || std::isinf(q), "amp_to_prob: q must be >= 2");
    return 1.0 / (q_recip(q) + 0.5);
}

RVec amp_to_prob(const RVec& abs_amp_est, double q) {
    require(q >= 2.0 || std::isinf(q), "amp_to_prob: q must be >= 2");
    require(abs_amp_est.minCoeff() >= 0.0, "amp_to_prob: input must be nonnegative");
    // Renormalize in l_2 (the state norm) regardless of the estimation norm
    // q: the Hoelder split ||b^2 - a^2||_t <= ||b - a||_q ||b + a||_2 is what
    // produces t = 1/(1/q + 1/2), and the l_2 renormalization keeps the
    // correction term second order.
    double n2 = abs_amp_est.norm();
    require(n2 > 0.0, "amp_to_prob: all-zero input");
    RVec a = abs_amp_est / n2;
    return a.cwiseProduct(a);
}

Vec threshold_truncate(const Vec& est, double eta) {
    require(eta > 0.0, "threshold_truncate: eta must be positive");
    Vec out = est;
    for (Eigen::Index i = 0; i < out.size(); ++i)
        if (std::abs(out(i)) < 2.0 * eta) out(i) = 0.0;
    return out;
}

double truncate_error_bound(double eta, double gamma, double q, double s, Eigen::Index d) {
    require(q > s, "truncate_error_bound: requires q > s");
    double e1 = std::isinf(q) ? 1.0 : (q - s) / q;
    double e2 = std::isinf(q) ? 0.0 : s / q;
    double t1 = 4.0 * std::pow(eta, e1) * std::pow(gamma, e2);
    double t2 = 3.0 * std::pow(double(d), q_recip(q)) * eta;
    return std::min(t1, t2);
}

double linf_precision_for_lq(double eps, double q, double s, Eigen::Index d) {
    require(eps > 0.0 && eps <= 1.0, "linf_precision_for_lq: eps in (0,1]");
    require(s <= q, "linf_precision_for_lq: requires s <= q");
    double sq = std::isinf(q) ? 0.0 : s / q;  // s/inf = 0
    double a = 1.0 - sq;
    double term1 = (a <= 0.0) ? 0.0 : (1.0 / 3.0) * std::pow(eps / 3.0, 1.0 / a);
    double term2 = eps / std::pow(double(d), q_recip(q));
    return std::max(term1, term2);
}

double opnorm_precision_for_schatten(double eps, double q, int r) {
    double a = 1.0 - q_recip(q);  // 1 - 1/q; zero at q = 1
    double term1 = (a <= 0.0) ? 0.0 : std::pow(eps / 10.0, 1.0 / a);
    double term2 = eps / (2.0 * std::pow(2.0 * r, q_recip(q)));
    return std::max(term1, term2);
}

Mat psd_rank_project(const Mat& est, double eta, int r) {
    require((est - est.adjoint()).cwiseAbs().maxCoeff() <= 1e-8,
            "psd_rank_project: input must be Hermitian");
    Mat h = (est + est.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    const RVec& ev = es.eigenvalues();       // ascending
    const Mat& v = es.eigenvectors();
    Eigen::Index d = h.rows();
    // Shift down by eta and clip negatives; eigenvalues are sorted, so the
    // top-r set is the last r indices (equal values keep their solver order).
    RVec lam = RVec::Zero(d);
    for (Eigen::Index i = 0; i < d; ++i) lam(i) = std::max(0.0, ev(i) - eta);
    for (Eigen::Index i = 0; i + r < d; ++i) lam(i) = 0.0;
    double tr = lam.sum();
    if (tr > 1.0) lam /= tr;  // safeguard: trace norm <= 1 unconditionally
    Mat out = Mat::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        if (lam(i) > 0.0) out += lam(i) * (v.col(i) * v.col(i).adjoint());
    return out;
}

OpNormStats subgaussian_opnorm_stats(Eigen::Index d, double eps, int trials,
                                     RandomStream& rng,
                                     const std::vector<double>& levels) {
    require(trials >= 100, "subgaussian_opnorm_stats: trials must be >= 100");
    std::vector<double> norms;
    norms.reserve(size_t(trials));
    double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    double mean = 0.0;
    for (int t = 0; t < trials; ++t) {
        Mat e = Mat::Zero(d, d);
        for (Eigen::Index i = 0; i < d; ++i) {
            e(i, i) = (rng.uniform() < 0.5 ? -eps : eps);
            for (Eigen::Index j = i + 1; j < d; ++j) {
                double re = (rng.uniform() < 0.5 ? -1.0 : 1.0) * eps * inv_sqrt2;
                double im = (rng.uniform() < 0.5 ? -1.0 : 1.0) * eps * inv_sqrt2;
                e(i, j) = cplx(re, im);
                e(j, i) = std::conj(e(i, j));
            }
        }
        Eigen::SelfAdjointEigenSolver<Mat> es(e, Eigen::EigenvaluesOnly);
        double nrm = std::max(std::abs(es.eigenvalues().minCoeff()),
                              std::abs(es.eigenvalues().maxCoeff()));
        norms.push_back(nrm);
        mean += nrm;
    }
    std::sort(norms.begin(), norms.end());
    OpNormStats out;
    out.d = d;
    out.eps = eps;
    out.trials = trials;
    out.deterministic_bound = eps * double(d);
    out.mean = mean / trials;
    for (double lv : levels) {
        size_t idx = std::min(norms.size() - 1, size_t(lv * trials));
        out.quantiles[lv] = norms[idx];
    }
    return out;
}

std::pair<DensityMatrix, double>
trace_bound_from_purification(const Ket& psi_est, const Ket& psi_true,
                              Eigen::Index dA, Eigen::Index dB) {
    require(psi_est.dim() == psi_true.dim(), "trace_bound: dimension mismatch");
    DensityMatrix r_est = partial_trace(psi_est, dA, dB, true);
    DensityMatrix r_true = partial_trace(psi_true, dA, dB, true);
    double dist = 0.5 * norm_mat(r_est.mat - r_true.mat, 1.0);
    return {r_est, dist};
}

} // namespace qet
