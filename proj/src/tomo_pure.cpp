#include "qet/tomo_pure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace qet {

namespace {

uint64_t shots_for(Eigen::Index d, double eps, double delta) {
    return uint64_t(std::ceil(8.0 * std::log(2.0 * double(d) / delta) / (eps * eps)));
}

// l_inf estimate of the absolute amplitudes of an arbitrary (not necessarily
// public-API-validated) amplitude vector.
RVec abs_est_from_probe(const Vec& amps, double eps, double delta, RandomStream& rng,
                        uint64_t& samples) {
    Eigen::Index d = amps.size();
    uint64_t k = shots_for(d, eps, delta);
    std::vector<double> p(static_cast<size_t>(d));
    for (Eigen::Index j = 0; j < d; ++j) p[size_t(j)] = std::norm(amps(j));
    auto hist = measure_probs(p, k, rng);
    RVec est(d);
    for (Eigen::Index j = 0; j < d; ++j)
        est(j) = std::sqrt(double(hist[size_t(j)]) / double(k));
    samples += k;
    return est;
}

} // namespace

const char* tomo_model_name(TomoModel m) {
    switch (m) {
        case TomoModel::classical:   return "classical";
        case TomoModel::conditional: return "conditional";
        case TomoModel::copies:      return "copies";
        case TomoModel::unitary:     return "unitary";
        case TomoModel::sparse:      return "sparse";
    }
    return "?";
}

std::string tomo_record_line(const TomographyResult& r, Eigen::Index d,
                             double error_achieved, uint64_t seed) {
    std::ostringstream ss;
    ss.precision(12);
    ss << tomo_model_name(r.model) << " " << d << " " << r.eps << " " << r.delta << " ";
    if (std::isinf(r.q)) ss << "inf"; else ss << r.q;
    ss << " " << error_achieved << " " << r.ledger.total_queries() << " "
       << r.samples << " " << seed;
    return ss.str();
}

TomographyResult classical_linf_tomo(const Ket& psi, double eps, double delta,
                                     RandomStream& rng) {
    require(eps > 0.0 && eps < 1.0 && delta > 0.0 && delta < 1.0,
            "classical_linf_tomo: eps, delta in (0,1)");
    TomographyResult res;
    res.model = TomoModel::classical;
    res.q = q_inf();
    res.eps = eps;
    res.delta = delta;
    RVec abs = abs_est_from_probe(psi.amps, eps, delta, rng, res.samples);
    res.estimate = abs.cast<cplx>();
    res.ledger.queries_U = res.samples;  // one copy consumed per shot
    return res;
}

TomographyResult lq_wrap(const std::function<TomographyResult(double eta)>& linf_routine,
                         Eigen::Index d, double q, double eps) {
    if (std::isinf(q)) {
        TomographyResult res = linf_routine(eps);
        res.q = q;
        res.eps = eps;
        return res;
    }
    require(q >= 2.0, "lq_wrap: q >= 2 for amplitude targets");
    double eta = linf_precision_for_lq(eps, q, 2.0, d);
    TomographyResult res = linf_routine(eta);
    res.estimate = threshold_truncate(res.estimate, eta);
    res.truncate_threshold = 2.0 * eta;
    res.q = q;
    res.eps = eps;
    return res;
}

RVec hadamard_pair_est(const Ket& phi, double eps, double delta, RandomStream& rng,
                       uint64_t* samples_used) {
    Eigen::Index dim = phi.dim();
    require(dim % 2 == 0, "hadamard_pair_est: flag (x) system dimension must be even");
    Eigen::Index d = dim / 2;
    // Hadamard on the flag qubit (most significant): amplitudes become
    // (alpha_j +- beta_j)/2.
    Vec mixed(dim);
    double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (Eigen::Index j = 0; j < d; ++j) {
        mixed(j)     = (phi.amps(j) + phi.amps(d + j)) * inv_sqrt2;
        mixed(d + j) = (phi.amps(j) - phi.amps(d + j)) * inv_sqrt2;
    }
    uint64_t samples = 0;
    RVec amp_est = abs_est_from_probe(mixed, eps / 2.0, delta, rng, samples);
    if (samples_used) *samples_used += samples;
    // |alpha_j +- beta_j| = 2 * |amplitude| / sqrt(2) * sqrt(2) = 2 |mixed|/sqrt2... :
    // mixed_j = (alpha_j +- beta_j)/2 * sqrt(2)/sqrt(2); concretely
    // phi = (|0>psi0 + |1>psi1)/sqrt(2), so mixed_j = (alpha_j +- beta_j)/2,
    // and |alpha_j +- beta_j| = 2 |mixed_j|.
    return 2.0 * amp_est;
}

TomographyResult cond_sample_tomo(const Ket& psi, double eps, double delta,
                                  RandomStream& rng) {
    require(eps > 0.0 && eps < 1.0 && delta > 0.0 && delta < 1.0,
            "cond_sample_tomo: eps, delta in (0,1)");
    Eigen::Index d = psi.dim();
    TomographyResult res;
    res.model = TomoModel::conditional;
    res.q = q_inf();
    res.eps = eps;
    res.delta = delta;
    double dstage = delta / 3.0;  // equal budget for the r, z and w stages

    // Stage 1: magnitudes at eps/32 from the conditional sample itself.
    Vec cond(2 * d);
    cond.setZero();
    double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (Eigen::Index j = 0; j < d; ++j) cond(j) = psi.amps(j) * inv_sqrt2;
    cond(d) = inv_sqrt2;
    RVec raw = abs_est_from_probe(cond, (eps / 32.0) * inv_sqrt2, dstage, rng, res.samples);
    RVec r_tilde(d);
    for (Eigen::Index j = 0; j < d; ++j)
        r_tilde(j) = (raw(j) * std::sqrt(2.0) >= eps / 2.0) ? raw(j) * std::sqrt(2.0) : 0.0;

    // Reference vector with exactly known lengths (l2-renormalized).
    double nrm = r_tilde.norm();
    RVec r_hat = (nrm > 0.0) ? RVec(r_tilde / nrm) : r_tilde;

    // Stage 2/3: |alpha_j - r_hat_j| and |alpha_j - i r_hat_j| at eps/16.
    Vec phi_z(2 * d), phi_w(2 * d);
    for (Eigen::Index j = 0; j < d; ++j) {
        phi_z(j) = psi.amps(j) * inv_sqrt2;
        phi_w(j) = psi.amps(j) * inv_sqrt2;
        phi_z(d + j) = cplx(r_hat(j), 0.0) * inv_sqrt2;
        phi_w(d + j) = cplx(0.0, r_hat(j)) * inv_sqrt2;
    }
    RVec z_est = hadamard_pair_est(Ket(std::move(phi_z), false), eps / 16.0, dstage, rng,
                                   &res.samples);
    RVec w_est = hadamard_pair_est(Ket(std::move(phi_w), false), eps / 16.0, dstage, rng,
                                   &res.samples);

    res.estimate = Vec::Zero(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        if (r_hat(j) <= 0.0) continue;
        double z = z_est(d + j);  // minus branch
        double w = w_est(d + j);
        double a = r_hat(j) - z * z / (2.0 * r_hat(j));
        double b = r_hat(j) - w * w / (2.0 * r_hat(j));
        res.estimate(j) = cplx(a, b);
    }
    res.truncate_threshold = eps / 2.0;
    res.ledger.queries_U = res.samples;  // one conditional copy per shot
    return res;
}

TomographyResult copies_only_tomo(const Ket& psi, double eps, double delta,
                                  RandomStream& rng) {
    require(eps > 0.0 && eps < 1.0 && delta > 0.0 && delta < 1.0,
            "copies_only_tomo: eps, delta in (0,1)");
    Eigen::Index d = psi.dim();
    int mp = 0;
    while ((Eigen::Index(1) << mp) < d) ++mp;
    Eigen::Index dp = Eigen::Index(1) << mp;
    Vec padded = Vec::Zero(dp);
    padded.head(d) = psi.amps;

    TomographyResult res;
    res.model = TomoModel::copies;
    res.q = q_inf();
    res.eps = eps;
    res.delta = delta;

    int m_cap = std::max(1, mp);
    RVec r_raw = abs_est_from_probe(padded, eps / (16.0 * m_cap), delta / 2.0, rng,
                                    res.samples);
    // Keep coordinates with r >= eps/2, permuted to the front in decreasing
    // order of the estimated magnitude.
    std::vector<Eigen::Index> order(static_cast<size_t>(dp));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return r_raw(a) > r_raw(b); });
    Eigen::Index kept = 0;
    while (kept < dp && r_raw(order[size_t(kept)]) >= eps / 2.0) ++kept;
    res.estimate = Vec::Zero(d);
    res.truncate_threshold = eps / 2.0;
    if (kept == 0) return res;

    int m = 1;
    while ((Eigen::Index(1) << m) <= kept) ++m;  // smallest m with kept < 2^m
    // The comparison window cannot exceed the padded register itself; when
    // every coordinate survives the threshold the whole register is the window.
    m = std::min(m, std::max(1, mp));
    Vec phi = Vec::Zero(dp);
    RVec r_hat(kept);
    for (Eigen::Index p = 0; p < dp; ++p) phi(p) = padded(order[size_t(p)]);
    for (Eigen::Index p = 0; p < kept; ++p) r_hat(p) = r_raw(order[size_t(p)]);

    // Pairwise comparisons: for each bit h, Hadamard (and phase-Hadamard) on
    // qubit h of the permuted state, magnitudes at eps/(16 m).
    double eta = eps / (16.0 * double(m) * std::sqrt(2.0));
    double dstage = delta / (4.0 * double(m));
    std::vector<RVec> s_est(static_cast<size_t>(m)), t_est(static_cast<size_t>(m));
    for (int h = 0; h < m; ++h) {
        Eigen::Index step = Eigen::Index(1) << h;
        Vec had = Vec::Zero(dp), pha = Vec::Zero(dp);
        double is2 = 1.0 / std::sqrt(2.0);
        for (Eigen::Index j = 0; j < dp; ++j) {
            if (j & step) continue;
            cplx lo = phi(j), hi = phi(j + step);
            had(j) = (lo + hi) * is2;
            had(j + step) = (lo - hi) * is2;
            cplx hi_i = cplx(0.0, 1.0) * hi;  // S gate on qubit h
            pha(j) = (lo + hi_i) * is2;
            pha(j + step) = (lo - hi_i) * is2;
        }
        s_est[size_t(h)] = abs_est_from_probe(had, eta, dstage, rng, res.samples);
        t_est[size_t(h)] = abs_est_from_probe(pha, eta, dstage, rng, res.samples);
    }

    // Phase reconstruction along bit-flip paths from index 0 (most
    // significant bit flipped first, so each predecessor clears the least
    // significant set bit).  alpha_0 is fixed real nonnegative.
    Vec rec = Vec::Zero(kept);
    rec(0) = cplx(r_hat(0), 0.0);
    for (Eigen::Index j = 1; j < kept; ++j) {
        Eigen::Index low = j & (-j);
        Eigen::Index pred = j - low;
        int h = 0;
        while ((Eigen::Index(1) << h) != low) ++h;
        double s = std::sqrt(2.0) * s_est[size_t(h)](j);  // minus branch lives at j
        double t = std::sqrt(2.0) * t_est[size_t(h)](j);
        double rj = r_hat(pred), rk = r_hat(j);
        double re = (rj * rj + rk * rk - s * s) / 2.0;   // Re(conj(a_pred) a_j)
        double im = (t * t - rj * rj - rk * rk) / 2.0;   // Im(conj(a_pred) a_j)
        cplx base = rec(pred);
        if (std::abs(base) < 1e-12) base = cplx(rj, 0.0);
        rec(j) = cplx(re, im) / std::conj(base);
    }
    for (Eigen::Index p = 0; p < kept; ++p) {
        Eigen::Index orig = order[size_t(p)];
        if (orig < d) res.estimate(orig) = rec(p);
    }
    res.ledger.queries_U = res.samples;  // one copy per shot
    return res;
}

double aligned_linf_error(const Vec& truth, const Vec& est) {
    auto err_at = [&](double theta) {
        cplx ph(std::cos(theta), std::sin(theta));
        return (truth - ph * est).cwiseAbs().maxCoeff();
    };
    double best_theta = 0.0, best = err_at(0.0);
    int grid = 1024;
    for (int i = 1; i < grid; ++i) {
        double th = 2.0 * kPi * i / grid;
        double e = err_at(th);
        if (e < best) { best = e; best_theta = th; }
    }
    double span = 2.0 * kPi / grid;
    for (int round = 0; round < 3; ++round) {
        double lo = best_theta - span, step = 2.0 * span / 64.0;
        for (int i = 0; i <= 64; ++i) {
            double e = err_at(lo + i * step);
            if (e < best) { best = e; best_theta = lo + i * step; }
        }
        span = step;
    }
    return best;
}

AmpEncodeResult amp_encode(const RVec& x, int b, double eps) {
    Eigen::Index d = x.size();
    for (Eigen::Index j = 0; j < d; ++j)
        require(x(j) >= -1.0 && x(j) <= 1.0, "amp_encode: entries must lie in [-1,1]");
    int bits = std::min(b, int(std::ceil(std::log2(2.0 / eps))));
    double scale = std::pow(2.0, bits);
    double astep = eps / 2.0;
    AmpEncodeResult out;
    out.x_tilde.resize(d);
    Vec amps(2 * d);
    double inv_sqrtd = 1.0 / std::sqrt(double(d));
    for (Eigen::Index j = 0; j < d; ++j) {
        double xbar = std::clamp(std::floor(x(j) * scale) / scale, -1.0, 1.0);
        double a = std::round(std::asin(xbar) / astep) * astep;
        double xt = std::clamp(std::sin(a), -1.0, 1.0);
        out.x_tilde(j) = xt;
        amps(2 * j) = inv_sqrtd * xt;
        amps(2 * j + 1) = inv_sqrtd * std::sqrt(std::max(0.0, 1.0 - xt * xt));
    }
    out.state = Ket(std::move(amps));
    int L = int(std::ceil(std::log2(2.0 / eps)));
    int lgL = std::max(1, int(std::ceil(std::log2(std::max(2, L)))));
    out.ledger.queries_U = uint64_t(2 * bits);  // indexed-SWAP uses
    out.ledger.extra_gates = uint64_t(std::max(1, int(std::ceil(std::log2(double(std::max<Eigen::Index>(2, d))))))) +
                             uint64_t(L) * uint64_t(lgL) * uint64_t(lgL);
    out.ledger.depth = uint64_t(lgL);
    return out;
}

namespace {

// Real-part estimation on an arbitrary (possibly sub-normalized) amplitude
// vector; `restricted` lists the indices still in play.
void pe_real_core(const Vec& amps, const std::vector<Eigen::Index>& idx, double eps,
                  double delta, RandomStream& rng, Vec& out, CostLedger& ledger) {
    Eigen::Index dd = Eigen::Index(idx.size());
    if (dd == 0) return;
    double root = std::sqrt(double(dd));
    std::vector<double> g(idx.size());
    for (size_t i = 0; i < idx.size(); ++i) g[i] = amps(idx[i]).real() / root;
    double eps_core = std::min(eps / root, 1.0 / 6.0);
    double delta_core = std::min(delta, 1.0 / 6.0);
    int b = int(std::ceil(std::log2(24.0 / eps_core)));
    auto oracle = linear_phase_oracle(g, b);
    GradEstimate grad = block_to_grad(oracle, eps_core, delta_core, rng);
    for (size_t i = 0; i < idx.size(); ++i)
        out(idx[i]) += cplx(root * grad.k[i], 0.0);
    // Each block-encoding use costs one U and one U_dagger (the inner-product
    // construction), plus one U_amp charged as an extra gate batch.
    ledger.queries_U += grad.oracle_queries;
    ledger.queries_U_dagger += grad.oracle_queries;
    ledger.extra_gates += grad.oracle_queries;
}

} // namespace

TomographyResult pe_real_tomo(const Ket& psi, double eps, double delta,
                              RandomStream& rng) {
    require(eps > 0.0 && eps < 1.0 && delta > 0.0 && delta < 1.0,
            "pe_real_tomo: eps, delta in (0,1)");
    Eigen::Index d = psi.dim();
    TomographyResult res;
    res.model = TomoModel::unitary;
    res.q = q_inf();
    res.eps = eps;
    res.delta = delta;
    res.estimate = Vec::Zero(d);

    std::vector<Eigen::Index> idx;
    double delta_grad = delta;
    if (eps >= 1.0 / std::sqrt(double(d))) {
        // Support restriction: every coordinate with |alpha_j| > eps shows up
        // among O(log(d/delta)/eps^2) classical shots with probability
        // 1 - delta/2.
        uint64_t k = shots_for(d, eps, delta / 2.0);
        auto hist = measure(psi, k, rng);
        for (Eigen::Index j = 0; j < d; ++j)
            if (hist[size_t(j)] > 0) idx.push_back(j);
        res.samples += k;
        delta_grad = delta / 2.0;
    } else {
        idx.resize(static_cast<size_t>(d));
        std::iota(idx.begin(), idx.end(), 0);
    }
    pe_real_core(psi.amps, idx, eps, delta_grad, rng, res.estimate, res.ledger);
    return res;
}

TomographyResult pe_state_tomo(const Ket& psi, double eps, double delta,
                               RandomStream& rng) {
    double part_eps = eps / std::sqrt(2.0);
    TomographyResult re = pe_real_tomo(psi, part_eps, delta / 2.0, rng);
    Ket rotated(Vec(cplx(0.0, 1.0) * psi.amps), false);
    TomographyResult ri = pe_real_tomo(rotated, part_eps, delta / 2.0, rng);
    TomographyResult res = re;
    // Re(i alpha) = -Im(alpha), so the second pass contributes -i * estimate.
    for (Eigen::Index j = 0; j < res.estimate.size(); ++j)
        res.estimate(j) = cplx(re.estimate(j).real(), -ri.estimate(j).real());
    res.ledger += ri.ledger;
    res.samples += ri.samples;
    res.eps = eps;
    res.delta = delta;
    return res;
}

TomographyResult sparse_tomo(const Ket& psi, int s, double eps, double delta,
                             RandomStream& rng) {
    require(s >= 1, "sparse_tomo: s >= 1");
    require(eps > 0.0 && eps < 1.0 && delta > 0.0 && delta < 1.0,
            "sparse_tomo: eps, delta in (0,1)");
    Eigen::Index d = psi.dim();
    TomographyResult res;
    res.model = TomoModel::sparse;
    res.q = q_inf();
    res.eps = eps;
    res.delta = delta;
    res.estimate = Vec::Zero(d);

    double hyp_threshold = eps * std::sqrt(double(s) / double(d));
    int large = 0;
    for (Eigen::Index j = 0; j < d; ++j)
        if (std::abs(psi.amps(j)) >= hyp_threshold) ++large;
    res.support_assumption_ok = (large <= s);
    res.truncate_threshold = hyp_threshold;

    // Markov stopping budgets at 6x the expected counts, with the
    // bound P <= eps^2 s substituted for the unknown tail mass.
    double lgs = std::max(1.0, std::log(double(s)));
    uint64_t query_budget = uint64_t(std::ceil(12.0 * std::sqrt(double(s)) / eps * lgs));
    uint64_t sample_budget = uint64_t(std::ceil(12.0 * double(s) * lgs));
    int reps = std::max(1, int(std::ceil(std::log(2.0 / delta))));

    std::set<Eigen::Index> found;
    std::vector<double> p(static_cast<size_t>(d));
    for (Eigen::Index j = 0; j < d; ++j) p[size_t(j)] = std::norm(psi.amps(j));
    for (int r = 0; r < reps; ++r) {
        std::set<Eigen::Index> seen;
        uint64_t queries = 0, draws = 0;
        while (queries < query_budget && draws < sample_budget) {
            double p_unseen = 0.0;
            for (Eigen::Index j = 0; j < d; ++j)
                if (!seen.count(j)) p_unseen += p[size_t(j)];
            if (p_unseen < 1e-15) break;
            queries += uint64_t(std::ceil(1.0 / std::sqrt(p_unseen)));
            ++draws;
            if (rng.uniform() >= 2.0 / 3.0) continue;  // amplification round failed
            // Idealized amplification: exact draw from the renormalized
            // unseen subspace.
            double u = rng.uniform() * p_unseen, acc = 0.0;
            for (Eigen::Index j = 0; j < d; ++j) {
                if (seen.count(j)) continue;
                acc += p[size_t(j)];
                if (u < acc) { seen.insert(j); break; }
            }
        }
        res.ledger.queries_U += queries;
        found.insert(seen.begin(), seen.end());
    }

    // Phase-estimation tomography restricted to the discovered support.
    std::vector<Eigen::Index> idx(found.begin(), found.end());
    Vec real_part = Vec::Zero(d), imag_probe = Vec::Zero(d);
    double part_eps = eps / std::sqrt(2.0);
    pe_real_core(psi.amps, idx, part_eps, delta / 4.0, rng, real_part, res.ledger);
    Vec rotated = cplx(0.0, 1.0) * psi.amps;
    pe_real_core(rotated, idx, part_eps, delta / 4.0, rng, imag_probe, res.ledger);
    for (Eigen::Index j : idx)
        res.estimate(j) = cplx(real_part(j).real(), -imag_probe(j).real());
    return res;
}

} // namespace qet
