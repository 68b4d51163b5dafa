#include "qet/tomo_mixed.hpp"
#include "qet/expval.hpp"
#include "qet/norms.hpp"
#include "qet/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qet {

std::vector<Mat> pair_observables(Eigen::Index d) {
    require(d >= 1, "pair_observables: d >= 1");
    std::vector<Mat> fam;
    fam.reserve(static_cast<size_t>(2 * d * d));
    for (int p = 0; p < 2; ++p)
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) {
                Mat E = Mat::Zero(d, d);
                if (p == 0) {
                    E(i, j) += cplx(0.5, 0.0);
                    E(j, i) += cplx(0.5, 0.0);
                } else if (i != j) {
                    E(i, j) += cplx(0.0, -0.5);
                    E(j, i) += cplx(0.0, 0.5);
                }
                fam.push_back(std::move(E));
            }
    return fam;
}

CoordTomoResult coordinatewise_tomo(const Mat& rho, double eps, double delta,
                                    RandomStream& rng) {
    Eigen::Index d = rho.rows();
    require(eps > 0.0 && eps <= 1.0 / 6.0, "coordinatewise_tomo: eps in (0,1/6]");
    require(delta > 0.0 && delta <= 1.0 / 6.0,
            "coordinatewise_tomo: delta in (0,1/6]");

    std::vector<Mat> fam = pair_observables(d);
    RVec eps_vec = RVec::Constant(Eigen::Index(fam.size()), eps);
    ObservableSet obs = make_observable_set(std::move(fam), eps_vec, delta);
    MultiExpResult me = multi_expectation(rho, obs, delta, rng);

    CoordTomoResult res;
    res.ledger = me.ledger;
    res.sigma_prime = me.sigma_prime;
    res.z.resize(d, d);
    // Tr(rho E0_ij) = Re <i|rho|j> while Tr(rho E1_ij) = Im <j|rho|i>, so the
    // skew estimate enters with a minus sign under the <i|rho|j> convention.
    Eigen::Index off = d * d;  // start of the p = 1 block
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            res.z(i, j) = cplx(me.z(i * d + j), -me.z(off + i * d + j));
    return res;
}

std::string default_opnorm_constants_path() {
    return std::string(QET_DATA_DIR) + "/opnorm_constants.txt";
}

OpNormConstants load_opnorm_constants(const std::string& path) {
    OpNormConstants c;
    std::ifstream in(path);
    if (!in) return c;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string name;
        double value;
        if (!(ss >> name >> value)) continue;
        if (name == "Cprime") c.Cprime = value;
        if (name == "cprime") c.cprime = value;
    }
    return c;
}

void save_opnorm_constants(const std::string& path, const OpNormConstants& c,
                           Eigen::Index d_max, int trials, uint64_t seed,
                           double level) {
    std::ofstream out(path);
    require(bool(out), "save_opnorm_constants: cannot open " + path);
    out << "# opnorm-constants v1\n";
    out << "# columns: name value d_max trials seed level\n";
    out.precision(17);
    out << "Cprime " << c.Cprime << " " << d_max << " " << trials << " "
        << seed << " " << level << "\n";
    out << "cprime " << c.cprime << " " << d_max << " " << trials << " "
        << seed << " " << level << "\n";
}

MixedTomoResult mixed_tomo(const Mat& rho, int r, double eps, double delta,
                           double q, RandomStream& rng,
                           const OpNormConstants* consts) {
    Eigen::Index d = rho.rows();
    require(r >= 1, "mixed_tomo: rank >= 1");
    require(eps > 0.0 && eps <= 1.0 / 3.0, "mixed_tomo: eps in (0,1/3]");
    require(delta > 0.0 && delta <= 1.0 / 3.0, "mixed_tomo: delta in (0,1/3]");
    require(q >= 1.0, "mixed_tomo: q >= 1");

    OpNormConstants cc =
        consts ? *consts : load_opnorm_constants(default_opnorm_constants_path());

    MixedTomoResult res;
    res.eta = opnorm_precision_for_schatten(eps, q, r);
    res.delta_prime = std::min(
        delta / 2.0,
        res.eta * res.eta /
            (2048.0 * double(d) * double(d) * double(d) * std::log(2.0 * double(d))));
    res.tau = std::sqrt(1.0 + std::log(4.0 / delta) / (double(d) * cc.cprime));
    res.eps_prime = std::min(
        res.eta / (4.0 * cc.Cprime * std::sqrt(double(d)) * res.tau), 1.0 / 6.0);

    CoordTomoResult coord =
        coordinatewise_tomo(rho, res.eps_prime, res.delta_prime, rng);
    res.coord_ledger = coord.ledger;
    res.z_raw = coord.z;

    Mat herm = (coord.z + coord.z.adjoint()) / 2.0;
    res.rho_tilde = psd_rank_project(herm, res.eta, r);

    // Purification query charge with unit constants:
    //   (d/eps) r^{1/q} ln^{3/2}(d/(delta eps)) sqrt(ceil(ln(1/delta)/d)).
    double L = std::log(double(d) / (delta * eps));
    double rq = std::pow(double(r), q_recip(q));
    double boost = std::sqrt(std::ceil(std::log(1.0 / delta) / double(d)));
    uint64_t Q = uint64_t(
        std::ceil((double(d) / eps) * rq * std::pow(L, 1.5) * boost));
    res.ledger.queries_U = Q;
    res.ledger.queries_U_dagger = Q;
    return res;
}

DirectSampleResult direct_sample_tomo(const Mat& rho, int r, double eps,
                                      RandomStream& rng) {
    Eigen::Index d = rho.rows();
    require(d >= 2, "direct_sample_tomo: d >= 2");
    require(r >= 1, "direct_sample_tomo: rank >= 1");
    require(eps > 0.0 && eps <= 1.0, "direct_sample_tomo: eps in (0,1]");
    require((rho - rho.adjoint()).cwiseAbs().maxCoeff() <= kHermTol,
            "direct_sample_tomo: state not Hermitian");

    DirectSampleResult res;
    res.eps_bar = eps / std::sqrt(double(d) * double(r));
    uint64_t shots = uint64_t(std::ceil(2.0 / (res.eps_bar * res.eps_bar)));

    // Empirical 2d-outcome histogram of one shift experiment; probs is the
    // exact outcome distribution computed from rho (channel semantics).
    auto sample_dist = [&](const std::vector<double>& probs) {
        auto hist = rng.multinomial(shots, probs);
        RVec f(Eigen::Index(hist.size()));
        for (size_t t = 0; t < hist.size(); ++t)
            f(Eigen::Index(t)) = double(hist[t]) / double(shots);
        res.copies += shots;
        return f;
    };

    // Shift-0 experiment carries the whole diagonal on the |0> branch.
    std::vector<double> p0(static_cast<size_t>(2 * d), 0.0);
    for (Eigen::Index j = 0; j < d; ++j) p0[size_t(j)] = rho(j, j).real();
    RVec f0 = sample_dist(p0);
    RVec diag(d);
    for (Eigen::Index j = 0; j < d; ++j) diag(j) = f0(j);

    Mat est = Mat::Zero(d, d);   // branch-difference reconstruction
    Mat est0 = Mat::Zero(d, d);  // q0-only reconstruction (diag subtraction)
    for (Eigen::Index j = 0; j < d; ++j) est(j, j) = est0(j, j) = diag(j);

    for (Eigen::Index h = 1; h < d; ++h) {
        std::vector<double> pre(static_cast<size_t>(2 * d));
        std::vector<double> pim(static_cast<size_t>(2 * d));
        for (Eigen::Index j = 0; j < d; ++j) {
            Eigen::Index jh = (j + h) % d;
            double s = rho(j, j).real() + rho(jh, jh).real();
            double re = rho(j, jh).real(), im = rho(j, jh).imag();
            pre[size_t(j)]     = std::max(0.0, (s + 2.0 * re) / 4.0);
            pre[size_t(d + j)] = std::max(0.0, (s - 2.0 * re) / 4.0);
            pim[size_t(j)]     = std::max(0.0, (s + 2.0 * im) / 4.0);
            pim[size_t(d + j)] = std::max(0.0, (s - 2.0 * im) / 4.0);
        }
        RVec fre = sample_dist(pre);
        RVec fim = sample_dist(pim);
        for (Eigen::Index j = 0; j < d; ++j) {
            Eigen::Index jh = (j + h) % d;
            // Inverting q0j = (rho_jj + 2 Re rho_{j,j+h} + rho_{j+h,j+h})/4;
            // averaging the two flag branches cancels the diagonal term and
            // leaves the difference of the two empirical frequencies.
            est(j, jh) = cplx(fre(j) - fre(d + j), fim(j) - fim(d + j));
            double re0 = 2.0 * (fre(j) - 0.25 * diag(j) - 0.25 * diag(jh));
            double im0 = 2.0 * (fim(j) - 0.25 * diag(j) - 0.25 * diag(jh));
            est0(j, jh) = cplx(re0, im0);
        }
    }

    res.q0_recon = (est0 + est0.adjoint()) / 2.0;
    Mat herm = (est + est.adjoint()) / 2.0;
    // Rank-r PSD projection realizes the trace-norm guarantee the sqrt(r)
    // oversampling pays for.
    res.rho_tilde =
        psd_rank_project(herm, eps / (4.0 * std::sqrt(2.0 * double(r))), r);
    return res;
}

} // namespace qet
