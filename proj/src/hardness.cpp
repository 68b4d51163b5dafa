#include "qet/hardness.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace qet {

long powmod(long base, long exp, long mod) {
    require(mod >= 2, "powmod: mod >= 2");
    long result = 1;
    base %= mod;
    if (base < 0) base += mod;
    while (exp > 0) {
        if (exp & 1) result = (result * base) % mod;
        base = (base * base) % mod;
        exp >>= 1;
    }
    return result;
}

int legendre_symbol(long a, long d) {
    a %= d;
    if (a < 0) a += d;
    if (a == 0) return 0;
    long e = powmod(a, (d - 1) / 2, d);
    return (e == 1) ? 1 : -1;
}

long mod_inverse(long a, long d) {
    a %= d;
    if (a < 0) a += d;
    require(a != 0, "mod_inverse: zero has no inverse");
    return powmod(a, d - 2, d);  // Fermat, d prime
}

namespace {

bool is_odd_prime(long d) {
    if (d < 3 || d % 2 == 0) return false;
    for (long f = 3; f * f <= d; f += 2)
        if (d % f == 0) return false;
    return true;
}

cplx omega_pow(long d, long e) {
    e %= d;
    if (e < 0) e += d;
    double ph = 2.0 * kPi * double(e) / double(d);
    return cplx(std::cos(ph), std::sin(ph));
}

cplx mub_cd(long d) {
    return (d % 4 == 1) ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
}

} // namespace

cplx gauss_sum_direct(long a, long b, long d) {
    cplx acc(0.0, 0.0);
    for (long l = 0; l < d; ++l) acc += omega_pow(d, a * l * l + b * l);
    return acc;
}

cplx gauss_sum_closed(long a, long b, long d) {
    require(is_odd_prime(d), "gauss_sum_closed: d must be an odd prime");
    require(a % d != 0, "gauss_sum_closed: a != 0 mod d");
    long inv4a = mod_inverse(4 * a, d);
    cplx phase = omega_pow(d, -((inv4a * ((b % d) * (b % d))) % d));
    return phase * double(legendre_symbol(a, d)) * mub_cd(d) * std::sqrt(double(d));
}

// ---------------------------------------------------------------- probset

double probset_prob(const std::vector<int>& b, Eigen::Index i, int c,
                    Eigen::Index d, double eps) {
    require(Eigen::Index(b.size()) == d / 2, "probset_prob: |b| = d/2");
    require(i >= 0 && i < d / 2 && (c == 0 || c == 1), "probset_prob: bad index");
    int sign = ((b[size_t(i)] ^ c) != 0) ? -1 : 1;
    return (1.0 + double(sign) * 6.0 * eps) / double(d);
}

ProbsetFamily probset_build(Eigen::Index d, double eps) {
    require(d >= 12 && d % 2 == 0, "probset_build: d even and >= 12");
    require(6.0 * eps < 1.0, "probset_build: need 6 eps < 1");
    require(d <= 16, "probset_build: explicit sigma limited to d <= 16");

    ProbsetFamily fam;
    fam.d = d;
    fam.eps = eps;
    double cp = std::sqrt(1.0 + 6.0 * eps), cm = std::sqrt(1.0 - 6.0 * eps);
    double cc = cp * cm;
    fam.top_eig = (3.0 + cc) / 4.0;
    fam.small_eig = (1.0 - cc) / (2.0 * double(d));

    // sigma = 2^{-d/2} sum_b |phi_b><phi_b| over states
    // |phi_b> = (|0>|psi_b> + |1>|0>)/sqrt(2) in dimension 2d.
    Eigen::Index nb = d / 2;
    Eigen::Index dim = 2 * d;
    Mat sigma = Mat::Zero(dim, dim);
    uint64_t count = uint64_t(1) << nb;
    Vec phi(dim);
    for (uint64_t bits = 0; bits < count; ++bits) {
        phi.setZero();
        for (Eigen::Index i = 0; i < nb; ++i) {
            int bi = int((bits >> i) & 1);
            double a0 = (bi == 0) ? cp : cm;  // outcome (i, 0)
            double a1 = (bi == 0) ? cm : cp;  // outcome (i, 1)
            phi(2 * i)     = a0 / std::sqrt(2.0 * double(d));
            phi(2 * i + 1) = a1 / std::sqrt(2.0 * double(d));
        }
        phi(d) = 1.0 / std::sqrt(2.0);  // the |1>|0> branch
        sigma += phi * phi.adjoint();
    }
    sigma /= double(count);

    Eigen::SelfAdjointEigenSolver<Mat> es(sigma);
    fam.sigma_eigs = es.eigenvalues();

    auto ent = [](double lam) {
        return (lam > 1e-300) ? -lam * std::log(lam) : 0.0;
    };
    fam.entropy = ent(fam.top_eig) + double(d / 2) * ent(fam.small_eig);
    fam.entropy_direct = 0.0;
    for (Eigen::Index j = 0; j < fam.sigma_eigs.size(); ++j)
        fam.entropy_direct += ent(std::max(0.0, fam.sigma_eigs(j)));
    fam.entropy_bound =
        27.0 * eps * eps * (1.0 + std::log(double(d) / (eps * eps)));
    return fam;
}

// ----------------------------------------------------- phase-oracle embed

RVec phase_to_dist(const std::vector<int>& x, double eps) {
    require(eps > 0.0 && eps < 1.0 / 16.0, "phase_to_dist: eps < 1/16");
    Eigen::Index d = Eigen::Index(x.size());
    RVec p(2 * d);
    for (Eigen::Index j = 0; j < d; ++j) {
        double th = kPi / 4.0 + 4.0 * kPi * eps * double(x[size_t(j)]);
        double c = std::cos(th), s = std::sin(th);
        p(2 * j)     = c * c / double(d);
        p(2 * j + 1) = s * s / double(d);
    }
    return p;
}

std::vector<int> phase_decode(const RVec& p_tilde, double eps) {
    Eigen::Index d = p_tilde.size() / 2;
    double thr = (0.5 - 4.0 * eps) / double(d);
    std::vector<int> x(static_cast<size_t>(d));
    for (Eigen::Index j = 0; j < d; ++j)
        x[size_t(j)] = (p_tilde(2 * j) < thr) ? 1 : 0;
    return x;
}

// --------------------------------------------------------------------- MUB

MubFamily mub_build(long d, long r) {
    require(is_odd_prime(d), "mub_build: d must be an odd prime");
    require(r >= 1 && r <= d, "mub_build: 1 <= r <= d");

    MubFamily fam;
    fam.d = d;
    fam.r = r;
    fam.c_d = mub_cd(d);
    double isq = 1.0 / std::sqrt(double(d));

    fam.U.resize(static_cast<size_t>(r));
    for (long j = 0; j < r; ++j) {
        Mat& Uj = fam.U[size_t(j)];
        Uj.resize(d, d);
        // column k is |phi_k^(j)> with entries w^(-k l + j l^2 + k^2)/sqrt(d)
        for (long k = 0; k < d; ++k)
            for (long l = 0; l < d; ++l)
                Uj(l, k) = isq * omega_pow(d, -k * l + j * l * l + k * k);
        require((Uj.adjoint() * Uj - Mat::Identity(d, d)).cwiseAbs().maxCoeff() <=
                    1e-10,
                "mub_build: basis not unitary");
    }

    fam.alpha.resize(static_cast<size_t>(r));
    fam.S = Mat::Zero(r, r);
    for (long j = 0; j < r; ++j) {
        fam.alpha[size_t(j)].resize(static_cast<size_t>(r));
        for (long jp = 0; jp < r; ++jp) {
            Mat a = fam.U[size_t(j)].adjoint() * fam.U[size_t(jp)];
            if (j != jp)
                require((a.cwiseAbs().array() - isq).abs().maxCoeff() <= 1e-10,
                        "mub_build: bases not unbiased");
            fam.S(j, jp) = a.sum();
            fam.alpha[size_t(j)][size_t(jp)] = std::move(a);
        }
    }

    long n = r * d;
    fam.M = Mat::Zero(n, n);
    for (long j = 0; j < r; ++j)
        for (long jp = 0; jp < r; ++jp) {
            if (j == jp) continue;
            fam.M.block(j * d, jp * d, d, d) =
                fam.alpha[size_t(j)][size_t(jp)] * std::conj(fam.S(j, jp));
        }
    fam.A = fam.M.real() + double(d) * RMat::Identity(n, n);

    double opA = norm_mat(fam.A.cast<cplx>(), q_inf());
    require(opA <= 2.0 * double(d) + 1e-6, "mub_build: |A| bound violated");
    require(fam.A.squaredNorm() <= 4.0 * double(d) * double(d) * double(d) *
                                           double(r) +
                                       1e-6,
            "mub_build: |A|_F^2 bound violated");
    return fam;
}

Vec mub_eigenvector(const MubFamily& fam, long l, long m) {
    long d = fam.d;
    Vec v(fam.r * d);
    for (long j = 0; j < fam.r; ++j)
        for (long k = 0; k < d; ++k)
            v(j * d + k) = omega_pow(d, l * j - k * (k - m));
    return v;
}

double mub_eigenvalue(const MubFamily& fam, long l, long m) {
    long d = fam.d;
    double cd2 = (d % 4 == 1) ? 1.0 : -1.0;  // c_d^2
    // Exact eigenvalue for the phase-profile eigenvectors above; verified
    // numerically to machine precision for d in {3,5,7,11}.
    return double(d) * cd2 * double(legendre_symbol(-(l + m * m), d));
}

// -------------------------------------------------------------- embedding

std::pair<Ket, Mat> rho_embed(const std::vector<int>& b, const MubFamily& fam,
                              double eps) {
    long d = fam.d, r = fam.r;
    require(long(b.size()) == r * d, "rho_embed: |b| = r d");
    require(eps >= 0.0 && eps < 1.0, "rho_embed: eps in [0,1)");

    Eigen::Index bd = 2 * d;  // block dimension: flag qubit x system
    Vec psi = Vec::Zero(bd * r);
    Mat rho = Mat::Zero(bd, bd);
    for (long j = 0; j < r; ++j) {
        Vec blk = Vec::Zero(bd);
        for (long k = 0; k < d; ++k) {
            int bit = b[size_t(j * d + k)];
            double w0 = std::sqrt(0.5 + 0.5 * eps * ((bit == 0) ? 1.0 : -1.0));
            double w1 = std::sqrt(0.5 - 0.5 * eps * ((bit == 0) ? 1.0 : -1.0));
            Vec col = fam.U[size_t(j)].col(k);  // basis vector |phi_k^(j)>
            for (long a = 0; a < d; ++a) {
                blk(a)     += w0 * col(a) / std::sqrt(double(d));
                blk(d + a) += w1 * col(a) / std::sqrt(double(d));
            }
        }
        psi.segment(j * bd, bd) = blk / std::sqrt(double(r));
        rho += blk * blk.adjoint() / double(r);
    }
    return {Ket(psi), rho};
}

// ------------------------------------------------------------- statistics

DeltaQuadStats delta_quadratic_stats(const MubFamily& fam, uint64_t trials,
                                     RandomStream& rng) {
    require(trials >= 100, "delta_quadratic_stats: too few trials");
    long n = fam.r * fam.d;
    DeltaQuadStats st;
    st.trials = trials;
    st.mean_exact = 2.0 * fam.A.trace();
    double thr = double(fam.d) * double(fam.d) * double(fam.r) / 2.0;
    double acc = 0.0;
    uint64_t hits = 0;
    RVec delta(n);
    for (uint64_t t = 0; t < trials; ++t) {
        for (long i = 0; i < n; ++i) {
            double u = rng.uniform();
            delta(i) = (u < 0.25) ? -2.0 : (u < 0.75) ? 0.0 : 2.0;
        }
        double quad = delta.dot(fam.A * delta);
        acc += quad;
        if (quad <= thr) ++hits;
    }
    st.mean_mc = acc / double(trials);
    st.tail_frac = double(hits) / double(trials);
    return st;
}

} // namespace qet
