#include "qet/qcore.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qet {

Ket::Ket(Vec a, bool validate) : amps(std::move(a)) {
    require(amps.size() >= 1, "Ket: dimension must be >= 1");
    if (validate) {
        require(std::abs(amps.norm() - 1.0) <= kHermTol,
                "Ket: amplitudes must be l2-normalized within 1e-10");
    }
}

Ket Ket::basis(Eigen::Index d, Eigen::Index j) {
    Vec a = Vec::Zero(d);
    a(j) = 1.0;
    return Ket(std::move(a), false);
}

Ket Ket::uniform(Eigen::Index d) {
    Vec a = Vec::Constant(d, cplx(1.0 / std::sqrt(double(d)), 0.0));
    return Ket(std::move(a), false);
}

DensityMatrix::DensityMatrix(Mat m, std::optional<int> r, bool validate)
    : mat(std::move(m)), rank_hint(r) {
    require(mat.rows() == mat.cols() && mat.rows() >= 1, "DensityMatrix: square, d >= 1");
    if (validate) {
        require((mat - mat.adjoint()).cwiseAbs().maxCoeff() <= kHermTol,
                "DensityMatrix: not Hermitian within 1e-10");
        require(std::abs(mat.trace().real() - 1.0) <= kHermTol,
                "DensityMatrix: trace must equal 1 within 1e-10");
        Eigen::SelfAdjointEigenSolver<Mat> es(mat, Eigen::EigenvaluesOnly);
        require(es.eigenvalues().minCoeff() >= -kHermTol,
                "DensityMatrix: eigenvalues must be >= -1e-10");
        if (rank_hint) {
            int cnt = 0;
            for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
                if (es.eigenvalues()(i) > kRankTol) ++cnt;
            require(cnt <= *rank_hint, "DensityMatrix: rank exceeds rank_hint");
        }
    }
}

DensityMatrix DensityMatrix::from_ket(const Ket& psi) {
    return DensityMatrix(psi.amps * psi.amps.adjoint(), 1, false);
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index d) {
    return DensityMatrix(Mat::Identity(d, d) / double(d), int(d), false);
}

std::vector<GridLabel> grid_labels(int n) {
    require(n >= 1 && n <= 24, "grid_labels: n must be in [1, 24]");
    long N = 1L << n;
    std::vector<GridLabel> out;
    out.reserve(size_t(N));
    for (long j = 0; j < N; ++j) {
        double x = double(j) / double(N) - 0.5 + 0.5 / double(N);
        out.push_back(GridLabel{n, j, x});
    }
    return out;
}

Mat qft_grid_matrix(int n) {
    auto g = grid_labels(n);
    long N = 1L << n;
    Mat F(N, N);
    double s = 1.0 / std::sqrt(double(N));
    for (long k = 0; k < N; ++k)
        for (long j = 0; j < N; ++j) {
            double phase = 2.0 * kPi * double(N) * g[size_t(j)].x * g[size_t(k)].x;
            F(k, j) = s * cplx(std::cos(phase), std::sin(phase));
        }
    return F;
}

Ket qft_grid(const Ket& state, int n, int k, bool inverse) {
    long N = 1L << n;
    long total = 1;
    for (int i = 0; i < k; ++i) total *= N;
    require(state.dim() == total, "qft_grid: dimension must equal 2^(n*k)");
    Mat F = qft_grid_matrix(n);
    if (inverse) F.adjointInPlace();

    // Apply F on register axis r of the k-fold tensor product, one at a time.
    Vec v = state.amps;
    long stride_block = total;  // N^(k - r) at register r
    for (int r = 0; r < k; ++r) {
        stride_block /= N;  // elements spanned by one index step of register r
        Vec w = Vec::Zero(total);
        for (long outer = 0; outer < total / (stride_block * N); ++outer) {
            long base = outer * stride_block * N;
            for (long inner = 0; inner < stride_block; ++inner) {
                for (long a = 0; a < N; ++a) {
                    cplx acc = 0.0;
                    for (long b = 0; b < N; ++b)
                        acc += F(a, b) * v(base + b * stride_block + inner);
                    w(base + a * stride_block + inner) = acc;
                }
            }
        }
        v.swap(w);
    }
    return Ket(std::move(v), false);
}

std::vector<uint64_t> measure_probs(const std::vector<double>& p, uint64_t shots,
                                    RandomStream& rng) {
    require(shots >= 1, "measure: shots must be >= 1");
    return rng.multinomial(shots, p);
}

std::vector<uint64_t> measure(const Ket& state, uint64_t shots, RandomStream& rng) {
    std::vector<double> p(size_t(state.dim()));
    for (Eigen::Index i = 0; i < state.dim(); ++i) p[size_t(i)] = std::norm(state.amps(i));
    return measure_probs(p, shots, rng);
}

std::vector<uint64_t> measure(const DensityMatrix& rho, uint64_t shots, RandomStream& rng) {
    std::vector<double> p(size_t(rho.dim()));
    for (Eigen::Index i = 0; i < rho.dim(); ++i)
        p[size_t(i)] = std::max(0.0, rho.mat(i, i).real());
    return measure_probs(p, shots, rng);
}

Eigen::Index sample_index(const std::vector<double>& p, RandomStream& rng) {
    double u = rng.uniform();
    double c = 0.0;
    for (size_t i = 0; i + 1 < p.size(); ++i) {
        c += p[i];
        if (u < c) return Eigen::Index(i);
    }
    return Eigen::Index(p.size() - 1);
}

DensityMatrix partial_trace(const Ket& psi, Eigen::Index dA, Eigen::Index dB, bool keep_A) {
    require(dA * dB == psi.dim(), "partial_trace: dA*dB must equal dim");
    Eigen::Index dk = keep_A ? dA : dB;
    Mat out = Mat::Zero(dk, dk);
    // psi indexed as a*dB + b.
    if (keep_A) {
        for (Eigen::Index a = 0; a < dA; ++a)
            for (Eigen::Index a2 = 0; a2 < dA; ++a2) {
                cplx acc = 0.0;
                for (Eigen::Index b = 0; b < dB; ++b)
                    acc += psi.amps(a * dB + b) * std::conj(psi.amps(a2 * dB + b));
                out(a, a2) = acc;
            }
    } else {
        for (Eigen::Index b = 0; b < dB; ++b)
            for (Eigen::Index b2 = 0; b2 < dB; ++b2) {
                cplx acc = 0.0;
                for (Eigen::Index a = 0; a < dA; ++a)
                    acc += psi.amps(a * dB + b) * std::conj(psi.amps(a * dB + b2));
                out(b, b2) = acc;
            }
    }
    return DensityMatrix(std::move(out), std::nullopt, false);
}

DensityMatrix partial_trace(const DensityMatrix& rho, Eigen::Index dA, Eigen::Index dB,
                            bool keep_A) {
    require(dA * dB == rho.dim(), "partial_trace: dA*dB must equal dim");
    Eigen::Index dk = keep_A ? dA : dB;
    Mat out = Mat::Zero(dk, dk);
    if (keep_A) {
        for (Eigen::Index a = 0; a < dA; ++a)
            for (Eigen::Index a2 = 0; a2 < dA; ++a2) {
                cplx acc = 0.0;
                for (Eigen::Index b = 0; b < dB; ++b)
                    acc += rho.mat(a * dB + b, a2 * dB + b);
                out(a, a2) = acc;
            }
    } else {
        for (Eigen::Index b = 0; b < dB; ++b)
            for (Eigen::Index b2 = 0; b2 < dB; ++b2) {
                cplx acc = 0.0;
                for (Eigen::Index a = 0; a < dA; ++a)
                    acc += rho.mat(a * dB + b, a * dB + b2);
                out(b, b2) = acc;
            }
    }
    return DensityMatrix(std::move(out), std::nullopt, false);
}

namespace {
double lq_of_nonneg(const RVec& s, double q) {
    require(q >= 1.0, "norm: q must be >= 1 (or inf)");
    if (std::isinf(q)) return s.size() ? s.maxCoeff() : 0.0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) acc += std::pow(s(i), q);
    return std::pow(acc, 1.0 / q);
}
} // namespace

double norm_vec(const Vec& x, double q) {
    RVec a = x.cwiseAbs();
    return lq_of_nonneg(a, q);
}

double norm_vec(const RVec& x, double q) {
    RVec a = x.cwiseAbs();
    return lq_of_nonneg(a, q);
}

double norm_mat(const Mat& m, double q) {
    Eigen::JacobiSVD<Mat> svd(m);
    return lq_of_nonneg(svd.singularValues(), q);
}

} // namespace qet
