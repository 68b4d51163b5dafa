// Dense complex linear algebra substrate: state types, grid labels and the
// grid Fourier transform, measurement sampling, partial trace and norms.
#pragma once

#include "qet/common.hpp"
#include "qet/rng.hpp"

#include <optional>
#include <vector>

namespace qet {

// Pure state: unit-l2-norm complex amplitude vector over d basis states.
struct Ket {
    Vec amps;

    Ket() = default;
    explicit Ket(Vec a, bool validate = true);

    Eigen::Index dim() const { return amps.size(); }
    static Ket basis(Eigen::Index d, Eigen::Index j);
    static Ket uniform(Eigen::Index d);
};

// Mixed state: Hermitian PSD trace-1 matrix, with an optional rank tag.
struct DensityMatrix {
    Mat mat;
    std::optional<int> rank_hint;

    DensityMatrix() = default;
    explicit DensityMatrix(Mat m, std::optional<int> r = std::nullopt,
                           bool validate = true);

    Eigen::Index dim() const { return mat.rows(); }
    static DensityMatrix from_ket(const Ket& psi);
    static DensityMatrix maximally_mixed(Eigen::Index d);
};

// One point of the symmetric grid G_n: x = j/2^n - 1/2 + 2^{-n-1}.
struct GridLabel {
    int n;
    long j;
    double x;
};

// All 2^n labels of G_n, in increasing order of x (j = 0, 1, ...).
std::vector<GridLabel> grid_labels(int n);

// The 2^n x 2^n grid Fourier transform matrix over G_n:
//   F[k][j] = (1/sqrt(2^n)) * exp(2*pi*i * 2^n * x_j * x_k).
Mat qft_grid_matrix(int n);

// Apply QFT over G_n independently on each of k registers of n (qu)bits.
// state.dim() must equal 2^(n*k).  Set inverse to apply the adjoint.
Ket qft_grid(const Ket& state, int n, int k, bool inverse = false);

// Computational-basis measurement: histogram of `shots` iid draws from
// p_j = |amps_j|^2 (or rho_jj for a density matrix).
std::vector<uint64_t> measure(const Ket& state, uint64_t shots, RandomStream& rng);
std::vector<uint64_t> measure(const DensityMatrix& rho, uint64_t shots, RandomStream& rng);
std::vector<uint64_t> measure_probs(const std::vector<double>& p, uint64_t shots,
                                    RandomStream& rng);

// Single-outcome sampler from a probability vector (inverse CDF).
Eigen::Index sample_index(const std::vector<double>& p, RandomStream& rng);

// Partial trace over B (keep_A = true) or over A (keep_A = false)
// of a state on A (x) B with dims (dA, dB).
DensityMatrix partial_trace(const Ket& psi, Eigen::Index dA, Eigen::Index dB, bool keep_A);
DensityMatrix partial_trace(const DensityMatrix& rho, Eigen::Index dA, Eigen::Index dB,
                            bool keep_A);

// lq norm of a vector; Schatten-q norm of a matrix (lq of singular values).
// q = q_inf() gives max-abs / operator norm.  Requires q >= 1.
double norm_vec(const Vec& x, double q);
double norm_vec(const RVec& x, double q);
double norm_mat(const Mat& m, double q);

} // namespace qet
