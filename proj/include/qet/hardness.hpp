// Lower-bound constructions as executable objects: the hard conditional-
// sample distribution family with closed-form spectrum, the fractional-
// phase-oracle distribution embedding, mutually unbiased bases with their
// verified algebraic properties, the rho_b embedding, and the delta^T A
// delta concentration statistics.
#pragma once

#include "qet/common.hpp"
#include "qet/rng.hpp"
#include "qet/qcore.hpp"

#include <vector>
#include <cstdint>

namespace qet {

// Modular exponentiation, Legendre symbol (Euler's criterion) and inverse
// in the prime field F_d.
long powmod(long base, long exp, long mod);
int legendre_symbol(long a, long d);  // -1, 0, or +1
long mod_inverse(long a, long d);

// The quadratic Gauss sum sum_l w^(a l^2 + b l), both by direct summation
// and by the closed form w^(-(4a)^{-1} b^2) (a|d) c_d sqrt(d).
cplx gauss_sum_direct(long a, long b, long d);
cplx gauss_sum_closed(long a, long b, long d);

// ---------------------------------------------------------------- probset

struct ProbsetFamily {
    Eigen::Index d = 0;   // even, >= 12; bit strings have length d/2
    double eps = 0.0;
    double top_eig = 0.0;     // (3 + c+c-)/4
    double small_eig = 0.0;   // (1 - c+c-)/(2d), multiplicity d/2
    RVec sigma_eigs;          // direct diagonalization (d <= 16 only)
    double entropy = 0.0;     // S(sigma), natural log, from the formula
    double entropy_direct = 0.0;  // from the diagonalized sigma
    double entropy_bound = 0.0;   // 27 eps^2 (1 + ln(d/eps^2))
};

// p^(b)_{i,c} = (1 + (-1)^{b_i xor c} 6 eps)/d for i in [d/2], c in {0,1};
// flattened outcome index 2 i + c.
double probset_prob(const std::vector<int>& b, Eigen::Index i, int c,
                    Eigen::Index d, double eps);

// Spectrum and entropy of the average conditional-sample state sigma; the
// explicit construction (and the 1e-9 formula cross-check) requires d <= 16.
ProbsetFamily probset_build(Eigen::Index d, double eps);

// ----------------------------------------------------- phase-oracle embed

// The 2d-outcome distribution p_{j,b} built from one fractional-phase-
// oracle call, flattened as p(2 j + b):
//   p_{j,0} = cos^2(pi/4 + 4 pi eps x_j)/d,  p_{j,1} = sin^2(...)/d.
RVec phase_to_dist(const std::vector<int>& x, double eps);

// Decode rule: x~_j = 1 iff p~_{j,0} < (1/2 - 4 eps)/d.  Any eps-l1-close
// estimate decodes >= 3d/4 bits correctly.
std::vector<int> phase_decode(const RVec& p_tilde, double eps);

// --------------------------------------------------------------------- MUB

struct MubFamily {
    long d = 0;  // odd prime
    long r = 0;  // number of bases used, r <= d
    cplx c_d;    // 1 if d = 1 mod 4, i if d = 3 mod 4
    std::vector<Mat> U;            // r unitaries, d x d
    std::vector<std::vector<Mat>> alpha;  // alpha[j][j'](k,k') overlaps
    Mat S;       // r x r sums of alpha blocks
    Mat M;       // rd x rd, off-block part alpha * conj(S), zero on-diagonal
    RMat A;      // rd x rd, Re[M] + d I
};

// Builds the family and verifies unitarity, unbiasedness, the alpha and S
// closed forms, and the norm bounds |A| <= 2d, |A|_F^2 <= 4 d^3 r.
MubFamily mub_build(long d, long r);

// Eigenvector v^(l,m) of M (valid as stated when r = d) with components
// v^(j)_k = w^(l j - k(k-m)) and eigenvalue d c_d^2 Legendre(l - m^2, d).
Vec mub_eigenvector(const MubFamily& fam, long l, long m);
double mub_eigenvalue(const MubFamily& fam, long l, long m);

// -------------------------------------------------------------- embedding

// |psi_b> (dimension 2 d r, block j at offset 2 d j, flag-first layout
// c d + a within a block) and rho_b = Tr_j |psi_b><psi_b| (2d x 2d).
std::pair<Ket, Mat> rho_embed(const std::vector<int>& b, const MubFamily& fam,
                              double eps);

// ------------------------------------------------------------- statistics

struct DeltaQuadStats {
    double mean_exact = 0.0;  // 2 tr(A) = 2 d^2 r
    double mean_mc = 0.0;
    double tail_frac = 0.0;   // P[delta^T A delta <= d^2 r / 2]
    uint64_t trials = 0;
};

// delta entries iid on {-2, 0, 2} with probabilities 1/4, 1/2, 1/4.
DeltaQuadStats delta_quadratic_stats(const MubFamily& fam, uint64_t trials,
                                     RandomStream& rng);

} // namespace qet
