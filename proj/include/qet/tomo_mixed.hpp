// Density-matrix tomography: the coordinate-wise unbiased estimator driven
// by the multi-expectation engine, the full Schatten-q pipeline with
// operator-norm concentration and PSD rank projection, and the direct
// sampling algorithm that only consumes copies.
#pragma once

#include "qet/common.hpp"
#include "qet/rng.hpp"
#include "qet/blockenc.hpp"

#include <string>
#include <vector>
#include <cstdint>

namespace qet {

// The 2 d^2 pair observables E^(0)_ij = (|i><j| + |j><i|)/2 and
// E^(1)_ij = (|i><j| - |j><i|)/(2i), ordered p-major then row-major.
// Sum of all squares equals d * I; E^(1)_ii is the zero matrix.
std::vector<Mat> pair_observables(Eigen::Index d);

struct CoordTomoResult {
    Mat z;             // entry estimates z_ij = z0_ij + i z1_ij
    CostLedger ledger;
    double sigma_prime = 0.0;
};

// Per-entry estimates with |rho_ij - z_ij| <= sqrt(2) eps simultaneously
// with probability >= 1 - delta, and per-entry bias <= 32 sqrt(d ln(2d) delta).
CoordTomoResult coordinatewise_tomo(const Mat& rho, double eps, double delta,
                                    RandomStream& rng);

// Absolute constants of the subgaussian operator-norm concentration bound,
// calibrated once empirically and frozen in a constants table.
struct OpNormConstants {
    double Cprime = 2.5;
    double cprime = 0.475;
};

// Text table, same record format as the lambda cache; returns the built-in
// defaults when the file is absent.
OpNormConstants load_opnorm_constants(const std::string& path);
void save_opnorm_constants(const std::string& path, const OpNormConstants& c,
                           Eigen::Index d_max, int trials, uint64_t seed,
                           double level);

// Path of the shipped constants table (under the data directory).
std::string default_opnorm_constants_path();

struct MixedTomoResult {
    Mat rho_tilde;        // PSD, trace <= 1, rank <= r
    Mat z_raw;            // un-projected coordinate-wise estimate
    CostLedger ledger;        // query charge (unit constants)
    CostLedger coord_ledger;  // inner coordinate-wise stage charge
    double eta = 0.0;         // operator-norm precision target
    double eps_prime = 0.0;   // per-entry precision used
    double delta_prime = 0.0;
    double tau = 0.0;
};

// Schatten-q tomography of a rank-r state: coordinate-wise unbiased entries,
// hermitization, and PSD rank projection at the operator-norm precision that
// suffices for the requested Schatten norm.
MixedTomoResult mixed_tomo(const Mat& rho, int r, double eps, double delta,
                           double q, RandomStream& rng,
                           const OpNormConstants* consts = nullptr);

struct DirectSampleResult {
    Mat rho_tilde;        // branch-averaged reconstruction, PSD rank-r projected
    Mat q0_recon;         // single-branch (q0-only) reconstruction, hermitized
    uint64_t copies = 0;  // copies of rho consumed
    double eps_bar = 0.0; // per-distribution l2 target eps / sqrt(d r)
};

// Direct tomography from copies only: for each cyclic shift h a
// Hadamard flag-qubit interference experiment recovers Re rho_{j,j+h}
// (plus a phase-gate variant for the imaginary part) from the 2d-outcome
// distribution q^(h); O(r d^2 / eps^2) copies for trace-norm error.
DirectSampleResult direct_sample_tomo(const Mat& rho, int r, double eps,
                                      RandomStream& rng);

} // namespace qet
