// Jordan-style gradient estimation: the exact phase-state construction, the
// per-coordinate measurement kernel, and the block-Hamiltonian-to-gradient
// routines (median-boosted, and the suppressed-bias variant built on the
// boosted phase-estimation resampler).
#pragma once

#include "qet/blockenc.hpp"
#include "qet/phaseest.hpp"
#include "qet/qcore.hpp"

#include <functional>
#include <vector>

namespace qet {

// A real-valued function on the grid G_b^d, together with a promise about
// how well it matches the linear function <x, g>.
//   f: callable on grid-point coordinate vectors x in G_b^d
//   good_fraction: declared fraction of points where |f(x) - <x,g>| <= tol
//   linear: set when f is exactly x -> <x, linear_g>; enables the
//           coordinatewise product-state execution path.
struct PhaseValueOracle {
    std::function<double(const std::vector<double>&)> f;
    int b = 0;
    int d = 0;
    double good_fraction = 1.0;
    bool linear = false;
    std::vector<double> linear_g;
};

// Oracle for the exactly linear function f(x) = <x, g> on G_b^d.
PhaseValueOracle linear_phase_oracle(const std::vector<double>& g, int b);

// Gradient estimate plus the number of oracle (block-encoding) uses charged.
struct GradEstimate {
    std::vector<double> k;
    uint64_t oracle_queries = 0;
};

// The exact d-register phase state on (2^b)^d:
//   (1/sqrt(B^d)) sum_x e^{2 pi i B <g,x>} |x>            (no oracle)
//   (1/sqrt(B^d)) sum_x e^{2 pi i (B/8) f(x)} |x>         (oracle given)
// Requires d*b <= 22 and, without an oracle, ||g||_inf <= 1/3.
Ket jordan_state(const std::vector<double>& g, int b, int d,
                 const PhaseValueOracle* oracle = nullptr);

// Inverse grid-QFT on each coordinate register, then a computational-basis
// sample; returns the measured grid labels x_k (one per coordinate).
std::vector<double> jordan_measure(const Ket& state, int b, int d, RandomStream& rng);

// One sample of the exact single-coordinate outcome distribution
//   Pr[k] = sin^2(pi B (g - x_k)) / (B^2 sin^2(pi (g - x_k))),
// i.e. the measured label of one register of the ideal product state.
double jordan_coord_sample(double g, int b, RandomStream& rng);

// Median-boosted gradient recovery from an approximately linear phase
// oracle: 2m+1 Jordan rounds with m = ceil(10 ln(d/delta)), per-coordinate
// medians of the x8-rescaled outputs, clipped to [-4,4]^d.
// Pr[||k - g||_inf > eps] <= delta.
GradEstimate block_to_grad(const PhaseValueOracle& oracle, double eps, double delta,
                           RandomStream& rng);

// Suppressed-bias variant: each coordinate is estimated with the boosted
// resampling phase estimator instead of a median, giving both
// Pr[||k - g||_inf > eps] <= delta and ||E[k] - g||_inf <= 8*delta.
// Only the exactly linear oracle path is supported.
GradEstimate unbiased_block_to_grad(const PhaseValueOracle& oracle, double eps,
                                    double delta, RandomStream& rng);

} // namespace qet
