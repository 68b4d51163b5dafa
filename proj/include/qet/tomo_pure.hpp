// Pure-state tomography in four access models: computational-basis samples,
// conditional samples (states with a reference branch), bare copies with
// single-copy unitaries, and a state-preparation unitary with its inverse
// (phase-estimation based), plus the sparse-support variant.  Every routine
// returns the estimate together with a resource ledger.
#pragma once

#include "qet/blockenc.hpp"
#include "qet/gradest.hpp"
#include "qet/norms.hpp"
#include "qet/qcore.hpp"

#include <string>
#include <vector>

namespace qet {

enum class TomoModel { classical, conditional, copies, unitary, sparse };

const char* tomo_model_name(TomoModel m);

struct TomographyResult {
    Vec estimate;                 // length d (absolute values for classical)
    TomoModel model = TomoModel::classical;
    CostLedger ledger;            // queries_U = oracle/copy uses
    uint64_t samples = 0;         // computational-basis shots consumed
    double q = 0.0;               // target norm exponent (q_inf() for l_inf)
    double eps = 0.0;
    double delta = 0.0;
    double truncate_threshold = 0.0;  // 0 when no truncation was applied
    bool support_assumption_ok = true;  // sparse model post-hoc check
};

// One-line record of a finished run, consumed by the harness:
// model d eps delta q error_achieved queries samples seed
std::string tomo_record_line(const TomographyResult& r, Eigen::Index d,
                             double error_achieved, uint64_t seed);

// l_inf estimate of |alpha| from k = ceil(8 ln(2d/delta)/eps^2)
// computational-basis measurements; estimate entries are sqrt(frequencies).
TomographyResult classical_linf_tomo(const Ket& psi, double eps, double delta,
                                     RandomStream& rng);

// Generic l_inf -> l_q lift: runs `linf_routine` at the precision eta that
// suffices for an eps-l_q estimate of an l_2-normalized vector, then
// threshold-truncates the estimate at 2*eta.  q >= 2.
TomographyResult lq_wrap(const std::function<TomographyResult(double eta)>& linf_routine,
                         Eigen::Index d, double q, double eps);

// Hadamard pair comparison: given phi = (|0>|psi_0> + |1>|psi_1>)/sqrt(2)
// with amplitudes alpha, beta, estimates the 2d-vector
// (|alpha_j + beta_j|)_j ++ (|alpha_j - beta_j|)_j to l_inf precision eps.
RVec hadamard_pair_est(const Ket& phi, double eps, double delta, RandomStream& rng,
                       uint64_t* samples_used = nullptr);

// Full complex estimate from conditional samples (|0>|psi> + |1>|0>)/sqrt(2):
// magnitudes at eps/32, below-eps/2 coordinates zeroed, then Hadamard
// comparisons against the renormalized magnitude reference recover each
// coordinate's real and imaginary part.  ||alpha - est||_inf <= eps.
TomographyResult cond_sample_tomo(const Ket& psi, double eps, double delta,
                                  RandomStream& rng);

// Copies-only estimate, valid up to a global phase: magnitudes at
// eps/(16m), kept coordinates permuted to the front, pairwise Hadamard
// comparisons along bit-flip paths from index 0, alpha_0 fixed real.
TomographyResult copies_only_tomo(const Ket& psi, double eps, double delta,
                                  RandomStream& rng);

// min over a 1024-point theta grid (plus local refinement) of
// ||truth - e^{i theta} est||_inf: the up-to-global-phase error metric.
double aligned_linf_error(const Vec& truth, const Vec& est);

// Amplitude encoding |amp(x~)> = (1/sqrt d) sum_j x~_j |j>|0> + sqrt(1-x~_j^2)|j>|1>
// with ||x~ - x||_inf <= eps (arcsin computed to eps/2 on b-bit entries).
// Index convention: basis state 2j + flag.
struct AmpEncodeResult {
    Ket state;
    RVec x_tilde;
    CostLedger ledger;  // extra_gates counts plain gates; queries_U counts
                        // indexed-SWAP uses
};
AmpEncodeResult amp_encode(const RVec& x, int b, double eps);

// Real-part tomography with a state-preparation unitary and its inverse:
// gradient estimation on the linear phase function <x, Re(alpha)>/sqrt(d) at
// precision eps/sqrt(d), rescaled by sqrt(d).  When eps >= 1/sqrt(d) the
// support is first restricted using O(log(d/delta)/eps^2) classical shots.
// Returns a real estimate in `estimate` (imaginary parts zero).
TomographyResult pe_real_tomo(const Ket& psi, double eps, double delta,
                              RandomStream& rng);

// Complex estimate via pe_real_tomo on psi and on i*psi (each part at
// precision eps/sqrt(2), budget delta/2).
TomographyResult pe_state_tomo(const Ket& psi, double eps, double delta,
                               RandomStream& rng);

// Sparse tomography: repeated sampling from the renormalized unseen
// subspace (idealized amplitude amplification, ceil(1/sqrt(p_unseen))
// queries per draw, per-round success a Bernoulli(2/3)), Markov-bound stop
// budgets at 6x the expected counts, then phase-estimation tomography on
// the discovered index set.  The support hypothesis
// |{j : |alpha_j| >= eps sqrt(s/d)}| <= s is checked post hoc and flagged.
TomographyResult sparse_tomo(const Ket& psi, int s, double eps, double delta,
                             RandomStream& rng);

} // namespace qet
