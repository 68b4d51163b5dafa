// Block-encoding algebra over explicit matrices.  Costs are tracked in a
// query ledger charging the stated complexity of each primitive with all
// implementation constants fixed at 1; the matrix semantics are exact.
#pragma once

#include "qet/qcore.hpp"

#include <vector>

namespace qet {

struct CostLedger {
    uint64_t queries_U = 0;
    uint64_t queries_U_dagger = 0;
    uint64_t extra_gates = 0;
    uint64_t depth = 0;

    CostLedger& operator+=(const CostLedger& o) {
        queries_U += o.queries_U;
        queries_U_dagger += o.queries_U_dagger;
        extra_gates += o.extra_gates;
        depth += o.depth;
        return *this;
    }
    friend CostLedger operator+(CostLedger a, const CostLedger& b) { return a += b; }
    CostLedger scaled(uint64_t k) const {
        return CostLedger{queries_U * k, queries_U_dagger * k, extra_gates * k, depth * k};
    }
    uint64_t total_queries() const { return queries_U + queries_U_dagger; }
};

struct BlockEncoding {
    Mat block;          // the encoded matrix A, ||A|| <= 1 + 1e-8
    int ancillas = 0;
    CostLedger ledger;

    BlockEncoding() = default;
    BlockEncoding(Mat b, int a, CostLedger l = {});
    Eigen::Index dim() const { return block.rows(); }
};

// Controlled state-preparation family {|psi_x>}_{x in index set}, with the
// per-use cost of the unitary that prepares it.
struct StatePrepFamily {
    std::vector<Ket> states;
    int ancillas = 0;
    CostLedger cost_per_use{1, 0, 0, 1};
};

// Block-encoding of a two-outcome POVM element E from its measurement
// dilation: U acts on (C^{2^a} ancilla) (x) (C^d system), ancillas start in
// |0>, and `outcome_mask[k]` marks which ancilla basis states count as
// outcome 1.  E = sum_{k marked} A_k^dag A_k with A_k = (<k| (x) I) U (|0> (x) I).
BlockEncoding from_povm(const Mat& povm_unitary, int a, Eigen::Index d,
                        const std::vector<bool>& outcome_mask);

// Linear combination (sum_j y_j E_j) / beta, for nonnegative y, beta >= ||y||_1.
BlockEncoding lcu_combine(const std::vector<double>& y,
                          const std::vector<BlockEncoding>& blocks, double beta);

// Uniform amplification to A/(2*beta) given ||A|| <= beta <= 1, to accuracy
// eps.  Charges ceil(nu * ln(max(nu/eps, 2))) uses of the input encoding,
// with nu = 1/(2*beta).
BlockEncoding amplify(const BlockEncoding& be, double beta, double eps);

// Hamiltonian simulation e^{itA} for Hermitian A, computed exactly by
// eigendecomposition.  Charges ceil(|t| + ln(1/eps)) uses of the input
// encoding.  With inject_error, multiplies by a random phase perturbation of
// operator-norm distance exactly eps from the identity (output stays unitary).
BlockEncoding ham_sim(const BlockEncoding& be, double t, double eps,
                      bool inject_error = false, RandomStream* rng = nullptr);

// Block-encoding of diag({<phi_x|psi_x>}) from two controlled families.
BlockEncoding inner_product_diag(const StatePrepFamily& U, const StatePrepFamily& V);

} // namespace qet
