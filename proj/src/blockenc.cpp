#include "qet/blockenc.hpp"

#include <Eigen/Eigenvalues>

namespace qet {

BlockEncoding::BlockEncoding(Mat b, int a, CostLedger l)
    : block(std::move(b)), ancillas(a), ledger(l) {
    require(ancillas >= 0, "BlockEncoding: ancillas must be >= 0");
    require(norm_mat(block, q_inf()) <= 1.0 + 1e-8,
            "BlockEncoding: ||A|| must be <= 1 + 1e-8");
}

BlockEncoding from_povm(const Mat& povm_unitary, int a, Eigen::Index d,
                        const std::vector<bool>& outcome_mask) {
    Eigen::Index anc_dim = Eigen::Index(1) << a;
    require(povm_unitary.rows() == anc_dim * d, "from_povm: dilation dimension mismatch");
    require((povm_unitary * povm_unitary.adjoint() - Mat::Identity(anc_dim * d, anc_dim * d))
                    .cwiseAbs()
                    .maxCoeff() <= 1e-8,
            "from_povm: input must be unitary");
    require(Eigen::Index(outcome_mask.size()) == anc_dim, "from_povm: mask size mismatch");

    // Kraus operators A_k = (<k| (x) I) U (|0> (x) I); ancilla is the slow index.
    Mat E = Mat::Zero(d, d);
    for (Eigen::Index k = 0; k < anc_dim; ++k) {
        if (!outcome_mask[size_t(k)]) continue;
        Mat Ak = povm_unitary.block(k * d, 0, d, d);
        E += Ak.adjoint() * Ak;
    }
    return BlockEncoding(std::move(E), a + 1, CostLedger{1, 1, 1, 3});
}

BlockEncoding lcu_combine(const std::vector<double>& y,
                          const std::vector<BlockEncoding>& blocks, double beta) {
    require(!blocks.empty() && y.size() == blocks.size(), "lcu_combine: shape mismatch");
    double l1 = 0.0;
    for (double w : y) {
        require(w >= 0.0, "lcu_combine: weights must be nonnegative");
        l1 += w;
    }
    require(beta >= l1 - 1e-12, "lcu_combine: beta must be >= ||y||_1");
    Eigen::Index d = blocks[0].dim();
    int a = blocks[0].ancillas;
    CostLedger led;
    Mat sum = Mat::Zero(d, d);
    uint64_t max_depth = 0;
    for (size_t j = 0; j < blocks.size(); ++j) {
        require(blocks[j].dim() == d, "lcu_combine: blocks must share dimension");
        require(blocks[j].ancillas == a, "lcu_combine: blocks must share ancilla count");
        sum += y[j] * blocks[j].block;
        led += blocks[j].ledger;
        max_depth = std::max(max_depth, blocks[j].ledger.depth);
    }
    // The select circuit runs the component encodings controlled in sequence;
    // the state-prep pair adds two extra gates.
    led.extra_gates += 2;
    led.depth += 2;
    int log_m = 0;
    while ((size_t(1) << log_m) < blocks.size()) ++log_m;
    return BlockEncoding(sum / beta, a + log_m + 1, led);
}

BlockEncoding amplify(const BlockEncoding& be, double beta, double eps) {
    require(eps > 0.0, "amplify: eps must be positive");
    require(beta <= 1.0 + 1e-12, "amplify: beta must be <= 1");
    require(norm_mat(be.block, q_inf()) <= beta + 1e-10, "amplify: requires ||A|| <= beta");
    double nu = 1.0 / (2.0 * beta);
    uint64_t k = uint64_t(std::ceil(nu * std::log(std::max(nu / eps, 2.0))));
    if (k == 0) k = 1;
    return BlockEncoding(be.block / (2.0 * beta), be.ancillas + 1, be.ledger.scaled(k));
}

BlockEncoding ham_sim(const BlockEncoding& be, double t, double eps,
                      bool inject_error, RandomStream* rng) {
    require(eps > 0.0, "ham_sim: eps must be positive");
    require((be.block - be.block.adjoint()).cwiseAbs().maxCoeff() <= kHermTol,
            "ham_sim: block must be Hermitian within 1e-10");
    Eigen::SelfAdjointEigenSolver<Mat> es(be.block);
    Eigen::Index d = be.dim();
    Mat U = Mat::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        double phase = t * es.eigenvalues()(i);
        U += cplx(std::cos(phase), std::sin(phase)) *
             (es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint());
    }
    if (inject_error) {
        require(rng != nullptr, "ham_sim: error injection needs an rng");
        require(eps < 2.0, "ham_sim: injected error must be < 2");
        // Random Hermitian direction with unit top eigenvalue; the phase
        // rotation e^{isH} sits at operator distance exactly eps from I.
        Mat H = Mat::Zero(d, d);
        for (Eigen::Index i = 0; i < d; ++i) {
            H(i, i) = rng->normal();
            for (Eigen::Index j = i + 1; j < d; ++j) {
                H(i, j) = cplx(rng->normal(), rng->normal()) / std::sqrt(2.0);
                H(j, i) = std::conj(H(i, j));
            }
        }
        Eigen::SelfAdjointEigenSolver<Mat> eh(H);
        double top = std::max(std::abs(eh.eigenvalues().minCoeff()),
                              std::abs(eh.eigenvalues().maxCoeff()));
        double s = 2.0 * std::asin(eps / 2.0) / top;
        Mat P = Mat::Zero(d, d);
        for (Eigen::Index i = 0; i < d; ++i) {
            double ph = s * eh.eigenvalues()(i);
            P += cplx(std::cos(ph), std::sin(ph)) *
                 (eh.eigenvectors().col(i) * eh.eigenvectors().col(i).adjoint());
        }
        U = P * U;
    }
    uint64_t k = uint64_t(std::ceil(std::abs(t) + std::log(1.0 / eps)));
    if (k == 0) k = 1;
    CostLedger led = be.ledger.scaled(k);
    return BlockEncoding(std::move(U), be.ancillas + 2, led);
}

BlockEncoding inner_product_diag(const StatePrepFamily& U, const StatePrepFamily& V) {
    require(U.states.size() == V.states.size() && !U.states.empty(),
            "inner_product_diag: index sets must match");
    require(U.ancillas == V.ancillas, "inner_product_diag: ancilla counts must match");
    Eigen::Index m = Eigen::Index(U.states.size());
    Mat diag = Mat::Zero(m, m);
    for (Eigen::Index x = 0; x < m; ++x) {
        require(U.states[size_t(x)].dim() == V.states[size_t(x)].dim(),
                "inner_product_diag: state dimensions must match");
        diag(x, x) = V.states[size_t(x)].amps.dot(U.states[size_t(x)].amps);
    }
    CostLedger led = U.cost_per_use;
    CostLedger vled = V.cost_per_use;
    led.queries_U_dagger += vled.queries_U;  // V is applied inverted
    led.queries_U += vled.queries_U_dagger;
    led.extra_gates += vled.extra_gates + 1;  // + the SWAP layer
    led.depth += vled.depth + 1;
    return BlockEncoding(std::move(diag), U.ancillas + 2, led);
}

} // namespace qet
