#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qet/blockenc.hpp"
#include "qet/rng.hpp"

#include <cmath>

using namespace qet;

namespace {

Mat random_unitary(Eigen::Index n, RandomStream& rng) {
    Mat g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            g(i, j) = cplx(rng.normal(), rng.normal());
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < n; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
    return q;
}

} // namespace

TEST_CASE("from_povm reproduces the dilation POVM element") {
    RandomStream rng(200, 0);
    const Eigen::Index d = 4;
    const int a = 1;
    Mat u = random_unitary(d << a, rng);
    std::vector<bool> mask{false, true};  // ancilla outcome |1> counts
    BlockEncoding be = from_povm(u, a, d, mask);
    // E = A_1^dag A_1 with A_1 = (<1| x I) U (|0> x I)
    Mat A1 = u.block(d, 0, d, d);
    Mat E = A1.adjoint() * A1;
    CHECK((be.block - E).norm() < 1e-12);
    CHECK(be.ancillas >= a);
    // PSD and <= I
    Eigen::SelfAdjointEigenSolver<Mat> es(be.block);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12);
    CHECK(es.eigenvalues().maxCoeff() <= 1.0 + 1e-12);
    // complement mask gives I - E
    BlockEncoding bec = from_povm(u, a, d, {true, false});
    CHECK((be.block + bec.block - Mat::Identity(d, d)).norm() < 1e-12);
}

TEST_CASE("lcu_combine forms the exact normalized linear combination") {
    RandomStream rng(201, 0);
    const Eigen::Index d = 3;
    std::vector<BlockEncoding> blocks;
    std::vector<double> y{0.5, 1.25, 0.25};
    for (int k = 0; k < 3; ++k) {
        Mat h(d, d);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j)
                h(i, j) = cplx(rng.normal(), rng.normal());
        h = ((h + h.adjoint().eval()) / 2.0).eval();
        h /= (2.0 * h.operatorNorm());
        blocks.push_back(BlockEncoding(h, 1, CostLedger{1, 0, 2, 1}));
    }
    double beta = 2.5;  // >= ||y||_1 = 2.0
    BlockEncoding out = lcu_combine(y, blocks, beta);
    Mat expect = (y[0] * blocks[0].block + y[1] * blocks[1].block +
                  y[2] * blocks[2].block) / beta;
    CHECK((out.block - expect).norm() < 1e-12);
    // charges one use of each constituent
    CHECK(out.ledger.queries_U >= 3);
}

TEST_CASE("amplify halves the normalization and charges the log formula") {
    RandomStream rng(202, 0);
    const Eigen::Index d = 4;
    Mat h(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            h(i, j) = cplx(rng.normal(), rng.normal());
    h = ((h + h.adjoint().eval()) / 2.0).eval();
    double beta = 0.25;
    h *= beta / h.operatorNorm();  // ||A|| = beta
    BlockEncoding be(h, 1, CostLedger{1, 0, 0, 1});
    double eps = 1e-3;
    BlockEncoding out = amplify(be, beta, eps);
    CHECK((out.block - h / (2.0 * beta)).norm() < 1e-12);
    double nu = 1.0 / (2.0 * beta);
    uint64_t charges = uint64_t(std::ceil(nu * std::log(std::max(nu / eps, 2.0))));
    CHECK(out.ledger.queries_U == charges * be.ledger.queries_U);
}

TEST_CASE("ham_sim is unitary with the right eigenphases and cost") {
    RandomStream rng(203, 0);
    const Eigen::Index d = 4;
    Mat h = Mat::Zero(d, d);
    h(0, 0) = 0.3;
    h(1, 1) = -0.5;
    h(2, 3) = cplx(0.0, 0.2);
    h(3, 2) = cplx(0.0, -0.2);
    BlockEncoding be(h, 1, CostLedger{1, 0, 0, 1});
    double t = 2.0, eps = 1e-4;
    BlockEncoding u = ham_sim(be, t, eps);
    CHECK((u.block * u.block.adjoint() - Mat::Identity(d, d)).norm() < 1e-10);
    CHECK(std::abs(u.block(0, 0) - std::exp(cplx(0.0, t * 0.3))) < 1e-10);
    CHECK(std::abs(u.block(1, 1) - std::exp(cplx(0.0, t * -0.5))) < 1e-10);
    uint64_t charges = uint64_t(std::ceil(std::fabs(t) + std::log(1.0 / eps)));
    CHECK(u.ledger.queries_U == charges);

    // injected error keeps unitarity and lands exactly at distance eps
    BlockEncoding ue = ham_sim(be, t, 0.01, true, &rng);
    CHECK((ue.block * ue.block.adjoint() - Mat::Identity(d, d)).norm() < 1e-10);
    CHECK((ue.block - u.block).operatorNorm() == doctest::Approx(0.01).epsilon(1e-6));
}

TEST_CASE("inner_product_diag encodes the pairwise overlaps") {
    Vec a0(2), a1(2), b0(2), b1(2);
    a0 << 1.0, 0.0;
    a1 << cplx(1 / std::sqrt(2.0), 0), cplx(1 / std::sqrt(2.0), 0);
    b0 << 0.0, 1.0;
    b1 << cplx(1 / std::sqrt(2.0), 0), cplx(0, -1 / std::sqrt(2.0));
    StatePrepFamily U{{Ket{a0}, Ket{a1}}, 0, CostLedger{1, 0, 0, 1}};
    StatePrepFamily V{{Ket{b0}, Ket{b1}}, 0, CostLedger{1, 0, 0, 1}};
    BlockEncoding ip = inner_product_diag(U, V);
    CHECK(ip.block.rows() == 2);
    CHECK(std::abs(ip.block(0, 0) - b0.dot(a0)) < 1e-12);
    CHECK(std::abs(ip.block(1, 1) - b1.dot(a1)) < 1e-12);
    CHECK(std::abs(ip.block(0, 1)) < 1e-12);
    CHECK(std::abs(ip.block(1, 0)) < 1e-12);
    CHECK(ip.ledger.total_queries() >= 2);
}

TEST_CASE("ledger arithmetic composes and scales") {
    CostLedger a{2, 1, 5, 3}, b{1, 1, 0, 2};
    CostLedger c = a + b;
    CHECK(c.queries_U == 3);
    CHECK(c.queries_U_dagger == 2);
    CHECK(c.extra_gates == 5);
    CHECK(c.depth == 5);
    CHECK(c.total_queries() == 5);
    CostLedger s = a.scaled(4);
    CHECK(s.queries_U == 8);
    CHECK(s.depth == 12);
}

TEST_CASE("block encoding rejects norm violations") {
    Mat big = Mat::Identity(2, 2) * 1.5;
    CHECK_THROWS(BlockEncoding(big, 0));
}
