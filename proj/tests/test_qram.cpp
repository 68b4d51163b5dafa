#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qet/qram.hpp"
#include "qet/rng.hpp"

#include <cmath>

using namespace qet;

namespace {

int ilog2i(int d) {
    int l = 0;
    while ((1 << l) < d) ++l;
    return l;
}

// Run an indexed-CNOT netlist on (i, b, q) and return (b', q').
std::pair<int, std::vector<uint8_t>>
run_icnot(const CircuitNetlist& net, int d, int i, int b,
          const std::vector<uint8_t>& q) {
    int L = ilog2i(d);
    std::vector<uint8_t> in(size_t(net.n_main), 0);
    for (int k = 0; k < L; ++k) in[size_t(k)] = uint8_t((i >> k) & 1);
    in[size_t(L)] = uint8_t(b);
    for (int k = 0; k < d; ++k) in[size_t(L + 1 + k)] = q[size_t(k)];
    auto out = simulate_netlist(net, in);
    // index register unchanged; ancillas restored
    for (int k = 0; k < L; ++k) REQUIRE(out[size_t(k)] == in[size_t(k)]);
    for (int k = net.n_main; k < net.n_qubits(); ++k) REQUIRE(out[size_t(k)] == 0);
    std::vector<uint8_t> qo(size_t(d), 0);
    for (int k = 0; k < d; ++k) qo[size_t(k)] = out[size_t(L + 1 + k)];
    return {int(out[size_t(L)]), qo};
}

} // namespace

TEST_CASE("indexed CNOT (both directions) is semantically exact") {
    RandomStream rng(900, 0);
    for (int d : {4, 8, 16}) {
        auto net_o = build_indexed_cnot(d, CnotDirection::out);
        auto net_i = build_indexed_cnot(d, CnotDirection::in);
        const bool exhaustive = (d == 4);
        const int trials = exhaustive ? d * 2 * (1 << d) : 400;
        for (int t = 0; t < trials; ++t) {
            int i, b;
            std::vector<uint8_t> q(size_t(d), 0);
            if (exhaustive) {
                int idx = t;
                i = idx % d;
                idx /= d;
                b = idx % 2;
                idx /= 2;
                for (int k = 0; k < d; ++k) q[size_t(k)] = uint8_t((idx >> k) & 1);
            } else {
                i = int(rng.uniform_int(uint64_t(d)));
                b = int(rng.uniform_int(2));
                for (int k = 0; k < d; ++k) q[size_t(k)] = uint8_t(rng.uniform_int(2));
            }
            // out: b ^= q_i, data unchanged
            auto [bo, qo] = run_icnot(net_o, d, i, b, q);
            CHECK(bo == (b ^ q[size_t(i)]));
            CHECK(qo == q);
            // in: q_i ^= b, b unchanged
            auto [bi, qi] = run_icnot(net_i, d, i, b, q);
            CHECK(bi == b);
            auto qexp = q;
            qexp[size_t(i)] ^= uint8_t(b);
            CHECK(qi == qexp);
        }
    }
}

TEST_CASE("indexed CNOT gate counts, depth, and ancillas") {
    for (int d : {4, 8, 16}) {
        int L = ilog2i(d);
        auto net_o = build_indexed_cnot(d, CnotDirection::out);
        CHECK(net_o.count_cnot() == 2 * d - 2 - 2 * L);
        CHECK(net_o.count_toffoli() == 4 * d - 6);
        CHECK(net_o.count_x() == 4 * d - 6);
        CHECK(net_o.n_ancilla == 2 * d - 3);
        CHECK(net_o.depth <= 10 * L);
        auto net_i = build_indexed_cnot(d, CnotDirection::in);
        CHECK(net_i.count_cnot() == 2 * d - 2 - 2 * L);
        CHECK(net_i.count_toffoli() == 3 * d - 4);
        CHECK(net_i.count_x() == 3 * d - 4);
        CHECK(net_i.n_ancilla == 2 * d - 3);
        CHECK(net_i.depth <= 10 * L);
    }
}

TEST_CASE("single indexed SWAP is exact (exhaustive at d = 4)") {
    const int d = 4;
    const int L = 2;
    auto net = build_indexed_swap(d, SwapKind::single);
    CHECK(net.count_cnot() == 2 * d - 2 - 2 * L);
    CHECK(net.n_ancilla == 2 * d - 3);
    for (int i = 0; i < d; ++i) {
        for (int b = 0; b < 2; ++b) {
            for (int mask = 0; mask < (1 << d); ++mask) {
                std::vector<uint8_t> in(size_t(net.n_main), 0);
                for (int k = 0; k < L; ++k) in[size_t(k)] = uint8_t((i >> k) & 1);
                in[size_t(L)] = uint8_t(b);
                for (int k = 0; k < d; ++k)
                    in[size_t(L + 1 + k)] = uint8_t((mask >> k) & 1);
                auto out = simulate_netlist(net, in);
                for (int k = net.n_main; k < net.n_qubits(); ++k)
                    REQUIRE(out[size_t(k)] == 0);
                // b and q_i swapped, everything else untouched
                CHECK(int(out[size_t(L)]) == ((mask >> i) & 1));
                for (int k = 0; k < d; ++k) {
                    int expect = (k == i) ? b : ((mask >> k) & 1);
                    CHECK(int(out[size_t(L + 1 + k)]) == expect);
                }
            }
        }
    }
}

TEST_CASE("double indexed SWAP swaps q_i and q_j, identity when i == j") {
    RandomStream rng(901, 0);
    const int d = 8;
    const int L = 3;
    auto net = build_indexed_swap(d, SwapKind::double_);
    CHECK(net.count_cnot() == 4 * d - 4 - 4 * L);
    CHECK(net.n_ancilla == 4 * d - 5);
    for (int t = 0; t < 500; ++t) {
        int i = int(rng.uniform_int(d)), j = int(rng.uniform_int(d));
        std::vector<uint8_t> in(size_t(net.n_main), 0);
        for (int k = 0; k < L; ++k) in[size_t(k)] = uint8_t((i >> k) & 1);
        for (int k = 0; k < L; ++k) in[size_t(L + k)] = uint8_t((j >> k) & 1);
        std::vector<uint8_t> q(size_t(d), 0);
        for (int k = 0; k < d; ++k) {
            q[size_t(k)] = uint8_t(rng.uniform_int(2));
            in[size_t(2 * L + k)] = q[size_t(k)];
        }
        auto out = simulate_netlist(net, in);
        for (int k = net.n_main; k < net.n_qubits(); ++k)
            REQUIRE(out[size_t(k)] == 0);
        auto qe = q;
        std::swap(qe[size_t(i)], qe[size_t(j)]);
        for (int k = 0; k < d; ++k)
            CHECK(out[size_t(2 * L + k)] == qe[size_t(k)]);
        // involution: running the same netlist again restores the input
        auto back = simulate_netlist(net, out);
        for (int k = 0; k < net.n_main; ++k)
            CHECK(back[size_t(k)] == in[size_t(k)]);
    }
}

TEST_CASE("fanout uses k-1 CNOTs in a logarithmic-depth doubling tree") {
    for (int k : {2, 5, 8, 13}) {
        CircuitNetlist net;
        net.name = "fanout";
        net.n_main = k;
        std::vector<int> targets;
        for (int t = 1; t < k; ++t) targets.push_back(t);
        append_fanout(net, 0, targets);
        net.schedule();
        CHECK(net.count_cnot() == k - 1);
        CHECK(net.depth == int(std::ceil(std::log2(double(k)))));
        // semantics: src copied onto all targets
        std::vector<uint8_t> in(size_t(k), 0);
        in[0] = 1;
        auto out = simulate_netlist(net, in);
        for (int t = 0; t < k; ++t) CHECK(out[size_t(t)] == 1);
    }
}

TEST_CASE("schedule computes a valid ASAP layering") {
    CircuitNetlist net;
    net.n_main = 3;
    net.gates.push_back(Gate{GateKind::X, 0, -1, -1});
    net.gates.push_back(Gate{GateKind::X, 1, -1, -1});       // parallel with gate 0
    net.gates.push_back(Gate{GateKind::CNOT, 0, 1, -1});     // after both
    net.gates.push_back(Gate{GateKind::Toffoli, 0, 1, 2});   // after the CNOT
    net.schedule();
    CHECK(net.layer_of[0] == 0);
    CHECK(net.layer_of[1] == 0);
    CHECK(net.layer_of[2] == 1);
    CHECK(net.layer_of[3] == 2);
    CHECK(net.depth == 3);
}

TEST_CASE("basic netlist plumbing") {
    CircuitNetlist net;
    net.name = "cnot01";
    net.n_main = 2;
    net.gates.push_back(Gate{GateKind::CNOT, 0, 1, -1});
    net.schedule();
    // truth table
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            auto out = simulate_netlist(net, {uint8_t(a), uint8_t(b)});
            CHECK(int(out[0]) == a);
            CHECK(int(out[1]) == (a ^ b));
        }
    std::string txt = net.export_text();
    CHECK(txt.find("cnot01") != std::string::npos);
    CHECK(txt.find("CNOT") != std::string::npos);
    // empty netlist is the identity
    CircuitNetlist id;
    id.n_main = 3;
    id.schedule();
    CHECK(id.depth == 0);
    auto out = simulate_netlist(id, {1, 0, 1});
    CHECK(out == std::vector<uint8_t>{1, 0, 1});
}
