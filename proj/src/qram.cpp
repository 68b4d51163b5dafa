#include "qet/qram.hpp"

#include <algorithm>
#include <sstream>

namespace qet {

namespace {

bool is_pow2(int d) { return d > 0 && (d & (d - 1)) == 0; }

int ilog2(int d) {
    int l = 0;
    while ((1 << l) < d) ++l;
    return l;
}

void push_x(CircuitNetlist& net, int t) {
    net.gates.push_back({GateKind::X, t, -1, -1});
}
void push_cnot(CircuitNetlist& net, int c, int t) {
    net.gates.push_back({GateKind::CNOT, c, t, -1});
}
void push_toffoli(CircuitNetlist& net, int c1, int c2, int t) {
    net.gates.push_back({GateKind::Toffoli, c1, c2, t});
}

// One tournament decision: writes MUX(w; a0, a1) into tgt (tgt fresh, or b
// as an accumulator).  Selects a0 when the control wire w is 0.
void push_decision(CircuitNetlist& net, int w, int a0, int a1, int tgt) {
    push_x(net, w);
    push_toffoli(net, w, a0, tgt);
    push_x(net, w);
    push_toffoli(net, w, a1, tgt);
}

// Parity wires per index bit: the index bit itself plus fresh copies, enough
// for the widest level that consumes that bit (d / 2^{bit+1} consumers).
struct ParityPlan {
    std::vector<std::vector<int>> wires;  // wires[bit] -> control wires
};

ParityPlan make_parity_plan(CircuitNetlist& net, int d, int idx_base,
                            int& next_anc) {
    int L = ilog2(d);
    ParityPlan plan;
    plan.wires.resize(static_cast<size_t>(L));
    for (int bit = 0; bit < L; ++bit) {
        int consumers = d >> (bit + 1);
        std::vector<int>& w = plan.wires[size_t(bit)];
        w.push_back(idx_base + bit);
        std::vector<int> fresh;
        for (int k = 1; k < consumers; ++k) fresh.push_back(next_anc++);
        append_fanout(net, idx_base + bit, fresh);
        w.insert(w.end(), fresh.begin(), fresh.end());
    }
    return plan;
}

// Emits the iCNOTo / iCNOTi tournament core (decisions plus uncomputation of
// every intermediate), assuming parity copies already exist.  For `out`, the
// b qubit accumulates q_i; for `in`, b is distributed down and the selected
// data qubit is flipped.
void emit_icnot_core(CircuitNetlist& net, int d, CnotDirection dir, int b,
                     int data_base, const ParityPlan& parity, int inter_base) {
    int L = ilog2(d);
    size_t start = net.gates.size();
    size_t keep_begin = 0, keep_end = 0;  // gates not to uncompute
    int next_t = inter_base;

    if (dir == CnotDirection::out) {
        std::vector<int> cur(static_cast<size_t>(d));
        for (int j = 0; j < d; ++j) cur[size_t(j)] = data_base + j;
        for (int lvl = 0; lvl < L; ++lvl) {
            int pairs = int(cur.size()) / 2;
            std::vector<int> next;
            if (lvl == L - 1) keep_begin = net.gates.size();
            for (int k = 0; k < pairs; ++k) {
                int tgt = (lvl == L - 1) ? b : next_t++;
                push_decision(net, parity.wires[size_t(lvl)][size_t(k)],
                              cur[size_t(2 * k)], cur[size_t(2 * k + 1)], tgt);
                next.push_back(tgt);
            }
            cur = std::move(next);
        }
        keep_end = net.gates.size();
    } else {
        // sel[p] = b AND [high bits of i match prefix p]
        std::vector<int> sel{b};
        for (int t = 0; t < L; ++t) {
            int bit = L - 1 - t;
            int splits = 1 << t;
            if (t == L - 1) keep_begin = net.gates.size();
            std::vector<int> next;
            for (int p = 0; p < splits; ++p) {
                int t0, t1;
                if (t == L - 1) {
                    t0 = data_base + 2 * p;
                    t1 = data_base + 2 * p + 1;
                } else {
                    t0 = next_t++;
                    t1 = next_t++;
                }
                int w = parity.wires[size_t(bit)][size_t(p)];
                push_x(net, w);
                push_toffoli(net, w, sel[size_t(p)], t0);
                push_x(net, w);
                push_toffoli(net, w, sel[size_t(p)], t1);
                next.push_back(t0);
                next.push_back(t1);
            }
            if (t < L - 1) sel = std::move(next);
        }
        keep_end = net.gates.size();
    }

    // Bennett uncompute: reverse every compute gate except the kept block
    // (which wrote the non-ancilla target).  All gates are self-inverse.
    std::vector<Gate> undo;
    for (size_t g = start; g < net.gates.size(); ++g)
        if (g < keep_begin || g >= keep_end) undo.push_back(net.gates[g]);
    for (auto it = undo.rbegin(); it != undo.rend(); ++it)
        net.gates.push_back(*it);
}

void undo_fanout(CircuitNetlist& net, size_t fanout_begin, size_t fanout_end) {
    for (size_t g = fanout_end; g-- > fanout_begin;)
        net.gates.push_back(net.gates[g]);
}

} // namespace

int CircuitNetlist::count_cnot() const {
    return int(std::count_if(gates.begin(), gates.end(), [](const Gate& g) {
        return g.kind == GateKind::CNOT;
    }));
}
int CircuitNetlist::count_toffoli() const {
    return int(std::count_if(gates.begin(), gates.end(), [](const Gate& g) {
        return g.kind == GateKind::Toffoli;
    }));
}
int CircuitNetlist::count_x() const {
    return int(std::count_if(gates.begin(), gates.end(), [](const Gate& g) {
        return g.kind == GateKind::X;
    }));
}

void CircuitNetlist::schedule() {
    layer_of.assign(gates.size(), 0);
    std::vector<int> busy(static_cast<size_t>(n_qubits()), -1);
    depth = 0;
    for (size_t g = 0; g < gates.size(); ++g) {
        const Gate& gt = gates[g];
        int lay = 0;
        auto touch = [&](int q) {
            if (q >= 0) lay = std::max(lay, busy[size_t(q)] + 1);
        };
        touch(gt.a);
        touch(gt.b);
        touch(gt.c);
        layer_of[g] = lay;
        if (gt.a >= 0) busy[size_t(gt.a)] = lay;
        if (gt.b >= 0) busy[size_t(gt.b)] = lay;
        if (gt.c >= 0) busy[size_t(gt.c)] = lay;
        depth = std::max(depth, lay + 1);
    }
}

std::string CircuitNetlist::export_text() const {
    std::ostringstream os;
    os << "# netlist " << name << " main=" << n_main
       << " ancilla=" << n_ancilla << " cnot=" << count_cnot()
       << " toffoli=" << count_toffoli() << " x=" << count_x()
       << " depth=" << depth << "\n";
    for (const Gate& g : gates) {
        switch (g.kind) {
        case GateKind::X: os << "X " << g.a << "\n"; break;
        case GateKind::CNOT: os << "CNOT " << g.a << " " << g.b << "\n"; break;
        case GateKind::Toffoli:
            os << "TOFFOLI " << g.a << " " << g.b << " " << g.c << "\n";
            break;
        }
    }
    return os.str();
}

void append_fanout(CircuitNetlist& net, int src,
                   const std::vector<int>& targets) {
    std::vector<int> have{src};
    size_t next = 0;
    while (next < targets.size()) {
        size_t avail = have.size();
        for (size_t w = 0; w < avail && next < targets.size(); ++w) {
            push_cnot(net, have[w], targets[next]);
            have.push_back(targets[next]);
            ++next;
        }
    }
}

CircuitNetlist build_indexed_cnot(int d, CnotDirection dir) {
    require(is_pow2(d) && d >= 4 && d <= 32,
            "build_indexed_cnot: d must be a power of two in [4,32]");
    int L = ilog2(d);
    CircuitNetlist net;
    net.name = (dir == CnotDirection::out) ? "iCNOTo" : "iCNOTi";
    net.n_main = L + 1 + d;
    net.n_ancilla = 2 * d - 3;
    int b = L;
    int data_base = L + 1;
    int next_anc = net.n_main;

    size_t fanout_begin = net.gates.size();
    ParityPlan parity = make_parity_plan(net, d, /*idx_base=*/0, next_anc);
    size_t fanout_end = net.gates.size();
    emit_icnot_core(net, d, dir, b, data_base, parity, next_anc);
    undo_fanout(net, fanout_begin, fanout_end);
    net.schedule();
    return net;
}

CircuitNetlist build_indexed_swap(int d, SwapKind kind) {
    require(is_pow2(d) && d >= 4 && d <= 16,
            "build_indexed_swap: d must be a power of two in [4,16]");
    int L = ilog2(d);
    CircuitNetlist net;
    if (kind == SwapKind::single) {
        // SWAP(b, q_i) = iCNOTo ; iCNOTi ; iCNOTo, sharing one parity fanout.
        net.name = "iSWAP";
        net.n_main = L + 1 + d;
        net.n_ancilla = 2 * d - 3;
        int b = L;
        int data_base = L + 1;
        int next_anc = net.n_main;
        size_t fb = net.gates.size();
        ParityPlan parity = make_parity_plan(net, d, 0, next_anc);
        size_t fe = net.gates.size();
        int inter_base = next_anc;
        emit_icnot_core(net, d, CnotDirection::out, b, data_base, parity,
                        inter_base);
        emit_icnot_core(net, d, CnotDirection::in, b, data_base, parity,
                        inter_base);
        emit_icnot_core(net, d, CnotDirection::out, b, data_base, parity,
                        inter_base);
        undo_fanout(net, fb, fe);
    } else {
        // SWAP(q_i, q_j) via a shared work bit b: load b = q_i XOR q_j with
        // two iCNOTo, XOR b into both positions with two iCNOTi, then clear
        // b with two more iCNOTo.  Unlike the three-CNOT swap, this is also
        // the identity when i == j (b stays 0 throughout).
        net.name = "iiSWAP";
        net.n_main = 2 * L + d;
        net.n_ancilla = 4 * d - 5;
        int data_base = 2 * L;
        int next_anc = net.n_main;
        int b = next_anc++;  // work bit
        size_t fb = net.gates.size();
        ParityPlan par_i = make_parity_plan(net, d, /*idx_base=*/0, next_anc);
        ParityPlan par_j = make_parity_plan(net, d, /*idx_base=*/L, next_anc);
        size_t fe = net.gates.size();
        int inter_base = next_anc;
        auto core = [&](CnotDirection dir, const ParityPlan& p) {
            emit_icnot_core(net, d, dir, b, data_base, p, inter_base);
        };
        core(CnotDirection::out, par_i);
        core(CnotDirection::out, par_j);
        core(CnotDirection::in, par_i);
        core(CnotDirection::in, par_j);
        core(CnotDirection::out, par_i);
        core(CnotDirection::out, par_j);
        undo_fanout(net, fb, fe);
    }
    net.schedule();
    return net;
}

std::vector<uint8_t> simulate_netlist(const CircuitNetlist& net,
                                      const std::vector<uint8_t>& input) {
    require(int(input.size()) == net.n_main ||
                int(input.size()) == net.n_qubits(),
            "simulate_netlist: input length mismatch");
    std::vector<uint8_t> s(static_cast<size_t>(net.n_qubits()), 0);
    std::copy(input.begin(), input.end(), s.begin());
    for (const Gate& g : net.gates) {
        require(g.a >= 0 && g.a < net.n_qubits(),
                "simulate_netlist: qubit index out of range");
        switch (g.kind) {
        case GateKind::X: s[size_t(g.a)] ^= 1; break;
        case GateKind::CNOT:
            require(g.b >= 0 && g.b < net.n_qubits(),
                    "simulate_netlist: qubit index out of range");
            s[size_t(g.b)] ^= s[size_t(g.a)];
            break;
        case GateKind::Toffoli:
            require(g.b >= 0 && g.b < net.n_qubits() && g.c >= 0 &&
                        g.c < net.n_qubits(),
                    "simulate_netlist: qubit index out of range");
            s[size_t(g.c)] ^= uint8_t(s[size_t(g.a)] & s[size_t(g.b)]);
            break;
        }
    }
    return s;
}

} // namespace qet
