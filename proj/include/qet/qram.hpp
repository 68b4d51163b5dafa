#pragma once
// Reversible-circuit netlists for indexed-CNOT and indexed-SWAP gates, with
// exact gate/depth/ancilla accounting and classical basis-state simulation.

#include "qet/common.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qet {

enum class GateKind { X, CNOT, Toffoli };

struct Gate {
    GateKind kind;
    // X: a = target.  CNOT: a = control, b = target.
    // Toffoli: a, b = controls, c = target.
    int a = -1, b = -1, c = -1;
};

enum class CnotDirection { out, in };   // iCNOTo: b ^= q_i;  iCNOTi: q_i ^= b
enum class SwapKind { single, double_ };

struct CircuitNetlist {
    std::string name;
    int n_main = 0;     // non-ancilla qubits (index register(s), b, data)
    int n_ancilla = 0;  // ancillas, all |0> in and |0> out
    std::vector<Gate> gates;
    std::vector<int> layer_of;  // ASAP layer index per gate (0-based)
    int depth = 0;              // number of layers

    int n_qubits() const { return n_main + n_ancilla; }
    int count_cnot() const;
    int count_toffoli() const;
    int count_x() const;
    int count_toffoli_x() const { return count_toffoli() + count_x(); }

    // Recomputes layer_of/depth with an as-soon-as-possible schedule.
    void schedule();
    // Line-oriented export: header with counts, then one gate per line.
    std::string export_text() const;
};

// Indexed CNOT on d data qubits (d a power of two in {4,...,32}).
// Qubit layout: [0, log d) index register (LSB first), [log d] the b qubit,
// [log d + 1, log d + 1 + d) data q_0..q_{d-1}, then 2d-3 ancillas.
CircuitNetlist build_indexed_cnot(int d, CnotDirection dir);

// single: swaps b with q_i (layout as above, 2d-3 ancillas).
// double_: swaps q_i with q_j; layout [0,logd) i, [logd,2logd) j,
// [2logd, 2logd+d) data, then 4d-5 ancillas (incl. one work bit).
CircuitNetlist build_indexed_swap(int d, SwapKind kind);

// Classical reversible evaluation on a basis state; input holds one bit per
// qubit (main qubits first, then ancillas; ancillas may be omitted -> 0).
std::vector<uint8_t> simulate_netlist(const CircuitNetlist& net,
                                      const std::vector<uint8_t>& input);

// FANOUT of src onto the given fresh targets: targets.size() CNOTs arranged
// as a doubling tree of depth ceil(log2(targets+1)). Appends to net.gates.
void append_fanout(CircuitNetlist& net, int src, const std::vector<int>& targets);

} // namespace qet
