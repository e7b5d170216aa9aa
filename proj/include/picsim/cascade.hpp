#pragma once

#include <map>
#include <utility>

#include "picsim/circuit.hpp"
#include "picsim/smatrix.hpp"

namespace picsim {

// |D| at or below this is treated as a singular connection.
inline constexpr double singular_denominator_eps = 1e-12;

// Join ports k and l of one network (sub-network growth). With
//   D = 1 - S_kl - S_lk + S_kl*S_lk - S_kk*S_ll
// every surviving entry becomes
//   S'_ij = S_ij + [ S_il*S_kj*(1 - S_lk) + S_il*S_kk*S_lj
//                  + S_ik*S_lj*(1 - S_kl) + S_ik*S_ll*S_kj ] / D,
// then rows/columns k and l are removed; survivors keep their relative
// order. Throws SingularConnection when |D| <= singular_denominator_eps.
SMatrix innerconnect(const SMatrix& s, Index k, Index l);

// Disjoint union: block-diagonal stacking, ports of `a` first. Grids must be
// identical.
SMatrix compose(const SMatrix& a, const SMatrix& b);

// compose(a, b), then join a's port_a with b's port_b.
SMatrix connect(const SMatrix& a, Index port_a, const SMatrix& b, Index port_b);

// Incident amplitudes at the two joined ports for one frequency point,
// given the incident amplitudes at the surviving ports (in their relative
// order). Returns (A_k_plus, A_l_plus): what enters k is what the network
// emits from l and vice versa, solved through the same denominator D.
std::pair<Complex, Complex> internal_amplitudes(const SMatrix& s, Index k, Index l,
                                                const Eigen::VectorXcd& incident,
                                                Index f_index);

struct ReducedNetwork {
    SMatrix s;
    // external pin label (alias if set, else "instance.pin") -> port index
    std::map<std::string, Index> pin_map;
};

// Evaluate every instance's model on `grid` and fold the connection list in
// order: endpoints in the same partial network are innerconnected, endpoints
// in different partials are composed first. Remaining disjoint partials are
// composed at the end, and ports are returned in canonical external-pin
// order (instance insertion order, then pin ordinal). `workers` > 1 splits
// the grid into contiguous chunks solved concurrently; results are bitwise
// independent of the worker count. 0 picks a hardware-based default.
ReducedNetwork reduce_circuit(const Subcircuit& circuit, const FrequencyGrid& grid,
                              int workers = 1);

}  // namespace picsim
