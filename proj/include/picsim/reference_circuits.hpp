#pragma once

#include <array>

#include "picsim/circuit.hpp"
#include "picsim/models.hpp"

namespace picsim {

// Prebuilt demonstration circuits. These are ordinary Subcircuit builders;
// everything they do can be reproduced with the public circuit API or a
// netlist file.

// Mach-Zehnder interferometer: two grating couplers, a splitter/recombiner
// y-branch pair, and a long/short waveguide arm pair. External ports are the
// fiber-side pins "input.n2" and "output.n2". The instance and connection
// order matches the canonical netlist file rendering of this circuit exactly,
// so simulating either form gives bit-identical results.
Subcircuit make_mzi(double long_length = 150e-6, double short_length = 50e-6,
                    const WaveguideParams& arm = WaveguideParams{});

// Chain of `count` MZIs in series, each joined to the next by a waveguide of
// `joiner_length`. Grating couplers sit only at the two ends, so the chain
// remains a 2-port ("input.n2", "output.n2"). count = 1 reproduces make_mzi
// bit for bit. Used by the scaling benchmark.
Subcircuit make_mzi_chain(int count, double long_length = 150e-6,
                          double short_length = 50e-6, double joiner_length = 10e-6,
                          const WaveguideParams& arm = WaveguideParams{});

struct GreenMachineParams {
    double coupling = 0.5;             // directional coupler power coupling
    double crosstalk = 0.0;            // crossover bar-path power leakage
    double interconnect_length = 100e-6;
    double middle_extra_length = 0.0;  // added to the two crossover feed lines
    WaveguideParams wg{};              // dispersion/loss of all interconnects
    double gc_lambda_c = 1.55e-6;
    double gc_peak_loss_db = 3.0;
    double gc_bw_1db = 35e-9;
};

// Butterfly circuit of four 50:50 directional couplers and one waveguide
// crossover between eight grating couplers. Inputs are aliased "in0".."in3"
// and outputs "out4".."out7". With ideal components and equal-length
// interconnects the relative output phases form the four codewords
//   in0 -> (0, pi/2, pi/2, pi)    in1 -> (pi/2, pi, 0, pi/2)
//   in2 -> (pi/2, 0, pi, pi/2)   in3 -> (pi, pi/2, pi/2, 0)
// each measured against that row's zero-phase output. A nonzero
// middle_extra_length unbalances the two crossover feed lines so that any
// crossover crosstalk shows up as wavelength ripple on the outputs.
Subcircuit make_green_machine(const GreenMachineParams& params = GreenMachineParams{});

// Add-drop ring resonator assembled from two half-ring models whose arc ends
// are joined to close the loop. External pins are aliased "in", "pass"
// (same bus as "in"), "drop", and "add" (second bus). radius and coupling
// apply to both halves; `arm` sets the ring waveguide dispersion/loss
// (its length field is ignored).
Subcircuit make_ring(double radius = 10e-6, double coupling = 0.1,
                     const WaveguideParams& arm = WaveguideParams{});

// Three add-drop rings of the given radii sharing one bus in series:
// in -> ring1 -> spacer -> ring2 -> spacer -> ring3 -> pass. Each ring keeps
// its own drop port ("drop1".."drop3"); add ports are left unconnected
// (matched). Rings are nested subcircuits, so this circuit also exercises
// hierarchy flattening.
Subcircuit make_ring_filter(const std::array<double, 3>& radii = {10e-6, 11e-6, 12e-6},
                            double coupling = 0.1, double spacer_length = 10e-6,
                            const WaveguideParams& arm = WaveguideParams{});

}  // namespace picsim
