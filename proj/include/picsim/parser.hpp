#pragma once

#include <optional>
#include <string>

#include "picsim/circuit.hpp"
#include "picsim/simulate.hpp"

namespace picsim {

// Netlist text format, one statement per line, '#' starts a comment line:
//   model <name> <kind> [key=value ...]     declare a parameterized model
//   comp <instance> <model-or-builtin-kind> place a component
//   connect <inst>.<pin> <inst>.<pin>       join two pins
//   port <inst>.<pin> as <alias>            name an external pin
//   sweep <lambda_start_m> <lambda_stop_m> <n_points>
// Builtin kinds: waveguide, y_branch, directional_coupler, grating_coupler,
// half_ring, crossover, terminator, sparam_file (which requires path=...).
// Numbers are locale-independent; a pin reference splits on the last dot.
struct ParsedNetlist {
    Subcircuit circuit;
    std::optional<SweepSpec> sweep;
};

ParsedNetlist parse_netlist(const std::string& text, const std::string& name = "netlist");

// Reads the file; relative sparam_file paths resolve against its directory.
ParsedNetlist parse_netlist_file(const std::string& path);

// Flattens and renders a netlist that parses back to an equivalent circuit.
// Model declarations are deduplicated by object identity and numeric
// parameters carry 17 significant digits, so a round trip reproduces the
// simulation bit-exactly.
std::string emit_netlist(const Subcircuit& circuit,
                         const std::optional<SweepSpec>& sweep = std::nullopt);

}  // namespace picsim
