#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "picsim/cascade.hpp"
#include "picsim/circuit.hpp"

namespace picsim {

enum class SweepMode { wavelength, frequency };

// A sweep request. In wavelength mode, start/stop are meters and the grid is
// uniform in frequency from c/stop to c/start (so results are evenly spaced
// on the canonical axis); in frequency mode start/stop are Hz directly.
struct SweepSpec {
    double start = 1500e-9;
    double stop = 1600e-9;
    Index n_points = 2000;
    SweepMode mode = SweepMode::wavelength;

    FrequencyGrid grid() const;  // validates; throws ParamError
};

// Reduced scattering data over a sweep plus name-based port lookup.
class SweepResult {
public:
    SweepResult(SMatrix s, std::map<std::string, Index> pin_map);

    const FrequencyGrid& grid() const { return s_.grid(); }
    const SMatrix& s() const { return s_; }
    const std::map<std::string, Index>& pin_map() const { return pin_map_; }

    // Wavelengths (m) per grid point, descending as frequency ascends.
    Eigen::VectorXd wavelengths() const;

    // Resolve a port: exact label (alias or "inst.pin"), else a unique
    // ".pin" suffix, else an instance name owning exactly one external pin.
    Index pin(std::string_view name) const;

    // Complex S(out <- in) per grid point.
    Eigen::VectorXcd data(std::string_view in_pin, std::string_view out_pin) const;
    // |S|^2 per grid point.
    Eigen::VectorXd power(std::string_view in_pin, std::string_view out_pin) const;
    // arg(S) in (-pi, pi]; with relative_to, the phase of S(relative_to <- in)
    // is subtracted before wrapping.
    Eigen::VectorXd phase(std::string_view in_pin, std::string_view out_pin) const;
    Eigen::VectorXd phase(std::string_view in_pin, std::string_view out_pin,
                          std::string_view relative_to) const;

private:
    SMatrix s_;
    std::map<std::string, Index> pin_map_;
};

// Flatten, build the grid from the spec, reduce, wrap. `workers` as in
// reduce_circuit; the default lets the hardware decide (results do not
// depend on it).
SweepResult run_sweep(const Subcircuit& circuit, const SweepSpec& spec, int workers = 0);

// wrap to (-pi, pi]
double wrap_phase(double radians);

// Reference solver that never composes: per frequency it assembles the full
// linear system over every per-instance incident amplitude (outgoing =
// S * incident per instance, equality across each connection, externals
// driven) and solves it dense. Intended as an independent cross-check for
// reduce_circuit; refuses circuits with more than 2000 total ports.
struct DirectSolveResult {
    std::vector<std::string> external_pins;  // canonical order, same as reduce
    std::vector<Eigen::VectorXcd> outgoing;  // one vector per frequency point
};
DirectSolveResult direct_solve(const Subcircuit& circuit, const FrequencyGrid& grid,
                               std::string_view in_pin);

}  // namespace picsim
