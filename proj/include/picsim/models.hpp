#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "picsim/smatrix.hpp"

namespace picsim {

// Parameterized generator of scattering data. Implementations are immutable
// and evaluate() is a pure function of the grid.
class CompactModel {
public:
    virtual ~CompactModel() = default;

    virtual std::string kind() const = 0;
    virtual const std::vector<std::string>& ports() const = 0;
    virtual SMatrix evaluate(const FrequencyGrid& grid) const = 0;

    // key=value pairs for netlist emission, values pre-formatted as text.
    virtual std::vector<std::pair<std::string, std::string>> params() const { return {}; }

    Index n_ports() const { return static_cast<Index>(ports().size()); }
};

using ModelPtr = std::shared_ptr<const CompactModel>;

// Straight single-mode waveguide material description. The effective index is
// a quadratic expansion around lambda0:
//   n_eff(l) = n0 + dn_dlambda*(l - lambda0) + 0.5*d2n_dlambda2*(l - lambda0)^2
struct WaveguideParams {
    double length = 0.0;           // m
    double n0 = 2.45;              // n_eff at lambda0
    double dn_dlambda = -1.13e6;   // 1/m
    double d2n_dlambda2 = 0.0;     // 1/m^2
    double loss_db_per_m = 300.0;  // dB/m, field loss applied as 10^(-loss*L/20)
    double lambda0 = 1.55e-6;      // m
};

double effective_index(const WaveguideParams& p, double lambda_m);
double group_index(const WaveguideParams& p, double lambda_m);

// Two-port waveguide, ports (n1, n2):
//   S12 = S21 = exp(i*2*pi*n_eff*L/lambda) * 10^(-loss*L/20), no reflection.
ModelPtr waveguide(const WaveguideParams& p);
ModelPtr waveguide(double length_m);

// Ideal 50/50 splitter/combiner, ports (n1 stem, n2/n3 arms): stem<->arm
// entries are 1/sqrt(2), arm<->arm and all reflections are zero. As a
// combiner this is deliberately non-unitary (the orthogonal arm mode exits
// nowhere).
ModelPtr y_branch();

// Four-port coupler, ports (n1, n2 left; n3, n4 right); n1<->n3 and n2<->n4
// are the through paths. coupling is the power fraction crossing over:
// through = sqrt(1-coupling), cross = i*sqrt(coupling), frequency-flat.
ModelPtr directional_coupler(double coupling = 0.5);

// Fiber-to-chip coupler, ports (n1 fiber, n2 chip). Insertion loss in dB is
// a parabola in wavelength: IL(l) = peak_loss + ((l - lambda_c)/(bw_1db/2))^2,
// S12 = S21 = 10^(-IL/20), no reflection.
ModelPtr grating_coupler(double lambda_c = 1.55e-6, double peak_loss_db = 3.0,
                         double bw_1db_m = 35e-9);

// Half of a ring resonator: a straight bus (ports n1, n2) passing a point
// coupler, plus the half-circumference arc (ports n3, n4). The point coupler
// sits at the n3 end of the arc, so with phi = exp(i*2*pi*n_eff*pi*R/lambda)
// times the half-arc loss:
//   S(n1,n2) = t,   S(n3,n4) = t*phi,   S(n1,n4) = i*k*phi,   S(n2,n3) = i*k,
// everything else zero. Two of these joined at n3/n4 form an add-drop ring
// with round trip t^2 * exp(i*beta*2*pi*R) * loss.
ModelPtr half_ring(double radius_m = 10e-6, double coupling = 0.1,
                   const WaveguideParams& wg = {});

// Waveguide crossing, ports (n1, n2 left; n3, n4 right): the crossing paths
// n1<->n4 and n2<->n3 carry sqrt(1-crosstalk); the parasitic straight-through
// paths n1<->n3 and n2<->n4 carry i*sqrt(crosstalk).
ModelPtr crossover(double crosstalk = 0.0);

// Perfectly matched absorber, single port (n1), S11 = 0.
ModelPtr terminator();

// Tabulated model backed by a .sparam file; evaluation interpolates onto the
// requested grid and refuses to extrapolate. Port names from the file have
// '.' replaced by '_' so they remain usable as pin names.
ModelPtr load_sparam_file(const std::string& path);

// .sparam text format:
//   sparam v1 ports=<N> names=<p1,...,pN>
//   # comment lines allowed anywhere after the header
//   <freq_Hz> <Re S11> <Im S11> <Re S12> ... row-major, 1 + 2*N^2 fields
// Rows must be strictly increasing in frequency. Values are written with 17
// significant digits so a write/read cycle reproduces doubles bit-exactly.
void write_sparam(std::ostream& out, const SMatrix& s);
void write_sparam_file(const std::string& path, const SMatrix& s);
SMatrix read_sparam(std::istream& in);
SMatrix read_sparam_file(const std::string& path);

}  // namespace picsim
