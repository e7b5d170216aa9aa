#pragma once

#include <complex>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "picsim/errors.hpp"

namespace picsim {

using Complex = std::complex<double>;
using Index = Eigen::Index;

// Vacuum speed of light, m/s (exact by definition).
inline constexpr double speed_of_light = 299792458.0;

inline double wavelength_to_frequency(double lambda_m) { return speed_of_light / lambda_m; }
inline double frequency_to_wavelength(double f_hz) { return speed_of_light / f_hz; }

// Strictly increasing, strictly positive frequency points in Hz.
class FrequencyGrid {
public:
    explicit FrequencyGrid(Eigen::VectorXd points);
    FrequencyGrid(std::initializer_list<double> points);

    // n evenly spaced points from f_start to f_stop inclusive (n >= 1;
    // n == 1 requires f_start == f_stop).
    static FrequencyGrid uniform(double f_start, double f_stop, Index n);

    Index size() const { return points_.size(); }
    double operator[](Index i) const { return points_[i]; }
    const Eigen::VectorXd& points() const { return points_; }
    double front() const { return points_[0]; }
    double back() const { return points_[points_.size() - 1]; }
    double wavelength(Index i) const { return speed_of_light / points_[i]; }

    // Contiguous sub-grid [start, start+count).
    FrequencyGrid segment(Index start, Index count) const;

    friend bool operator==(const FrequencyGrid& a, const FrequencyGrid& b) {
        return a.points_.size() == b.points_.size() &&
               (a.points_.array() == b.points_.array()).all();
    }
    friend bool operator!=(const FrequencyGrid& a, const FrequencyGrid& b) { return !(a == b); }

private:
    Eigen::VectorXd points_;
};

// Frequency-dependent N-port scattering data: one dense N x N complex matrix
// per grid point. slice(f)(i, j) is the field amplitude exiting port i for a
// unit field incident at port j; diagonal entries are back-reflections.
// Fill during construction, then treat as an immutable value.
class SMatrix {
public:
    SMatrix(FrequencyGrid grid, std::vector<std::string> ports);

    Index n_freqs() const { return grid_.size(); }
    Index n_ports() const { return static_cast<Index>(ports_.size()); }
    const FrequencyGrid& grid() const { return grid_; }
    const std::vector<std::string>& ports() const { return ports_; }

    Index port_index(std::string_view name) const;  // throws UnknownPin

    const Eigen::MatrixXcd& slice(Index f) const { return data_[static_cast<size_t>(f)]; }
    Eigen::MatrixXcd& slice(Index f) { return data_[static_cast<size_t>(f)]; }

    // Same data under new port labels.
    SMatrix relabeled(std::vector<std::string> ports) const;

private:
    FrequencyGrid grid_;
    std::vector<std::string> ports_;
    std::vector<Eigen::MatrixXcd> data_;
};

// Linear interpolation onto a target grid, real and imaginary parts
// independently. Every target point must lie inside [front, back] of the
// source grid (throws RangeError otherwise); points that coincide with a
// source point reproduce its slice bit-exactly.
SMatrix interpolate(const SMatrix& s, const FrequencyGrid& target);

// max |S - S^T| over all frequencies <= tol.
bool is_reciprocal(const SMatrix& s, double tol);

// Largest singular value per frequency point; requires at least one port.
Eigen::VectorXd max_singular_value(const SMatrix& s);

// Reorder ports: result port p is source port order[p].
SMatrix permute_ports(const SMatrix& s, const std::vector<Index>& order);

// Concatenate along the frequency axis; ports must agree and the combined
// grid must remain strictly increasing.
SMatrix concat_frequencies(const std::vector<SMatrix>& parts);

}  // namespace picsim
