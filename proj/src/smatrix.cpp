#include "picsim/smatrix.hpp"

#include <algorithm>
#include <set>

namespace picsim {

namespace {

void validate_grid(const Eigen::VectorXd& p) {
    if (p.size() < 1) throw ParamError("frequency grid needs at least one point");
    for (Index i = 0; i < p.size(); ++i) {
        if (!(p[i] > 0.0)) throw ParamError("frequency grid points must be positive");
        if (i > 0 && !(p[i] > p[i - 1]))
            throw ParamError("frequency grid points must be strictly increasing");
    }
}

}  // namespace

FrequencyGrid::FrequencyGrid(Eigen::VectorXd points) : points_(std::move(points)) {
    validate_grid(points_);
}

FrequencyGrid::FrequencyGrid(std::initializer_list<double> points)
    : points_(Eigen::Map<const Eigen::VectorXd>(points.begin(),
                                                static_cast<Index>(points.size()))) {
    validate_grid(points_);
}

FrequencyGrid FrequencyGrid::uniform(double f_start, double f_stop, Index n) {
    if (n < 1) throw ParamError("grid needs at least one point");
    if (n == 1) {
        if (f_start != f_stop) throw ParamError("single-point grid needs f_start == f_stop");
        Eigen::VectorXd p(1);
        p[0] = f_start;
        return FrequencyGrid(std::move(p));
    }
    if (!(f_start < f_stop)) throw ParamError("grid needs f_start < f_stop");
    Eigen::VectorXd p(n);
    const double step = (f_stop - f_start) / static_cast<double>(n - 1);
    for (Index i = 0; i < n; ++i) p[i] = f_start + step * static_cast<double>(i);
    p[n - 1] = f_stop;  // land exactly on the endpoint
    return FrequencyGrid(std::move(p));
}

FrequencyGrid FrequencyGrid::segment(Index start, Index count) const {
    if (start < 0 || count < 1 || start + count > points_.size())
        throw IndexError("grid segment out of bounds");
    return FrequencyGrid(points_.segment(start, count).eval());
}

SMatrix::SMatrix(FrequencyGrid grid, std::vector<std::string> ports)
    : grid_(std::move(grid)), ports_(std::move(ports)) {
    std::set<std::string> seen;
    for (const auto& p : ports_) {
        if (p.empty()) throw ParamError("port labels must be non-empty");
        if (!seen.insert(p).second) throw DuplicateName("duplicate port label: " + p);
    }
    const Index n = n_ports();
    data_.assign(static_cast<size_t>(grid_.size()), Eigen::MatrixXcd::Zero(n, n));
}

Index SMatrix::port_index(std::string_view name) const {
    for (size_t i = 0; i < ports_.size(); ++i)
        if (ports_[i] == name) return static_cast<Index>(i);
    throw UnknownPin("no port named '" + std::string(name) + "'");
}

SMatrix SMatrix::relabeled(std::vector<std::string> ports) const {
    if (static_cast<Index>(ports.size()) != n_ports())
        throw ArityMismatch("relabel needs exactly one label per port");
    SMatrix out(grid_, std::move(ports));
    out.data_ = data_;
    return out;
}

SMatrix interpolate(const SMatrix& s, const FrequencyGrid& target) {
    const auto& src = s.grid().points();
    SMatrix out(target, s.ports());
    for (Index t = 0; t < target.size(); ++t) {
        const double f = target[t];
        if (f < src[0] || f > src[src.size() - 1])
            throw RangeError("interpolation target outside the stored span");
        // bracketing index: first source point >= f
        const double* begin = src.data();
        const double* end = begin + src.size();
        const double* it = std::lower_bound(begin, end, f);
        const Index hi = static_cast<Index>(it - begin);
        if (hi < src.size() && src[hi] == f) {
            out.slice(t) = s.slice(hi);  // coincident point: copy, bit-exact
            continue;
        }
        const Index lo = hi - 1;
        const double w = (f - src[lo]) / (src[hi] - src[lo]);
        out.slice(t) = (1.0 - w) * s.slice(lo) + w * s.slice(hi);
    }
    return out;
}

bool is_reciprocal(const SMatrix& s, double tol) {
    if (s.n_ports() < 2) return true;
    for (Index f = 0; f < s.n_freqs(); ++f) {
        const auto& m = s.slice(f);
        const double dev = (m - m.transpose()).cwiseAbs().maxCoeff();
        if (!(dev <= tol)) return false;
    }
    return true;
}

Eigen::VectorXd max_singular_value(const SMatrix& s) {
    if (s.n_ports() < 1) throw IndexError("singular values need at least one port");
    Eigen::VectorXd out(s.n_freqs());
    for (Index f = 0; f < s.n_freqs(); ++f) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s.slice(f));
        out[f] = svd.singularValues()[0];
    }
    return out;
}

SMatrix permute_ports(const SMatrix& s, const std::vector<Index>& order) {
    const Index n = s.n_ports();
    if (static_cast<Index>(order.size()) != n)
        throw ArityMismatch("permutation size must match the port count");
    std::vector<bool> used(static_cast<size_t>(n), false);
    std::vector<std::string> ports;
    ports.reserve(order.size());
    for (Index src : order) {
        if (src < 0 || src >= n || used[static_cast<size_t>(src)])
            throw IndexError("invalid port permutation");
        used[static_cast<size_t>(src)] = true;
        ports.push_back(s.ports()[static_cast<size_t>(src)]);
    }
    SMatrix out(s.grid(), std::move(ports));
    for (Index f = 0; f < s.n_freqs(); ++f) {
        const auto& m = s.slice(f);
        auto& o = out.slice(f);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) o(i, j) = m(order[static_cast<size_t>(i)],
                                                      order[static_cast<size_t>(j)]);
    }
    return out;
}

SMatrix concat_frequencies(const std::vector<SMatrix>& parts) {
    if (parts.empty()) throw ParamError("nothing to concatenate");
    Index total = 0;
    for (const auto& p : parts) {
        if (p.ports() != parts[0].ports())
            throw GridMismatch("concatenation needs identical port lists");
        total += p.n_freqs();
    }
    Eigen::VectorXd freqs(total);
    Index at = 0;
    for (const auto& p : parts) {
        freqs.segment(at, p.n_freqs()) = p.grid().points();
        at += p.n_freqs();
    }
    SMatrix out(FrequencyGrid(std::move(freqs)), parts[0].ports());
    at = 0;
    for (const auto& p : parts)
        for (Index f = 0; f < p.n_freqs(); ++f) out.slice(at++) = p.slice(f);
    return out;
}

}  // namespace picsim
