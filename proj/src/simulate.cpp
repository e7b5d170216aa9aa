#include "picsim/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace picsim {

FrequencyGrid SweepSpec::grid() const {
    if (n_points < 2) throw ParamError("a sweep needs at least 2 points");
    if (!(start > 0.0) || !(stop > 0.0)) throw ParamError("sweep bounds must be positive");
    if (!(start < stop)) throw ParamError("sweep needs start < stop");
    if (mode == SweepMode::wavelength)
        return FrequencyGrid::uniform(speed_of_light / stop, speed_of_light / start, n_points);
    return FrequencyGrid::uniform(start, stop, n_points);
}

SweepResult::SweepResult(SMatrix s, std::map<std::string, Index> pin_map)
    : s_(std::move(s)), pin_map_(std::move(pin_map)) {}

Eigen::VectorXd SweepResult::wavelengths() const {
    return speed_of_light / grid().points().array();
}

Index SweepResult::pin(std::string_view name) const {
    auto it = pin_map_.find(std::string(name));
    if (it != pin_map_.end()) return it->second;
    // unique ".pin" suffix
    const std::string suffix = "." + std::string(name);
    Index found = -1;
    int hits = 0;
    for (const auto& [label, idx] : pin_map_) {
        if (label.size() > suffix.size() &&
            label.compare(label.size() - suffix.size(), suffix.size(), suffix) == 0) {
            found = idx;
            ++hits;
        }
    }
    if (hits == 1) return found;
    if (hits > 1) throw UnknownPin("'" + std::string(name) + "' is ambiguous");
    // instance name owning exactly one external pin
    const std::string prefix = std::string(name) + ".";
    hits = 0;
    for (const auto& [label, idx] : pin_map_) {
        if (label.compare(0, prefix.size(), prefix) == 0) {
            found = idx;
            ++hits;
        }
    }
    if (hits == 1) return found;
    throw UnknownPin("no external pin matches '" + std::string(name) + "'");
}

Eigen::VectorXcd SweepResult::data(std::string_view in_pin, std::string_view out_pin) const {
    const Index j = pin(in_pin);
    const Index i = pin(out_pin);
    Eigen::VectorXcd out(s_.n_freqs());
    for (Index f = 0; f < s_.n_freqs(); ++f) out[f] = s_.slice(f)(i, j);
    return out;
}

Eigen::VectorXd SweepResult::power(std::string_view in_pin, std::string_view out_pin) const {
    return data(in_pin, out_pin).cwiseAbs2();
}

double wrap_phase(double radians) {
    constexpr double pi = std::numbers::pi;
    double r = std::remainder(radians, 2.0 * pi);  // (-pi, pi) with ties toward even
    if (r <= -pi) r = pi;                          // fold the open end: (-pi, pi]
    return r;
}

Eigen::VectorXd SweepResult::phase(std::string_view in_pin, std::string_view out_pin) const {
    const Eigen::VectorXcd d = data(in_pin, out_pin);
    Eigen::VectorXd out(d.size());
    for (Index f = 0; f < d.size(); ++f) out[f] = wrap_phase(std::arg(d[f]));
    return out;
}

Eigen::VectorXd SweepResult::phase(std::string_view in_pin, std::string_view out_pin,
                                   std::string_view relative_to) const {
    const Eigen::VectorXcd d = data(in_pin, out_pin);
    const Eigen::VectorXcd ref = data(in_pin, relative_to);
    Eigen::VectorXd out(d.size());
    for (Index f = 0; f < d.size(); ++f)
        out[f] = wrap_phase(std::arg(d[f]) - std::arg(ref[f]));
    return out;
}

SweepResult run_sweep(const Subcircuit& circuit, const SweepSpec& spec, int workers) {
    ReducedNetwork r = reduce_circuit(circuit, spec.grid(), workers);
    return SweepResult(std::move(r.s), std::move(r.pin_map));
}

DirectSolveResult direct_solve(const Subcircuit& circuit, const FrequencyGrid& grid,
                               std::string_view in_pin) {
    const Subcircuit flat = circuit.is_flat() ? circuit : flatten(circuit);

    // global port table: one slot per (instance, pin)
    struct Slot {
        const ComponentInstance* inst;
        Index offset;  // global index of this instance's pin 0
    };
    std::unordered_map<std::string, Slot> slots;
    Index total = 0;
    for (const auto& inst : flat.instances()) {
        slots[inst.name()] = {&inst, total};
        total += inst.n_pins();
    }
    if (total > 2000) throw ParamError("direct solver is limited to 2000 total ports");

    auto global_of = [&](const PinId& p) { return slots.at(p.instance).offset + p.pin; };

    // peer[g] = global index of the pin connected to g, or -1 when external
    std::vector<Index> peer(static_cast<size_t>(total), -1);
    for (const Connection& c : flat.connections()) {
        const Index ga = global_of(c.a);
        const Index gb = global_of(c.b);
        peer[static_cast<size_t>(ga)] = gb;
        peer[static_cast<size_t>(gb)] = ga;
    }

    const std::vector<PinId> ext = flat.external_pins();
    DirectSolveResult result;
    for (const PinId& e : ext) result.external_pins.push_back(flat.display_name(e));

    // resolve the driven pin against display names, then "inst.pin" text
    Index driven = -1;
    for (size_t i = 0; i < ext.size(); ++i)
        if (result.external_pins[i] == in_pin ||
            ext[i].instance + "." +
                    flat.instance(ext[i].instance).pins()[static_cast<size_t>(ext[i].pin)] ==
                in_pin) {
            driven = global_of(ext[i]);
            break;
        }
    if (driven < 0) throw UnknownPin("no external pin named '" + std::string(in_pin) + "'");

    // per-instance scattering data, one evaluation per distinct model
    std::unordered_map<const CompactModel*, SMatrix> cache;
    std::unordered_map<std::string, const SMatrix*> stamped;
    for (const auto& inst : flat.instances()) {
        const CompactModel* key = inst.model().get();
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, inst.model()->evaluate(grid)).first;
        stamped[inst.name()] = &it->second;
    }

    // owner lookup per global index
    std::vector<const ComponentInstance*> owner(static_cast<size_t>(total));
    std::vector<Index> owner_base(static_cast<size_t>(total));
    for (const auto& inst : flat.instances()) {
        const Slot& slot = slots.at(inst.name());
        for (int p = 0; p < inst.n_pins(); ++p) {
            owner[static_cast<size_t>(slot.offset + p)] = &inst;
            owner_base[static_cast<size_t>(slot.offset + p)] = slot.offset;
        }
    }

    for (Index f = 0; f < grid.size(); ++f) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(total, total);
        Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(total);
        for (const auto& inst : flat.instances()) {
            const Slot& slot = slots.at(inst.name());
            for (int p = 0; p < inst.n_pins(); ++p) {
                const Index g = slot.offset + p;
                if (peer[static_cast<size_t>(g)] < 0) {
                    // external: incident amplitude is prescribed
                    m(g, g) = 1.0;
                    rhs[g] = (g == driven) ? 1.0 : 0.0;
                } else {
                    // incident here equals what the peer pin's instance emits
                    const Index q = peer[static_cast<size_t>(g)];
                    const ComponentInstance* qinst = owner[static_cast<size_t>(q)];
                    const Index qoff = owner_base[static_cast<size_t>(q)];
                    const Eigen::MatrixXcd& qs = stamped.at(qinst->name())->slice(f);
                    const Index qlocal = q - qoff;
                    m(g, g) += 1.0;
                    for (int j = 0; j < qinst->n_pins(); ++j)
                        m(g, qoff + j) -= qs(qlocal, j);
                }
            }
        }
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
        if (!lu.isInvertible())
            throw SingularSystem("no unique field solution at " +
                                 std::to_string(grid[f]) + " Hz");
        const Eigen::VectorXcd x = lu.solve(rhs);

        Eigen::VectorXcd out(static_cast<Index>(ext.size()));
        for (size_t i = 0; i < ext.size(); ++i) {
            const Slot& slot = slots.at(ext[i].instance);
            const Eigen::MatrixXcd& s = stamped.at(ext[i].instance)->slice(f);
            Complex acc = 0.0;
            for (int j = 0; j < slot.inst->n_pins(); ++j)
                acc += s(ext[i].pin, j) * x[slot.offset + j];
            out[static_cast<Index>(i)] = acc;
        }
        result.outgoing.push_back(std::move(out));
    }
    return result;
}

}  // namespace picsim
