#include "picsim/cascade.hpp"

#include <algorithm>
#include <future>
#include <optional>
#include <thread>
#include <unordered_map>

namespace picsim {

namespace {

void check_port(const SMatrix& s, Index p, const char* which) {
    if (p < 0 || p >= s.n_ports())
        throw IndexError(std::string(which) + " port index out of range");
}

}  // namespace

SMatrix innerconnect(const SMatrix& s, Index k, Index l) {
    check_port(s, k, "first");
    check_port(s, l, "second");
    if (k == l) throw IndexError("cannot join a port to itself");

    const Index n = s.n_ports();
    std::vector<Index> keep;
    std::vector<std::string> ports;
    keep.reserve(static_cast<size_t>(n - 2));
    ports.reserve(static_cast<size_t>(n - 2));
    for (Index i = 0; i < n; ++i) {
        if (i == k || i == l) continue;
        keep.push_back(i);
        ports.push_back(s.ports()[static_cast<size_t>(i)]);
    }

    SMatrix out(s.grid(), std::move(ports));
    const Index m_out = static_cast<Index>(keep.size());
    for (Index f = 0; f < s.n_freqs(); ++f) {
        const Eigen::MatrixXcd& m = s.slice(f);
        const Complex skl = m(k, l), slk = m(l, k), skk = m(k, k), sll = m(l, l);
        const Complex d = 1.0 - skl - slk + skl * slk - skk * sll;
        if (std::abs(d) <= singular_denominator_eps)
            throw SingularConnection("no unique solution (|D| = " +
                                         std::to_string(std::abs(d)) + ") at " +
                                         std::to_string(s.grid()[f]) + " Hz",
                                     s.grid()[f]);
        // the update is rank-2: S + col_l * alpha + col_k * beta
        const Eigen::RowVectorXcd alpha = ((1.0 - slk) * m.row(k) + skk * m.row(l)) / d;
        const Eigen::RowVectorXcd beta = ((1.0 - skl) * m.row(l) + sll * m.row(k)) / d;
        Eigen::MatrixXcd& o = out.slice(f);
        for (Index i = 0; i < m_out; ++i) {
            const Index si = keep[static_cast<size_t>(i)];
            for (Index j = 0; j < m_out; ++j) {
                const Index sj = keep[static_cast<size_t>(j)];
                o(i, j) = m(si, sj) + m(si, l) * alpha[sj] + m(si, k) * beta[sj];
            }
        }
    }
    return out;
}

SMatrix compose(const SMatrix& a, const SMatrix& b) {
    if (a.grid() != b.grid())
        throw GridMismatch("cannot compose networks on different frequency grids");
    std::vector<std::string> ports = a.ports();
    ports.insert(ports.end(), b.ports().begin(), b.ports().end());
    SMatrix out(a.grid(), std::move(ports));  // duplicate labels rejected here
    const Index na = a.n_ports(), nb = b.n_ports();
    for (Index f = 0; f < a.n_freqs(); ++f) {
        auto& o = out.slice(f);
        o.topLeftCorner(na, na) = a.slice(f);
        o.bottomRightCorner(nb, nb) = b.slice(f);
    }
    return out;
}

SMatrix connect(const SMatrix& a, Index port_a, const SMatrix& b, Index port_b) {
    check_port(a, port_a, "first");
    check_port(b, port_b, "second");
    return innerconnect(compose(a, b), port_a, a.n_ports() + port_b);
}

std::pair<Complex, Complex> internal_amplitudes(const SMatrix& s, Index k, Index l,
                                                const Eigen::VectorXcd& incident,
                                                Index f_index) {
    check_port(s, k, "first");
    check_port(s, l, "second");
    if (k == l) throw IndexError("cannot join a port to itself");
    if (f_index < 0 || f_index >= s.n_freqs()) throw IndexError("frequency index out of range");
    if (incident.size() != s.n_ports() - 2)
        throw ArityMismatch("need one incident amplitude per surviving port");

    const Eigen::MatrixXcd& m = s.slice(f_index);
    const Complex skl = m(k, l), slk = m(l, k), skk = m(k, k), sll = m(l, l);
    const Complex d = 1.0 - skl - slk + skl * slk - skk * sll;
    if (std::abs(d) <= singular_denominator_eps)
        throw SingularConnection("no unique solution at " +
                                     std::to_string(s.grid()[f_index]) + " Hz",
                                 s.grid()[f_index]);
    Complex a_l = 0.0, a_k = 0.0;
    Index at = 0;
    for (Index i = 0; i < s.n_ports(); ++i) {
        if (i == k || i == l) continue;
        const Complex amp = incident[at++];
        a_l += (m(k, i) * (1.0 - slk) + skk * m(l, i)) * amp;
        a_k += (m(l, i) * (1.0 - skl) + sll * m(k, i)) * amp;
    }
    return {a_k / d, a_l / d};
}

namespace {

// One partially folded network plus the pin identity behind each port.
struct Partial {
    std::optional<SMatrix> s;
    std::vector<PinId> pins;
};

Index port_of(const Partial& p, const PinId& pin) {
    for (size_t i = 0; i < p.pins.size(); ++i)
        if (p.pins[i] == pin) return static_cast<Index>(i);
    throw IndexError("pin lost during folding: " + pin.instance);
}

// Sequential fold of the whole connection list on one grid.
ReducedNetwork fold(const Subcircuit& circuit, const FrequencyGrid& grid) {
    // one evaluation per distinct model, shared across its instances
    std::unordered_map<const CompactModel*, SMatrix> cache;
    auto evaluated = [&](const ComponentInstance& inst) -> Partial {
        const CompactModel* key = inst.model().get();
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, inst.model()->evaluate(grid)).first;
        Partial p;
        std::vector<std::string> labels;
        labels.reserve(inst.pins().size());
        for (int i = 0; i < inst.n_pins(); ++i) {
            labels.push_back(inst.name() + "." + inst.pins()[static_cast<size_t>(i)]);
            p.pins.push_back({inst.name(), i});
        }
        p.s = it->second.relabeled(std::move(labels));
        return p;
    };

    std::vector<Partial> parts;
    std::unordered_map<std::string, size_t> home;  // instance -> index into parts

    auto materialize = [&](const std::string& instance) -> size_t {
        auto it = home.find(instance);
        if (it != home.end()) return it->second;
        parts.push_back(evaluated(circuit.instance(instance)));
        home[instance] = parts.size() - 1;
        return parts.size() - 1;
    };

    for (const Connection& conn : circuit.connections()) {
        const size_t pa = materialize(conn.a.instance);
        const size_t pb = materialize(conn.b.instance);
        try {
            if (pa == pb) {
                Partial& part = parts[pa];
                const Index k = port_of(part, conn.a);
                const Index l = port_of(part, conn.b);
                part.s = innerconnect(*part.s, k, l);
                const Index hi = std::max(k, l), lo = std::min(k, l);
                part.pins.erase(part.pins.begin() + hi);
                part.pins.erase(part.pins.begin() + lo);
            } else {
                Partial& a = parts[pa];
                Partial& b = parts[pb];
                const Index k = port_of(a, conn.a);
                const Index l = a.s->n_ports() + port_of(b, conn.b);
                a.s = innerconnect(compose(*a.s, *b.s), k, l);
                a.pins.insert(a.pins.end(), b.pins.begin(), b.pins.end());
                a.pins.erase(a.pins.begin() + l);  // l > k always holds here
                a.pins.erase(a.pins.begin() + k);
                b.s.reset();
                b.pins.clear();
                for (auto& [name, idx] : home)
                    if (idx == pb) idx = pa;
            }
        } catch (const SingularConnection& e) {
            throw SingularConnection("joining " + circuit.display_name(conn.a) + " <-> " +
                                         circuit.display_name(conn.b) + ": " + e.what(),
                                     e.frequency_hz());
        }
    }

    // instances no connection ever touched still contribute their ports
    for (const auto& inst : circuit.instances())
        if (!home.count(inst.name())) materialize(inst.name());

    // stitch the remaining disjoint partials together
    std::optional<SMatrix> total;
    std::vector<PinId> pins;
    for (auto& part : parts) {
        if (!part.s) continue;
        total = total ? compose(*total, *part.s) : std::move(*part.s);
        pins.insert(pins.end(), part.pins.begin(), part.pins.end());
        part.s.reset();
    }
    if (!total) total.emplace(grid, std::vector<std::string>{});

    // canonical port order: instance insertion order, then pin ordinal
    const std::vector<PinId> ext = circuit.external_pins();
    if (ext.size() != pins.size())
        throw IndexError("external pin bookkeeping mismatch after folding");
    std::vector<Index> order;
    order.reserve(ext.size());
    for (const PinId& e : ext) {
        const auto at = std::find(pins.begin(), pins.end(), e);
        if (at == pins.end())
            throw IndexError("external pin lost during folding: " + circuit.display_name(e));
        order.push_back(static_cast<Index>(at - pins.begin()));
    }

    std::vector<std::string> labels;
    std::map<std::string, Index> pin_map;
    labels.reserve(ext.size());
    for (size_t i = 0; i < ext.size(); ++i) {
        labels.push_back(circuit.display_name(ext[i]));
        pin_map[labels.back()] = static_cast<Index>(i);
    }
    return {permute_ports(*total, order).relabeled(std::move(labels)), std::move(pin_map)};
}

}  // namespace

ReducedNetwork reduce_circuit(const Subcircuit& circuit, const FrequencyGrid& grid,
                              int workers) {
    if (!circuit.is_flat()) return reduce_circuit(flatten(circuit), grid, workers);

    int w = workers;
    if (w <= 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        w = hw ? static_cast<int>(hw) : 1;
    }
    constexpr Index min_chunk = 32;  // below this, thread spawn dominates
    const Index nf = grid.size();
    w = static_cast<int>(std::min<Index>(w, std::max<Index>(1, nf / min_chunk)));
    if (w <= 1) return fold(circuit, grid);

    // contiguous chunks; per-point arithmetic is identical no matter how the
    // grid is split, so the stitched result is bitwise stable
    std::vector<std::future<ReducedNetwork>> futures;
    const Index base = nf / w, extra = nf % w;
    Index at = 0;
    for (int i = 0; i < w; ++i) {
        const Index len = base + (i < extra ? 1 : 0);
        futures.push_back(std::async(std::launch::async,
                                     [&circuit, &grid, start = at, len] {
                                         return fold(circuit, grid.segment(start, len));
                                     }));
        at += len;
    }
    std::vector<SMatrix> chunks;
    std::optional<std::map<std::string, Index>> pin_map;
    chunks.reserve(futures.size());
    for (auto& f : futures) {
        ReducedNetwork r = f.get();
        if (!pin_map) pin_map = std::move(r.pin_map);
        chunks.push_back(std::move(r.s));
    }
    return {concat_frequencies(chunks), std::move(*pin_map)};
}

}  // namespace picsim
