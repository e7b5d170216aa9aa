#include "picsim/circuit.hpp"

#include <algorithm>
#include <set>

namespace picsim {

bool valid_name(std::string_view name) {
    if (name.empty()) return false;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(name[0]) && name[0] != '_') return false;
    for (char c : name.substr(1))
        if (!alpha(c) && !digit(c) && c != '_') return false;
    return true;
}

bool valid_dotted_name(std::string_view name) {
    size_t start = 0;
    while (true) {
        const size_t dot = name.find('.', start);
        const std::string_view seg = name.substr(start, dot - start);
        if (!valid_name(seg)) return false;
        if (dot == std::string_view::npos) return true;
        start = dot + 1;
    }
}

int ComponentInstance::pin_index(std::string_view pin) const {
    for (size_t i = 0; i < pins_.size(); ++i)
        if (pins_[i] == pin) return static_cast<int>(i);
    throw UnknownPin("instance '" + name_ + "' has no pin '" + std::string(pin) + "'");
}

Subcircuit::Subcircuit(std::string name) : name_(std::move(name)) {}

ComponentInstance& Subcircuit::add_instance(ComponentInstance inst) {
    if (!valid_dotted_name(inst.name_))
        throw ParamError("invalid instance name '" + inst.name_ + "'");
    if (index_.count(inst.name_))
        throw DuplicateName("instance '" + inst.name_ + "' already exists");
    std::set<std::string> seen;
    for (const auto& p : inst.pins_)
        if (!seen.insert(p).second)
            throw DuplicatePin("instance '" + inst.name_ + "' has duplicate pin '" + p + "'");
    instances_.push_back(std::move(inst));
    index_[instances_.back().name_] = instances_.size() - 1;
    return instances_.back();
}

ComponentInstance& Subcircuit::add(ModelPtr model, const std::string& name) {
    if (!model) throw ParamError("null model");
    ComponentInstance inst;
    inst.name_ = name;
    inst.model_ = std::move(model);
    inst.pins_ = inst.model_->ports();
    return add_instance(std::move(inst));
}

ComponentInstance& Subcircuit::add(const Subcircuit& sub, const std::string& name) {
    return add(std::make_shared<const Subcircuit>(sub), name);
}

ComponentInstance& Subcircuit::add(std::shared_ptr<const Subcircuit> sub,
                                   const std::string& name) {
    if (!sub) throw ParamError("null subcircuit");
    ComponentInstance inst;
    inst.name_ = name;
    inst.sub_ = std::move(sub);
    // pins mirror the subcircuit's external pins: alias if present, else the
    // dotted identity with '.' mangled to '_'
    for (const PinId& ext : inst.sub_->external_pins()) {
        std::string pin = inst.sub_->display_name(ext);
        for (auto& ch : pin)
            if (ch == '.') ch = '_';
        inst.pins_.push_back(std::move(pin));
    }
    return add_instance(std::move(inst));
}

void Subcircuit::add(std::initializer_list<std::pair<ModelPtr, std::string>> entries) {
    for (const auto& [model, name] : entries) add(model, name);
}

bool Subcircuit::has_instance(std::string_view name) const {
    return index_.find(name) != index_.end();
}

const ComponentInstance& Subcircuit::instance(std::string_view name) const {
    auto it = index_.find(name);
    if (it == index_.end())
        throw UnknownEndpoint("no instance named '" + std::string(name) + "'");
    return instances_[it->second];
}

std::pair<const ComponentInstance*, int> Subcircuit::find_pin(const std::string& instance_name,
                                                              const std::string& pin) const {
    const ComponentInstance& inst = instance(instance_name);
    return {&inst, inst.pin_index(pin)};
}

void Subcircuit::rename_pin(const std::string& instance_name, const std::string& old_pin,
                            const std::string& new_pin) {
    auto it = index_.find(instance_name);
    if (it == index_.end()) throw UnknownEndpoint("no instance named '" + instance_name + "'");
    ComponentInstance& inst = instances_[it->second];
    const int at = inst.pin_index(old_pin);
    if (!valid_name(new_pin)) throw ParamError("invalid pin name '" + new_pin + "'");
    for (int i = 0; i < inst.n_pins(); ++i)
        if (i != at && inst.pins_[static_cast<size_t>(i)] == new_pin)
            throw DuplicatePin("instance '" + instance_name + "' already has pin '" +
                               new_pin + "'");
    inst.pins_[static_cast<size_t>(at)] = new_pin;
}

void Subcircuit::rename_all(const std::string& instance_name,
                            const std::vector<std::string>& pins) {
    auto it = index_.find(instance_name);
    if (it == index_.end()) throw UnknownEndpoint("no instance named '" + instance_name + "'");
    ComponentInstance& inst = instances_[it->second];
    if (static_cast<int>(pins.size()) != inst.n_pins())
        throw ArityMismatch("instance '" + instance_name + "' has " +
                            std::to_string(inst.n_pins()) + " pins, got " +
                            std::to_string(pins.size()) + " names");
    std::set<std::string> seen;
    for (const auto& p : pins) {
        if (!valid_name(p)) throw ParamError("invalid pin name '" + p + "'");
        if (!seen.insert(p).second) throw DuplicatePin("duplicate pin name '" + p + "'");
    }
    inst.pins_ = pins;
}

void Subcircuit::connect(const std::string& inst_a, const std::string& pin_a,
                         const std::string& inst_b, const std::string& pin_b) {
    auto [ia, pa] = find_pin(inst_a, pin_a);
    auto [ib, pb] = find_pin(inst_b, pin_b);
    PinId a{ia->name(), pa};
    PinId b{ib->name(), pb};
    if (a == b)
        throw SelfPin("cannot connect " + inst_a + "." + pin_a + " to itself");
    for (const PinId* p : {&a, &b})
        if (connected_.count({p->instance, p->pin}))
            throw AlreadyConnected(p->instance + "." +
                                   instance(p->instance).pins()[static_cast<size_t>(p->pin)] +
                                   " is already connected");
    connected_[{a.instance, a.pin}] = connections_.size();
    connected_[{b.instance, b.pin}] = connections_.size();
    connections_.push_back({std::move(a), std::move(b)});
}

void Subcircuit::connect_many(const std::vector<std::array<std::string, 4>>& list) {
    for (const auto& c : list) connect(c[0], c[1], c[2], c[3]);
}

void Subcircuit::alias_port(const std::string& instance_name, const std::string& pin,
                            const std::string& alias) {
    auto [inst, at] = find_pin(instance_name, pin);
    if (!valid_dotted_name(alias)) throw ParamError("invalid alias '" + alias + "'");
    if (connected_.count({inst->name(), at}))
        throw AlreadyConnected(instance_name + "." + pin +
                               " is connected; only external pins take aliases");
    for (const auto& [key, existing] : aliases_)
        if (existing == alias) throw DuplicateName("alias '" + alias + "' already in use");
    aliases_[{inst->name(), at}] = alias;
}

bool Subcircuit::is_flat() const {
    return std::none_of(instances_.begin(), instances_.end(),
                        [](const ComponentInstance& i) { return i.is_subcircuit(); });
}

bool Subcircuit::pin_connected(const std::string& instance, int pin) const {
    return connected_.count({instance, pin}) != 0;
}

std::vector<PinId> Subcircuit::external_pins() const {
    std::vector<PinId> out;
    for (const auto& inst : instances_)
        for (int p = 0; p < inst.n_pins(); ++p)
            if (!connected_.count({inst.name(), p})) out.push_back({inst.name(), p});
    return out;
}

std::string Subcircuit::display_name(const PinId& pin) const {
    auto it = aliases_.find({pin.instance, pin.pin});
    if (it != aliases_.end()) return it->second;
    const ComponentInstance& inst = instance(pin.instance);
    if (pin.pin < 0 || pin.pin >= inst.n_pins())
        throw IndexError("pin ordinal out of range for '" + pin.instance + "'");
    return pin.instance + "." + inst.pins()[static_cast<size_t>(pin.pin)];
}

PinId Subcircuit::resolve(std::string_view endpoint) const {
    const size_t dot = endpoint.rfind('.');
    if (dot == std::string_view::npos || dot == 0 || dot + 1 == endpoint.size())
        throw UnknownEndpoint("expected <instance>.<pin>, got '" + std::string(endpoint) + "'");
    const std::string inst(endpoint.substr(0, dot));
    const std::string pin(endpoint.substr(dot + 1));
    const ComponentInstance& i = instance(inst);
    return {i.name(), i.pin_index(pin)};
}

namespace {

void flatten_into(Subcircuit& out, const std::string& prefix, const Subcircuit& src,
                  std::vector<const Subcircuit*>& stack) {
    if (std::find(stack.begin(), stack.end(), &src) != stack.end())
        throw CycleError("subcircuit '" + src.name() + "' contains itself");
    stack.push_back(&src);

    // pin identity remap for subcircuit-backed instances of this level
    std::map<std::string, std::vector<PinId>> remap;

    for (const auto& inst : src.instances()) {
        const std::string flat_name = prefix.empty() ? inst.name() : prefix + "." + inst.name();
        if (!inst.is_subcircuit()) {
            out.add(inst.model(), flat_name);
            if (inst.pins() != inst.model()->ports())  // preserve pin renames
                out.rename_all(flat_name, inst.pins());
            continue;
        }
        const Subcircuit& sub = *inst.subcircuit();
        const std::vector<PinId> sub_ext_before = sub.external_pins();
        flatten_into(out, flat_name, sub, stack);
        // where each of this instance's pins now lives in `out`
        std::vector<PinId> targets;
        targets.reserve(sub_ext_before.size());
        for (const PinId& ext : sub_ext_before)
            targets.push_back({flat_name + "." + ext.instance, ext.pin});
        remap[inst.name()] = std::move(targets);
    }

    auto project = [&](const PinId& pin) -> PinId {
        auto it = remap.find(pin.instance);
        if (it == remap.end()) {
            const std::string flat_name =
                prefix.empty() ? pin.instance : prefix + "." + pin.instance;
            return {flat_name, pin.pin};
        }
        return it->second[static_cast<size_t>(pin.pin)];
    };

    for (const auto& conn : src.connections()) {
        const PinId a = project(conn.a);
        const PinId b = project(conn.b);
        const auto& ia = out.instance(a.instance);
        const auto& ib = out.instance(b.instance);
        out.connect(a.instance, ia.pins()[static_cast<size_t>(a.pin)], b.instance,
                    ib.pins()[static_cast<size_t>(b.pin)]);
    }

    // aliases survive with the instance path prefixed ("ring1.drop"); ones
    // whose pin got bound by a connection above are simply dropped
    for (const auto& [key, alias] : src.aliases()) {
        const PinId target = project({key.first, key.second});
        if (out.pin_connected(target.instance, target.pin)) continue;
        const std::string flat_alias = prefix.empty() ? alias : prefix + "." + alias;
        out.alias_port(target.instance,
                       out.instance(target.instance).pins()[static_cast<size_t>(target.pin)],
                       flat_alias);
    }

    stack.pop_back();
}

}  // namespace

Subcircuit flatten(const Subcircuit& c) {
    Subcircuit out(c.name());
    std::vector<const Subcircuit*> stack;
    flatten_into(out, "", c, stack);
    return out;
}

}  // namespace picsim
