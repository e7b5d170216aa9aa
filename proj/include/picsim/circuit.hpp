#pragma once

#include <array>
#include <deque>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "picsim/models.hpp"

namespace picsim {

class Subcircuit;

// A pin endpoint by stable identity: instance name plus pin ordinal.
// Renaming a pin changes its display name, never its ordinal, so existing
// connections survive renames.
struct PinId {
    std::string instance;
    int pin = 0;

    friend bool operator==(const PinId& a, const PinId& b) {
        return a.pin == b.pin && a.instance == b.instance;
    }
    friend bool operator<(const PinId& a, const PinId& b) {
        return a.instance != b.instance ? a.instance < b.instance : a.pin < b.pin;
    }
};

struct Connection {
    PinId a;
    PinId b;
};

// One placed component: a named reference to a shared compact model or to a
// subcircuit, plus this instance's own pin names.
class ComponentInstance {
public:
    const std::string& name() const { return name_; }
    const ModelPtr& model() const { return model_; }
    const std::shared_ptr<const Subcircuit>& subcircuit() const { return sub_; }
    bool is_subcircuit() const { return sub_ != nullptr; }

    const std::vector<std::string>& pins() const { return pins_; }
    int n_pins() const { return static_cast<int>(pins_.size()); }
    int pin_index(std::string_view pin) const;  // throws UnknownPin

private:
    friend class Subcircuit;
    std::string name_;
    ModelPtr model_;
    std::shared_ptr<const Subcircuit> sub_;
    std::vector<std::string> pins_;
};

// instance/pin names: letters, digits, underscore, not starting with a digit
bool valid_name(std::string_view name);
// dot-separated path of valid names, e.g. "ring1.top" (hierarchy separator)
bool valid_dotted_name(std::string_view name);

// A circuit under construction: named instances, pin-to-pin connections, and
// optional aliases for external pins. Any pin touched by no connection is an
// ideal matched external port of the circuit. A Subcircuit can itself be
// placed as a component inside another one.
class Subcircuit {
public:
    explicit Subcircuit(std::string name = "circuit");

    // Place a component. The by-value Subcircuit overload copies; the
    // shared_ptr overload shares (which is what makes containment cycles
    // possible and detectable). Returned references stay valid across adds.
    ComponentInstance& add(ModelPtr model, const std::string& name);
    ComponentInstance& add(const Subcircuit& sub, const std::string& name);
    ComponentInstance& add(std::shared_ptr<const Subcircuit> sub, const std::string& name);
    void add(std::initializer_list<std::pair<ModelPtr, std::string>> entries);

    void rename_pin(const std::string& instance, const std::string& old_pin,
                    const std::string& new_pin);
    // Replace every pin name of `instance`; needs exactly one name per pin.
    void rename_all(const std::string& instance, const std::vector<std::string>& pins);

    void connect(const std::string& inst_a, const std::string& pin_a,
                 const std::string& inst_b, const std::string& pin_b);
    void connect_many(const std::vector<std::array<std::string, 4>>& list);

    // Name an external pin; the alias becomes its port label in results.
    void alias_port(const std::string& instance, const std::string& pin,
                    const std::string& alias);

    const std::string& name() const { return name_; }
    Index n_instances() const { return static_cast<Index>(instances_.size()); }
    const std::deque<ComponentInstance>& instances() const { return instances_; }
    bool has_instance(std::string_view name) const;
    const ComponentInstance& instance(std::string_view name) const;
    const std::vector<Connection>& connections() const { return connections_; }
    const std::map<std::pair<std::string, int>, std::string>& aliases() const {
        return aliases_;
    }

    bool is_flat() const;
    bool pin_connected(const std::string& instance, int pin) const;

    // Unconnected pins in deterministic order: instance insertion order, then
    // pin ordinal.
    std::vector<PinId> external_pins() const;

    // Alias if one is set, otherwise "<instance>.<pin name>".
    std::string display_name(const PinId& pin) const;

    // Resolve "inst.pin" text (splitting on the last dot) to an identity.
    PinId resolve(std::string_view endpoint) const;

private:
    ComponentInstance& add_instance(ComponentInstance inst);
    std::pair<const ComponentInstance*, int> find_pin(const std::string& instance,
                                                      const std::string& pin) const;

    std::string name_;
    std::deque<ComponentInstance> instances_;
    std::map<std::string, size_t, std::less<>> index_;
    std::vector<Connection> connections_;
    std::map<std::pair<std::string, int>, std::string> aliases_;
    std::map<std::pair<std::string, int>, size_t> connected_;  // pin -> connection index
};

// Recursively inline every subcircuit-backed instance. Inner instances are
// renamed "<outer>.<inner>"; the result's connection list holds, for each
// instance in order, its inlined internal connections, followed by this
// circuit's own connections. External pin order is preserved. Throws
// CycleError if a subcircuit contains itself at any depth.
Subcircuit flatten(const Subcircuit& c);

}  // namespace picsim
