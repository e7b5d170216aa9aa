#include "picsim/reference_circuits.hpp"

#include <string>

namespace picsim {

namespace {

ModelPtr arm_waveguide(const WaveguideParams& base, double length) {
    WaveguideParams p = base;
    p.length = length;
    return waveguide(p);
}

}  // namespace

Subcircuit make_mzi(double long_length, double short_length, const WaveguideParams& arm) {
    Subcircuit c("mzi");
    const ModelPtr gc = grating_coupler();
    const ModelPtr yb = y_branch();
    c.add(gc, "input");
    c.add(gc, "output");
    c.add(yb, "splitter");
    c.add(yb, "recombiner");
    c.add(arm_waveguide(arm, long_length), "wg_long");
    c.add(arm_waveguide(arm, short_length), "wg_short");
    c.connect("input", "n1", "splitter", "n1");
    c.connect("splitter", "n2", "wg_long", "n1");
    c.connect("splitter", "n3", "wg_short", "n1");
    c.connect("recombiner", "n2", "wg_long", "n2");
    c.connect("recombiner", "n3", "wg_short", "n2");
    c.connect("output", "n1", "recombiner", "n1");
    return c;
}

Subcircuit make_mzi_chain(int count, double long_length, double short_length,
                          double joiner_length, const WaveguideParams& arm) {
    if (count < 1) throw ParamError("mzi chain needs count >= 1");
    if (count == 1) return make_mzi(long_length, short_length, arm);
    Subcircuit c("mzi_chain");
    const ModelPtr gc = grating_coupler();
    const ModelPtr yb = y_branch();
    const ModelPtr wg_long = arm_waveguide(arm, long_length);
    const ModelPtr wg_short = arm_waveguide(arm, short_length);
    const ModelPtr joiner = arm_waveguide(arm, joiner_length);
    c.add(gc, "input");
    c.add(gc, "output");
    for (int k = 1; k <= count; ++k) {
        const std::string suffix = "_" + std::to_string(k);
        c.add(yb, "splitter" + suffix);
        c.add(yb, "recombiner" + suffix);
        c.add(wg_long, "wg_long" + suffix);
        c.add(wg_short, "wg_short" + suffix);
        if (k < count) c.add(joiner, "joiner" + suffix);
    }
    std::string feed_inst = "input";
    for (int k = 1; k <= count; ++k) {
        const std::string suffix = "_" + std::to_string(k);
        c.connect(feed_inst, feed_inst == "input" ? "n1" : "n2", "splitter" + suffix, "n1");
        c.connect("splitter" + suffix, "n2", "wg_long" + suffix, "n1");
        c.connect("splitter" + suffix, "n3", "wg_short" + suffix, "n1");
        c.connect("recombiner" + suffix, "n2", "wg_long" + suffix, "n2");
        c.connect("recombiner" + suffix, "n3", "wg_short" + suffix, "n2");
        if (k < count) {
            c.connect("joiner" + suffix, "n1", "recombiner" + suffix, "n1");
            feed_inst = "joiner" + suffix;
        } else {
            c.connect("output", "n1", "recombiner" + suffix, "n1");
        }
    }
    return c;
}

Subcircuit make_green_machine(const GreenMachineParams& params) {
    Subcircuit c("green_machine");
    const ModelPtr gc =
        grating_coupler(params.gc_lambda_c, params.gc_peak_loss_db, params.gc_bw_1db);
    const ModelPtr dc = directional_coupler(params.coupling);
    const ModelPtr xo = crossover(params.crosstalk);
    const ModelPtr feed = arm_waveguide(params.wg, params.interconnect_length);
    const ModelPtr mid_outer = feed;
    const ModelPtr mid_inner =
        arm_waveguide(params.wg, params.interconnect_length + params.middle_extra_length);

    for (int i = 0; i < 8; ++i) c.add(gc, "gc" + std::to_string(i));
    for (int i = 0; i < 4; ++i) c.add(feed, "wg_in" + std::to_string(i));
    c.add(dc, "dc_a");
    c.add(dc, "dc_b");
    c.add(mid_outer, "wg_mid0");
    c.add(mid_inner, "wg_mid1");
    c.add(mid_inner, "wg_mid2");
    c.add(mid_outer, "wg_mid3");
    c.add(xo, "xo");
    c.add(dc, "dc_c");
    c.add(dc, "dc_d");

    for (int i = 0; i < 4; ++i)
        c.connect("gc" + std::to_string(i), "n1", "wg_in" + std::to_string(i), "n1");
    c.connect("wg_in0", "n2", "dc_a", "n1");
    c.connect("wg_in1", "n2", "dc_a", "n2");
    c.connect("wg_in2", "n2", "dc_b", "n1");
    c.connect("wg_in3", "n2", "dc_b", "n2");

    c.connect("dc_a", "n3", "wg_mid0", "n1");
    c.connect("dc_a", "n4", "wg_mid1", "n1");
    c.connect("dc_b", "n3", "wg_mid2", "n1");
    c.connect("dc_b", "n4", "wg_mid3", "n1");

    // the crossover swaps the two inner rails
    c.connect("wg_mid1", "n2", "xo", "n1");
    c.connect("wg_mid2", "n2", "xo", "n2");

    c.connect("wg_mid0", "n2", "dc_c", "n1");
    c.connect("xo", "n3", "dc_c", "n2");
    c.connect("xo", "n4", "dc_d", "n1");
    c.connect("wg_mid3", "n2", "dc_d", "n2");

    c.connect("dc_c", "n3", "gc4", "n1");
    c.connect("dc_c", "n4", "gc5", "n1");
    c.connect("dc_d", "n3", "gc6", "n1");
    c.connect("dc_d", "n4", "gc7", "n1");

    for (int i = 0; i < 4; ++i)
        c.alias_port("gc" + std::to_string(i), "n2", "in" + std::to_string(i));
    for (int i = 4; i < 8; ++i)
        c.alias_port("gc" + std::to_string(i), "n2", "out" + std::to_string(i));
    return c;
}

Subcircuit make_ring(double radius, double coupling, const WaveguideParams& arm) {
    Subcircuit c("ring");
    const ModelPtr half = half_ring(radius, coupling, arm);
    c.add(half, "top");
    c.add(half, "bottom");
    // close the loop: each half-arc's far end meets the other coupler
    c.connect("top", "n4", "bottom", "n3");
    c.connect("bottom", "n4", "top", "n3");
    c.alias_port("top", "n1", "in");
    c.alias_port("top", "n2", "pass");
    c.alias_port("bottom", "n2", "drop");
    c.alias_port("bottom", "n1", "add");
    return c;
}

Subcircuit make_ring_filter(const std::array<double, 3>& radii, double coupling,
                            double spacer_length, const WaveguideParams& arm) {
    Subcircuit c("ring_filter");
    const ModelPtr spacer = arm_waveguide(arm, spacer_length);
    for (int i = 0; i < 3; ++i)
        c.add(make_ring(radii[static_cast<size_t>(i)], coupling, arm),
              "ring" + std::to_string(i + 1));
    c.add(spacer, "spacer1");
    c.add(spacer, "spacer2");
    c.connect("ring1", "pass", "spacer1", "n1");
    c.connect("spacer1", "n2", "ring2", "in");
    c.connect("ring2", "pass", "spacer2", "n1");
    c.connect("spacer2", "n2", "ring3", "in");
    c.alias_port("ring1", "in", "in");
    c.alias_port("ring3", "pass", "pass");
    c.alias_port("ring1", "drop", "drop1");
    c.alias_port("ring2", "drop", "drop2");
    c.alias_port("ring3", "drop", "drop3");
    return c;
}

}  // namespace picsim
