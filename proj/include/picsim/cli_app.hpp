#pragma once

namespace picsim {

// Full command-line front end; the `picsim` binary is a one-line wrapper
// around this so tests can drive the exact production code path in-process.
//
// Subcommands:
//   simulate <netlist.phc> [--from P --to Q]... [--all-pairs]
//            [--start M --stop M --points N] [--format csv|json] [--out PATH]
//   benchmark [--mzi-counts N,N,...] [--repeats N] [--out PATH]
//
// Exit codes: 0 success, 1 netlist parse/read error, 2 simulation error
// (singular connection, model range, ...), 64 bad flags or unknown ports.
int cli_main(int argc, const char* const* argv);

}  // namespace picsim
