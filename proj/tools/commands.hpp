#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "spiralq/em_model.hpp"
#include "spiralq/network.hpp"

namespace spiralq::cli {

/// Parses `args` (without the program name) and runs one command. Returns the
/// process exit status: 0 iff every requested output was written, 2 for usage
/// errors, 1 otherwise.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, char** argv);

/// Synthetic measurement set used by the de-embedding fixtures: the reference
/// device (air gap) behind a GSG pad pair.
struct FixtureSet {
    TwoPortNetwork dut;       // S
    TwoPortNetwork open;      // S, pads only
    TwoPortNetwork complete;  // S, pads + device
};

/// Shunt C/R per pad plus pad-to-pad coupling, as a Y network.
TwoPortNetwork pad_network(std::span<const double> frequencies);
FixtureSet make_fixtures(const EmSettings& settings = {});
/// Writes dut.s2p, open.s2p and complete.s2p into `dir`.
void write_fixtures(const std::string& dir, const EmSettings& settings = {});

}  // namespace spiralq::cli
