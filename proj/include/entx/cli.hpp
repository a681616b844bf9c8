#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "entx/protocol.hpp"

namespace entx {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

// Fully parsed invocation. Scalar flags land in the grids as one-point
// grids; fields a subcommand does not use keep their defaults.
struct RunConfig {
    std::string command;
    double lambda = 1.0;
    std::vector<double> g_grid;
    std::vector<double> j_tau_grid;
    int steps = 0;
    bool fixed_point = false;
    int length = 0;
    int spins_per_probe = 0;
    Boundary boundary = Boundary::periodic;
    int workers = 0;
    std::string out_path;
    std::string format = "csv";
    unsigned long long seed = 0;
};

// "start:stop:count" with both endpoints included; count >= 1, and
// count = 1 requires start = stop.
std::vector<double> parse_grid(const std::string& text);

// Inputs first (alphabetical), then concurrence, then auxiliary
// (alphabetical), then status; floats carry 17 significant digits.
// Cells absent from a row stay empty.
std::string to_csv(const std::vector<SweepRecord>& records);

// Array of {inputs, concurrence, auxiliary, status, message} objects,
// newline-terminated.
std::string to_json(const std::vector<SweepRecord>& records);
std::vector<SweepRecord> records_from_json(const std::string& text);

// Parses args (without the program name), runs the subcommand, and
// writes the record stream to --out or to `out`. Diagnostics go to
// `err`. Returns one of the kExit* codes.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace entx
