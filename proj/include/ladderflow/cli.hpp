#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ladderflow/basis.hpp"
#include "ladderflow/errors.hpp"
#include "ladderflow/sparse.hpp"

namespace ladderflow::cli {

inline constexpr const char* version = "0.1.0";

enum ExitCode : int {
    exit_ok = 0,
    exit_config = 2,
    exit_io = 3,
    exit_convergence = 4,
    exit_pathological = 5,
};

enum class Command { Basis, Hamiltonian, Sweep, Flow, Scan, Fluct };
enum class Format { Csv, Json };

std::string_view to_string(Command command);
std::string_view to_string(Format format);

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Carries the help or version text when one of those flags was given.
class HelpRequested : public Error {
public:
    using Error::Error;
};

struct RunConfig {
    Command command = Command::Flow;
    Scheme scheme = Scheme::SU2;
    int rungs = 6;
    int mtot = 0;
    double jt = 10.0;
    double jl = 4.07;
    double jc = 4.07;
    // Rung-coupling grid for sweep and scan: either an explicit list or
    // jt_steps evenly spaced points on [jt_min, jt_max].
    std::vector<double> jt_grid;
    double jt_min = 4.0;
    double jt_max = 6.0;
    int jt_steps = 21;
    Index n_min = 10;
    Index k_track = 4;
    double tol = 1e-10;
    std::uint64_t seed = 20070101;
    int max_iter = 20000;
    int pair_lower = 1;
    int pair_upper = 2;
    Index fluct_k = 10;
    std::string input;         // fluct: flow table to read instead of running a flow
    std::string output = "-";  // "-" is stdout
    std::string plot;          // optional plot script path
    Format format = Format::Csv;
    bool dump = false;         // hamiltonian: write coordinate entries
    bool list = false;         // basis: write the state list
    unsigned threads = 0;      // 0: LADDERFLOW_THREADS or hardware concurrency

    /// Grid actually used by sweep and scan.
    std::vector<double> resolved_grid() const;
    /// key/value pairs of every field, for output metadata.
    std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Parses `args` (without the program name). Values from `config_file`, or
/// from a `--config` flag, are read first and overridden by explicit flags.
/// Throws ConfigError for unknown flags, missing subcommand, malformed
/// numbers and out-of-range values, HelpRequested for --help and --version.
RunConfig parse_config(const std::vector<std::string>& args,
                       const std::optional<std::string>& config_file = std::nullopt);

/// Numeric table with named columns and free-form metadata.
struct Table {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    bool operator==(const Table&) const = default;
};

/// %.17g formatting; reads back to the same double.
std::string format_number(double value);

void write_table(const Table& table, Format format, std::ostream& out);
/// Writes to `path` ("-" for stdout). Throws IoError.
void emit_table(const Table& table, Format format, const std::string& path);
/// Reads either format back. Throws IoError or ConfigError on bad content.
Table read_table(const std::string& path);
Table parse_table(std::istream& in);

/// Standalone matplotlib script plotting the table at `table_path`: one curve
/// per energy column against the first column, the x axis reversed for flow
/// tables, and a second panel when an entropy column is present.
std::string emit_plotscript(const std::string& table_path);

/// Runs a parsed configuration. Returns the process exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Entry point: parse, run, and map errors onto exit codes.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace ladderflow::cli
