#include <algorithm>
#include <cmath>
#include <map>

#include <CLI11.hpp>

#include "ladderflow/cli.hpp"

namespace ladderflow::cli {

std::string_view to_string(Command command) {
    switch (command) {
    case Command::Basis: return "basis";
    case Command::Hamiltonian: return "hamiltonian";
    case Command::Sweep: return "sweep";
    case Command::Flow: return "flow";
    case Command::Scan: return "scan";
    case Command::Fluct: return "fluct";
    }
    return "unknown";
}

std::string_view to_string(Format format) { return format == Format::Csv ? "csv" : "json"; }

std::vector<double> RunConfig::resolved_grid() const {
    if (!jt_grid.empty()) return jt_grid;
    std::vector<double> grid;
    if (jt_steps == 1) return {jt_min};
    for (int i = 0; i < jt_steps; ++i)
        grid.push_back(jt_min + (jt_max - jt_min) * i / (jt_steps - 1));
    return grid;
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
    std::string grid;
    for (double v : jt_grid) grid += (grid.empty() ? "" : " ") + format_number(v);
    return {
        {"command", std::string(to_string(command))},
        {"version", version},
        {"scheme", std::string(ladderflow::to_string(scheme))},
        {"L", std::to_string(rungs)},
        {"mtot", std::to_string(mtot)},
        {"jt", format_number(jt)},
        {"jl", format_number(jl)},
        {"jc", format_number(jc)},
        {"jt_grid", grid},
        {"jt_min", format_number(jt_min)},
        {"jt_max", format_number(jt_max)},
        {"jt_steps", std::to_string(jt_steps)},
        {"nmin", std::to_string(n_min)},
        {"ktrack", std::to_string(k_track)},
        {"tol", format_number(tol)},
        {"seed", std::to_string(seed)},
        {"max_iter", std::to_string(max_iter)},
        {"pair", std::to_string(pair_lower) + "," + std::to_string(pair_upper)},
        {"fluct_k", std::to_string(fluct_k)},
        {"in", input},
        {"format", std::string(to_string(format))},
    };
}

namespace {

void validate(const RunConfig& c) {
    auto require = [](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError(msg);
    };
    for (double v : {c.jt, c.jl, c.jc, c.jt_min, c.jt_max, c.tol})
        require(std::isfinite(v), "numeric options must be finite");
    for (double v : c.jt_grid) require(std::isfinite(v), "--jt-grid values must be finite");
    require(c.rungs >= 1 && c.rungs <= max_rungs,
            "--L must be between 1 and " + std::to_string(max_rungs));
    require(std::abs(c.mtot) <= c.rungs, "--mtot must satisfy |M| <= L");
    require(c.tol > 0.0, "--tol must be positive");
    require(c.max_iter > 0, "--max-iter must be positive");
    require(c.k_track >= 1, "--ktrack must be at least 1");
    require(c.jt_steps >= 1, "--jt-steps must be at least 1");
    require(c.jt_min <= c.jt_max, "--jt-min must not exceed --jt-max");
    require(std::is_sorted(c.jt_grid.begin(), c.jt_grid.end()), "--jt-grid must be ascending");
    require(c.pair_lower >= 1 && c.pair_upper > c.pair_lower, "--pair needs 1 <= lower < upper");
    require(c.fluct_k >= 1, "--fluct-k must be at least 1");
    if (c.command == Command::Flow || (c.command == Command::Fluct && c.input.empty()))
        require(c.n_min >= c.k_track + 2, "--nmin must be at least ktrack + 2");
    if (c.command == Command::Flow || c.command == Command::Fluct || c.command == Command::Hamiltonian)
        require(c.jt != 0.0, "--jt must be nonzero");
    if (c.command == Command::Scan)
        require(c.jt_min < c.jt_max, "scan needs --jt-min < --jt-max");
}

} // namespace

RunConfig parse_config(const std::vector<std::string>& args,
                       const std::optional<std::string>& config_file) {
    RunConfig c;
    CLI::App app{"Hilbert-space reduction flows on frustrated two-leg spin ladders", "ladderflow"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_version_flag("--version", version);

    app.set_config("--config", config_file.value_or(""), "TOML or INI file with option values",
                   config_file.has_value());

    std::string scheme = "su2";
    std::string format = "csv";
    std::string pair = "1,2";
    app.add_option("--scheme", scheme, "su2 or so4")->check(CLI::IsMember({"su2", "so4"}));
    app.add_option("--L", c.rungs, "number of rungs");
    app.add_option("--mtot", c.mtot, "total magnetization sector");
    app.add_option("--jt", c.jt, "rung coupling");
    app.add_option("--jl", c.jl, "leg coupling");
    app.add_option("--jc", c.jc, "diagonal coupling");
    app.add_option("--jt-grid", c.jt_grid, "explicit rung-coupling grid")->delimiter(',');
    app.add_option("--jt-min", c.jt_min, "grid start");
    app.add_option("--jt-max", c.jt_max, "grid end");
    app.add_option("--jt-steps", c.jt_steps, "grid points");
    app.add_option("--nmin", c.n_min, "smallest dimension reached by the flow");
    app.add_option("--ktrack", c.k_track, "number of tracked levels");
    app.add_option("--tol", c.tol, "eigensolver residual tolerance");
    app.add_option("--seed", c.seed, "eigensolver start-vector seed");
    app.add_option("--max-iter", c.max_iter, "eigensolver products per eigenpair");
    app.add_option("--pair", pair, "levels to scan, e.g. 1,2");
    app.add_option("--fluct-k", c.fluct_k, "step distance for fluctuation percentages");
    app.add_option("--in", c.input, "flow table to analyse");
    app.add_option("--out", c.output, "output path, - for stdout");
    app.add_option("--plot", c.plot, "also write a plot script here");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", c.threads, "worker threads for sweeps");
    app.add_flag("--dump", c.dump, "hamiltonian: write i j value lines");
    app.add_flag("--list", c.list, "basis: write the state list");

    const std::map<std::string, Command> commands{
        {"basis", Command::Basis}, {"hamiltonian", Command::Hamiltonian},
        {"sweep", Command::Sweep}, {"flow", Command::Flow},
        {"scan", Command::Scan},   {"fluct", Command::Fluct},
    };
    for (const auto& [name, cmd] : commands) app.add_subcommand(name, std::string(name) + " workflow");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::CallForVersion&) {
        throw HelpRequested(version);
    } catch (const CLI::ParseError& e) {
        throw ConfigError(std::string(e.get_name()) + ": " + e.what());
    }

    c.command = commands.at(app.get_subcommands().front()->get_name());
    c.scheme = parse_scheme(scheme);
    c.format = format == "csv" ? Format::Csv : Format::Json;
    const auto comma = pair.find(',');
    if (comma == std::string::npos) throw ConfigError("--pair expects lower,upper");
    try {
        std::size_t used = 0;
        c.pair_lower = std::stoi(pair.substr(0, comma), &used);
        if (used != comma) throw std::invalid_argument("pair");
        const std::string upper = pair.substr(comma + 1);
        c.pair_upper = std::stoi(upper, &used);
        if (used != upper.size()) throw std::invalid_argument("pair");
    } catch (const std::logic_error&) {
        throw ConfigError("--pair expects lower,upper");
    }
    validate(c);
    return c;
}

} // namespace ladderflow::cli
