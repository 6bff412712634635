#include <algorithm>
#include <fstream>
#include <iostream>

#include "ladderflow/analysis.hpp"
#include "ladderflow/cli.hpp"
#include "ladderflow/hamiltonian.hpp"
#include "ladderflow/reduction.hpp"

namespace ladderflow::cli {

namespace {

LanczosOptions lanczos_options(const RunConfig& c) {
    LanczosOptions o;
    o.tol = c.tol;
    o.seed = c.seed;
    o.max_iter = c.max_iter;
    return o;
}

CouplingSet couplings(const RunConfig& c) { return {c.jt, c.jl, c.jc}; }

void write_output(const Table& table, const RunConfig& c, std::ostream& out) {
    if (c.output.empty() || c.output == "-") {
        write_table(table, c.format, out);
        if (!out) throw IoError("failed writing output");
    } else {
        emit_table(table, c.format, c.output);
    }
    if (!c.plot.empty()) {
        if (c.output.empty() || c.output == "-")
            throw ConfigError("--plot needs --out naming a file");
        std::ofstream script(c.plot, std::ios::binary);
        if (!script) throw IoError("cannot open '" + c.plot + "' for writing");
        script << emit_plotscript(c.output);
        if (!script) throw IoError("failed writing '" + c.plot + "'");
    }
}

std::vector<std::string> energy_columns(std::size_t k) {
    std::vector<std::string> cols;
    for (std::size_t i = 1; i <= k; ++i) cols.push_back("e" + std::to_string(i));
    return cols;
}

Table flow_table(const FlowTrajectory& traj, const RunConfig& c) {
    Table t;
    t.meta = c.echo();
    t.columns = {"N", "g"};
    for (auto& e : energy_columns(c.k_track)) t.columns.push_back(e);
    for (const char* col : {"entropy", "eliminated_index", "eliminated_amplitude", "pathology"})
        t.columns.push_back(col);
    for (const auto& r : traj.records) {
        std::vector<double> row{static_cast<double>(r.dimension), r.g};
        row.insert(row.end(), r.energies.begin(), r.energies.end());
        row.push_back(r.entropy);
        row.push_back(r.eliminated ? static_cast<double>(*r.eliminated) : -1.0);
        row.push_back(r.eliminated_amplitude);
        row.push_back(r.pathological ? 1.0 : 0.0);
        t.rows.push_back(std::move(row));
    }
    return t;
}

// More than a quarter of the elimination steps kept g frozen.
bool persistently_pathological(const FlowTrajectory& traj) {
    const std::size_t steps = traj.records.empty() ? 0 : traj.records.size() - 1;
    return steps > 0 && 4 * traj.pathological_steps() > steps;
}

FlowTrajectory trajectory_from_table(const Table& t) {
    auto column = [&](const std::string& name) -> std::optional<std::size_t> {
        const auto it = std::find(t.columns.begin(), t.columns.end(), name);
        if (it == t.columns.end()) return std::nullopt;
        return static_cast<std::size_t>(it - t.columns.begin());
    };
    const auto n_col = column("N");
    if (!n_col) throw ConfigError("flow table lacks an N column");
    std::vector<std::size_t> e_cols;
    for (std::size_t i = 1;; ++i) {
        const auto col = column("e" + std::to_string(i));
        if (!col) break;
        e_cols.push_back(*col);
    }
    if (e_cols.empty()) throw ConfigError("flow table lacks energy columns");
    const auto g_col = column("g");

    FlowTrajectory traj;
    for (const auto& row : t.rows) {
        FlowRecord r;
        r.dimension = static_cast<Index>(row[*n_col]);
        if (g_col) r.g = row[*g_col];
        for (auto col : e_cols) r.energies.push_back(row[col]);
        traj.records.push_back(std::move(r));
    }
    return traj;
}

int cmd_basis(const RunConfig& c, std::ostream& out) {
    const SectorBasis basis = enumerate_basis(c.scheme, c.rungs, c.mtot);
    std::ofstream file;
    std::ostream* dst = &out;
    if (!c.output.empty() && c.output != "-") {
        file.open(c.output, std::ios::binary);
        if (!file) throw IoError("cannot open '" + c.output + "' for writing");
        dst = &file;
    }
    *dst << "dimension " << basis.dimension() << '\n';
    if (c.list)
        for (Index k = 0; k < basis.dimension(); ++k) *dst << k << ' ' << basis.describe(k) << '\n';
    if (!*dst) throw IoError("failed writing basis output");
    return exit_ok;
}

int cmd_hamiltonian(const RunConfig& c, std::ostream& out) {
    const SectorBasis basis = enumerate_basis(c.scheme, c.rungs, c.mtot);
    const SparseOperator h = build_hamiltonian(basis, couplings(c));
    std::ofstream file;
    std::ostream* dst = &out;
    if (!c.output.empty() && c.output != "-") {
        file.open(c.output, std::ios::binary);
        if (!file) throw IoError("cannot open '" + c.output + "' for writing");
        dst = &file;
    }
    if (c.dump) {
        for (Index r = 0; r < h.dim(); ++r) {
            const auto cols = h.row_cols(r);
            const auto vals = h.row_values(r);
            for (std::size_t e = 0; e < cols.size(); ++e)
                *dst << r << ' ' << cols[e] << ' ' << format_number(vals[e]) << '\n';
        }
    } else {
        *dst << "dimension " << h.dim() << "\nnonzeros " << h.nnz() << '\n';
    }
    if (!*dst) throw IoError("failed writing hamiltonian output");
    return exit_ok;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
    const auto grid = c.resolved_grid();
    const auto rows = spectrum_sweep(c.scheme, c.rungs, c.jl, c.jc, grid, c.k_track,
                                     lanczos_options(c), c.mtot, c.threads);
    Table t;
    t.meta = c.echo();
    t.columns = {"jt"};
    for (auto& e : energy_columns(c.k_track)) t.columns.push_back(e);
    t.columns.push_back("entropy");
    for (const auto& r : rows) {
        std::vector<double> row{r.jt};
        row.insert(row.end(), r.energies.begin(), r.energies.end());
        row.push_back(r.entropy);
        t.rows.push_back(std::move(row));
    }
    write_output(t, c, out);
    return exit_ok;
}

int cmd_flow(const RunConfig& c, std::ostream& out, std::ostream& err) {
    FlowTrajectory traj;
    try {
        traj = run_flow(c.scheme, c.rungs, couplings(c), c.n_min, c.k_track, lanczos_options(c), c.mtot);
    } catch (const FlowError& e) {
        write_output(flow_table(e.partial(), c), c, out);
        err << "ladderflow: " << e.what() << '\n';
        try {
            std::rethrow_exception(e.cause());
        } catch (const ConvergenceError&) {
            return exit_convergence;
        } catch (...) {
            return exit_pathological;
        }
    }
    write_output(flow_table(traj, c), c, out);
    if (persistently_pathological(traj)) {
        err << "ladderflow: coupling frozen on " << traj.pathological_steps() << " of "
            << traj.records.size() - 1 << " steps\n";
        return exit_pathological;
    }
    return exit_ok;
}

int cmd_scan(const RunConfig& c, std::ostream& out) {
    ScanOptions opts;
    opts.lanczos = lanczos_options(c);
    opts.magnetization = c.mtot;
    const LevelPair pair{c.pair_lower, c.pair_upper};
    const CrossingReport report =
        crossing_scan(c.scheme, c.rungs, c.jl, c.jc, pair, c.jt_min, c.jt_max, opts);

    const auto grid = c.resolved_grid();
    const auto rows = spectrum_sweep(c.scheme, c.rungs, c.jl, c.jc, grid,
                                     static_cast<Index>(c.pair_upper), opts.lanczos, c.mtot,
                                     c.threads);
    Table t;
    t.meta = c.echo();
    t.columns = {"jt", "e" + std::to_string(c.pair_lower), "e" + std::to_string(c.pair_upper), "gap"};
    for (const auto& r : rows) {
        const double lo = r.energies[static_cast<std::size_t>(c.pair_lower - 1)];
        const double hi = r.energies[static_cast<std::size_t>(c.pair_upper - 1)];
        t.rows.push_back({r.jt, lo, hi, hi - lo});
    }
    write_output(t, c, out);
    out << "{\"pair\":[" << pair.lower << ',' << pair.upper << "],\"jt_star\":"
        << format_number(report.jt_star) << ",\"kind\":\"" << to_string(report.kind)
        << "\",\"gap\":" << format_number(report.gap_at_star) << "}\n";
    return exit_ok;
}

int cmd_fluct(const RunConfig& c, std::ostream& out) {
    FlowTrajectory traj;
    if (!c.input.empty()) {
        traj = trajectory_from_table(read_table(c.input));
    } else {
        traj = run_flow(c.scheme, c.rungs, couplings(c), c.n_min, c.k_track, lanczos_options(c), c.mtot);
    }
    if (traj.records.empty()) throw ConfigError("flow table has no rows");
    const std::size_t levels = traj.records.front().energies.size();
    Table t;
    t.meta = c.echo();
    t.columns = {"N"};
    for (std::size_t i = 1; i <= levels; ++i) t.columns.push_back("p" + std::to_string(i));
    const Index n_lo = traj.records.back().dimension;
    for (const auto& r : traj.records) {
        if (r.dimension < n_lo + c.fluct_k) break;
        std::vector<double> row{static_cast<double>(r.dimension)};
        for (std::size_t i = 1; i <= levels; ++i)
            row.push_back(fluctuation_p(traj, static_cast<int>(i), r.dimension, c.fluct_k));
        t.rows.push_back(std::move(row));
    }
    write_output(t, c, out);
    return exit_ok;
}

} // namespace

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    switch (c.command) {
    case Command::Basis: return cmd_basis(c, out);
    case Command::Hamiltonian: return cmd_hamiltonian(c, out);
    case Command::Sweep: return cmd_sweep(c, out);
    case Command::Flow: return cmd_flow(c, out, err);
    case Command::Scan: return cmd_scan(c, out);
    case Command::Fluct: return cmd_fluct(c, out);
    }
    return exit_config;
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args(argv + (argc > 0 ? 1 : 0), argv + argc);
    RunConfig config;
    try {
        config = parse_config(args);
    } catch (const HelpRequested& h) {
        out << h.what() << '\n';
        return exit_ok;
    } catch (const Error& e) {
        err << "ladderflow: " << e.what() << '\n';
        return exit_config;
    }
    try {
        return run(config, out, err);
    } catch (const ConfigError& e) {
        err << "ladderflow: " << e.what() << '\n';
        return exit_config;
    } catch (const IoError& e) {
        err << "ladderflow: " << e.what() << '\n';
        return exit_io;
    } catch (const ConvergenceError& e) {
        err << "ladderflow: " << e.what() << '\n';
        return exit_convergence;
    } catch (const SweepError& e) {
        err << "ladderflow: " << e.what() << '\n';
        return exit_convergence;
    } catch (const FlowError& e) {
        err << "ladderflow: " << e.what() << '\n';
        return exit_convergence;
    } catch (const Error& e) {
        err << "ladderflow: " << e.what() << '\n';
        return exit_config;
    }
}

} // namespace ladderflow::cli
