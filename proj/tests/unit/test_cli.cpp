#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "ladderflow/errors.hpp"
#include "ladderflow/cli.hpp"

using namespace ladderflow;
using namespace ladderflow::cli;

namespace {

std::string tmp_path(const std::string& name) { return std::string(LADDERFLOW_TEST_TMPDIR) + "/" + name; }

int run_cli(std::vector<std::string> args, std::string& out, std::string& err) {
    args.insert(args.begin(), "ladderflow");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream o, e;
    const int code = cli::main(static_cast<int>(argv.size()), argv.data(), o, e);
    out = o.str();
    err = e.str();
    return code;
}

std::string body(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line))
        if (line.empty() || line[0] != '#') out += line + '\n';
    return out;
}

} // namespace

TEST_CASE("flow arguments fill the remaining defaults") {
    const auto c = parse_config({"flow", "--L", "6", "--jt", "10", "--jl", "4.07", "--jc", "4.07"});
    CHECK(c.command == Command::Flow);
    CHECK(c.rungs == 6);
    CHECK(c.jt == 10.0);
    CHECK(c.jl == 4.07);
    CHECK(c.scheme == Scheme::SU2);
    CHECK(c.n_min == 10);
    CHECK(c.k_track == 4);
    CHECK(c.format == Format::Csv);
    CHECK(c.output == "-");
}

TEST_CASE("flags override config file values") {
    const auto path = tmp_path("override.toml");
    {
        std::ofstream f(path);
        f << "L = 4\njt = 3.5\nscheme = \"so4\"\n";
    }
    const auto from_file = parse_config({"basis"}, path);
    CHECK(from_file.rungs == 4);
    CHECK(from_file.jt == 3.5);
    CHECK(from_file.scheme == Scheme::SO4);
    const auto overridden = parse_config({"basis", "--L", "5"}, path);
    CHECK(overridden.rungs == 5);
    CHECK(overridden.jt == 3.5);
    const auto via_flag = parse_config({"basis", "--config", path, "--jt", "1"});
    CHECK(via_flag.rungs == 4);
    CHECK(via_flag.jt == 1.0);
}

TEST_CASE("configuration errors") {
    CHECK_THROWS_AS(parse_config({"flow", "--L", "0"}), ConfigError);
    CHECK_THROWS_AS(parse_config({"flow", "--bogus", "1"}), ConfigError);
    CHECK_THROWS_AS(parse_config({"flow", "--jt", "ten"}), ConfigError);
    CHECK_THROWS_AS(parse_config({"--L", "3"}), ConfigError);
    CHECK_THROWS_AS(parse_config({"flow", "--nmin", "3"}), ConfigError);
    CHECK_THROWS_AS(parse_config({"scan", "--pair", "2,1"}), ConfigError);
    CHECK_THROWS_AS(parse_config({"sweep", "--jt", "nan"}), ConfigError);
    CHECK_THROWS_AS(parse_config({"basis"}, tmp_path("missing.toml")), ConfigError);
    std::string out, err;
    CHECK(run_cli({"flow", "--L", "0"}, out, err) == exit_config);
    CHECK(run_cli({"--help"}, out, err) == exit_ok);
}

TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, -3.7499999999999978, 1e-300, 924.0, -1.0, 6.02214076e23}) {
        const auto s = format_number(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_number(-1.0) == "-1");
    CHECK(format_number(0.5) == "0.5");
}

TEST_CASE("tables round-trip in both formats") {
    Table t;
    t.meta = {{"seed", "7"}, {"command", "flow"}};
    t.columns = {"N", "g", "e1"};
    t.rows = {{924, 10.0, -3.7499999999999978}, {923, 10.000000000000002, 0.1}};
    for (Format f : {Format::Csv, Format::Json}) {
        std::stringstream s;
        write_table(t, f, s);
        CHECK(parse_table(s) == t);
    }
}

TEST_CASE("empty table keeps header and metadata") {
    Table t;
    t.meta = {{"seed", "1"}};
    t.columns = {"jt", "e1"};
    std::stringstream s;
    write_table(t, Format::Csv, s);
    CHECK(s.str() == "# seed=1\njt,e1\n");
    CHECK(parse_table(s) == t);
}

TEST_CASE("emit_table reports I/O failures") {
    Table t;
    t.columns = {"x"};
    CHECK_THROWS_AS(emit_table(t, Format::Csv, "/nonexistent-dir/out.csv"), IoError);
    CHECK_THROWS_AS(read_table("/nonexistent-dir/out.csv"), IoError);
}

TEST_CASE("plot scripts follow the table layout") {
    Table sweep;
    sweep.columns = {"jt", "e1", "e2", "entropy"};
    sweep.rows = {{1.0, -1.0, -0.5, 0.2}};
    const auto sweep_path = tmp_path("sweep.csv");
    emit_table(sweep, Format::Csv, sweep_path);
    const auto s = emit_plotscript(sweep_path);
    CHECK(s.find("cols['e1']") != std::string::npos);
    CHECK(s.find("cols['e2']") != std::string::npos);
    CHECK(s.find("invert_xaxis") == std::string::npos);
    CHECK(s.find("ax_s.plot(x, cols['entropy']") != std::string::npos);

    Table flow;
    flow.columns = {"N", "g", "e1"};
    flow.rows = {{10, 1.0, -1.0}};
    const auto flow_path = tmp_path("flow.csv");
    emit_table(flow, Format::Csv, flow_path);
    const auto f = emit_plotscript(flow_path);
    CHECK(f.find("invert_xaxis") != std::string::npos);
    CHECK(f.find("ax_s") == std::string::npos);
}

TEST_CASE("flow output is self-describing and reproducible") {
    const auto a = tmp_path("flow_a.csv");
    const auto b = tmp_path("flow_b.json");
    std::string out, err;
    REQUIRE(run_cli({"flow", "--L", "4", "--jt", "2", "--jl", "1", "--jc", "0.5", "--nmin", "20", "--out", a},
                    out, err) == exit_ok);
    std::ifstream fa(a);
    std::stringstream first;
    first << fa.rdbuf();
    CHECK(first.str().find("# seed=20070101") != std::string::npos);
    CHECK(first.str().find("N,g,e1,e2,e3,e4,entropy,eliminated_index,eliminated_amplitude,pathology") !=
          std::string::npos);
    const Table table = read_table(a);
    CHECK(table.rows.size() == 51);
    CHECK(table.rows.front()[0] == 70.0);
    CHECK(table.rows.front()[7] == -1.0);

    REQUIRE(run_cli({"flow", "--L", "4", "--jt", "2", "--jl", "1", "--jc", "0.5", "--nmin", "20"}, out, err) ==
            exit_ok);
    CHECK(body(out) == body(first.str()));

    REQUIRE(run_cli({"flow", "--L", "4", "--jt", "2", "--jl", "1", "--jc", "0.5", "--nmin", "20", "--format",
                     "json", "--out", b},
                    out, err) == exit_ok);
    const Table json = read_table(b);
    CHECK(json.rows == table.rows);
    CHECK(json.meta.size() == table.meta.size());
}

TEST_CASE("fluct reads a flow table") {
    const auto flow = tmp_path("fluct_flow.csv");
    std::string out, err;
    REQUIRE(run_cli({"flow", "--L", "4", "--jt", "2", "--jl", "1", "--jc", "0.5", "--nmin", "20", "--out", flow},
                    out, err) == exit_ok);
    REQUIRE(run_cli({"fluct", "--in", flow, "--fluct-k", "5"}, out, err) == exit_ok);
    std::istringstream in(out);
    const Table t = parse_table(in);
    CHECK(t.columns == std::vector<std::string>{"N", "p1", "p2", "p3", "p4"});
    CHECK(t.rows.size() == 51 - 5);
    for (const auto& row : t.rows)
        for (std::size_t i = 1; i < row.size(); ++i) CHECK(row[i] >= 0.0);
}

TEST_CASE("scan prints a one-line verdict") {
    std::string out, err;
    REQUIRE(run_cli({"scan", "--L", "1", "--jl", "0", "--jc", "0", "--jt-min", "-1", "--jt-max", "1",
                     "--jt-steps", "5"},
                    out, err) == exit_ok);
    const auto last = out.substr(out.rfind('{'));
    CHECK(last.find("\"pair\":[1,2]") != std::string::npos);
    CHECK(last.find("\"kind\":\"crossing\"") != std::string::npos);
    CHECK(last.find("\"jt_star\":0") != std::string::npos);
}

TEST_CASE("basis and hamiltonian subcommands") {
    std::string out, err;
    REQUIRE(run_cli({"basis", "--L", "6"}, out, err) == exit_ok);
    CHECK(out == "dimension 924\n");
    REQUIRE(run_cli({"hamiltonian", "--L", "1", "--jt", "1", "--jl", "0", "--jc", "0", "--dump"}, out, err) ==
            exit_ok);
    CHECK(out == "0 0 -0.25\n0 1 0.5\n1 0 0.5\n1 1 -0.25\n");
}
