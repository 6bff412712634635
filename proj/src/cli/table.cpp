#include <cctype>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "ladderflow/cli.hpp"

namespace ladderflow::cli {

std::string format_number(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

double parse_number(std::string_view text) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ConfigError("malformed number in table: '" + std::string(text) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        parts.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

void write_csv(const Table& t, std::ostream& out) {
    for (const auto& [key, value] : t.meta) out << "# " << key << '=' << value << '\n';
    for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
        out << '\n';
    }
}

void write_json(const Table& t, std::ostream& out) {
    nlohmann::ordered_json doc;
    doc["meta"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : t.meta) doc["meta"][key] = value;
    doc["columns"] = t.columns;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size(); ++c) obj[t.columns[c]] = row[c];
        doc["rows"].push_back(std::move(obj));
    }
    out << doc.dump() << '\n';
}

Table parse_json(std::istream& in) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed JSON table: ") + e.what());
    }
    Table t;
    try {
        for (const auto& [key, value] : doc.at("meta").items())
            t.meta.emplace_back(key, value.get<std::string>());
        t.columns = doc.at("columns").get<std::vector<std::string>>();
        for (const auto& obj : doc.at("rows")) {
            std::vector<double> row;
            for (const auto& col : t.columns) row.push_back(obj.at(col).get<double>());
            t.rows.push_back(std::move(row));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed JSON table: ") + e.what());
    }
    return t;
}

Table parse_csv(std::istream& in) {
    Table t;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::string_view body(line);
            body.remove_prefix(body.size() > 1 && body[1] == ' ' ? 2 : 1);
            const auto eq = body.find('=');
            t.meta.emplace_back(std::string(body.substr(0, eq)),
                                eq == std::string_view::npos ? "" : std::string(body.substr(eq + 1)));
            continue;
        }
        const auto cells = split(line, ',');
        if (!header) {
            for (auto c : cells) t.columns.emplace_back(c);
            header = true;
            continue;
        }
        if (cells.size() != t.columns.size())
            throw ConfigError("table row has " + std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(t.columns.size()));
        std::vector<double> row;
        for (auto c : cells) row.push_back(parse_number(c));
        t.rows.push_back(std::move(row));
    }
    if (!header) throw ConfigError("table has no header row");
    return t;
}

} // namespace

void write_table(const Table& table, Format format, std::ostream& out) {
    for (const auto& row : table.rows)
        if (row.size() != table.columns.size())
            throw InvalidArgumentError("table rows must match the column count");
    if (format == Format::Csv) write_csv(table, out);
    else write_json(table, out);
}

void emit_table(const Table& table, Format format, const std::string& path) {
    if (path.empty() || path == "-") {
        write_table(table, format, std::cout);
        std::cout.flush();
        if (!std::cout) throw IoError("failed writing to stdout");
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_table(table, format, out);
    out.close();
    if (!out) throw IoError("failed writing '" + path + "'");
}

Table parse_table(std::istream& in) {
    while (std::isspace(in.peek())) in.get();
    if (in.peek() == '{') return parse_json(in);
    return parse_csv(in);
}

Table read_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return parse_table(in);
}

std::string emit_plotscript(const std::string& table_path) {
    const Table t = read_table(table_path);
    if (t.columns.empty()) throw ConfigError("table has no columns");
    std::vector<std::string> energies;
    bool has_entropy = false;
    for (const auto& c : t.columns) {
        if (c.size() > 1 && c[0] == 'e' && c.find_first_not_of("0123456789", 1) == std::string::npos)
            energies.push_back(c);
        if (c == "entropy") has_entropy = true;
    }
    const std::string& x = t.columns.front();
    const bool flow = x == "N";
    const std::string x_label = flow ? "N" : x == "jt" ? "J_t" : x;

    // Python string literal for the path.
    std::string quoted = "'";
    for (char ch : table_path) {
        if (ch == '\\' || ch == '\'') quoted += '\\';
        quoted += ch;
    }
    quoted += "'";

    std::ostringstream s;
    s << "#!/usr/bin/env python3\n"
      << "import csv\n"
      << "import json\n"
      << "import matplotlib\n"
      << "matplotlib.use('Agg')\n"
      << "import matplotlib.pyplot as plt\n\n"
      << "path = " << quoted << "\n"
      << "with open(path) as fh:\n"
      << "    text = fh.read()\n"
      << "if text.lstrip().startswith('{'):\n"
      << "    doc = json.loads(text)\n"
      << "    cols = {c: [row[c] for row in doc['rows']] for c in doc['columns']}\n"
      << "else:\n"
      << "    lines = [l for l in text.splitlines() if l and not l.startswith('#')]\n"
      << "    reader = csv.DictReader(lines)\n"
      << "    rows = list(reader)\n"
      << "    cols = {c: [float(r[c]) for r in rows] for c in reader.fieldnames}\n\n";
    if (has_entropy)
        s << "fig, (ax, ax_s) = plt.subplots(2, 1, sharex=True, figsize=(6, 7))\n";
    else
        s << "fig, ax = plt.subplots(figsize=(6, 4))\n";
    s << "x = cols['" << x << "']\n";
    if (energies.empty()) {
        for (std::size_t c = 1; c < t.columns.size(); ++c)
            s << "ax.plot(x, cols['" << t.columns[c] << "'], label='" << t.columns[c] << "')\n";
        s << "ax.set_ylabel('value')\n";
    } else {
        for (const auto& e : energies)
            s << "ax.plot(x, cols['" << e << "'], label='" << e << "')\n";
        s << "ax.set_ylabel('energy per site')\n";
    }
    s << "ax.legend()\n";
    if (flow) s << "ax.invert_xaxis()\n";
    if (has_entropy) {
        s << "ax_s.plot(x, cols['entropy'], color='k')\n"
          << "ax_s.set_ylabel('s')\n"
          << "ax_s.set_xlabel('" << x_label << "')\n";
    } else {
        s << "ax.set_xlabel('" << x_label << "')\n";
    }
    s << "fig.tight_layout()\n"
      << "fig.savefig(path.rsplit('.', 1)[0] + '.png', dpi=150)\n";
    return s.str();
}

} // namespace ladderflow::cli
