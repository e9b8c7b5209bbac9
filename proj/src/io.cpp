#include "rglasso/io.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

namespace rglasso {

namespace {

std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, delimiter)) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == delimiter) {
        cells.emplace_back();
    }
    return cells;
}

std::string trimmed(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::optional<double> parse_cell(const std::string& raw) {
    const std::string cell = trimmed(raw);
    if (cell.empty()) return std::nullopt;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return value;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IngestError("cannot open file: " + path);
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!trimmed(line).empty()) lines.push_back(line);
    }
    return lines;
}

bool row_is_numeric(const std::vector<std::string>& cells) {
    return std::all_of(cells.begin(), cells.end(),
                       [](const std::string& c) { return parse_cell(c).has_value(); });
}

std::string format_17g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct ParsedCsv {
    std::vector<std::string> names; // empty if no header
    std::vector<std::vector<double>> good_rows;
    long dropped = 0;
    std::size_t arity = 0;
};

ParsedCsv parse_numeric_csv(const std::string& path, const CsvOptions& options) {
    const auto lines = read_lines(path);
    if (lines.empty()) {
        throw IngestError("file is empty: " + path);
    }
    ParsedCsv parsed;
    std::size_t first_data = 0;
    const auto head_cells = split_line(lines[0], options.delimiter);
    const bool has_header =
        options.header == CsvOptions::Header::Yes ||
        (options.header == CsvOptions::Header::Auto && !row_is_numeric(head_cells));
    if (has_header) {
        for (const auto& c : head_cells) parsed.names.push_back(trimmed(c));
        first_data = 1;
    }
    parsed.arity = head_cells.size();
    for (std::size_t r = first_data; r < lines.size(); ++r) {
        const auto cells = split_line(lines[r], options.delimiter);
        if (cells.size() != parsed.arity) {
            std::ostringstream msg;
            msg << path << ": ragged row " << r + 1 << " has " << cells.size()
                << " cells, expected " << parsed.arity;
            throw IngestError(msg.str());
        }
        std::vector<double> row;
        row.reserve(cells.size());
        bool ok = true;
        for (const auto& c : cells) {
            if (auto v = parse_cell(c)) {
                row.push_back(*v);
            } else {
                ok = false;
                break;
            }
        }
        if (ok) {
            parsed.good_rows.push_back(std::move(row));
        } else {
            ++parsed.dropped;
        }
    }
    return parsed;
}

} // namespace

ReturnsTable load_returns_csv(const std::string& path, const CsvOptions& options) {
    ParsedCsv parsed = parse_numeric_csv(path, options);
    if (parsed.arity < 2) {
        throw IngestError(path + ": fewer than 2 columns");
    }
    if (parsed.good_rows.size() < 2) {
        throw IngestError(path + ": fewer than 2 usable rows");
    }
    ReturnsTable table;
    if (parsed.names.empty()) {
        for (std::size_t c = 0; c < parsed.arity; ++c) {
            table.asset_names.push_back("col_" + std::to_string(c));
        }
    } else {
        table.asset_names = std::move(parsed.names);
    }
    table.dropped_rows = parsed.dropped;
    table.rows.resize(static_cast<Eigen::Index>(parsed.good_rows.size()),
                      static_cast<Eigen::Index>(parsed.arity));
    for (std::size_t r = 0; r < parsed.good_rows.size(); ++r) {
        for (std::size_t c = 0; c < parsed.arity; ++c) {
            table.rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                parsed.good_rows[r][c];
        }
    }
    return table;
}

SymMatrix covariance_from_returns(const ReturnsTable& table) {
    const Eigen::Index n = table.rows.rows();
    if (n < 2) {
        throw std::invalid_argument("covariance needs at least 2 observations");
    }
    Eigen::MatrixXd centered = table.rows.rowwise() - table.rows.colwise().mean();
    return SymMatrix(centered.transpose() * centered / static_cast<double>(n - 1));
}

LoadedMatrix load_matrix_csv(const std::string& path, const CsvOptions& options) {
    ParsedCsv parsed = parse_numeric_csv(path, options);
    if (parsed.dropped > 0) {
        throw IngestError(path + ": matrix file has unparseable rows");
    }
    if (parsed.good_rows.empty()) {
        throw IngestError(path + ": matrix file has no data rows");
    }
    LoadedMatrix loaded;
    loaded.names = std::move(parsed.names);
    loaded.values.resize(static_cast<Eigen::Index>(parsed.good_rows.size()),
                         static_cast<Eigen::Index>(parsed.arity));
    for (std::size_t r = 0; r < parsed.good_rows.size(); ++r) {
        for (std::size_t c = 0; c < parsed.arity; ++c) {
            loaded.values(static_cast<Eigen::Index>(r),
                          static_cast<Eigen::Index>(c)) = parsed.good_rows[r][c];
        }
    }
    return loaded;
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& names) {
    std::ostringstream out;
    if (!names.empty()) {
        if (static_cast<Eigen::Index>(names.size()) != m.cols()) {
            throw std::invalid_argument("header size does not match column count");
        }
        for (std::size_t c = 0; c < names.size(); ++c) {
            out << (c ? "," : "") << names[c];
        }
        out << '\n';
    }
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            out << (c ? "," : "") << format_17g(m(r, c));
        }
        out << '\n';
    }
    atomic_write_text(path, out.str());
}

double default_edge_threshold(const SymMatrix& s) {
    return 1e-6 * std::max(1.0, s.max_abs());
}

AnomalyGraph extract_graph(const SymMatrix& s,
                           const std::vector<std::string>& names,
                           double threshold) {
    if (static_cast<Eigen::Index>(names.size()) != s.dim()) {
        throw std::invalid_argument("extract_graph: names length must equal dim");
    }
    AnomalyGraph graph;
    graph.nodes = names;
    for (Eigen::Index i = 0; i < s.dim(); ++i) {
        for (Eigen::Index j = i + 1; j < s.dim(); ++j) {
            if (std::abs(s(i, j)) > threshold) {
                graph.edges.push_back({static_cast<int>(i), static_cast<int>(j),
                                       s(i, j)});
            }
        }
    }
    return graph;
}

AnomalyGraph extract_graph(const SymMatrix& s,
                           const std::vector<std::string>& names) {
    return extract_graph(s, names, default_edge_threshold(s));
}

std::string graph_to_string(const AnomalyGraph& graph, GraphFormat format) {
    std::ostringstream out;
    switch (format) {
    case GraphFormat::EdgeListCsv:
        out << "src,dst,weight\n";
        for (const auto& e : graph.edges) {
            out << graph.nodes[static_cast<std::size_t>(e.src)] << ','
                << graph.nodes[static_cast<std::size_t>(e.dst)] << ','
                << format_17g(e.weight) << '\n';
        }
        break;
    case GraphFormat::Dot:
        out << "graph anomalies {\n";
        for (const auto& node : graph.nodes) {
            out << "  \"" << node << "\";\n";
        }
        for (const auto& e : graph.edges) {
            out << "  \"" << graph.nodes[static_cast<std::size_t>(e.src)]
                << "\" -- \"" << graph.nodes[static_cast<std::size_t>(e.dst)]
                << "\" [weight=" << format_17g(e.weight) << "];\n";
        }
        out << "}\n";
        break;
    case GraphFormat::Json: {
        nlohmann::json doc;
        doc["nodes"] = graph.nodes;
        doc["edges"] = nlohmann::json::array();
        for (const auto& e : graph.edges) {
            doc["edges"].push_back(
                {{"src", graph.nodes[static_cast<std::size_t>(e.src)]},
                 {"dst", graph.nodes[static_cast<std::size_t>(e.dst)]},
                 {"weight", e.weight}});
        }
        out << doc.dump(2) << '\n';
        break;
    }
    }
    return out.str();
}

void export_graph(const AnomalyGraph& graph, const std::string& path,
                  GraphFormat format) {
    atomic_write_text(path, graph_to_string(graph, format));
}

AnomalyGraph graph_from_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    AnomalyGraph graph;
    graph.nodes = doc.at("nodes").get<std::vector<std::string>>();
    for (const auto& e : doc.at("edges")) {
        const auto& src = e.at("src").get_ref<const std::string&>();
        const auto& dst = e.at("dst").get_ref<const std::string&>();
        const auto find = [&](const std::string& name) {
            const auto it = std::find(graph.nodes.begin(), graph.nodes.end(), name);
            if (it == graph.nodes.end()) {
                throw IngestError("graph edge references unknown node: " + name);
            }
            return static_cast<int>(it - graph.nodes.begin());
        };
        int i = find(src);
        int j = find(dst);
        if (i == j) {
            throw IngestError("graph edge is a self-loop: " + src);
        }
        if (i > j) std::swap(i, j);
        graph.edges.push_back({i, j, e.at("weight").get<double>()});
    }
    return graph;
}

AnomalyGraph remove_nodes(const AnomalyGraph& graph,
                          const std::vector<std::string>& names) {
    const std::set<std::string> drop(names.begin(), names.end());
    AnomalyGraph out;
    std::vector<int> remap(graph.nodes.size(), -1);
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        if (!drop.count(graph.nodes[i])) {
            remap[i] = static_cast<int>(out.nodes.size());
            out.nodes.push_back(graph.nodes[i]);
        }
    }
    for (const auto& e : graph.edges) {
        const int src = remap[static_cast<std::size_t>(e.src)];
        const int dst = remap[static_cast<std::size_t>(e.dst)];
        if (src >= 0 && dst >= 0) {
            out.edges.push_back({src, dst, e.weight});
        }
    }
    return out;
}

AnomalyGraph ego_network(const AnomalyGraph& graph, const std::string& node) {
    const auto it = std::find(graph.nodes.begin(), graph.nodes.end(), node);
    if (it == graph.nodes.end()) {
        throw std::invalid_argument("ego_network: node not in graph: " + node);
    }
    const int center = static_cast<int>(it - graph.nodes.begin());
    AnomalyGraph out;
    out.nodes.push_back(node);
    for (const auto& e : graph.edges) {
        if (e.src != center && e.dst != center) continue;
        const int other = e.src == center ? e.dst : e.src;
        out.nodes.push_back(graph.nodes[static_cast<std::size_t>(other)]);
        const int a = 0;
        const int b = static_cast<int>(out.nodes.size()) - 1;
        out.edges.push_back({std::min(a, b), std::max(a, b), e.weight});
    }
    return out;
}

void atomic_write_text(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IngestError("cannot write file: " + tmp);
        }
        out << content;
        out.flush();
        if (!out) {
            throw IngestError("write failed: " + tmp);
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw IngestError("rename failed: " + tmp + " -> " + path);
    }
}

} // namespace rglasso
