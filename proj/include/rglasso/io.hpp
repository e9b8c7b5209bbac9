#pragma once

#include <string>
#include <vector>

#include "rglasso/matrix_ops.hpp"

namespace rglasso {

struct CsvOptions {
    char delimiter = ',';
    enum class Header { Auto, Yes, No } header = Header::Auto;
};

/// Time-ordered return vectors, one column per asset. Rows that arrived with
/// empty or unparseable cells were dropped; dropped_rows reports how many.
struct ReturnsTable {
    std::vector<std::string> asset_names;
    Eigen::MatrixXd rows; // observations x assets
    long dropped_rows = 0;
};

/// Reads a returns CSV. A non-numeric first row is taken as the asset names;
/// otherwise names are synthesized as col_0, col_1, ... Rows whose cell count
/// differs from the header arity are a hard error; rows with the right arity
/// but empty/unparseable cells are dropped and counted. At least 2 rows and
/// 2 columns must survive.
ReturnsTable load_returns_csv(const std::string& path, const CsvOptions& options = {});

/// Column-mean-centered empirical covariance with 1/(rows - 1) normalization.
SymMatrix covariance_from_returns(const ReturnsTable& table);

struct LoadedMatrix {
    Eigen::MatrixXd values;
    std::vector<std::string> names; // empty when the file had no header
};

LoadedMatrix load_matrix_csv(const std::string& path, const CsvOptions& options = {});

/// Plain numeric grid, 17 significant digits, optional header row of names.
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& names = {});

struct AnomalyGraph {
    struct Edge {
        int src = 0; // src < dst, indices into nodes
        int dst = 0;
        double weight = 0.0;
    };
    std::vector<std::string> nodes;
    std::vector<Edge> edges;
};

enum class GraphFormat { EdgeListCsv, Dot, Json };

/// 1e-6 * max(1, max|S|), mirroring the support tolerance used in scoring.
double default_edge_threshold(const SymMatrix& s);

/// One edge per unordered pair with |S_ij| above the threshold; weights are
/// the S entries.
AnomalyGraph extract_graph(const SymMatrix& s,
                           const std::vector<std::string>& names,
                           double threshold);
AnomalyGraph extract_graph(const SymMatrix& s,
                           const std::vector<std::string>& names);

std::string graph_to_string(const AnomalyGraph& graph, GraphFormat format);
void export_graph(const AnomalyGraph& graph, const std::string& path,
                  GraphFormat format);

/// Inverse of the Json export; Json -> graph -> Json is lossless.
AnomalyGraph graph_from_json(const std::string& text);

/// Drops the named nodes and every edge touching them.
AnomalyGraph remove_nodes(const AnomalyGraph& graph,
                          const std::vector<std::string>& names);

/// The star around one node: the node, its neighbors, and its incident edges.
AnomalyGraph ego_network(const AnomalyGraph& graph, const std::string& node);

/// Writes content to path via a temp file + rename so readers never observe
/// a half-written file.
void atomic_write_text(const std::string& path, const std::string& content);

} // namespace rglasso
