#ifndef GQSB_IO_HPP
#define GQSB_IO_HPP

// Edge-list files, the bundled Highland Tribes dataset, and weight relabeling.
//
// Edge-list format: '#' lines are comments; the first data line is "n m",
// followed by m lines "i j w" with 0-based node ids and a decimal weight.

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "gqsb/error.hpp"
#include "gqsb/signed_graph.hpp"

#ifndef GQSB_DEFAULT_DATA_DIR
#define GQSB_DEFAULT_DATA_DIR "data"
#endif

namespace gqsb {

namespace detail {

struct Token {
    std::string_view text;
    std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t k = 0;
    while (k < line.size()) {
        while (k < line.size() && (line[k] == ' ' || line[k] == '\t' || line[k] == '\r')) ++k;
        if (k >= line.size()) break;
        std::size_t start = k;
        while (k < line.size() && line[k] != ' ' && line[k] != '\t' && line[k] != '\r') ++k;
        out.push_back({line.substr(start, k - start), start + 1});
    }
    return out;
}

[[noreturn]] inline void parse_fail(const std::string& source, std::size_t line, std::size_t column,
                                    const std::string& what) {
    throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line) + ":" +
                                           std::to_string(column) + ": " + what);
}

template <typename T>
T parse_number(const Token& tok, const std::string& source, std::size_t line, const char* what) {
    T value{};
    const char* first = tok.text.data();
    const char* last = first + tok.text.size();
    if (!tok.text.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        parse_fail(source, line, tok.column, std::string("expected ") + what + ", got '" +
                                                 std::string(tok.text) + "'");
    }
    return value;
}

}  // namespace detail

inline SignedGraph parse_network(std::istream& in, const std::string& source = "<input>") {
    std::string raw;
    std::size_t line_no = 0;
    bool have_header = false;
    long long n = 0, m = 0;
    std::size_t header_line = 0;
    std::vector<Edge> edges;
    std::vector<std::size_t> edge_lines;

    while (std::getline(in, raw)) {
        ++line_no;
        const auto tokens = detail::tokenize(raw);
        if (tokens.empty() || tokens.front().text.front() == '#') continue;
        if (!have_header) {
            if (tokens.size() != 2) {
                detail::parse_fail(source, line_no, tokens.front().column,
                                   "header must be \"n m\"");
            }
            n = detail::parse_number<long long>(tokens[0], source, line_no, "node count");
            m = detail::parse_number<long long>(tokens[1], source, line_no, "edge count");
            if (n < 0 || m < 0) detail::parse_fail(source, line_no, 1, "negative count in header");
            have_header = true;
            header_line = line_no;
            continue;
        }
        if (tokens.size() != 3) {
            detail::parse_fail(source, line_no, tokens.front().column, "edge line must be \"i j w\"");
        }
        if (static_cast<long long>(edges.size()) >= m) {
            detail::parse_fail(source, line_no, tokens.front().column,
                               "more edge lines than the " + std::to_string(m) + " declared");
        }
        const auto i = detail::parse_number<long long>(tokens[0], source, line_no, "node id");
        const auto j = detail::parse_number<long long>(tokens[1], source, line_no, "node id");
        const auto w = detail::parse_number<double>(tokens[2], source, line_no, "weight");
        if (i < 0 || i >= n) detail::parse_fail(source, line_no, tokens[0].column, "node id out of range");
        if (j < 0 || j >= n) detail::parse_fail(source, line_no, tokens[1].column, "node id out of range");
        edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), w});
        edge_lines.push_back(line_no);
    }
    if (!have_header) detail::parse_fail(source, line_no + 1, 1, "missing \"n m\" header");
    if (static_cast<long long>(edges.size()) != m) {
        detail::parse_fail(source, line_no + 1, 1,
                           "declared " + std::to_string(m) + " edges, found " +
                               std::to_string(edges.size()));
    }
    try {
        return SignedGraph::from_edge_list(static_cast<std::size_t>(n), edges);
    } catch (const Error& e) {
        // locate the offending line for the message
        std::size_t at = header_line;
        for (std::size_t k = 0; k < edges.size(); ++k) {
            const Edge& ek = edges[k];
            bool bad = ek.i == ek.j || ek.w == 0.0;
            for (std::size_t q = 0; q < k && !bad; ++q) {
                bad = std::min(edges[q].i, edges[q].j) == std::min(ek.i, ek.j) &&
                      std::max(edges[q].i, edges[q].j) == std::max(ek.i, ek.j);
            }
            if (bad) {
                at = edge_lines[k];
                break;
            }
        }
        detail::parse_fail(source, at, 1, e.what());
    }
}

inline SignedGraph load_network(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    return parse_network(in, path.string());
}

// Weights printed with 17 significant digits so a reload is exact.
inline void write_network(std::ostream& os, const SignedGraph& g) {
    os << g.node_count() << ' ' << g.edge_count() << '\n';
    char buf[40];
    for (const Edge& e : g.edges()) {
        std::snprintf(buf, sizeof buf, "%.17g", e.w);
        os << e.i << ' ' << e.j << ' ' << buf << '\n';
    }
}

inline void save_network(const std::filesystem::path& path, const SignedGraph& g) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    write_network(out, g);
}

struct EdgeWeights {
    double coop = 10.0;
    double intra_neg = -1.0;
    double inter_neg = -10.0;
};

// Keeps the sign structure of g and replaces magnitudes by edge class
// relative to b.
inline SignedGraph relabel_weights(const SignedGraph& g, const Bipartition& b,
                                   const EdgeWeights& weights) {
    std::vector<Edge> edges;
    edges.reserve(g.edge_count());
    for (const Edge& e : g.edges()) {
        double w = weights.coop;
        if (e.w < 0.0) w = b.same_side(e.i, e.j) ? weights.intra_neg : weights.inter_neg;
        edges.push_back({e.i, e.j, w});
    }
    return SignedGraph::from_edge_list(g.node_count(), edges);
}

inline constexpr const char* highland_dataset_file = "highland_tribes.txt";

inline std::filesystem::path dataset_dir() {
    if (const char* env = std::getenv("GQSB_DATA_DIR"); env && *env) return env;
    return GQSB_DEFAULT_DATA_DIR;
}

inline std::filesystem::path highland_dataset_path() {
    return dataset_dir() / highland_dataset_file;
}

// The ±1 sign structure of the Gahuku-Gama alliance network.
inline SignedGraph load_highland_signs() {
    const auto path = highland_dataset_path();
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
        throw Error(ErrorCode::MissingDataset, "Highland Tribes dataset not found at " + path.string() +
                                                   " (set GQSB_DATA_DIR)");
    }
    return load_network(path);
}

// Tribe names in dataset order, read from the "# <id> <NAME>" comment lines.
inline std::vector<std::string> highland_tribe_names() {
    std::ifstream in(highland_dataset_path());
    std::vector<std::string> names;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string hash, name;
        std::size_t id = 0;
        if (ls >> hash && hash == "#" && ls >> id >> name && id == names.size()) {
            names.push_back(name);
        }
    }
    return names;
}

}  // namespace gqsb

#endif  // GQSB_IO_HPP
