#ifndef ISD_GRAPH_IO_HPP
#define ISD_GRAPH_IO_HPP

#include <cctype>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "isd/graph.hpp"

namespace isd {

enum class GraphFormat { graph6, edge_list, json };

class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, std::size_t byte_offset)
      : std::runtime_error(what + " (byte " + std::to_string(byte_offset) + ")"),
        offset_(byte_offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// ---------------------------------------------------------------------------
// graph6 (McKay's format): short form for n <= 62, 3-byte long form beyond.
// ---------------------------------------------------------------------------

namespace detail {
inline int g6_byte(std::string_view s, std::size_t i) {
  if (i >= s.size()) throw parse_error("graph6: truncated input", s.size());
  unsigned char c = static_cast<unsigned char>(s[i]);
  if (c < 63 || c > 126) throw parse_error("graph6: byte out of range 63..126", i);
  return c - 63;
}
}  // namespace detail

inline Graph parse_graph6(std::string_view s) {
  // tolerate the optional ">>graph6<<" header and a trailing newline
  constexpr std::string_view header = ">>graph6<<";
  std::size_t base = 0;
  if (s.substr(0, header.size()) == header) base = header.size();
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() <= base) throw parse_error("graph6: empty input", base);

  std::size_t i = base;
  long n = 0;
  if (static_cast<unsigned char>(s[i]) == 126) {
    ++i;
    if (i < s.size() && static_cast<unsigned char>(s[i]) == 126)
      throw parse_error("graph6: 6-byte order form not supported", i);
    n = 0;
    for (int k = 0; k < 3; ++k) n = (n << 6) | detail::g6_byte(s, i + static_cast<std::size_t>(k));
    i += 3;
  } else {
    n = detail::g6_byte(s, i);
    ++i;
  }
  if (n > 3'000'000) throw parse_error("graph6: vertex count implausibly large", base);

  Graph g(static_cast<int>(n));
  int have = 0, bits = 0;
  for (int v = 1; v < n; ++v) {
    for (int u = 0; u < v; ++u) {
      if (have == 0) {
        bits = detail::g6_byte(s, i);
        ++i;
        have = 6;
      }
      if (bits & (1 << (have - 1))) g.add_edge(u, v);
      --have;
    }
  }
  if (i != s.size()) throw parse_error("graph6: trailing bytes after encoding", i);
  return g;
}

inline std::string write_graph6(const Graph& g) {
  long n = g.n();
  std::string out;
  if (n <= 62) {
    out.push_back(static_cast<char>(n + 63));
  } else if (n <= 258047) {
    out.push_back(126);
    out.push_back(static_cast<char>(((n >> 12) & 63) + 63));
    out.push_back(static_cast<char>(((n >> 6) & 63) + 63));
    out.push_back(static_cast<char>((n & 63) + 63));
  } else {
    throw std::invalid_argument("graph6: graph too large for the 3-byte order form");
  }
  int have = 0, bits = 0;
  for (int v = 1; v < n; ++v) {
    for (int u = 0; u < v; ++u) {
      bits = (bits << 1) | (g.has_edge(u, v) ? 1 : 0);
      if (++have == 6) {
        out.push_back(static_cast<char>(bits + 63));
        have = 0;
        bits = 0;
      }
    }
  }
  if (have > 0) out.push_back(static_cast<char>((bits << (6 - have)) + 63));
  return out;
}

// ---------------------------------------------------------------------------
// Edge list: header line "n m", then m lines "u v" (0-based).
// ---------------------------------------------------------------------------

inline Graph parse_edge_list(std::string_view s) {
  std::istringstream in{std::string(s)};
  long long n = -1, m = -1;
  if (!(in >> n >> m)) throw parse_error("edge-list: missing 'n m' header", 0);
  if (n < 0 || m < 0) throw parse_error("edge-list: negative header values", 0);
  Graph g(static_cast<int>(n));
  auto offset_of = [&in, &s]() {
    auto pos = in.tellg();
    return pos < 0 ? s.size() : static_cast<std::size_t>(pos);
  };
  for (long long k = 0; k < m; ++k) {
    long long u, v;
    if (!(in >> u >> v))
      throw parse_error("edge-list: expected " + std::to_string(m) + " edges, got " + std::to_string(k),
                        offset_of());
    std::size_t off = offset_of();
    if (u < 0 || u >= n || v < 0 || v >= n) throw parse_error("edge-list: vertex out of range", off);
    if (u == v) throw parse_error("edge-list: self-loop", off);
    if (g.has_edge(static_cast<int>(u), static_cast<int>(v)))
      throw parse_error("edge-list: duplicate edge", off);
    g.add_edge(static_cast<int>(u), static_cast<int>(v));
  }
  long long trailing;
  if (in >> trailing) throw parse_error("edge-list: trailing tokens", s.size());
  return g;
}

inline std::string write_edge_list(const Graph& g) {
  std::ostringstream out;
  out << g.n() << ' ' << g.m() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// JSON: {"n": int, "edges": [[u,v],...]}
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json graph_to_json(const Graph& g) {
  nlohmann::ordered_json j;
  j["n"] = g.n();
  auto& edges = j["edges"] = nlohmann::ordered_json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
  return j;
}

inline Graph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
    throw parse_error("json graph: expected object with 'n' and 'edges'", 0);
  long long n = j.at("n").get<long long>();
  if (n < 0) throw parse_error("json graph: negative n", 0);
  Graph g(static_cast<int>(n));
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw parse_error("json graph: edge is not a pair", 0);
    long long u = e[0].get<long long>(), v = e[1].get<long long>();
    if (u < 0 || u >= n || v < 0 || v >= n) throw parse_error("json graph: vertex out of range", 0);
    if (u == v) throw parse_error("json graph: self-loop", 0);
    if (g.has_edge(static_cast<int>(u), static_cast<int>(v)))
      throw parse_error("json graph: duplicate edge", 0);
    g.add_edge(static_cast<int>(u), static_cast<int>(v));
  }
  return g;
}

inline Graph parse_graph_json(std::string_view s) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(s);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("json graph: ") + e.what(), e.byte);
  }
  return graph_from_json(j);
}

// ---------------------------------------------------------------------------
// Front door
// ---------------------------------------------------------------------------

inline Graph load_graph(std::string_view bytes, GraphFormat format) {
  switch (format) {
    case GraphFormat::graph6: return parse_graph6(bytes);
    case GraphFormat::edge_list: return parse_edge_list(bytes);
    case GraphFormat::json: return parse_graph_json(bytes);
  }
  throw std::logic_error("load_graph: unknown format");
}

inline std::string save_graph(const Graph& g, GraphFormat format) {
  switch (format) {
    case GraphFormat::graph6: return write_graph6(g);
    case GraphFormat::edge_list: return write_edge_list(g);
    case GraphFormat::json: return graph_to_json(g).dump();
  }
  throw std::logic_error("save_graph: unknown format");
}

/// Heuristic sniffing for CLI convenience: JSON starts with '{', an edge list
/// starts with a digit, anything else is treated as graph6.
inline GraphFormat sniff_format(std::string_view bytes) {
  for (char c : bytes) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '{') return GraphFormat::json;
    if (std::isdigit(static_cast<unsigned char>(c))) return GraphFormat::edge_list;
    return GraphFormat::graph6;
  }
  return GraphFormat::graph6;
}

}  // namespace isd

#endif  // ISD_GRAPH_IO_HPP
