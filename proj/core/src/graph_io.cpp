#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gwcut/error.hpp"
#include "gwcut/graph.hpp"

namespace gwcut {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + what);
}

std::uint64_t parse_count(std::string_view tok, std::size_t line_no) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    parse_fail(line_no, "expected a non-negative integer, got '" + std::string(tok) + "'");
  }
  return value;
}

double parse_weight(std::string_view tok, std::size_t line_no) {
  // std::from_chars for double is not available in every libstdc++ we target.
  std::string s(tok);
  char* end = nullptr;
  const double w = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) parse_fail(line_no, "bad weight '" + s + "'");
  return w;
}

}  // namespace

Graph parse_graph(std::string_view text) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool have_header = false;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::vector<Edge> edges;

  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    auto toks = split_ws(line);
    if (toks.empty() || toks.front().front() == '#') {
      if (eol == text.size()) break;
      continue;
    }
    if (!have_header) {
      if (toks.size() != 2) parse_fail(line_no, "header must be 'N M'");
      n = parse_count(toks[0], line_no);
      m = parse_count(toks[1], line_no);
      if (n == 0) parse_fail(line_no, "node count must be positive");
      have_header = true;
      edges.reserve(m);
    } else {
      if (edges.size() == m) parse_fail(line_no, "more edge lines than declared");
      if (toks.size() != 2 && toks.size() != 3) parse_fail(line_no, "edge line must be 'u v [w]'");
      const std::uint64_t u = parse_count(toks[0], line_no);
      const std::uint64_t v = parse_count(toks[1], line_no);
      if (u < 1 || v < 1 || u > n || v > n) {
        throw Error(ErrorCode::IndexOutOfRange, "line " + std::to_string(line_no) + ": node id out of 1.." +
                                                    std::to_string(n));
      }
      const double w = toks.size() == 3 ? parse_weight(toks[2], line_no) : 1.0;
      edges.push_back({static_cast<NodeId>(u - 1), static_cast<NodeId>(v - 1), w});
    }
    if (eol == text.size()) break;
  }
  if (!have_header) parse_fail(line_no, "missing 'N M' header");
  if (edges.size() != m) {
    parse_fail(line_no, "declared " + std::to_string(m) + " edges, found " + std::to_string(edges.size()));
  }
  return Graph::from_edge_list(n, std::move(edges));
}

Graph read_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

std::string format_graph(const Graph& g) {
  std::string out = std::to_string(g.num_nodes()) + " " + std::to_string(g.num_edges()) + "\n";
  char wbuf[40];
  for (const Edge& e : g.edges()) {
    out += std::to_string(e.u + 1);
    out += ' ';
    out += std::to_string(e.v + 1);
    out += ' ';
    std::snprintf(wbuf, sizeof wbuf, "%.17g", e.w);
    out += wbuf;
    out += '\n';
  }
  return out;
}

void write_graph(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << format_graph(g);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace gwcut
