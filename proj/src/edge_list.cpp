#include "hamcond/edge_list.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "hamcond/error.hpp"

namespace hamcond {
namespace {

[[noreturn]] void fail(ErrorCode code, std::size_t line, const std::string& what) {
  throw Error(code, "line " + std::to_string(line) + ": " + what);
}

bool next_content_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

}  // namespace

Digraph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_content_line(in, line, line_no)) fail(ErrorCode::ParseError, line_no + 1, "missing header `n m`");

  long long n = -1, m = -1;
  {
    std::istringstream header(line);
    std::string extra;
    if (!(header >> n >> m) || (header >> extra) || n < 0 || m < 0 || n > 0xffffffffLL) {
      fail(ErrorCode::ParseError, line_no, "expected header `n m` with non-negative integers");
    }
  }

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  std::set<std::pair<Vertex, Vertex>> seen;
  for (long long j = 0; j < m; ++j) {
    if (!next_content_line(in, line, line_no)) {
      fail(ErrorCode::ParseError, line_no + 1,
           "expected " + std::to_string(m) + " edges, found " + std::to_string(j));
    }
    std::istringstream row(line);
    long long u = -1, v = -1;
    std::string extra;
    if (!(row >> u >> v) || (row >> extra)) fail(ErrorCode::ParseError, line_no, "expected `u v`");
    if (u < 0 || v < 0 || u >= n || v >= n) fail(ErrorCode::ParseError, line_no, "vertex id out of range");
    if (u == v) fail(ErrorCode::LoopPresent, line_no, "loop at " + std::to_string(u));
    const auto key = std::pair{static_cast<Vertex>(u), static_cast<Vertex>(v)};
    if (!seen.insert(key).second) {
      fail(ErrorCode::ParallelPresent, line_no,
           "duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    }
    edges.push_back({key.first, key.second});
  }
  if (next_content_line(in, line, line_no)) fail(ErrorCode::ParseError, line_no, "more edges than the header declares");
  return Digraph(static_cast<Vertex>(n), std::move(edges));
}

Digraph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Digraph& d) {
  out << d.vertex_count() << ' ' << d.edge_count() << '\n';
  for (const Edge e : d.edges()) out << e.tail << ' ' << e.head << '\n';
}

}  // namespace hamcond
