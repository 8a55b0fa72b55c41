#pragma once

#include <iosfwd>
#include <string>

#include "hamcond/graph.hpp"

namespace hamcond {

/// Text format: header `n m`, then m lines `u v` (0-indexed). Loops,
/// duplicates, out-of-range ids and count mismatches raise Error with the
/// offending line number.
Digraph read_edge_list(std::istream& in);
Digraph read_edge_list_file(const std::string& path);

void write_edge_list(std::ostream& out, const Digraph& d);

}  // namespace hamcond
