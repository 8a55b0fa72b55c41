#include "hamcond/parameters.hpp"

#include <algorithm>
#include <cmath>

#include "hamcond/error.hpp"

namespace hamcond {

std::string_view to_string(Profile profile) noexcept {
  return profile == Profile::Paper ? "paper" : "desk";
}

Profile parse_profile(std::string_view text) {
  if (text == "paper") return Profile::Paper;
  if (text == "desk") return Profile::Desk;
  throw Error(ErrorCode::InvalidArgument, "unknown profile '" + std::string(text) + "' (use paper|desk)");
}

namespace {

std::size_t to_count(double x, std::size_t lo) {
  if (!(x > static_cast<double>(lo))) return lo;
  return static_cast<std::size_t>(x);
}

Parameters common(Profile profile, Vertex n, std::size_t m) {
  Parameters p;
  p.profile = profile;
  p.n = n;
  p.m = m;
  const double ln = std::log(std::max<double>(n, 3.0));
  const double lnln = std::max(std::log(ln), 0.1);
  p.max_degree_bound = ln * ln;
  p.working_degree_bound = 6.0 * ln;
  p.i0 = static_cast<std::uint32_t>(std::ceil(1.5 * ln));
  p.ell0 = std::max(1.0, ln / (20.0 * lnln));
  p.w_cap = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::pow(n, 0.75))));
  p.j1 = std::min(m, to_count(std::floor(n * ln / 5.0), 1));
  p.n0 = std::min<std::size_t>(n, std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(n / std::sqrt(ln)))));
  p.nu = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n)) * ln)));
  p.small_degree = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::floor(ln / 100.0)));
  return p;
}

}  // namespace

Parameters Parameters::paper(Vertex n, std::size_t m) {
  Parameters p = common(Profile::Paper, n, m);
  const double ln = std::log(std::max<double>(n, 3.0));
  p.d_min = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::floor(ln / 100.0)));
  p.core_degree = p.d_min;
  p.partition_rule = PartitionRule::PrefixCount;
  return p;
}

Parameters Parameters::desk(Vertex n, std::size_t m) {
  Parameters p = common(Profile::Desk, n, m);
  const double ln = std::log(std::max<double>(n, 3.0));
  p.d_min = std::max<std::uint32_t>(3, static_cast<std::uint32_t>(std::floor(ln / 6.0)));
  p.core_degree = 1;
  p.partition_rule = PartitionRule::TopUp;
  p.j1 = std::min<std::size_t>(m, std::max<std::size_t>(1, n));
  // At m ~ 6n three disjoint classes leave K2 with out-degree ~1.5, too thin
  // to grow rotation trees; both later phases draw from every late edge.
  p.share_late_edges = true;
  p.n0 = std::min<std::size_t>(n, std::max<std::size_t>(3, (n + 4) / 5));
  p.w_cap = std::max<std::size_t>(1, n);
  return p;
}

Parameters Parameters::for_profile(Profile profile, Vertex n, std::size_t m) {
  return profile == Profile::Paper ? paper(n, m) : desk(n, m);
}

void Parameters::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::InvalidArgument, std::string("parameter invariant violated: ") + what);
  };
  require(n > 0, "n > 0");
  require(d_min >= 1 && core_degree >= 1, "d_min, core_degree >= 1");
  require(e2_share > 0 && e2_share < 1, "0 < e2_share < 1");
  require(j1 >= 1 && j1 <= m, "1 <= j1 <= m");
  require(n0 >= 1 && n0 <= n, "1 <= n0 <= n");
  require(nu >= 1 && i0 >= 1 && w_cap >= 1, "nu, i0, w_cap positive");
  require(max_degree_bound > 0 && working_degree_bound > 0 && ell0 > 0, "degree bounds positive");
}

}  // namespace hamcond
