#include "hamcond/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <unordered_map>

#include "hamcond/error.hpp"

namespace hamcond {

double truncated_poisson_mean(double z) {
  if (z <= 0) return 1.0;
  if (z < 1e-8) return 1.0 + z / 2.0;
  return z / -std::expm1(-z);
}

double truncated_poisson_variance(double z) {
  if (z <= 0) return 0.0;
  // z e^z (e^z - 1 - z) / (e^z - 1)^2 rewritten with e^{-z} to avoid overflow.
  const double em1 = -std::expm1(-z);  // 1 - e^{-z}
  double numerator;
  if (z < 1e-4) {
    // e^z - 1 - z = z^2/2 + z^3/6 + ..., times e^{-z}
    numerator = (z * z / 2.0 + z * z * z / 6.0) * std::exp(-z);
  } else {
    numerator = em1 - z * std::exp(-z);
  }
  return z * numerator / (em1 * em1);
}

TruncatedPoissonModel solve_z(double rho, double tol) {
  if (!(rho > 1.0) || !std::isfinite(rho)) {
    throw Error(ErrorCode::DomainError, "solve_z requires rho > 1, got " + std::to_string(rho));
  }
  double lo = std::max(rho - 1.0, 0.0);
  double hi = rho;
  double z = 0.5 * (lo + hi);
  bool converged = false;
  for (int iter = 0; iter < 400; ++iter) {
    z = 0.5 * (lo + hi);
    const double f = truncated_poisson_mean(z);
    if (std::abs(f - rho) <= tol) {
      converged = true;
      break;
    }
    (f < rho ? lo : hi) = z;
    if (hi - lo <= 0) break;
  }
  if (!converged) {
    if (std::abs(truncated_poisson_mean(z) - rho) > tol) {
      throw Error(ErrorCode::NonConvergence, "bisection for z did not reach tolerance");
    }
  }
  return {rho, z, truncated_poisson_variance(z)};
}

double trunc_poisson_pmf(long long k, double z) {
  if (k < 1) throw Error(ErrorCode::DomainError, "pmf requires k >= 1");
  if (!(z > 0)) throw Error(ErrorCode::DomainError, "pmf requires z > 0");
  const double kk = static_cast<double>(k);
  return std::exp(kk * std::log(z) - std::lgamma(kk + 1.0) - std::log(std::expm1(z)));
}

TruncatedPoissonSampler::TruncatedPoissonSampler(double z) : z_(z) {
  if (!(z > 0)) throw Error(ErrorCode::DomainError, "sampler requires z > 0");
  pmf_.push_back(0.0);
  cdf_.push_back(0.0);
  double total = 0.0;
  // Stop once the remaining tail is below double resolution.
  for (std::uint32_t k = 1;; ++k) {
    const double p = trunc_poisson_pmf(k, z);
    pmf_.push_back(p);
    total += p;
    cdf_.push_back(total);
    pmf_max_ = std::max(pmf_max_, p);
    if (static_cast<double>(k) > z && (p < 1e-18 || total >= 1.0)) break;
  }
  cdf_.back() = 1.0;
  guide_.resize(4 * pmf_.size());
  std::uint32_t k = 1;
  for (std::size_t b = 0; b < guide_.size(); ++b) {
    const double lo = static_cast<double>(b) / static_cast<double>(guide_.size());
    while (cdf_[k] <= lo) ++k;
    guide_[b] = k;
  }
}

std::uint32_t TruncatedPoissonSampler::operator()(Rng& rng) const {
  // Inversion started from a guide table: O(1) expected steps.
  const double u = rng.uniform();
  auto k = guide_[static_cast<std::size_t>(u * static_cast<double>(guide_.size()))];
  while (cdf_[k] <= u) ++k;
  return k;
}

double TruncatedPoissonSampler::pmf(std::uint32_t k) const {
  if (k == 0) return 0.0;
  if (k < pmf_.size()) return pmf_[k];
  return trunc_poisson_pmf(k, z_);
}

std::uint32_t sample_truncated_poisson(const TruncatedPoissonModel& model, Rng& rng) {
  return TruncatedPoissonSampler(model.z)(rng);
}

namespace {

// Exact law of Z_1 + ... + Z_j for j <= k, over sums 0..k * kmax.
struct TailSums {
  std::size_t block = 1;
  std::uint32_t kmax = 1;
  std::vector<std::vector<double>> p;  // p[j][s] = P(S_j = s)
  double p_max = 0;                    // max_s p[block][s]

  TailSums(const TruncatedPoissonSampler& sampler, std::size_t k) : block(k), kmax(sampler.max_value()) {
    const std::size_t width = block * kmax + 1;
    p.assign(block + 1, std::vector<double>(width, 0.0));
    p[0][0] = 1.0;
    for (std::size_t j = 1; j <= block; ++j) {
      for (std::size_t s = j; s <= j * kmax; ++s) {
        double acc = 0;
        for (std::uint32_t x = 1; x <= kmax && x <= s; ++x) acc += sampler.pmf(x) * p[j - 1][s - x];
        p[j][s] = acc;
      }
    }
    p_max = *std::max_element(p[block].begin(), p[block].end());
  }
};

}  // namespace

std::vector<std::uint32_t> sample_conditioned_vector(Vertex n, std::size_t m, const TruncatedPoissonSampler& sampler,
                                                     Rng& rng, std::size_t attempt_cap) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "n must be positive");
  if (m < n) throw Error(ErrorCode::InvalidArgument, "m must be at least n");
  std::vector<std::uint32_t> values(n);
  // Draw the first n - K coordinates freely, accept with probability
  // P(S_K = rest) / max_t P(S_K = t), then draw the last K from their exact
  // law given the rest. The accepted vector has law proportional to
  // prod pmf(values) on {sum = m}: the conditioned law. Acceptance is
  // about sqrt(K / n); K = 1 is plain last-coordinate rejection.
  const std::size_t block = n >= 2048 ? 64 : 1;
  const TailSums tail(sampler, block);
  const std::size_t head = n - block;
  const std::size_t budget = m - block;  // the tail needs at least K
  for (std::size_t attempt = 0; attempt < attempt_cap; ++attempt) {
    std::size_t sum = 0;
    bool overshoot = false;
    for (std::size_t i = 0; i < head; ++i) {
      values[i] = sampler(rng);
      sum += values[i];
      if (sum > budget) {
        overshoot = true;
        break;
      }
    }
    if (overshoot) continue;
    std::size_t rest = m - sum;
    if (rest >= tail.p[block].size()) continue;
    if (!(rng.uniform() * tail.p_max < tail.p[block][rest])) continue;
    for (std::size_t j = block; j >= 2; --j) {
      // P(x) = pmf(x) P(S_{j-1} = rest - x) / P(S_j = rest)
      double u = rng.uniform() * tail.p[j][rest];
      std::uint32_t x = 1;
      for (;; ++x) {
        const double w = sampler.pmf(x) * tail.p[j - 1][rest - x];
        if (u < w || x == tail.kmax || rest - x == j - 1) break;
        u -= w;
      }
      values[n - j] = x;
      rest -= x;
    }
    values[n - 1] = static_cast<std::uint32_t>(rest);
    return values;
  }
  throw Error(ErrorCode::AttemptCapExceeded,
              "no degree vector summing to " + std::to_string(m) + " after " + std::to_string(attempt_cap) +
                  " attempts");
}

DegreeSequence sample_degree_sequence(Vertex n, std::size_t m, const TruncatedPoissonModel& model, Rng& rng,
                                      std::size_t attempt_cap) {
  if (m == n) return {std::vector<std::uint32_t>(n, 1), std::vector<std::uint32_t>(n, 1)};
  const TruncatedPoissonSampler sampler(model.z);
  DegreeSequence deg;
  deg.out = sample_conditioned_vector(n, m, sampler, rng, attempt_cap);
  deg.in = sample_conditioned_vector(n, m, sampler, rng, attempt_cap);
  return deg;
}

EdgeSequence assemble_sequence(const DegreeSequence& deg, Rng& rng) {
  const auto n = static_cast<Vertex>(deg.out.size());
  const std::size_t m = std::accumulate(deg.out.begin(), deg.out.end(), std::size_t{0});
  if (deg.in.size() != n || std::accumulate(deg.in.begin(), deg.in.end(), std::size_t{0}) != m) {
    throw Error(ErrorCode::InvalidArgument, "out- and in-degree vectors disagree");
  }
  std::vector<Vertex> tails, heads;
  tails.reserve(m);
  heads.reserve(m);
  for (Vertex v = 0; v < n; ++v) {
    tails.insert(tails.end(), deg.out[v], v);
    heads.insert(heads.end(), deg.in[v], v);
  }
  rng.shuffle(std::span(tails));
  rng.shuffle(std::span(heads));
  EdgeSequence seq{n, std::vector<Vertex>(2 * m)};
  for (std::size_t j = 0; j < m; ++j) {
    seq.slots[2 * j] = tails[j];
    seq.slots[2 * j + 1] = heads[j];
  }
  return seq;
}

void apply_p_switch(EdgeSequence& seq, std::size_t i, std::size_t j) {
  const Vertex head_i = seq.slots[2 * i + 1];
  seq.slots[2 * i + 1] = seq.slots[2 * j];
  seq.slots[2 * j] = head_i;
}

void apply_l_switch(EdgeSequence& seq, std::size_t i, std::size_t j) {
  std::swap(seq.slots[2 * i], seq.slots[2 * j]);
}

EdgeSequence p_switch(const EdgeSequence& seq, std::size_t i, std::size_t j) {
  const std::size_t m = seq.edge_count();
  if (i >= m || j >= m || i == j || seq.edge(i) != seq.edge(j) || seq.tail(i) == seq.head(i)) {
    throw Error(ErrorCode::NotParallelPair,
                "edges " + std::to_string(i) + " and " + std::to_string(j) + " are not a parallel pair");
  }
  EdgeSequence out = seq;
  apply_p_switch(out, i, j);
  return out;
}

EdgeSequence l_switch(const EdgeSequence& seq, std::size_t i, std::size_t j) {
  const std::size_t m = seq.edge_count();
  if (i >= m || seq.tail(i) != seq.head(i)) {
    throw Error(ErrorCode::NotLoop, "edge " + std::to_string(i) + " is not a loop");
  }
  if (j >= m || seq.tail(j) == seq.head(j)) {
    throw Error(ErrorCode::TargetIsLoop, "edge " + std::to_string(j) + " is a loop");
  }
  EdgeSequence out = seq;
  apply_l_switch(out, i, j);
  return out;
}

namespace {

std::uint64_t edge_key(Vertex u, Vertex v) { return (static_cast<std::uint64_t>(u) << 32) | v; }

}  // namespace

namespace {

// Out-lists with fixed lengths: L-switches preserve out-degrees, so each
// switch rewrites one target in place.
class OutLists {
 public:
  explicit OutLists(const EdgeSequence& seq) : offsets_(seq.n + 1, 0), targets_(seq.edge_count()) {
    for (std::size_t j = 0; j < seq.edge_count(); ++j) ++offsets_[seq.tail(j) + 1];
    for (Vertex v = 0; v < seq.n; ++v) offsets_[v + 1] += offsets_[v];
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t j = 0; j < seq.edge_count(); ++j) targets_[fill[seq.tail(j)]++] = seq.head(j);
  }
  bool has(Vertex u, Vertex v) const {
    return std::find(begin(u), end(u), v) != end(u);
  }
  void replace(Vertex u, Vertex from, Vertex to) { *std::find(begin(u), end(u), from) = to; }

 private:
  std::vector<Vertex>::const_iterator begin(Vertex u) const {
    return targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[u]);
  }
  std::vector<Vertex>::const_iterator end(Vertex u) const {
    return targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[u + 1]);
  }
  std::vector<Vertex>::iterator begin(Vertex u) { return targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[u]); }
  std::vector<Vertex>::iterator end(Vertex u) { return targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[u + 1]); }

  std::vector<std::size_t> offsets_;
  std::vector<Vertex> targets_;
};

}  // namespace

SanitizeResult sanitize(const EdgeSequence& input, Rng& rng) {
  SanitizeResult result{input, 0, 0, 0};
  EdgeSequence& seq = result.sequence;
  const Defects defects = detect_defects(seq);
  if (defects.empty()) return result;
  const std::size_t m = seq.edge_count();

  // P-switch every parallel pair; a pair is unique once multiplicity <= 2.
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> copies;
  for (std::size_t j : defects.multis) {
    if (seq.tail(j) != seq.head(j)) copies[edge_key(seq.tail(j), seq.head(j))].push_back(j);
  }
  for (std::size_t j : defects.multis) {
    const Vertex x = seq.tail(j), y = seq.head(j);
    if (x == y) continue;  // repeated loops are removed by L-switches
    const auto it = copies.find(edge_key(x, y));
    if (it == copies.end() || it->second.front() != j) continue;
    if (it->second.size() > 2) {
      throw Error(ErrorCode::SanitizeStalled, "edge (" + std::to_string(x) + "," + std::to_string(y) +
                                                  ") repeated more than twice; resample");
    }
    apply_p_switch(seq, it->second[0], it->second[1]);
    ++result.p_switches;
  }

  std::vector<std::size_t> loops;
  std::vector<std::size_t> plain;  // non-loop edge indices
  for (std::size_t j = 0; j < m; ++j) {
    if (seq.tail(j) == seq.head(j)) {
      loops.push_back(j);
    } else {
      plain.push_back(j);
    }
  }
  if (plain.empty() && !loops.empty()) {
    throw Error(ErrorCode::SanitizeStalled, "every edge is a loop; resample");
  }
  OutLists out(seq);

  // Result edges (a,x) and (x,b); neither may be a loop or repeat an edge.
  auto allowed = [&](Vertex x, Vertex a, Vertex b) { return a != x && b != x && !out.has(a, x) && !out.has(x, b); };
  // A state without any allowed switch can only run into the cap, so it is
  // declared stalled as soon as a run of rejections reveals it.
  auto dead_end = [&] {
    for (std::size_t i : loops) {
      for (std::size_t j : plain) {
        if (allowed(seq.tail(i), seq.tail(j), seq.head(j))) return false;
      }
    }
    return true;
  };

  const std::size_t cap = 10'000 * std::max<std::size_t>(1, defects.loops.size() + 2 * defects.multis.size());
  std::size_t attempts = 0, run = 0;
  while (!loops.empty()) {
    if (++attempts > cap) throw Error(ErrorCode::SanitizeStalled, "L-switch attempts exceeded cap; resample");
    const std::size_t slot = rng.below(loops.size());
    const std::size_t i = loops[slot];
    const std::size_t j = plain[rng.below(plain.size())];
    const Vertex x = seq.tail(i), a = seq.tail(j), b = seq.head(j);
    if (!allowed(x, a, b)) {
      ++result.rejected;
      if (++run % 64 == 0 && dead_end()) {
        throw Error(ErrorCode::SanitizeStalled, "no L-switch can remove the remaining loops; resample");
      }
      continue;
    }
    run = 0;
    apply_l_switch(seq, i, j);
    out.replace(a, b, x);
    out.replace(x, x, b);
    // i stops being a loop and becomes a plain edge.
    loops[slot] = loops.back();
    loops.pop_back();
    plain.push_back(i);
    ++result.l_switches;
  }
  return result;
}

Diagnostics measure_diagnostics(const EdgeSequence& seq, std::uint32_t small_degree) {
  Diagnostics d;
  const auto out = out_degrees(seq);
  const auto in = in_degrees(seq);
  for (Vertex v = 0; v < seq.n; ++v) {
    const std::uint32_t total = out[v] + in[v];
    d.delta = std::max(d.delta, total);
    d.s1 += static_cast<std::uint64_t>(out[v]) * (out[v] > 0 ? out[v] - 1 : 0);
    if (total <= small_degree) ++d.small;
  }
  const Defects defects = detect_defects(seq);
  d.loops = defects.loops.size();
  d.multis = defects.multis.size();
  return d;
}

SampledDigraph sample_simple_digraph(Vertex n, std::size_t m, Rng& rng, const Parameters& params,
                                     std::size_t max_retries) {
  if (n == 0 || m < n) throw Error(ErrorCode::InvalidArgument, "sampling requires m >= n >= 1");
  if (m > static_cast<std::size_t>(n) * (n - 1)) {
    throw Error(ErrorCode::InvalidArgument, "m exceeds n(n-1)");
  }
  TruncatedPoissonModel model{1.0, 0.0, 0.0};
  if (m > n) model = solve_z(static_cast<double>(m) / n);
  for (std::size_t retry = 0;; ++retry) {
    try {
      const DegreeSequence deg = sample_degree_sequence(n, m, model, rng);
      const EdgeSequence raw = assemble_sequence(deg, rng);
      Diagnostics diag = measure_diagnostics(raw, params.small_degree);
      SanitizeResult clean = sanitize(raw, rng);
      diag.switches = clean.switch_count();
      return {build_digraph(clean.sequence), diag, model, retry};
    } catch (const Error& e) {
      const bool retryable = e.code() == ErrorCode::SanitizeStalled || e.code() == ErrorCode::AttemptCapExceeded;
      if (!retryable || retry >= max_retries) throw;
    }
  }
}

std::vector<double> truncated_poisson_sum_distribution(Vertex n, double z, std::size_t max_sum) {
  std::vector<double> pmf(max_sum + 1, 0.0);
  for (std::size_t k = 1; k <= max_sum; ++k) {
    pmf[k] = trunc_poisson_pmf(static_cast<long long>(k), z);
    if (static_cast<double>(k) > z && pmf[k] < 1e-300) break;
  }
  std::vector<double> dist(max_sum + 1, 0.0);
  dist[0] = 1.0;
  std::vector<double> next(max_sum + 1);
  for (Vertex step = 1; step <= n; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    // After `step` summands the sum is at least `step`.
    for (std::size_t s = step - 1; s <= max_sum; ++s) {
      if (dist[s] == 0.0) continue;
      for (std::size_t k = 1; s + k <= max_sum; ++k) {
        if (pmf[k] == 0.0 && static_cast<double>(k) > z) break;
        next[s + k] += dist[s] * pmf[k];
      }
    }
    dist.swap(next);
  }
  return dist;
}

double local_clt_probability(Vertex n, std::size_t m, const TruncatedPoissonModel& model) {
  if (m < n) return 0.0;
  return truncated_poisson_sum_distribution(n, model.z, m)[m];
}

double local_clt_approximation(Vertex n, const TruncatedPoissonModel& model) {
  return 1.0 / (std::sqrt(model.sigma2) * std::sqrt(2.0 * std::numbers::pi * n));
}

}  // namespace hamcond
