#include "hamcond/counting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/multiprecision/mpfr.hpp>

#include "hamcond/error.hpp"
#include "hamcond/oracle.hpp"
#include "hamcond/sampler.hpp"

namespace hamcond {

mpz_class surjections(std::size_t m, std::size_t n) {
  if (m < n) return 0;
  mpz_class total = 0, binom, power;
  for (std::size_t k = 0; k <= n; ++k) {
    mpz_bin_uiui(binom.get_mpz_t(), n, k);
    mpz_ui_pow_ui(power.get_mpz_t(), n - k, m);
    if (k % 2 == 0) {
      total += binom * power;
    } else {
      total -= binom * power;
    }
  }
  return total;
}

mpz_class stirling2(std::size_t m, std::size_t n) {
  // row[k] = S(i, k)
  std::vector<mpz_class> row(n + 1, 0);
  row[0] = 1;
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t k = std::min(i, n); k >= 1; --k) row[k] = row[k] * k + row[k - 1];
    row[0] = 0;
  }
  return row[n];
}

mpz_class exact_omega1(Vertex n, std::size_t m) {
  const mpz_class s = surjections(m, n);
  return s * s;
}

double log_of(const mpz_class& value) {
  if (sgn(value) <= 0) throw Error(ErrorCode::DomainError, "log of a non-positive integer");
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, value.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * std::numbers::ln2;
}

namespace {

// Allowed arc slots once S loses its out-arcs and T its in-arcs, |S & T| = k.
std::uint64_t allowed_slots(std::uint64_t n, std::uint64_t s, std::uint64_t t, std::uint64_t k) {
  return (n - s) * (n - t) - (n - s - t + k);
}

}  // namespace

mpz_class count_digraphs_exact(Vertex n, std::size_t m) {
  mpz_class total = 0, multinomial, binom, f;
  std::vector<mpz_class> fact(n + 1);
  fact[0] = 1;
  for (Vertex i = 1; i <= n; ++i) fact[i] = fact[i - 1] * i;
  for (std::uint64_t s = 0; s <= n; ++s) {
    for (std::uint64_t t = 0; t <= n; ++t) {
      const std::uint64_t k_lo = s + t > n ? s + t - n : 0;
      for (std::uint64_t k = k_lo; k <= std::min(s, t); ++k) {
        const std::uint64_t slots = allowed_slots(n, s, t, k);
        if (slots < m) continue;
        multinomial = fact[n] / (fact[k] * fact[s - k] * fact[t - k] * fact[n - s - t + k]);
        mpz_bin_uiui(binom.get_mpz_t(), slots, m);
        if ((s + t) % 2 == 0) {
          total += multinomial * binom;
        } else {
          total -= multinomial * binom;
        }
      }
    }
  }
  return total;
}

namespace {

using Real = boost::multiprecision::mpfr_float;

// log k! for k in [lo, top], grown downward on demand from one lgamma call.
class LogFactorialWindow {
 public:
  explicit LogFactorialWindow(std::uint64_t top) : top_(top) {
    values_.push_back(boost::multiprecision::lgamma(Real(top + 1)));
  }
  const Real& operator()(std::uint64_t k) {
    while (top_ + 1 - values_.size() > k) {
      const std::uint64_t have = top_ + 1 - values_.size();  // lowest stored argument
      values_.push_back(values_.back() - boost::multiprecision::log(Real(have)));
    }
    return values_[top_ - k];
  }

 private:
  std::uint64_t top_;
  std::vector<Real> values_;  // values_[i] = log (top - i)!
};

}  // namespace

double log_count_digraphs(Vertex n, std::size_t m) {
  const double dn = n, dm = static_cast<double>(m);
  // The signed sum lands near lead * P(all degrees >= 1), about
  // e^{-2n e^{-m/n}} below the leading term; precision and the dropping
  // threshold both scale with that cancellation.
  const double cancel = -2 * dn * std::log1p(-std::exp(-dm / dn)) + 10;
  const double drop = cancel + 60;
  const auto digits10 = static_cast<unsigned>((drop + 40) / std::log(10.0)) + 10;
  const auto saved = Real::default_precision();
  Real::default_precision(digits10);

  const std::uint64_t cells = static_cast<std::uint64_t>(n) * (n - 1);
  std::vector<Real> small(n + 1);
  small[0] = 0;
  for (Vertex k = 1; k <= n; ++k) small[k] = small[k - 1] + boost::multiprecision::log(Real(k));
  LogFactorialWindow upper(cells);
  LogFactorialWindow lower(cells - m);

  auto term_d = [&](double s, double t, double k, double slots) {
    return std::lgamma(dn + 1) - std::lgamma(k + 1) - std::lgamma(s - k + 1) - std::lgamma(t - k + 1) -
           std::lgamma(dn - s - t + k + 1) + std::lgamma(slots + 1) - std::lgamma(dm + 1) -
           std::lgamma(slots - dm + 1);
  };
  const double lead = term_d(0, 0, 0, static_cast<double>(cells));
  const Real lead_r = small[n] + upper(cells) - lower(cells - m) - boost::multiprecision::lgamma(Real(dm + 1));

  Real total = 0;
  for (std::uint64_t s = 0; s <= n; ++s) {
    bool any_s = false;
    for (std::uint64_t t = 0; t <= n; ++t) {
      const std::uint64_t k_lo = s + t > n ? s + t - n : 0;
      bool any_t = false;
      for (std::uint64_t k = k_lo; k <= std::min(s, t); ++k) {
        const std::uint64_t slots = allowed_slots(n, s, t, k);
        if (slots < m) continue;
        if (term_d(static_cast<double>(s), static_cast<double>(t), static_cast<double>(k),
                   static_cast<double>(slots)) < lead - drop) {
          continue;
        }
        any_t = true;
        const Real lt = small[n] - small[k] - small[s - k] - small[t - k] - small[n - s - t + k] + upper(slots) -
                        lower(slots - m) - boost::multiprecision::lgamma(Real(dm + 1));
        const Real term = boost::multiprecision::exp(lt - lead_r);
        if ((s + t) % 2 == 0) {
          total += term;
        } else {
          total -= term;
        }
      }
      // Terms shrink in t once past the bulk; k = 0 dominates each row.
      if (!any_t && t > 2 * s + 50) break;
      any_s = any_s || any_t;
    }
    if (!any_s && s > 50) break;
  }
  const bool ok = total > 0;
  const double result = ok ? static_cast<double>(lead_r + boost::multiprecision::log(total)) : 0.0;
  Real::default_precision(saved);
  if (!ok) throw Error(ErrorCode::NonConvergence, "inclusion-exclusion sum lost all precision");
  return result;
}

CountReport count_asymptotic(Vertex n, std::size_t m, bool with_exact) {
  if (n == 0 || m <= n) throw Error(ErrorCode::InvalidArgument, "count_asymptotic needs m > n >= 1");
  CountReport report;
  report.n = n;
  report.m = m;
  const TruncatedPoissonModel model = solve_z(static_cast<double>(m) / n);
  report.z = model.z;
  report.sigma2 = model.sigma2;
  const double z = model.z, rho = model.rho, dn = n, dm = static_cast<double>(m);
  const double log_em1 = z + std::log1p(-std::exp(-z));  // log(e^z - 1)
  const double two_pi = 2 * std::numbers::pi;
  const double common = std::lgamma(dm + 1) + 2 * dn * log_em1 - 2 * dm * std::log(z);

  report.variants = {
      {"printed", common - z * (z + 1) - std::log(two_pi * std::sqrt(model.sigma2)), std::nullopt},
      {"reconciled", common - z * (z + 1) - std::log(two_pi * dn * model.sigma2), std::nullopt},
      {"configuration", common - rho - z * z / 2 - std::log(two_pi * dn * model.sigma2), std::nullopt},
  };

  if (with_exact) {
    if (candidate_subset_count(n, m) <= 1'000'000) {
      std::size_t count = 0;
      enumerate_digraphs(n, m, [&](const Digraph&) { ++count; });
      report.exact_count = mpz_class(static_cast<unsigned long>(count));
      report.exact_method = "enumeration";
    } else if (n <= 60) {
      report.exact_count = count_digraphs_exact(n, m);
      report.exact_method = "inclusion_exclusion";
    } else {
      report.log_exact = log_count_digraphs(n, m);
      report.exact_method = "inclusion_exclusion_mpfr";
    }
    if (report.exact_count && sgn(*report.exact_count) > 0) report.log_exact = log_of(*report.exact_count);
  }
  if (report.log_exact) {
    double best = 0;
    for (auto& v : report.variants) {
      v.log_ratio = *report.log_exact - v.log_value;
      if (report.selected.empty() || std::abs(*v.log_ratio) < best) {
        best = std::abs(*v.log_ratio);
        report.selected = v.name;
        report.ratio = std::exp(*v.log_ratio);
      }
    }
  }

  report.omega1_exact = exact_omega1(n, m);
  report.log_omega1_exact = log_of(report.omega1_exact);
  report.log_omega1_factorized =
      2 * (std::lgamma(dm + 1) + dn * log_em1 - dm * std::log(z) - 0.5 * std::log(two_pi * dn * model.sigma2));
  report.omega1_ratio = std::exp(report.log_omega1_exact - report.log_omega1_factorized);
  return report;
}

}  // namespace hamcond
