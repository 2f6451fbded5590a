#include <cmath>
#include <limits>
#include <vector>

#include "cyrisk/actuarial.hpp"
#include "cyrisk/common/error.hpp"

namespace cyrisk::actuarial {

namespace {

double binom_pmf(int m, int j, double q) {
  if (j < 0 || j > m) return 0.0;
  if (q <= 0.0) return j == 0 ? 1.0 : 0.0;
  if (q >= 1.0) return j == m ? 1.0 : 0.0;
  double lp = std::lgamma(m + 1.0) - std::lgamma(j + 1.0) - std::lgamma(m - j + 1.0) +
              j * std::log(q) + (m - j) * std::log1p(-q);
  return std::exp(lp);
}

// P(U_(k) >= a_k, k = 1..n) for sorted uniforms on [0,1] and a non-decreasing
// boundary with every a_k < 1. Counting recursion: S_k = #{U_i < a_k} must
// stay <= k-1; given S_{k-1} = s the points above a_{k-1} are iid uniform on
// [a_{k-1}, 1], so the increment is Binomial(n - s, (a_k - a_{k-1})/(1 - a_{k-1})).
double order_statistic_lower_prob(int n, const std::vector<double>& a) {
  if (n == 0) return 1.0;
  std::vector<double> f(1, binom_pmf(n, 0, a[0]));  // S_1 distribution on {0}
  for (int k = 2; k <= n; ++k) {
    double q = (a[k - 1] - a[k - 2]) / (1.0 - a[k - 2]);
    std::vector<double> g(k, 0.0);  // S_k in [0, k-1]
    for (int sp = 0; sp < static_cast<int>(f.size()); ++sp) {
      if (f[sp] == 0.0) continue;
      for (int s = sp; s <= k - 1; ++s)
        g[s] += f[sp] * binom_pmf(n - sp, s - sp, q);
    }
    f = std::move(g);
  }
  double total = 0.0;
  for (double v : f) total += v;
  return total;
}

}  // namespace

DeterministicClaimOracle deterministic_claim_oracle(const InsuranceConfig& config,
                                                    int max_n) {
  config.validate();
  if (config.claims.kind != ClaimDistribution::Kind::Deterministic)
    throw InvalidParameter("deterministic_claim_oracle: claims must be deterministic");
  if (max_n > kOracleMaxN)
    throw InvalidParameter("deterministic_claim_oracle: max_n exceeds cap");

  double w = config.claims.value;
  double y = config.initial_reserve;
  double ct = config.premium_rate * config.horizon;
  double mean_count = config.claim_intensity * config.horizon;

  // Ruin boundary on uniform order statistics; a_k >= 1 forces ruin for
  // every n >= k, which also caps the truncation exactly.
  auto boundary = [&](int k) -> double {
    if (k * w <= y) return 0.0;
    if (ct <= 0.0) return std::numeric_limits<double>::infinity();
    return (k * w - y) / ct;
  };
  int forced_ruin_at = 0;  // smallest k with a_k >= 1; 0 = none found yet
  for (int k = 1; k <= kOracleMaxN + 1; ++k) {
    if (boundary(k) >= 1.0) {
      forced_ruin_at = k;
      break;
    }
  }

  int limit;
  double tail;
  {
    // Smallest truncation with Poisson tail below 1e-10 (log-space pmf).
    int auto_limit = -1;
    double cum = 0.0;
    std::vector<double> pmf_cache;
    double log_mean = mean_count > 0.0 ? std::log(mean_count) : 0.0;
    for (int n = 0; n <= kOracleMaxN; ++n) {
      double p = mean_count == 0.0
                     ? (n == 0 ? 1.0 : 0.0)
                     : std::exp(-mean_count + n * log_mean - std::lgamma(n + 1.0));
      pmf_cache.push_back(p);
      cum += p;
      if (auto_limit < 0 && 1.0 - cum < 1e-10) auto_limit = n;
    }
    if (max_n > 0) {
      limit = max_n;
    } else if (forced_ruin_at > 0 && forced_ruin_at - 1 <= kOracleMaxN) {
      // Beyond forced_ruin_at every term is zero; stopping there is exact.
      limit = auto_limit < 0 ? forced_ruin_at - 1
                             : std::min(auto_limit, forced_ruin_at - 1);
    } else if (auto_limit >= 0) {
      limit = auto_limit;
    } else {
      throw InvalidParameter(
          "deterministic_claim_oracle: claim_intensity*horizon too large for exact evaluation");
    }
    if (forced_ruin_at > 0 && forced_ruin_at - 1 <= limit) {
      tail = 0.0;  // truncation is exact, not an approximation
    } else {
      double cut = 0.0;
      for (int n = 0; n <= limit && n < static_cast<int>(pmf_cache.size()); ++n)
        cut += pmf_cache[n];
      tail = std::max(0.0, 1.0 - cut);
    }
  }

  double non_ruin = 0.0;
  std::vector<double> a;
  for (int n = 0; n <= limit; ++n) {
    if (forced_ruin_at > 0 && n >= forced_ruin_at) break;
    if (n > 0) {
      a.push_back(boundary(n));
      if (a.back() >= 1.0) break;  // unreachable, forced_ruin_at caught it
    }
    double pmf = mean_count == 0.0
                     ? (n == 0 ? 1.0 : 0.0)
                     : std::exp(-mean_count + n * std::log(mean_count) -
                                std::lgamma(n + 1.0));
    non_ruin += pmf * order_statistic_lower_prob(n, a);
  }

  return {non_ruin, tail, limit};
}

}  // namespace cyrisk::actuarial
