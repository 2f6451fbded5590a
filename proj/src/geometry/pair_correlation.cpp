#include <algorithm>
#include <cmath>

#include "cyrisk/common/stats.hpp"
#include "cyrisk/geometry.hpp"

namespace cyrisk::geometry {

double alpha_gpp_pcf(double r, double density, double alpha) {
  if (!(density >= 0.0)) throw InvalidParameter("alpha_gpp_pcf: density must be >= 0");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw InvalidParameter("alpha_gpp_pcf: alpha must lie in (0,1]");
  if (!(r >= 0.0)) throw InvalidParameter("alpha_gpp_pcf: r must be >= 0");
  return 1.0 - std::exp(-M_PI * density * r * r / alpha);
}

double alpha_gpp_pcf_bin_average(double a, double b, double density,
                                 double alpha) {
  if (!(b > a && a >= 0.0))
    throw InvalidParameter("alpha_gpp_pcf_bin_average: need 0 <= a < b");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw InvalidParameter("alpha_gpp_pcf_bin_average: alpha must lie in (0,1]");
  double c = M_PI * density / alpha;
  if (c == 0.0) return 1.0;
  // Area-weighted mean of 1 - exp(-c r^2) over the annulus [a,b).
  return 1.0 - (std::exp(-c * a * a) - std::exp(-c * b * b)) / (c * (b * b - a * a));
}

namespace {

// Set covariance of a disk of radius R with itself shifted by r: the area
// seen by both copies. Zero at r = 2R.
double disk_set_covariance(double r, double R) {
  if (r >= 2.0 * R) return 0.0;
  double half = 0.5 * r;
  return 2.0 * R * R * std::acos(half / R) - half * std::sqrt(4.0 * R * R - r * r);
}

}  // namespace

std::vector<PcfBin> pair_correlation(std::span<const PointPattern> patterns,
                                     std::span<const double> bin_edges) {
  if (patterns.size() < 2)
    throw InvalidParameter("pair_correlation: need at least 2 patterns");
  if (bin_edges.size() < 2)
    throw InvalidParameter("pair_correlation: need at least 2 bin edges");
  if (!(bin_edges.front() >= 0.0))
    throw InvalidParameter("pair_correlation: bin edges must be >= 0");
  for (std::size_t i = 1; i < bin_edges.size(); ++i)
    if (!(bin_edges[i] > bin_edges[i - 1]))
      throw InvalidParameter("pair_correlation: bin edges must be strictly increasing");
  double R = patterns.front().window.radius;
  for (const auto& p : patterns)
    if (p.window.radius != R)
      throw InvalidParameter("pair_correlation: patterns must share one window");

  std::size_t nbins = bin_edges.size() - 1;
  std::vector<double> weight(nbins, 0.0);
  double lo = bin_edges.front(), hi = bin_edges.back();

  std::size_t total_points = 0;
  for (const auto& pat : patterns) {
    total_points += pat.size();
    const auto& pts = pat.points;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        double d = dist(pts[i], pts[j]);
        if (d < lo || d >= hi) continue;
        auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), d);
        std::size_t bin = static_cast<std::size_t>(it - bin_edges.begin()) - 1;
        double gamma = disk_set_covariance(d, R);
        if (gamma <= 0.0) continue;
        weight[bin] += 2.0 / gamma;  // ordered-pair convention
      }
    }
  }

  double area = patterns.front().window.area();
  double lambda_hat =
      static_cast<double>(total_points) / (static_cast<double>(patterns.size()) * area);
  double denom_scale = lambda_hat * lambda_hat * static_cast<double>(patterns.size());

  std::vector<PcfBin> out(nbins);
  for (std::size_t b = 0; b < nbins; ++b) {
    double a = bin_edges[b], bb = bin_edges[b + 1];
    out[b].r_lo = a;
    out[b].r_hi = bb;
    out[b].r_mid = 0.5 * (a + bb);
    double annulus = M_PI * (bb * bb - a * a);
    out[b].g = denom_scale > 0.0 ? weight[b] / (denom_scale * annulus) : 0.0;
  }
  return out;
}

CountStats count_statistics(std::span<const PointPattern> patterns) {
  if (patterns.size() < 2)
    throw InvalidParameter("count_statistics: need at least 2 patterns");
  std::vector<double> counts;
  counts.reserve(patterns.size());
  for (const auto& p : patterns) counts.push_back(static_cast<double>(p.size()));
  auto mv = stats::mean_variance(counts);
  return {mv.mean, mv.variance, patterns.size()};
}

}  // namespace cyrisk::geometry
