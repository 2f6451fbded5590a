#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "cyrisk/common/error.hpp"

namespace cyrisk::geometry {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double dist(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// Observation window: disk of given radius centred at the origin.
struct Window {
  double radius = 1.0;

  double area() const { return M_PI * radius * radius; }
  bool contains(const Point& p) const {
    return p.x * p.x + p.y * p.y <= radius * radius;
  }
};

enum class ProcessKind { Ppp, AlphaGinibre };

// Stationary planar point process parameterisation. `alpha` in (0,1] sets
// the repulsion strength of the alpha-Ginibre family (1 = Ginibre, ->0
// approaches Poisson at fixed intensity); it is ignored for Ppp.
struct ProcessSpec {
  ProcessKind kind = ProcessKind::Ppp;
  double density = 0.0;
  double alpha = 1.0;

  static ProcessSpec ppp(double density);
  static ProcessSpec alpha_ginibre(double density, double alpha);
};

struct PointPattern {
  std::vector<Point> points;
  Window window;
  ProcessSpec process;

  std::size_t size() const { return points.size(); }
};

inline constexpr int kDefaultGinibreMaxDim = 8192;

// Homogeneous Poisson process on the window.
PointPattern sample_ppp(const ProcessSpec& spec, const Window& window,
                        std::uint64_t seed);

// Ginibre process of the given intensity, realised as the rescaled
// eigenvalues of an M x M complex Gaussian matrix with M chosen so the
// truncation bias inside the window is negligible. Throws ResourceLimit
// when M would exceed `max_matrix_dim`.
PointPattern sample_ginibre(double intensity, const Window& window,
                            std::uint64_t seed,
                            int max_matrix_dim = kDefaultGinibreMaxDim);

// alpha-Ginibre process: independent thinning (retention alpha) of a
// Ginibre process of intensity density/alpha, preserving the target
// intensity. Dispatches to sample_ppp for Ppp specs.
PointPattern sample_alpha_gpp(const ProcessSpec& spec, const Window& window,
                              std::uint64_t seed,
                              int max_matrix_dim = kDefaultGinibreMaxDim);

// Generic entry point keyed on spec.kind.
PointPattern sample(const ProcessSpec& spec, const Window& window,
                    std::uint64_t seed,
                    int max_matrix_dim = kDefaultGinibreMaxDim);

// Pair correlation function of the alpha-Ginibre family:
// g(r) = 1 - exp(-pi * density * r^2 / alpha).
double alpha_gpp_pcf(double r, double density, double alpha);

// Average of alpha_gpp_pcf over an annulus [a,b), weighted by area.
// Matches what a binned estimator measures, so comparisons carry no
// discretisation bias.
double alpha_gpp_pcf_bin_average(double a, double b, double density,
                                 double alpha);

struct PcfBin {
  double r_lo = 0.0;
  double r_hi = 0.0;
  double r_mid = 0.0;
  double g = 0.0;
};

// Translation-corrected binned pair correlation estimate pooled over
// patterns observed on a common disk window. Needs >= 2 patterns and
// strictly increasing nonnegative bin edges.
std::vector<PcfBin> pair_correlation(std::span<const PointPattern> patterns,
                                     std::span<const double> bin_edges);

struct CountStats {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  std::size_t patterns = 0;
};

CountStats count_statistics(std::span<const PointPattern> patterns);

// Writes "x,y" header plus one row per point, %.17g.
void write_pattern_csv(const PointPattern& pattern, std::ostream& os);

}  // namespace cyrisk::geometry
