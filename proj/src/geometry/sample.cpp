#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "cyrisk/common/csv.hpp"
#include "cyrisk/common/rng.hpp"
#include "cyrisk/geometry.hpp"

namespace cyrisk::geometry {

ProcessSpec ProcessSpec::ppp(double density) {
  if (!(density >= 0.0) || !std::isfinite(density))
    throw InvalidParameter("ProcessSpec: density must be finite and >= 0");
  return {ProcessKind::Ppp, density, 1.0};
}

ProcessSpec ProcessSpec::alpha_ginibre(double density, double alpha) {
  if (!(density >= 0.0) || !std::isfinite(density))
    throw InvalidParameter("ProcessSpec: density must be finite and >= 0");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw InvalidParameter("ProcessSpec: alpha must lie in (0,1]");
  return {ProcessKind::AlphaGinibre, density, alpha};
}

namespace {

void validate_window(const Window& w) {
  if (!(w.radius > 0.0) || !std::isfinite(w.radius))
    throw InvalidParameter("Window: radius must be finite and > 0");
}

}  // namespace

PointPattern sample_ppp(const ProcessSpec& spec, const Window& window,
                        std::uint64_t seed) {
  if (spec.kind != ProcessKind::Ppp)
    throw InvalidParameter("sample_ppp: spec is not a Poisson process");
  if (!(spec.density >= 0.0) || !std::isfinite(spec.density))
    throw InvalidParameter("sample_ppp: density must be finite and >= 0");
  validate_window(window);

  rng::Engine g(seed);
  std::uint64_t n = rng::poisson(g, spec.density * window.area());
  PointPattern out;
  out.window = window;
  out.process = spec;
  out.points.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    // Polar inversion: radius density ~ 2r/R^2 on [0,R].
    double r = window.radius * std::sqrt(rng::uniform01(g));
    double th = 2.0 * M_PI * rng::uniform01(g);
    out.points.push_back({r * std::cos(th), r * std::sin(th)});
  }
  return out;
}

namespace {

// Eigenvalues of an M x M matrix with iid CN(0,1) entries form a determinantal
// process that approaches intensity 1/pi on the disk of radius sqrt(M);
// dividing coordinates by sqrt(pi * intensity) yields the target intensity.
// The 1.25 margin keeps the window strictly inside the reliable bulk.
PointPattern ginibre_raw(double intensity, const Window& window,
                         std::uint64_t seed, int max_matrix_dim) {
  PointPattern out;
  out.window = window;
  out.process = ProcessSpec::alpha_ginibre(intensity, 1.0);
  if (intensity == 0.0) return out;

  double m_needed = std::ceil(1.25 * M_PI * intensity * window.radius * window.radius);
  if (!(m_needed >= 1.0)) m_needed = 1.0;
  if (max_matrix_dim < 1 || m_needed > static_cast<double>(max_matrix_dim))
    throw ResourceLimit("sample_ginibre: matrix dimension " +
                        std::to_string(static_cast<long long>(m_needed)) +
                        " exceeds cap " + std::to_string(max_matrix_dim));
  int m = static_cast<int>(m_needed);

  rng::Engine g(seed);
  Eigen::MatrixXcd a(m, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) a(i, j) = rng::complex_gaussian(g);

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, false);
  if (solver.info() != Eigen::Success)
    throw ResourceLimit("sample_ginibre: eigenvalue iteration failed");

  double scale = 1.0 / std::sqrt(M_PI * intensity);
  double r2 = window.radius * window.radius;
  const auto& ev = solver.eigenvalues();
  out.points.reserve(static_cast<std::size_t>(ev.size()));
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    Point p{ev[i].real() * scale, ev[i].imag() * scale};
    if (p.x * p.x + p.y * p.y <= r2) out.points.push_back(p);
  }
  return out;
}

}  // namespace

PointPattern sample_ginibre(double intensity, const Window& window,
                            std::uint64_t seed, int max_matrix_dim) {
  if (!(intensity >= 0.0) || !std::isfinite(intensity))
    throw InvalidParameter("sample_ginibre: intensity must be finite and >= 0");
  validate_window(window);
  return ginibre_raw(intensity, window, seed, max_matrix_dim);
}

PointPattern sample_alpha_gpp(const ProcessSpec& spec, const Window& window,
                              std::uint64_t seed, int max_matrix_dim) {
  if (spec.kind == ProcessKind::Ppp) return sample_ppp(spec, window, seed);
  if (!(spec.density >= 0.0) || !std::isfinite(spec.density))
    throw InvalidParameter("sample_alpha_gpp: density must be finite and >= 0");
  if (!(spec.alpha > 0.0 && spec.alpha <= 1.0))
    throw InvalidParameter("sample_alpha_gpp: alpha must lie in (0,1]");
  validate_window(window);

  PointPattern parent =
      ginibre_raw(spec.density / spec.alpha, window,
                  rng::derive_seed(seed, "ginibre"), max_matrix_dim);

  PointPattern out;
  out.window = window;
  out.process = spec;
  // Independent thinning with retention alpha keeps intensity at
  // spec.density and relaxes the pair correlation toward Poisson.
  rng::Engine keep(rng::derive_seed(seed, "thin"));
  for (const Point& p : parent.points) {
    if (rng::uniform01(keep) < spec.alpha) out.points.push_back(p);
  }
  return out;
}

PointPattern sample(const ProcessSpec& spec, const Window& window,
                    std::uint64_t seed, int max_matrix_dim) {
  return spec.kind == ProcessKind::Ppp
             ? sample_ppp(spec, window, seed)
             : sample_alpha_gpp(spec, window, seed, max_matrix_dim);
}

void write_pattern_csv(const PointPattern& pattern, std::ostream& os) {
  os << "x,y\n";
  for (const Point& p : pattern.points)
    os << csv::num(p.x) << ',' << csv::num(p.y) << '\n';
}

}  // namespace cyrisk::geometry
