#include <cmath>

#include "cyrisk/common/quadrature.hpp"
#include "cyrisk/hwn.hpp"

namespace cyrisk::hwn {

double rho_integral(double tau_linear, double mu) {
  if (!(mu > 2.0)) throw InvalidParameter("rho_integral: mu must be > 2");
  if (!(tau_linear >= 0.0) || !std::isfinite(tau_linear))
    throw InvalidParameter("rho_integral: tau must be finite and >= 0");
  if (tau_linear == 0.0) return 0.0;

  double m = 0.5 * mu;
  double lower = std::pow(tau_linear, -2.0 / mu);
  // Beyond A the integrand is within 1e-3 of u^-m and the alternating series
  // below converges geometrically.
  double a = std::max(lower, std::pow(1e3, 1.0 / m));

  double finite = 0.0;
  if (a > lower) {
    finite = quad::adaptive_simpson(
        [m](double u) { return 1.0 / (1.0 + std::pow(u, m)); }, lower, a, 1e-13);
  }
  // integral from A to inf of du/(1+u^m) = sum_k (-1)^(k+1) A^(1-km)/(km-1)
  double tail = 0.0;
  for (int k = 1; k <= 60; ++k) {
    double term = std::pow(a, 1.0 - k * m) / (k * m - 1.0);
    tail += (k % 2 == 1) ? term : -term;
    if (term < 1e-17) break;
  }
  return std::pow(tau_linear, 2.0 / mu) * (finite + tail);
}

double ppp_coverage_oracle(double tau_linear, double mu,
                           const std::optional<JammerOracleTerm>& jammers,
                           const ServingOracleTerm& serving) {
  if (!(mu > 2.0)) throw InvalidParameter("ppp_coverage_oracle: mu must be > 2");
  if (!(tau_linear >= 0.0) || !std::isfinite(tau_linear))
    throw InvalidParameter("ppp_coverage_oracle: tau must be finite and >= 0");
  double rho = rho_integral(tau_linear, mu);
  if (!jammers || jammers->density == 0.0) return 1.0 / (1.0 + rho);

  const JammerOracleTerm& jam = *jammers;
  if (!(jam.pathloss_exponent > 2.0))
    throw InvalidParameter("ppp_coverage_oracle: jammer pathloss_exponent must be > 2");
  if (!(jam.density > 0.0) || !(jam.power_mw > 0.0))
    throw InvalidParameter("ppp_coverage_oracle: jammer density and power must be > 0");
  if (!(serving.density > 0.0) || !(serving.power_mw > 0.0))
    throw InvalidParameter("ppp_coverage_oracle: serving density and power must be > 0");

  double mu_j = jam.pathloss_exponent;
  // Rayleigh-fading shot noise from an independent PPP jammer field:
  // E[exp(-s I_J)] = exp(-pi zeta_J Gamma(1+2/mu_J) Gamma(1-2/mu_J) (s P_J)^(2/mu_J))
  // with s = tau r^mu / P. Substituting t = pi zeta r^2 in the serving
  // distance integral gives coverage = int_0^inf exp(-(1+rho) t - kappa t^beta) dt.
  double gamma_factor = std::tgamma(1.0 + 2.0 / mu_j) * std::tgamma(1.0 - 2.0 / mu_j);
  double kappa = M_PI * jam.density * gamma_factor *
                 std::pow(tau_linear * jam.power_mw / serving.power_mw, 2.0 / mu_j) *
                 std::pow(M_PI * serving.density, -mu / mu_j);
  double beta = mu / mu_j;
  if (beta == 1.0) return 1.0 / (1.0 + rho + kappa);

  double rate = 1.0 + rho;
  double upper = 50.0 / rate;
  return quad::adaptive_simpson(
      [rate, kappa, beta](double t) {
        return std::exp(-rate * t - kappa * std::pow(t, beta));
      },
      0.0, upper, 1e-13 / rate);
}

}  // namespace cyrisk::hwn
