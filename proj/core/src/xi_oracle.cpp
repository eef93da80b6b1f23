#include "xiboot/xi_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "xiboot/errors.hpp"
#include "xiboot/rng.hpp"

namespace xiboot {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(m);
  weights.resize(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (m + 0.5));
    double deriv = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < m; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      deriv = m * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / deriv;
      z -= dz;
      if (std::fabs(dz) < 1e-15) break;
    }
    nodes[i] = -z;
    nodes[m - 1 - i] = z;
    weights[i] = weights[m - 1 - i] = 2.0 / ((1.0 - z * z) * deriv * deriv);
  }
}

double normal_pdf(double t) { return std::exp(-0.5 * t * t) * 0.39894228040143267794; }

// E[ Phi((r X - Y)/sqrt(1-r^2))^2 ] over the truncated box, composite rule.
double survival_sq_integral(double r, int panels, int nodes_per_panel, double cutoff) {
  std::vector<double> gx, gw;
  gauss_legendre(nodes_per_panel, gx, gw);

  const double beta = std::sqrt(1.0 - r * r);
  const double h = 2.0 * cutoff / panels;

  std::vector<double> pts(panels * nodes_per_panel), wts(panels * nodes_per_panel);
  for (int p = 0; p < panels; ++p) {
    const double a = -cutoff + p * h;
    for (int q = 0; q < nodes_per_panel; ++q) {
      pts[p * nodes_per_panel + q] = a + 0.5 * h * (gx[q] + 1.0);
      wts[p * nodes_per_panel + q] = 0.5 * h * gw[q];
    }
  }

  double total = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double x = pts[i];
    double inner = 0.0;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const double y = pts[j];
      const double g = r == 0.0 ? normal_cdf(-y) : normal_cdf((r * x - y) / beta);
      inner += wts[j] * g * g * normal_pdf(y);
    }
    total += wts[i] * inner * normal_pdf(x);
  }
  return total;
}

}  // namespace

XiOracleResult true_xi_oracle(double rho, const OracleSettings& settings) {
  if (!(std::fabs(rho) < 1.0)) {
    throw parameter_error("true_xi_oracle: rho must lie in (-1, 1)");
  }
  if (settings.panels < 2 || settings.nodes < 2) {
    throw parameter_error("true_xi_oracle: panels and nodes must be at least 2");
  }

  const double r = std::fabs(rho);  // the measure depends on rho^2 only
  const double fine = survival_sq_integral(r, settings.panels, settings.nodes, settings.cutoff);
  const double coarse =
      survival_sq_integral(r, std::max(2, settings.panels / 2), settings.nodes, settings.cutoff);

  double value = 6.0 * (fine - 1.0 / 3.0);
  const double truncation = 12.0 * normal_cdf(-settings.cutoff);
  const double error = 6.0 * std::fabs(fine - coarse) + truncation + 1e-13;
  if (error > settings.tolerance) {
    throw oracle_error("true_xi_oracle: quadrature error estimate exceeds tolerance");
  }
  value = std::clamp(value, 0.0, 1.0);
  return {value, error};
}

}  // namespace xiboot
