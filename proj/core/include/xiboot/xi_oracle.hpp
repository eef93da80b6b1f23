#pragma once

namespace xiboot {

struct OracleSettings {
  int panels = 12;       // quadrature panels per axis (halved for the error probe)
  int nodes = 20;        // Gauss-Legendre nodes per panel
  double cutoff = 8.5;   // half-width of the integration box, in standard deviations
  double tolerance = 2e-3;
};

struct XiOracleResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

// Population dependence measure of the Gaussian rotation model, computed by
// 2-D quadrature of the variance of the conditional survival function:
//   xi(rho) = 6 * ( E[ Phi((rho X - Y)/sqrt(1-rho^2))^2 ] - 1/3 ),
// with X, Y independent standard normals.  Depends on rho only through rho^2
// (evaluated at |rho|, so the sign symmetry is exact).  The result is clamped
// to [0, 1] and carries a conservative error estimate; throws oracle_error if
// that estimate exceeds the requested tolerance and parameter_error if
// |rho| >= 1.
XiOracleResult true_xi_oracle(double rho, const OracleSettings& settings = {});

}  // namespace xiboot
