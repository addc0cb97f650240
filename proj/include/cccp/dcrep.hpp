#pragma once

// Integral representations on (0, inf) with measure dt/t:
//   (log x)^2 = int [log(1+tx) + log(t+x) - log x - 2 log(1+t)] dt/t
//   d_R(X,Y)^2 = int [f_t(X,Y) - h_t(X,Y)] dt/t
// evaluated by adaptive Gauss-Legendre quadrature after t = u/(1-u).

#include <functional>
#include <utility>

#include "cccp/pdcore.hpp"

namespace cccp {

struct QuadratureScheme {
  double abs_tol = 1e-11;
  double rel_tol = 1e-11;
  int max_panels = 1 << 14;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels = 0;
};

/// int_0^inf g(t) dt. The integrand must be finite on (0, inf). Panels live on
/// u in (0, 1), split at u = 1/2, and are bisected where the 15-point rule
/// disagrees with its two halves. Throws QuadratureNonConvergence when the
/// panel budget runs out.
QuadratureResult integrate_half_line(const std::function<double(double)>& g,
                                     const QuadratureScheme& scheme = {});

/// Integrand of the squared-log identity, 1/t factor included.
double sqlog_integrand(double x, double t);

/// (log x)^2 by quadrature.
double sqlog_by_quadrature(double x, const QuadratureScheme& scheme = {});

struct DcParts {
  double f = 0.0;
  double h = 0.0;
};

/// f_t = -ld X - ld Y - 2n log(1+t), h_t = -ld(X+tY) - ld(tX+Y).
/// Both jointly convex; f_t - h_t is nonnegative.
DcParts dc_distance_parts(const SpdMatrix& x, const SpdMatrix& y, double t);

/// (f_t - h_t)/t, the distance integrand.
double dc_distance_integrand(const SpdMatrix& x, const SpdMatrix& y, double t);

/// d_R(X,Y)^2 via the integral. The pair is first rescaled to unit
/// determinant (d_R^2 changes by a known amount that is added back).
double dc_distance_squared(const SpdMatrix& x, const SpdMatrix& y,
                           const QuadratureScheme& scheme = {});

}  // namespace cccp
