#pragma once

namespace benchkit::special {

/// Standard normal CDF.
double normal_cdf(double x);

/// P(X > x) for X ~ chi-squared with `df` degrees of freedom.
double chi2_sf(double x, int df);

/// P(X > x) for X ~ F(d1, d2).
double f_sf(double x, int d1, int d2);

/// CDF of the range of k iid standard normals,
/// F(w) = k * integral phi(u) [Phi(u) - Phi(u - w)]^(k-1) du,
/// by composite Gauss–Legendre over u in [-8, 8 + w].
double normal_range_cdf(double w, int k);

/// Nemenyi critical value: the (1 - alpha) quantile of the range of k standard
/// normals divided by sqrt(2). Memoized per (k, alpha).
double studentized_range_quantile(int k, double alpha);

}  // namespace benchkit::special
