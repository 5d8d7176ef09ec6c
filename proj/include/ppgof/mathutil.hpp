#pragma once

namespace ppgof {

// standard normal quantile (Acklam's rational approximation refined by one
// Halley step; accurate to full double precision away from the endpoints)
double normal_quantile(double p);

// half-width of the approximate 95% confidence interval for a Monte Carlo
// p-value estimated from m simulations
double pvalue_ci_halfwidth(double p_mc, long m);

// local level for n simultaneous pointwise envelopes at global level alpha
double sidak_local_level(double alpha, long n);

} // namespace ppgof
