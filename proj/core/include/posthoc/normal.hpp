#pragma once

namespace posthoc {

/// Upper tail of the standard normal, P(Z > x).
double normal_sf(double x);

/// Inverse of normal_sf on (0, 1): rational approximation plus one Newton
/// step on the survival function.
double normal_isf(double p);

}  // namespace posthoc
