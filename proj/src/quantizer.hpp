// quantizer: saturated uniform quantizer with deadzone, plus the zoom-scaled
// variant mu*q(v/mu) used by the switching controller.
#pragma once

#include <cstdint>

#include "linalg.hpp"

namespace qpf {

// floor with strict inequality: largest integer k with k < h (so 2.0 -> 1).
double strict_floor(double h);

// Scalar channel. With range m and resolution step:
//   |v| >  m          -> saturates to sign(v)*m
//   otherwise         -> step * strict_floor(v/step + 1/2)
// step == 0 degenerates to a pure clamp (exact passthrough inside the range).
// The deadzone is (-step/2, step/2]: inputs there map to exactly 0.
struct quantizer {
  double range_m = 0.0;  // saturation bound M
  double step = 0.0;     // resolution Delta

  double quantize(double v) const;
  // zoomed variant mu*q(v/mu); bit-exact scaling for mu a power of two, and
  // an exact in-range passthrough when step == 0 (clamped against mu*m)
  double quantize_scaled(double v, double mu) const;
  // deadzone radius M^: quantize(v) == 0 whenever |v| <= mhat, except at the
  // left deadzone edge -step/2 itself (half-open cell)
  double mhat() const { return step / 2.0; }
};

// Result of sweeping the quantizer over a uniform grid of test points.
struct quantizer_property_report {
  // p1: |v| <= m  implies |q(v) - v| <= step
  // p2: |v| >  m  implies |q(v)| > m - step
  // p3: |v| <= mhat implies q(v) == 0
  bool p1 = false, p2 = false, p3 = false;
  long violations_p1 = 0, violations_p2 = 0, violations_p3 = 0;
  double max_in_range_error = 0.0;  // max |q(v)-v| over |v| <= m
  long points = 0;
  bool pass() const { return p1 && p2 && p3; }
};

// Exhaustive scan over n_points uniformly spaced on [lo, hi].
quantizer_property_report validate_properties(const quantizer& q, long n_points,
                                              double lo, double hi);

}  // namespace qpf
