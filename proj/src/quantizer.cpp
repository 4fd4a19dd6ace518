#include "quantizer.hpp"

#include <cmath>

namespace qpf {

double strict_floor(double h) {
  double f = std::floor(h);
  return f == h ? f - 1.0 : f;
}

double quantizer::quantize(double v) const {
  if (step == 0.0) {
    if (v > range_m) return range_m;
    if (v < -range_m) return -range_m;
    return v;
  }
  if (v > range_m) return range_m;
  if (v < -range_m) return -range_m;
  return step * strict_floor(v / step + 0.5);
}

double quantizer::quantize_scaled(double v, double mu) const {
  if (step == 0.0) {
    // degenerate quantizer: clamp against the scaled range directly so the
    // zoom round trip v -> v/mu -> mu*(v/mu) cannot perturb the last bits
    const double r = mu * range_m;
    if (v > r) return r;
    if (v < -r) return -r;
    return v;
  }
  return mu * quantize(v / mu);
}

quantizer_property_report validate_properties(const quantizer& q, long n_points,
                                              double lo, double hi) {
  quantizer_property_report r;
  r.points = n_points;
  const double mh = q.mhat();
  for (long i = 0; i < n_points; ++i) {
    double v = lo + (hi - lo) * static_cast<double>(i) /
                        static_cast<double>(n_points - 1);
    double qv = q.quantize(v);
    if (std::abs(v) <= q.range_m) {
      double err = std::abs(qv - v);
      if (err > r.max_in_range_error) r.max_in_range_error = err;
      if (err > q.step) ++r.violations_p1;
    } else {
      if (std::abs(qv) <= q.range_m - q.step) ++r.violations_p2;
    }
    if (std::abs(v) <= mh && qv != 0.0) ++r.violations_p3;
  }
  r.p1 = r.violations_p1 == 0;
  r.p2 = r.violations_p2 == 0;
  r.p3 = r.violations_p3 == 0;
  return r;
}

}  // namespace qpf
