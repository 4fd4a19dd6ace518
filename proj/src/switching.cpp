#include "switching.hpp"

#include <algorithm>

namespace qpf {

double auto_tau(double z0, double mhat, const switching_params& p) {
  double target;
  if (mhat > 0.0) {
    target = 1.05 * z0 / mhat;
  } else {
    double margin = p.range_m * p.mbar - 2.0 * p.delta;
    target = margin > 0.0 ? 2.0 * z0 / margin : 2.0 * z0;
  }
  double tau = std::log(std::max(target / (p.mbar1 * p.mu0), 1.0)) /
               (2.0 * p.n_a);
  return std::max(tau, 0.05);
}

}  // namespace qpf
