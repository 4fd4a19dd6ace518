#include "linalg.hpp"

#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

namespace qpf {

norm_kind norm_kind_from_string(const std::string& s) {
  if (s == "two") return norm_kind::two;
  if (s == "inf") return norm_kind::inf;
  throw std::invalid_argument("unknown norm kind: " + s);
}

std::string to_string(norm_kind k) {
  return k == norm_kind::two ? "two" : "inf";
}

double vec_norm(const vec& v, norm_kind k) {
  if (v.size() == 0) return 0.0;
  return k == norm_kind::two ? v.norm() : v.cwiseAbs().maxCoeff();
}

double mat_norm(const mat& m, norm_kind k) {
  if (m.size() == 0) return 0.0;
  if (k == norm_kind::two) {
    Eigen::JacobiSVD<mat> svd(m);
    return svd.singularValues()(0);
  }
  // induced inf-norm: max absolute row sum
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

mat expm(const mat& m) { return m.exp(); }

bool is_hurwitz(const mat& m) {
  Eigen::EigenSolver<mat> es(m, /*computeEigenvectors=*/false);
  return (es.eigenvalues().real().array() < 0.0).all();
}

}  // namespace qpf
