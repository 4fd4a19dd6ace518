// linalg: small dense helpers shared by the whole toolkit.
#pragma once

#include <Eigen/Dense>
#include <string>

namespace qpf {

using mat = Eigen::MatrixXd;
using vec = Eigen::VectorXd;
using rowvec = Eigen::RowVectorXd;

// Norm pairing used everywhere: the matrix norm is the operator norm induced
// by the paired vector norm (two <-> Euclidean, inf <-> max-abs).
enum class norm_kind { two, inf };

norm_kind norm_kind_from_string(const std::string& s);
std::string to_string(norm_kind k);

double vec_norm(const vec& v, norm_kind k);
double mat_norm(const mat& m, norm_kind k);

// Matrix exponential e^M.
mat expm(const mat& m);

// true iff every eigenvalue of m has negative real part
bool is_hurwitz(const mat& m);

}  // namespace qpf
