#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "lgt/rng.hpp"

namespace lgt {

using Complex = std::complex<double>;

// Matrices never exceed 3x3; fixed capacity keeps them off the heap.
using GroupMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;
using AlgebraVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 8, 1>;

enum class Group { U1, SU2, SU3 };

int matrix_dim(Group g);   // 1, 2, 3
int algebra_dim(Group g);  // 1, 3, 8
const char* group_name(Group g);
Group group_from_name(const std::string& name);
Group group_from_dim(int n);

// N x N complex unitary matrix tagged with its group.
struct GroupElement {
  Group group;
  GroupMatrix mat;
};

// Real coefficients of the generator basis T^a (single phase for U(1)).
struct AlgebraElement {
  Group group;
  AlgebraVector coeffs;

  static AlgebraElement zero(Group g);
};

GroupElement identity(Group g);
GroupElement multiply(const GroupElement& a, const GroupElement& b);
GroupElement adjoint(const GroupElement& a);

// U = exp(i sum_a v_a T^a)
GroupElement exp_map(const AlgebraElement& v);

GroupElement haar_sample(Group g, RngStream& rng);

// Nearest unitary (polar projection), det-phase fixed to 1 for SU(N).
// Throws if the input is further than 0.1 from unitary.
GroupElement reunitarize(const GroupElement& a);

// (1/N) Re Tr(a), in [-1, 1] for unitary a
double trace_real_normalized(const GroupElement& a);

// Generator matrices T^a, normalized Tr(T^a T^b) = delta^{ab}/2 for SU(N);
// T = [1] for U(1).
const std::vector<GroupMatrix>& generators(Group g);

// max_ij |(U^dag U - I)_ij|
double unitarity_error(const GroupElement& a);

inline GroupElement operator*(const GroupElement& a, const GroupElement& b) {
  return multiply(a, b);
}

}  // namespace lgt
