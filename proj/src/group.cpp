#include "lgt/group.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lgt {

namespace {
const Complex I(0.0, 1.0);
}

int matrix_dim(Group g) {
  switch (g) {
    case Group::U1:
      return 1;
    case Group::SU2:
      return 2;
    case Group::SU3:
      return 3;
  }
  throw std::logic_error("bad group");
}

int algebra_dim(Group g) {
  const int n = matrix_dim(g);
  return n == 1 ? 1 : n * n - 1;
}

const char* group_name(Group g) {
  switch (g) {
    case Group::U1:
      return "u1";
    case Group::SU2:
      return "su2";
    case Group::SU3:
      return "su3";
  }
  return "?";
}

Group group_from_name(const std::string& name) {
  if (name == "u1" || name == "U1") return Group::U1;
  if (name == "su2" || name == "SU2") return Group::SU2;
  if (name == "su3" || name == "SU3") return Group::SU3;
  throw std::invalid_argument("unknown group '" + name + "' (u1, su2, su3)");
}

Group group_from_dim(int n) {
  switch (n) {
    case 1:
      return Group::U1;
    case 2:
      return Group::SU2;
    case 3:
      return Group::SU3;
  }
  throw std::invalid_argument("unsupported matrix dimension " +
                              std::to_string(n));
}

AlgebraElement AlgebraElement::zero(Group g) {
  AlgebraElement v;
  v.group = g;
  v.coeffs = AlgebraVector::Zero(algebra_dim(g));
  return v;
}

GroupElement identity(Group g) {
  const int n = matrix_dim(g);
  return {g, GroupMatrix::Identity(n, n)};
}

GroupElement multiply(const GroupElement& a, const GroupElement& b) {
  if (a.group != b.group)
    throw std::invalid_argument("group mismatch in multiply");
  return {a.group, a.mat * b.mat};
}

GroupElement adjoint(const GroupElement& a) {
  return {a.group, a.mat.adjoint()};
}

const std::vector<GroupMatrix>& generators(Group g) {
  static const std::vector<GroupMatrix> u1 = [] {
    GroupMatrix t(1, 1);
    t(0, 0) = 1.0;
    return std::vector<GroupMatrix>{t};
  }();
  static const std::vector<GroupMatrix> su2 = [] {
    std::vector<GroupMatrix> ts(3, GroupMatrix::Zero(2, 2));
    ts[0] << 0, 0.5, 0.5, 0;
    ts[1] << 0, -0.5 * I, 0.5 * I, 0;
    ts[2] << 0.5, 0, 0, -0.5;
    return ts;
  }();
  static const std::vector<GroupMatrix> su3 = [] {
    std::vector<GroupMatrix> ts(8, GroupMatrix::Zero(3, 3));
    ts[0] << 0, 1, 0, 1, 0, 0, 0, 0, 0;
    ts[1] << 0, -I, 0, I, 0, 0, 0, 0, 0;
    ts[2] << 1, 0, 0, 0, -1, 0, 0, 0, 0;
    ts[3] << 0, 0, 1, 0, 0, 0, 1, 0, 0;
    ts[4] << 0, 0, -I, 0, 0, 0, I, 0, 0;
    ts[5] << 0, 0, 0, 0, 0, 1, 0, 1, 0;
    ts[6] << 0, 0, 0, 0, 0, -I, 0, I, 0;
    const double s3 = 1.0 / std::sqrt(3.0);
    ts[7] << s3, 0, 0, 0, s3, 0, 0, 0, -2.0 * s3;
    for (auto& t : ts) t *= 0.5;  // Gell-Mann / 2
    return ts;
  }();
  switch (g) {
    case Group::U1:
      return u1;
    case Group::SU2:
      return su2;
    case Group::SU3:
      return su3;
  }
  throw std::logic_error("bad group");
}

GroupElement exp_map(const AlgebraElement& v) {
  const int n = matrix_dim(v.group);
  if (v.coeffs.size() != algebra_dim(v.group))
    throw std::invalid_argument("algebra coefficient length mismatch");
  switch (v.group) {
    case Group::U1: {
      GroupMatrix u(1, 1);
      u(0, 0) = std::exp(I * v.coeffs[0]);
      return {v.group, u};
    }
    case Group::SU2: {
      // exp(i theta n.sigma/2) = cos(theta/2) I + i sin(theta/2) n.sigma
      const double theta = v.coeffs.norm();
      GroupMatrix u = std::cos(0.5 * theta) * GroupMatrix::Identity(2, 2);
      if (theta > 0.0) {
        const auto& ts = generators(Group::SU2);
        GroupMatrix h = GroupMatrix::Zero(2, 2);
        for (int a = 0; a < 3; ++a) h += (v.coeffs[a] / theta) * ts[a];
        u += 2.0 * I * std::sin(0.5 * theta) * h;
      }
      return {v.group, u};
    }
    case Group::SU3: {
      const auto& ts = generators(Group::SU3);
      Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
      for (int a = 0; a < 8; ++a) h += v.coeffs[a] * ts[a];
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(h);
      Eigen::Vector3cd phases;
      for (int k = 0; k < 3; ++k) phases[k] = std::exp(I * es.eigenvalues()[k]);
      GroupMatrix u = es.eigenvectors() * phases.asDiagonal() *
                      es.eigenvectors().adjoint();
      (void)n;
      return {v.group, u};
    }
  }
  throw std::logic_error("bad group");
}

GroupElement haar_sample(Group g, RngStream& rng) {
  switch (g) {
    case Group::U1: {
      GroupMatrix u(1, 1);
      u(0, 0) = std::exp(I * rng.uniform(0.0, 6.283185307179586476925286766559));
      return {g, u};
    }
    case Group::SU2: {
      // uniform point on S^3
      double a[4];
      double norm2 = 0.0;
      do {
        norm2 = 0.0;
        for (double& x : a) {
          x = rng.normal();
          norm2 += x * x;
        }
      } while (norm2 == 0.0);
      const double inv = 1.0 / std::sqrt(norm2);
      for (double& x : a) x *= inv;
      GroupMatrix u(2, 2);
      u(0, 0) = Complex(a[0], a[3]);
      u(0, 1) = Complex(a[2], a[1]);
      u(1, 0) = Complex(-a[2], a[1]);
      u(1, 1) = Complex(a[0], -a[3]);
      return {g, u};
    }
    case Group::SU3: {
      // Ginibre -> QR with the R-diagonal phase fix (Mezzadri), then divide
      // out the determinant phase to land on SU(3).
      Eigen::Matrix3cd z;
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) z(r, c) = Complex(rng.normal(), rng.normal());
      Eigen::HouseholderQR<Eigen::Matrix3cd> qr(z);
      Eigen::Matrix3cd q = qr.householderQ();
      Eigen::Matrix3cd r = qr.matrixQR().triangularView<Eigen::Upper>();
      for (int k = 0; k < 3; ++k) {
        Complex d = r(k, k);
        const double ad = std::abs(d);
        q.col(k) *= (ad > 0.0) ? d / ad : Complex(1.0, 0.0);
      }
      const Complex det = q.determinant();
      q *= std::exp(-I * std::arg(det) / 3.0);
      return {g, GroupMatrix(q)};
    }
  }
  throw std::logic_error("bad group");
}

GroupElement reunitarize(const GroupElement& a) {
  if (unitarity_error(a) >= 0.1)
    throw std::runtime_error(
        "reunitarize: matrix too far from unitary (corrupted configuration?)");
  const int n = matrix_dim(a.group);
  if (n == 1) {
    const double ab = std::abs(a.mat(0, 0));
    GroupMatrix u(1, 1);
    u(0, 0) = (ab > 0.0) ? a.mat(0, 0) / ab : Complex(1.0, 0.0);
    return {a.group, u};
  }
  Eigen::JacobiSVD<GroupMatrix> svd(
      a.mat, Eigen::ComputeFullU | Eigen::ComputeFullV);
  GroupMatrix u = svd.matrixU() * svd.matrixV().adjoint();
  const Complex det = u.determinant();
  u *= std::exp(-I * std::arg(det) / static_cast<double>(n));
  return {a.group, u};
}

double trace_real_normalized(const GroupElement& a) {
  return a.mat.trace().real() / static_cast<double>(matrix_dim(a.group));
}

double unitarity_error(const GroupElement& a) {
  const int n = matrix_dim(a.group);
  const GroupMatrix d =
      a.mat.adjoint() * a.mat - GroupMatrix::Identity(n, n);
  return d.cwiseAbs().maxCoeff();
}

}  // namespace lgt
