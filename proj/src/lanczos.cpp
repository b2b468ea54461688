#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <stdexcept>

#include "lgt/hamiltonian.hpp"
#include "lgt/rng.hpp"

namespace lgt {

namespace {

EigenPairs dense_eig(const SparseCMat& h, int k) {
  Eigen::MatrixXcd dense(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
  EigenPairs out;
  for (int i = 0; i < k; ++i) {
    out.values.push_back(es.eigenvalues()[i]);
    out.vectors.push_back(es.eigenvectors().col(i));
  }
  return out;
}

// Lowest eigenpair of h restricted to the orthogonal complement of
// `deflate`. Deflating one converged copy at a time resolves degenerate
// multiplets that a single Krylov sequence cannot see.
struct LowestPair {
  double value;
  Eigen::VectorXcd vector;
};

LowestPair lanczos_lowest(const SparseCMat& h,
                          const std::vector<Eigen::VectorXcd>& deflate,
                          RngStream& rng) {
  const std::int64_t dim = h.rows();
  const auto project_out = [&](Eigen::VectorXcd& w,
                               const std::vector<Eigen::VectorXcd>& vs) {
    for (const auto& u : vs) w -= u.dot(w) * u;
  };

  const int m_max =
      static_cast<int>(std::min<std::int64_t>(dim - deflate.size(), 500));
  for (int attempt = 0; attempt < 3; ++attempt) {
    Eigen::VectorXcd v(dim);
    for (std::int64_t i = 0; i < dim; ++i)
      v[i] = Complex(rng.normal(), rng.normal());
    project_out(v, deflate);
    if (v.norm() < 1e-12) continue;
    v.normalize();

    std::vector<Eigen::VectorXcd> basis{v};
    std::vector<double> alpha, beta;
    for (int j = 0; j < m_max; ++j) {
      Eigen::VectorXcd w = h * basis[j];
      alpha.push_back(basis[j].dot(w).real());
      // full reorthogonalization (twice) against the Krylov basis and the
      // converged, deflated directions
      for (int pass = 0; pass < 2; ++pass) {
        project_out(w, basis);
        project_out(w, deflate);
      }
      const double b = w.norm();
      const int m = j + 1;

      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        t(i, i) = alpha[i];
        if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
      const double scale = std::max(std::abs(es.eigenvalues()[0]),
                                    std::abs(es.eigenvalues()[m - 1]));
      const double residual = b * std::abs(es.eigenvectors()(m - 1, 0));
      if (residual <= 1e-10 * std::max(1.0, scale) || b < 1e-14 ||
          m == m_max) {
        if (residual > 1e-10 * std::max(1.0, scale) && b >= 1e-14)
          break;  // ran out of iterations; retry from a fresh start
        Eigen::VectorXcd x = Eigen::VectorXcd::Zero(dim);
        for (int q = 0; q < m; ++q) x += es.eigenvectors()(q, 0) * basis[q];
        const double n = x.norm();
        if (n < 1e-12) break;
        return {es.eigenvalues()[0], x / n};
      }
      beta.push_back(b);
      basis.push_back(w / b);
    }
  }
  throw std::runtime_error("eigensolver failed to converge");
}

}  // namespace

EigenPairs ground_state(const SparseCMat& h, int k, std::uint64_t seed) {
  const std::int64_t dim = h.rows();
  if (h.cols() != dim) throw std::invalid_argument("matrix must be square");
  if (k < 1 || k > dim) throw std::invalid_argument("bad eigenpair count");
  if (dim <= 512) return dense_eig(h, k);

  RngStream rng(seed, 0xE16);
  EigenPairs out;
  for (int i = 0; i < k; ++i) {
    auto pair = lanczos_lowest(h, out.vectors, rng);
    out.values.push_back(pair.value);
    out.vectors.push_back(std::move(pair.vector));
  }
  return out;
}

}  // namespace lgt
