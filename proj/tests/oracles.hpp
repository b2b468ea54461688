// Test-only oracles, independent of the library implementation paths they
// check.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracles {

inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int n = 20001) {
  if (n % 2 == 0) ++n;
  const double h = (b - a) / (n - 1);
  double sum = f(a) + f(b);
  for (int i = 1; i < n - 1; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

// U(1) single-plaquette expectation <cos theta> at coupling beta,
// equal to I1(beta)/I0(beta)
inline double u1_plaquette(double beta) {
  const double pi = 3.14159265358979323846;
  const auto num = simpson(
      [beta](double t) { return std::cos(t) * std::exp(beta * std::cos(t)); },
      -pi, pi);
  const auto den =
      simpson([beta](double t) { return std::exp(beta * std::cos(t)); }, -pi,
              pi);
  return num / den;
}

// SU(2) single-plaquette expectation <Tr U / 2> with the Haar class-angle
// measure sin^2(theta)
inline double su2_plaquette(double beta) {
  const double pi = 3.14159265358979323846;
  const auto w = [beta](double t) {
    return std::sin(t) * std::sin(t) * std::exp(beta * std::cos(t));
  };
  const auto num =
      simpson([&](double t) { return std::cos(t) * w(t); }, 0.0, pi);
  const auto den = simpson(w, 0.0, pi);
  return num / den;
}

// Haar moment of f(theta) over the SU(2) class angle, weight
// (2/pi) sin^2(theta)
inline double su2_class_moment(const std::function<double(double)>& f) {
  const double pi = 3.14159265358979323846;
  return simpson(
             [&](double t) { return f(t) * std::sin(t) * std::sin(t); }, 0.0,
             pi) *
         2.0 / pi;
}

// scaling-and-squaring matrix exponential (Taylor on the scaled matrix)
inline Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a) {
  const int s = std::max(0, static_cast<int>(std::ceil(
                                std::log2(std::max(1.0, a.norm())))) +
                                4);
  const Eigen::MatrixXcd b = a / std::pow(2.0, s);
  Eigen::MatrixXcd term =
      Eigen::MatrixXcd::Identity(a.rows(), a.cols());
  Eigen::MatrixXcd sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * b / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

// synthetic AR(1) series with known tau_int = (1+rho)/(2(1-rho))
inline std::vector<double> ar1_series(double rho, std::size_t n,
                                      std::uint64_t seed) {
  // independent minimal generator (LCG + Box-Muller), not the library RNG
  std::uint64_t state = seed * 6364136223846793005ULL + 1442695040888963407ULL;
  auto uniform = [&]() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(state >> 11) * 0x1.0p-53;
  };
  auto normal = [&]() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586 * uniform());
  };
  std::vector<double> x(n);
  x[0] = normal();
  const double s = std::sqrt(1.0 - rho * rho);
  for (std::size_t i = 1; i < n; ++i) x[i] = rho * x[i - 1] + s * normal();
  return x;
}

}  // namespace oracles
