// Apache License, Version 2.0, refer to LICENSE.txt

// Covariance-form reference computations, written independently of the
// precision-form code under test. Solves run in long double so the reference
// keeps its digits on the near-singular matrices a 1e-8 jitter allows.

#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "lgp/random.hpp"

namespace lgp::oracle {

using MatrixXl = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VectorXl = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

// z_i | z_{-i} for z ~ n(m, K) by the Schur complement.
inline Moments dense_conditional(Eigen::Index i, const Eigen::VectorXd& z,
                                 const Eigen::VectorXd& m, const Eigen::MatrixXd& K) {
  const Eigen::Index n = z.size();
  std::vector<Eigen::Index> rest;
  for (Eigen::Index l = 0; l < n; ++l) {
    if (l != i) rest.push_back(l);
  }
  const auto r = static_cast<Eigen::Index>(rest.size());
  if (r == 0) return {m[i], K(i, i)};
  MatrixXl Krr(r, r);
  VectorXl kir(r), dz(r);
  for (Eigen::Index a = 0; a < r; ++a) {
    kir[a] = K(i, rest[static_cast<std::size_t>(a)]);
    dz[a] = static_cast<long double>(z[rest[static_cast<std::size_t>(a)]]) -
            m[rest[static_cast<std::size_t>(a)]];
    for (Eigen::Index b = 0; b < r; ++b) {
      Krr(a, b) = K(rest[static_cast<std::size_t>(a)], rest[static_cast<std::size_t>(b)]);
    }
  }
  const auto lu = Krr.fullPivLu();
  const VectorXl sol = lu.solve(dz);
  const VectorXl g = lu.solve(kir);
  return {static_cast<double>(m[i] + kir.dot(sol)), static_cast<double>(K(i, i) - kir.dot(g))};
}

// z(x) | z for the joint normal with cross covariance k and prior variance kxx.
inline Moments dense_predictive(double mx, double kxx, const Eigen::VectorXd& k,
                                const Eigen::VectorXd& z, const Eigen::VectorXd& m,
                                const Eigen::MatrixXd& K) {
  const auto lu = K.cast<long double>().fullPivLu();
  const VectorXl kl = k.cast<long double>();
  const VectorXl r = z.cast<long double>() - m.cast<long double>();
  return {static_cast<double>(mx + kl.dot(lu.solve(r))),
          static_cast<double>(kxx - kl.dot(lu.solve(kl)))};
}

// log n(z | m, K) from a determinant and a linear solve.
inline double dense_logdensity(const Eigen::VectorXd& z, const Eigen::VectorXd& m,
                               const Eigen::MatrixXd& K) {
  const auto lu = K.fullPivLu();
  const Eigen::VectorXd r = z - m;
  return -0.5 * static_cast<double>(z.size()) * std::log(2.0 * M_PI) -
         0.5 * std::log(lu.determinant()) - 0.5 * r.dot(lu.solve(r));
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index k = 0; k < out.size(); ++k) out.data()[k] = rng.uniform();
  return out;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, Rng& rng, double scale = 1.0) {
  Eigen::VectorXd out(n);
  for (Eigen::Index k = 0; k < n; ++k) out[k] = scale * rng.normal();
  return out;
}

}  // namespace lgp::oracle
