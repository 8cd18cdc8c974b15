#pragma once

#include <initializer_list>

#include "qhmcgp/kernels.hpp"

namespace testing {

inline qhmcgp::Vector vec(std::initializer_list<double> v) {
  qhmcgp::Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

inline qhmcgp::Matrix rows(std::initializer_list<std::initializer_list<double>> r) {
  const auto n = static_cast<Eigen::Index>(r.size());
  const auto d = static_cast<Eigen::Index>(r.begin()->size());
  qhmcgp::Matrix M(n, d);
  Eigen::Index i = 0;
  for (const auto& row : r) {
    Eigen::Index j = 0;
    for (double x : row) M(i, j++) = x;
    ++i;
  }
  return M;
}

// Six-point 2D problem mirrored in tests/oracles/derive.py.
inline qhmcgp::Matrix reference_X() {
  return rows({{0.1, 0.2}, {0.4, 0.9}, {0.8, 0.3}, {0.55, 0.6}, {0.95, 0.85}, {0.25, 0.5}});
}

inline qhmcgp::Vector reference_y() {
  const qhmcgp::Matrix X = reference_X();
  qhmcgp::Vector y(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) y[i] = std::sin(3.0 * X(i, 0)) + X(i, 1) * X(i, 1);
  return y;
}

inline qhmcgp::Hyperparams reference_hyper() { return {0.2, -0.8, -2.5}; }

}  // namespace testing
