#pragma once

#include "ospde/grid.hpp"

#include <cmath>

namespace ospde {

/// Sine-spectral machinery on the reference box (0,pi)^d. The discrete sine
/// vectors are exactly orthogonal on the uniform grid, so eta = 0 reproduces
/// the quadrature-weighted L^2 norm and a single mode e_k has norm
/// (1+|k|^2)^eta. General boxes are mapped affinely onto the reference box;
/// the Jacobian is folded in so eta = 0 matches the physical L^2 norm.
class SineTransform {
 public:
  explicit SineTransform(const Grid& grid)
      : dim_(grid.dim()), nx_(grid.nx()), ny_(grid.ny()) {
    sx_ = dst_matrix(nx_);
    if (dim_ == 2) sy_ = dst_matrix(ny_);
    // reference spacing times basis normalization, per axis
    cx_ = (M_PI / (nx_ + 1)) * std::sqrt(2.0 / M_PI);
    cy_ = dim_ == 2 ? (M_PI / (ny_ + 1)) * std::sqrt(2.0 / M_PI) : 1.0;
    jacobian_ = grid.domain().length(0) / M_PI;
    if (dim_ == 2) jacobian_ *= grid.domain().length(1) / M_PI;
  }

  /// Coefficients against the orthonormal sine basis of the reference box.
  /// 1D: entry k-1 is v_hat_k. 2D: entry (k1-1) + nx*(k2-1).
  Eigen::VectorXd forward(const Eigen::VectorXd& v) const {
    if (dim_ == 1) return cx_ * (sx_ * v);
    Eigen::Map<const Eigen::MatrixXd> vm(v.data(), nx_, ny_);
    Eigen::MatrixXd w = (cx_ * cy_) * (sx_ * vm * sy_.transpose());
    return Eigen::Map<Eigen::VectorXd>(w.data(), nx_ * ny_);
  }

  double fractional_norm_sq(const Eigen::VectorXd& v, double eta) const {
    if (eta < 0 || eta > 1)
      throw std::invalid_argument("fractional_norm_sq: eta must lie in [0,1]");
    const Eigen::VectorXd vhat = forward(v);
    double acc = 0;
    if (dim_ == 1) {
      for (int k = 1; k <= nx_; ++k)
        acc += std::pow(1.0 + static_cast<double>(k) * k, eta) * vhat[k - 1] * vhat[k - 1];
    } else {
      for (int k2 = 1; k2 <= ny_; ++k2)
        for (int k1 = 1; k1 <= nx_; ++k1) {
          const double w = std::pow(1.0 + static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2, eta);
          const double c = vhat[(k1 - 1) + nx_ * (k2 - 1)];
          acc += w * c * c;
        }
    }
    return jacobian_ * acc;
  }

 private:
  static Eigen::MatrixXd dst_matrix(int n) {
    Eigen::MatrixXd s(n, n);
    for (int k = 1; k <= n; ++k)
      for (int i = 1; i <= n; ++i) s(k - 1, i - 1) = std::sin(k * i * M_PI / (n + 1));
    return s;
  }

  int dim_, nx_, ny_;
  Eigen::MatrixXd sx_, sy_;
  double cx_, cy_, jacobian_;
};

inline double fractional_norm_sq(const Eigen::VectorXd& v, double eta, const Grid& grid) {
  return SineTransform(grid).fractional_norm_sq(v, eta);
}

}  // namespace ospde
