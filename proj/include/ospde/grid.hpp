#pragma once

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <vector>

namespace ospde {

using Point = Eigen::Vector2d;  // component 1 unused in 1D

/// Open box domain with homogeneous Dirichlet boundary. `resolution` counts
/// interior nodes per axis; boundary nodes carry the condition u = 0.
struct SpatialDomain {
  int dim = 1;
  std::array<std::array<double, 2>, 2> extent{{{0.0, 1.0}, {0.0, 1.0}}};
  std::array<int, 2> resolution{{3, 3}};

  double length(int axis) const { return extent[axis][1] - extent[axis][0]; }
};

/// Uniform tensor grid derived from a SpatialDomain. Interior nodes are
/// indexed x-fastest; the full lattice (interior + boundary) is used for
/// coefficient evaluation and operator boundary coupling.
class Grid {
 public:
  explicit Grid(const SpatialDomain& dom) : dom_(dom) {
    if (dom.dim != 1 && dom.dim != 2) throw std::invalid_argument("Grid: dim must be 1 or 2");
    for (int a = 0; a < dom.dim; ++a) {
      if (dom.resolution[a] < 3) throw std::invalid_argument("Grid: need >= 3 interior nodes");
      if (dom.length(a) <= 0) throw std::invalid_argument("Grid: extent must have positive length");
    }
    nx_ = dom.resolution[0];
    ny_ = dom.dim == 2 ? dom.resolution[1] : 1;
    h_[0] = dom.length(0) / (nx_ + 1);
    h_[1] = dom.dim == 2 ? dom.length(1) / (ny_ + 1) : 1.0;
    fx_ = nx_ + 2;
    fy_ = dom.dim == 2 ? ny_ + 2 : 1;
    b_ord_.assign(fx_ * fy_, -1);
    int ord = 0;
    for (int f = 0; f < fx_ * fy_; ++f)
      if (is_boundary(f)) b_ord_[f] = ord++;
  }

  int dim() const { return dom_.dim; }
  const SpatialDomain& domain() const { return dom_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int interior_count() const { return nx_ * ny_; }
  double hx() const { return h_[0]; }
  double hy() const { return h_[1]; }
  double spacing(int axis) const { return h_[axis]; }
  double cell_volume() const { return dom_.dim == 2 ? h_[0] * h_[1] : h_[0]; }

  int interior_index(int i, int j = 0) const { return i + nx_ * j; }
  std::pair<int, int> interior_ij(int k) const { return {k % nx_, k / nx_}; }

  Point interior_coord(int k) const {
    auto [i, j] = interior_ij(k);
    Point p;
    p[0] = dom_.extent[0][0] + (i + 1) * h_[0];
    p[1] = dom_.dim == 2 ? dom_.extent[1][0] + (j + 1) * h_[1] : 0.0;
    return p;
  }

  // Full lattice: (nx+2) x (ny+2) nodes including the boundary ring.
  int full_count() const { return fx_ * fy_; }
  int full_index(int fi, int fj = 0) const { return fi + fx_ * fj; }
  std::pair<int, int> full_ij(int f) const { return {f % fx_, f / fx_}; }

  Point full_coord(int f) const {
    auto [fi, fj] = full_ij(f);
    Point p;
    p[0] = dom_.extent[0][0] + fi * h_[0];
    p[1] = dom_.dim == 2 ? dom_.extent[1][0] + fj * h_[1] : 0.0;
    return p;
  }

  bool is_boundary(int f) const {
    auto [fi, fj] = full_ij(f);
    if (fi == 0 || fi == fx_ - 1) return true;
    if (dom_.dim == 2 && (fj == 0 || fj == fy_ - 1)) return true;
    return false;
  }

  /// Interior flat index of a full-lattice node, or -1 on the boundary.
  int interior_from_full(int f) const {
    auto [fi, fj] = full_ij(f);
    if (is_boundary(f)) return -1;
    return interior_index(fi - 1, dom_.dim == 2 ? fj - 1 : 0);
  }

  int full_from_interior(int k) const {
    auto [i, j] = interior_ij(k);
    return full_index(i + 1, dom_.dim == 2 ? j + 1 : 0);
  }

  std::vector<int> boundary_full_indices() const {
    std::vector<int> out;
    for (int f = 0; f < full_count(); ++f)
      if (is_boundary(f)) out.push_back(f);
    return out;
  }

  int boundary_count() const { return dom_.dim == 2 ? 2 * (fx_ + fy_) - 4 : 2; }

  /// Ordinal of a boundary node among boundary nodes (column index in the
  /// boundary coupling matrix); full-lattice enumeration order.
  int boundary_ordinal(int f) const { return b_ord_[f]; }

  /// Quadrature-weighted squared L^2 norm of an interior field.
  double norm_sq(const Eigen::VectorXd& v) const { return cell_volume() * v.squaredNorm(); }

 private:
  SpatialDomain dom_;
  int nx_ = 0, ny_ = 1, fx_ = 0, fy_ = 1;
  std::array<double, 2> h_{{0, 0}};
  std::vector<int> b_ord_;
};

}  // namespace ospde
