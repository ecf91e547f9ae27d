#pragma once

#include "ospde/problem.hpp"

#include <Eigen/Sparse>

#include <ostream>

namespace ospde {

enum class OperatorKind { divergence_form, first_order, mass, fractional };

inline const char* to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::divergence_form: return "divergence_form";
    case OperatorKind::first_order: return "first_order";
    case OperatorKind::mass: return "mass";
    case OperatorKind::fractional: return "fractional";
  }
  return "?";
}

/// Sparse operator over interior nodes, with the coupling to prescribed
/// boundary values kept separately so consistency tests can apply the full
/// stencil to functions that do not vanish on the boundary.
struct DiscreteOperator {
  OperatorKind kind = OperatorKind::divergence_form;
  Eigen::SparseMatrix<double> interior;  // interior x interior
  Eigen::SparseMatrix<double> boundary;  // interior x boundary

  Eigen::VectorXd apply(const Eigen::VectorXd& u) const { return interior * u; }
  Eigen::VectorXd apply_full(const Eigen::VectorXd& u_int, const Eigen::VectorXd& u_bnd) const {
    return interior * u_int + boundary * u_bnd;
  }
};

namespace detail {

inline void check_psd(const Eigen::MatrixXd& a, int node) {
  if (!a.allFinite())
    throw std::invalid_argument("assemble: a(x) has non-finite entries at full-lattice node " +
                                std::to_string(node));
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  if (eig.eigenvalues().minCoeff() < -1e-12 * scale)
    throw std::invalid_argument("assemble: a(x) is not PSD at full-lattice node " +
                                std::to_string(node));
}

struct TripletSink {
  std::vector<Eigen::Triplet<double>> interior;
  std::vector<Eigen::Triplet<double>> boundary;
  const Grid* grid;

  void add(int row_interior, int col_full, double v) {
    if (v == 0.0) return;
    const int ci = grid->interior_from_full(col_full);
    if (ci >= 0)
      interior.emplace_back(row_interior, ci, v);
    else
      boundary.emplace_back(row_interior, grid->boundary_ordinal(col_full), v);
  }
};

}  // namespace detail

/// Divergence-form operator L = d_i((a_ij + eps_visc delta_ij) d_j .) with
/// a = sigma sigma^T, assembled cell-by-cell from the piecewise-bilinear
/// energy with the coefficient averaged over cell corners and the diagonal
/// mass lumped. The assembly keeps the matrix symmetric and negative
/// semidefinite exactly; in 1D it reduces to the classical flux form
/// (1/h^2) [a_{i-1/2}, -(a_{i-1/2} + a_{i+1/2}), a_{i+1/2}].
inline DiscreteOperator assemble_divergence(const SigmaField& sigma, const Grid& grid,
                                            double eps_visc) {
  if (eps_visc < 0) throw std::invalid_argument("assemble_divergence: eps_visc must be >= 0");
  const int d = grid.dim();

  // tabulate a(x) at full-lattice nodes, checking degeneracy direction-wise
  std::vector<Eigen::MatrixXd> a(grid.full_count());
  for (int f = 0; f < grid.full_count(); ++f) {
    const Eigen::MatrixXd s = sigma(grid.full_coord(f));
    a[f] = s * s.transpose();
    detail::check_psd(a[f], f);
    a[f] += eps_visc * Eigen::MatrixXd::Identity(d, d);
  }

  detail::TripletSink sink;
  sink.grid = &grid;
  const double vol = grid.cell_volume();

  if (d == 1) {
    const double h = grid.hx();
    for (int c = 0; c < grid.nx() + 1; ++c) {  // cells between full nodes c and c+1
      const double ac = 0.5 * (a[c](0, 0) + a[c + 1](0, 0));
      const double w = ac / h;  // stiffness [[w,-w],[-w,w]]
      const int corners[2] = {c, c + 1};
      for (int p = 0; p < 2; ++p) {
        const int rp = grid.interior_from_full(corners[p]);
        if (rp < 0) continue;
        for (int q = 0; q < 2; ++q) {
          const double k = (p == q) ? w : -w;
          sink.add(rp, corners[q], -k / vol);
        }
      }
    }
  } else {
    const double hx = grid.hx(), hy = grid.hy();
    // exact integrals of bilinear shape gradients on a reference cell; corner
    // order (0,0), (1,0), (1,1), (0,1)
    static const double Kxx[4][4] = {{1. / 3, -1. / 3, -1. / 6, 1. / 6},
                                     {-1. / 3, 1. / 3, 1. / 6, -1. / 6},
                                     {-1. / 6, 1. / 6, 1. / 3, -1. / 3},
                                     {1. / 6, -1. / 6, -1. / 3, 1. / 3}};
    static const double Kyy[4][4] = {{1. / 3, 1. / 6, -1. / 6, -1. / 3},
                                     {1. / 6, 1. / 3, -1. / 3, -1. / 6},
                                     {-1. / 6, -1. / 3, 1. / 3, 1. / 6},
                                     {-1. / 3, -1. / 6, 1. / 6, 1. / 3}};
    static const double sgn_x[4] = {-1, 1, 1, -1};
    static const double sgn_y[4] = {-1, -1, 1, 1};
    const int fx = grid.nx() + 2;
    for (int cy = 0; cy < grid.ny() + 1; ++cy)
      for (int cx = 0; cx < grid.nx() + 1; ++cx) {
        const int corners[4] = {cx + fx * cy, cx + 1 + fx * cy, cx + 1 + fx * (cy + 1),
                                cx + fx * (cy + 1)};
        double axx = 0, axy = 0, ayy = 0;
        for (int p = 0; p < 4; ++p) {
          axx += a[corners[p]](0, 0);
          axy += a[corners[p]](0, 1);
          ayy += a[corners[p]](1, 1);
        }
        axx *= 0.25;
        axy *= 0.25;
        ayy *= 0.25;
        for (int p = 0; p < 4; ++p) {
          const int rp = grid.interior_from_full(corners[p]);
          if (rp < 0) continue;
          for (int q = 0; q < 4; ++q) {
            const double k = axx * (hy / hx) * Kxx[p][q] + ayy * (hx / hy) * Kyy[p][q] +
                             axy * 2.0 * (sgn_x[p] * sgn_y[q] + sgn_y[p] * sgn_x[q]) / 8.0;
            sink.add(rp, corners[q], -k / vol);
          }
        }
      }
  }

  DiscreteOperator op;
  op.kind = OperatorKind::divergence_form;
  op.interior.resize(grid.interior_count(), grid.interior_count());
  op.interior.setFromTriplets(sink.interior.begin(), sink.interior.end());
  op.boundary.resize(grid.interior_count(), grid.boundary_count());
  op.boundary.setFromTriplets(sink.boundary.begin(), sink.boundary.end());
  return op;
}

/// Centered-difference discretization of the first-order field
/// L_k = sum_i sigma_{ik} d_i with homogeneous-Dirichlet truncation at the
/// boundary; exact on linear functions at nodes with a full stencil.
inline DiscreteOperator assemble_first_order(const SigmaField& sigma, int column,
                                             const Grid& grid) {
  if (column < 0 || column >= sigma.columns)
    throw std::invalid_argument("assemble_first_order: column out of range");
  const int d = grid.dim();
  detail::TripletSink sink;
  sink.grid = &grid;
  const int fx = grid.nx() + 2;

  for (int k = 0; k < grid.interior_count(); ++k) {
    const Point x = grid.interior_coord(k);
    const Eigen::MatrixXd s = sigma(x);
    const int f = grid.full_from_interior(k);
    for (int axis = 0; axis < d; ++axis) {
      const double c = s(axis, column) / (2 * grid.spacing(axis));
      if (c == 0.0) continue;
      const int stride = axis == 0 ? 1 : fx;
      sink.add(k, f + stride, c);
      sink.add(k, f - stride, -c);
    }
  }

  DiscreteOperator op;
  op.kind = OperatorKind::first_order;
  op.interior.resize(grid.interior_count(), grid.interior_count());
  op.interior.setFromTriplets(sink.interior.begin(), sink.interior.end());
  op.boundary.resize(grid.interior_count(), grid.boundary_count());
  op.boundary.setFromTriplets(sink.boundary.begin(), sink.boundary.end());
  return op;
}

/// Writes the interior matrix in a plain triplet text format:
///   ospde-sparse-v1 <rows> <cols> <nnz> <kind>
///   <row> <col> <value>          (0-based, one entry per line, row-major)
inline void write_triplets(const DiscreteOperator& op, std::ostream& os) {
  std::vector<Eigen::Triplet<double>> entries;
  for (int outer = 0; outer < op.interior.outerSize(); ++outer)
    for (Eigen::SparseMatrix<double>::InnerIterator it(op.interior, outer); it; ++it)
      entries.emplace_back(it.row(), it.col(), it.value());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return a.row() != b.row() ? a.row() < b.row() : a.col() < b.col();
  });
  os << "ospde-sparse-v1 " << op.interior.rows() << " " << op.interior.cols() << " "
     << entries.size() << " " << to_string(op.kind) << "\n";
  char buf[64];
  for (const auto& t : entries) {
    std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", static_cast<int>(t.row()),
                  static_cast<int>(t.col()), t.value());
    os << buf;
  }
}

}  // namespace ospde
