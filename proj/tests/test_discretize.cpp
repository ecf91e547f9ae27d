#include "ospde/fractional.hpp"
#include "ospde/operators.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace ospde;

namespace {

Grid grid_1d(int n, double lo = 0.0, double hi = M_PI) {
  SpatialDomain d;
  d.dim = 1;
  d.extent[0] = {lo, hi};
  d.resolution[0] = n;
  return Grid(d);
}

Grid grid_2d(int nx, int ny, std::array<double, 2> ex, std::array<double, 2> ey) {
  SpatialDomain d;
  d.dim = 2;
  d.extent[0] = ex;
  d.extent[1] = ey;
  d.resolution = {nx, ny};
  return Grid(d);
}

Eigen::VectorXd sample_interior(const Grid& g, const std::function<double(const Point&)>& f) {
  Eigen::VectorXd v(g.interior_count());
  for (int k = 0; k < g.interior_count(); ++k) v[k] = f(g.interior_coord(k));
  return v;
}

Eigen::VectorXd sample_boundary(const Grid& g, const std::function<double(const Point&)>& f) {
  const auto idx = g.boundary_full_indices();
  Eigen::VectorXd v(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) v[i] = f(g.full_coord(idx[i]));
  return v;
}

// Independent oracle: Q1 stiffness assembled with 2x2 Gauss quadrature of
// the exact bilinear shape gradients, for a constant coefficient matrix.
Eigen::MatrixXd q1_stiffness_quadrature(const Eigen::Matrix2d& a, double hx, double hy) {
  const double gp[2] = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(4, 4);
  auto grad = [&](int i, double xi, double up) {
    // reference gradients of N1..N4 at (xi, up), scaled to physical coords
    double gx = 0, gy = 0;
    switch (i) {
      case 0: gx = -(1 - up); gy = -(1 - xi); break;
      case 1: gx = (1 - up); gy = -xi; break;
      case 2: gx = up; gy = xi; break;
      case 3: gx = -up; gy = (1 - xi); break;
    }
    return Eigen::Vector2d(gx / hx, gy / hy);
  };
  for (double xi : gp)
    for (double up : gp) {
      const double w = 0.25 * hx * hy;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          k(i, j) += w * grad(i, xi, up).dot(a * grad(j, xi, up));
    }
  return k;
}

// Same assembly loop as the production code but driven by the oracle cell
// matrix; constant coefficient so corner averaging is exact.
Eigen::MatrixXd assemble_reference_2d(const Eigen::Matrix2d& a, const Grid& g) {
  const int fx = g.nx() + 2;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(g.interior_count(), g.interior_count());
  const Eigen::MatrixXd k = q1_stiffness_quadrature(a, g.hx(), g.hy());
  for (int cy = 0; cy < g.ny() + 1; ++cy)
    for (int cx = 0; cx < g.nx() + 1; ++cx) {
      const int corners[4] = {cx + fx * cy, cx + 1 + fx * cy, cx + 1 + fx * (cy + 1),
                              cx + fx * (cy + 1)};
      for (int p = 0; p < 4; ++p) {
        const int rp = g.interior_from_full(corners[p]);
        if (rp < 0) continue;
        for (int q = 0; q < 4; ++q) {
          const int rq = g.interior_from_full(corners[q]);
          if (rq < 0) continue;
          out(rp, rq) += -k(p, q) / g.cell_volume();
        }
      }
    }
  return out;
}

}  // namespace

TEST_CASE("zero sigma assembles the zero operator") {
  const Grid g = grid_1d(16);
  auto op = assemble_divergence(SigmaField::zero(1, 1), g, 0.0);
  CHECK(op.interior.norm() == 0.0);
  CHECK(op.boundary.norm() == 0.0);
}

TEST_CASE("1D unit sigma gives the classical Laplacian stencil") {
  const Grid g = grid_1d(8, 0.0, 1.0);
  const double h = g.hx();
  auto op = assemble_divergence(SigmaField::identity(1, 1.0), g, 0.0);
  Eigen::MatrixXd dense(op.interior);
  for (int i = 0; i < g.nx(); ++i) {
    CHECK(dense(i, i) == Catch::Approx(-2.0 / (h * h)).epsilon(1e-14));
    if (i > 0) CHECK(dense(i, i - 1) == Catch::Approx(1.0 / (h * h)).epsilon(1e-14));
    if (i + 1 < g.nx()) CHECK(dense(i, i + 1) == Catch::Approx(1.0 / (h * h)).epsilon(1e-14));
  }
}

TEST_CASE("divergence-form matrix is symmetric and NSD") {
  SigmaField mixed;
  mixed.columns = 2;
  mixed.name = "constant";
  mixed.lambda0 = 10.0;
  mixed.eval = [](const Point&) {
    Eigen::MatrixXd s(2, 2);
    s << 1.2, 0.3, 0.1, 0.9;
    return s;
  };
  const Grid g = grid_2d(9, 7, {0.0, 1.0}, {0.0, 2.0});
  auto op = assemble_divergence(mixed, g, 0.0);
  Eigen::MatrixXd dense(op.interior);
  CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() == 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense);
  CHECK(eig.eigenvalues().maxCoeff() <= 1e-9);

  // <u, Lv> = <Lu, v> exactly on random fields
  std::mt19937_64 gen(3);
  std::normal_distribution<double> nd;
  Eigen::VectorXd u(g.interior_count()), v(g.interior_count());
  for (int i = 0; i < g.interior_count(); ++i) {
    u[i] = nd(gen);
    v[i] = nd(gen);
  }
  CHECK(u.dot(op.apply(v)) == Catch::Approx(v.dot(op.apply(u))).epsilon(1e-12));
  CHECK(u.dot(op.apply(u)) <= 1e-9);
}

TEST_CASE("2D assembly matches a quadrature-assembled reference") {
  Eigen::Matrix2d a;
  a << 2.0, 0.5, 0.5, 1.0;
  // sigma = chol(a) so sigma sigma^T = a
  Eigen::LLT<Eigen::Matrix2d> llt(a);
  Eigen::Matrix2d s = llt.matrixL();
  SigmaField sf;
  sf.columns = 2;
  sf.lambda0 = 3.0;
  sf.eval = [s](const Point&) { return Eigen::MatrixXd(s); };

  const Grid g = grid_2d(5, 4, {0.0, 1.0}, {0.0, 1.5});
  auto op = assemble_divergence(sf, g, 0.0);
  Eigen::MatrixXd dense(op.interior);
  Eigen::MatrixXd ref = assemble_reference_2d(a, g);
  CHECK((dense - ref).cwiseAbs().maxCoeff() < 1e-12 * ref.cwiseAbs().maxCoeff());
}

TEST_CASE("Grushin operator applied to x^2+y^2 converges at second order") {
  auto uf = [](const Point& p) { return p[0] * p[0] + p[1] * p[1]; };
  auto exact = [](const Point& p) { return 2.0 + 2.0 * p[0] * p[0]; };  // div(a grad u)
  std::vector<double> errs;
  for (int n : {16, 32, 64}) {
    const Grid g = grid_2d(n, n, {-1.0, 1.0}, {-1.0, 1.0});
    auto op = assemble_divergence(SigmaField::grushin(1.0), g, 0.0);
    const Eigen::VectorXd ui = sample_interior(g, uf);
    const Eigen::VectorXd ub = sample_boundary(g, uf);
    const Eigen::VectorXd lu = op.apply_full(ui, ub);
    double err = 0;
    for (int k = 0; k < g.interior_count(); ++k) {
      auto [i, j] = g.interior_ij(k);
      if (i < 1 || j < 1 || i >= g.nx() - 1 || j >= g.ny() - 1) continue;  // skip first ring
      err = std::max(err, std::abs(lu[k] - exact(g.interior_coord(k))));
    }
    errs.push_back(err);
  }
  const double order1 = std::log2(errs[0] / errs[1]);
  const double order2 = std::log2(errs[1] / errs[2]);
  CHECK(order1 >= 1.9);
  CHECK(order2 >= 1.9);
}

TEST_CASE("viscosity augments the diffusion matrix") {
  const Grid g = grid_1d(8, 0.0, 1.0);
  auto base = assemble_divergence(SigmaField::zero(1, 1), g, 0.25);
  auto quarter = assemble_divergence(SigmaField::identity(1, 0.5), g, 0.0);
  CHECK((Eigen::MatrixXd(base.interior) - Eigen::MatrixXd(quarter.interior))
            .cwiseAbs()
            .maxCoeff() < 1e-13 / (g.hx() * g.hx()));
}

TEST_CASE("non-PSD coefficient matrix is rejected") {
  SigmaField bad;
  bad.columns = 1;
  bad.lambda0 = 1.0;
  bad.eval = [](const Point&) {           // not a valid factor: we fake a via a
    Eigen::MatrixXd s(1, 1);              // negative "square", impossible through
    s << std::nan("");                    // sigma itself, so use NaN to trip the check
    return s;
  };
  const Grid g = grid_1d(4);
  CHECK_THROWS_AS(assemble_divergence(bad, g, 0.0), std::invalid_argument);
}

TEST_CASE("first-order operator is exact on linear functions") {
  const Grid g = grid_1d(16, 0.0, 2.0);
  auto op = assemble_first_order(SigmaField::identity(1, 1.0), 0, g);
  const Eigen::VectorXd ui = sample_interior(g, [](const Point& p) { return p[0]; });
  const Eigen::VectorXd ub = sample_boundary(g, [](const Point& p) { return p[0]; });
  const Eigen::VectorXd du = op.apply_full(ui, ub);
  for (int k = 0; k < g.interior_count(); ++k) CHECK(du[k] == Catch::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("zero sigma column gives the zero first-order operator") {
  const Grid g = grid_1d(8);
  auto op = assemble_first_order(SigmaField::zero(1, 2), 1, g);
  CHECK(op.interior.norm() == 0.0);
}

TEST_CASE("Grushin L2 = x d_y applied to y recovers x") {
  const Grid g = grid_2d(12, 12, {-1.0, 1.0}, {-1.0, 1.0});
  auto op = assemble_first_order(SigmaField::grushin(1.0), 1, g);
  const Eigen::VectorXd ui = sample_interior(g, [](const Point& p) { return p[1]; });
  const Eigen::VectorXd ub = sample_boundary(g, [](const Point& p) { return p[1]; });
  const Eigen::VectorXd du = op.apply_full(ui, ub);
  for (int k = 0; k < g.interior_count(); ++k)
    CHECK(du[k] == Catch::Approx(g.interior_coord(k)[0]).margin(1e-12));
}

TEST_CASE("discrete integration by parts error decays at first order or better") {
  // <L_h u, u> vs -sum_k ||(L_k)_h u||^2 on a smooth Dirichlet field
  auto uf = [](const Point& p) { return std::sin(p[0]) * std::sin(2 * p[0]); };
  std::vector<double> gaps;
  for (int n : {32, 64, 128}) {
    const Grid g = grid_1d(n);
    auto lop = assemble_divergence(SigmaField::identity(1, 1.0), g, 0.0);
    auto dop = assemble_first_order(SigmaField::identity(1, 1.0), 0, g);
    const Eigen::VectorXd u = sample_interior(g, uf);
    const double lhs = g.cell_volume() * u.dot(lop.apply(u));
    const double rhs = -g.norm_sq(dop.apply(u));
    gaps.push_back(std::abs(lhs - rhs));
  }
  CHECK(std::log2(gaps[0] / gaps[1]) >= 1.0);
  CHECK(std::log2(gaps[1] / gaps[2]) >= 1.0);
}

TEST_CASE("operator triplet export is well formed") {
  const Grid g = grid_1d(4, 0.0, 1.0);
  auto op = assemble_divergence(SigmaField::identity(1, 1.0), g, 0.0);
  std::ostringstream os;
  write_triplets(op, os);
  std::istringstream is(os.str());
  std::string magic, kind;
  int rows, cols, nnz;
  is >> magic >> rows >> cols >> nnz >> kind;
  CHECK(magic == "ospde-sparse-v1");
  CHECK(rows == 4);
  CHECK(cols == 4);
  CHECK(nnz == 10);
  CHECK(kind == "divergence_form");
  int r, c;
  double v;
  is >> r >> c >> v;
  CHECK(r == 0);
  CHECK(c == 0);
  CHECK(v == Catch::Approx(-2.0 / (g.hx() * g.hx())));
}

TEST_CASE("fractional norm at eta = 0 is the quadrature L2 norm") {
  const Grid g = grid_1d(64);
  std::mt19937_64 gen(11);
  std::normal_distribution<double> nd;
  Eigen::VectorXd v(g.interior_count());
  for (int i = 0; i < v.size(); ++i) v[i] = nd(gen);
  CHECK(fractional_norm_sq(v, 0.0, g) == Catch::Approx(g.norm_sq(v)).epsilon(1e-12));
}

TEST_CASE("single sine mode has norm (1+k^2)^eta") {
  const Grid g = grid_1d(32);  // reference box (0, pi)
  for (int k : {1, 3, 7}) {
    const Eigen::VectorXd v = sample_interior(
        g, [k](const Point& p) { return std::sqrt(2.0 / M_PI) * std::sin(k * p[0]); });
    for (double eta : {0.0, 0.35, 1.0})
      CHECK(fractional_norm_sq(v, eta, g) ==
            Catch::Approx(std::pow(1.0 + k * k, eta)).epsilon(1e-12));
  }
}

TEST_CASE("2D single mode has norm (1+|k|^2)^eta") {
  const Grid g = grid_2d(16, 16, {0.0, M_PI}, {0.0, M_PI});
  const int k1 = 2, k2 = 3;
  const Eigen::VectorXd v = sample_interior(g, [&](const Point& p) {
    return (2.0 / M_PI) * std::sin(k1 * p[0]) * std::sin(k2 * p[1]);
  });
  for (double eta : {0.0, 0.5, 1.0})
    CHECK(fractional_norm_sq(v, eta, g) ==
          Catch::Approx(std::pow(1.0 + k1 * k1 + k2 * k2, eta)).epsilon(1e-11));
}

TEST_CASE("eta = 1 agrees with the finite-difference H1 norm within 2%") {
  const Grid g = grid_1d(256);
  const Eigen::VectorXd v = sample_interior(
      g, [](const Point& p) { return std::sin(p[0]) * (1.0 + 0.3 * std::sin(2 * p[0])); });
  double grad_sq = 0;
  const double h = g.hx();
  for (int i = 0; i <= g.nx(); ++i) {
    const double a = i == 0 ? 0.0 : v[i - 1];
    const double b = i == g.nx() ? 0.0 : v[i];
    grad_sq += h * ((b - a) / h) * ((b - a) / h);
  }
  const double fd = g.norm_sq(v) + grad_sq;
  CHECK(fractional_norm_sq(v, 1.0, g) == Catch::Approx(fd).epsilon(0.02));
}

TEST_CASE("fractional norm is monotone in eta") {
  const Grid g = grid_1d(48);
  std::mt19937_64 gen(7);
  std::normal_distribution<double> nd;
  Eigen::VectorXd v(g.interior_count());
  for (int i = 0; i < v.size(); ++i) v[i] = nd(gen);
  SineTransform st(g);
  double prev = st.fractional_norm_sq(v, 0.0);
  for (double eta = 0.1; eta <= 1.0001; eta += 0.1) {
    const double cur = st.fractional_norm_sq(v, eta);
    CHECK(cur >= prev);
    prev = cur;
  }
  CHECK_THROWS_AS(st.fractional_norm_sq(v, 1.5), std::invalid_argument);
}
