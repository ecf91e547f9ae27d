#pragma once

#include "ospde/grid.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <string>

namespace ospde {

/// Scalar random-function coefficient c(t, x, y, z); y is the state value,
/// z the sigma-gradient vector (one entry per sigma column). The dependency
/// flags drive the linear-vs-nonlinear dispatch in the solvers.
struct ScalarCoeff {
  std::string name = "zero";
  std::function<double(double, const Point&, double, const Eigen::VectorXd&)> fn;
  bool depends_y = false;
  bool depends_z = false;

  double operator()(double t, const Point& x, double y, const Eigen::VectorXd& z) const {
    return fn ? fn(t, x, y, z) : 0.0;
  }
  bool is_linear() const { return !depends_y && !depends_z; }

  static ScalarCoeff zero() { return {}; }
  static ScalarCoeff constant(double v) {
    ScalarCoeff c;
    c.name = "constant";
    c.fn = [v](double, const Point&, double, const Eigen::VectorXd&) { return v; };
    return c;
  }
  static ScalarCoeff spatial(std::string name,
                             std::function<double(double, const Point&)> f) {
    ScalarCoeff c;
    c.name = std::move(name);
    c.fn = [f = std::move(f)](double t, const Point& x, double, const Eigen::VectorXd&) {
      return f(t, x);
    };
    return c;
  }
};

/// sigma(x) as a d x n matrix field together with the degeneracy bound
/// lambda0: every eigenvalue of a = sigma sigma^T must lie in [0, lambda0].
struct SigmaField {
  int columns = 1;
  double lambda0 = 1.0;
  std::string name = "zero";
  std::function<Eigen::MatrixXd(const Point&)> eval;

  Eigen::MatrixXd operator()(const Point& x) const { return eval(x); }

  static SigmaField zero(int dim, int columns) {
    SigmaField s;
    s.columns = columns;
    s.lambda0 = 0.0;
    s.name = "zero";
    s.eval = [dim, columns](const Point&) { return Eigen::MatrixXd::Zero(dim, columns); };
    return s;
  }
  static SigmaField identity(int dim, double scale = 1.0) {
    SigmaField s;
    s.columns = dim;
    s.lambda0 = scale * scale;
    s.name = "identity";
    s.eval = [dim, scale](const Point&) {
      return Eigen::MatrixXd(scale * Eigen::MatrixXd::Identity(dim, dim));
    };
    return s;
  }
  /// d=2 degenerate example: columns (1,0) and (0,x1).
  static SigmaField grushin(double x1_max_abs) {
    SigmaField s;
    s.columns = 2;
    s.lambda0 = std::max(1.0, x1_max_abs * x1_max_abs);
    s.name = "grushin";
    s.eval = [](const Point& x) {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
      m(0, 0) = 1.0;
      m(1, 1) = x[0];
      return m;
    };
    return s;
  }
};

/// Nonlinear coefficients with their declared Lipschitz structure constants:
/// |f(y,z)-f(y',z')| <= C(|dy|+|dz|), |g(..)| <= C|dy| + alpha|dz|,
/// |h(..)| <= C|dy| + beta|dz| (l2 norms over components).
struct CoefficientSet {
  ScalarCoeff f;
  std::vector<ScalarCoeff> g;  // one entry per sigma column
  std::vector<ScalarCoeff> h;  // noise channels, truncation level J = h.size()
  double lip_C = 0.0;
  double lip_alpha = 0.0;
  double lip_beta = 0.0;

  int noise_channels() const { return static_cast<int>(h.size()); }
  bool is_linear() const {
    if (!f.is_linear()) return false;
    for (const auto& c : g)
      if (!c.is_linear()) return false;
    for (const auto& c : h)
      if (!c.is_linear()) return false;
    return true;
  }
};

/// Data of the linear SPDE controlling the obstacle from above.
struct DominatorSpec {
  std::function<double(const Point&)> initial;  // S'(0)
  ScalarCoeff f;
  std::vector<ScalarCoeff> g;
  std::vector<ScalarCoeff> h;
};

struct ObstacleSpec {
  ScalarCoeff barrier;  // S(t, x); must not depend on (y, z)
  std::optional<DominatorSpec> dominator;
};

struct SpdeProblem {
  SpatialDomain domain;
  SigmaField sigma;
  CoefficientSet coeffs;
  std::function<double(const Point&)> initial;  // xi
  std::string initial_name = "zero";
  std::optional<ObstacleSpec> obstacle;
  double horizon = 1.0;
  double viscosity = 0.0;  // optional eps * Laplacian stabilizer

  Eigen::VectorXd initial_values(const Grid& grid) const {
    Eigen::VectorXd v(grid.interior_count());
    for (int k = 0; k < grid.interior_count(); ++k)
      v[k] = initial ? initial(grid.interior_coord(k)) : 0.0;
    return v;
  }
};

// ---------------------------------------------------------------------------
// Contraction gate
// ---------------------------------------------------------------------------

struct ContractionReport {
  bool satisfied = false;
  std::optional<double> epsilon;
  std::optional<double> gamma;
  std::optional<double> delta;

  /// Picard contraction factor (C eps + alpha + beta^2 (1+eps)) / (1 - alpha - C eps).
  std::optional<double> ratio;
};

/// Decides 2*alpha + beta^2 < 1 and, when it holds, produces the weight
/// parameters of the equivalent norm: eps is found by bisection on (0,1]
/// subject to C*eps + alpha + beta^2*(1+eps) < 1 - alpha - C*eps, then
/// delta = C(C + eps + (C+1)/eps) / (C eps + alpha + beta^2 (1+eps)) and
/// gamma = 1/eps + delta * (1 - alpha - C eps).
inline ContractionReport check_contraction(double C, double alpha, double beta) {
  if (C < 0 || alpha < 0 || beta < 0)
    throw std::invalid_argument("check_contraction: constants must be nonnegative");
  ContractionReport rep;
  rep.satisfied = 2 * alpha + beta * beta < 1.0;
  if (!rep.satisfied) return rep;

  auto gap = [&](double e) {
    return (C * e + alpha + beta * beta * (1 + e)) - (1 - alpha - C * e);
  };
  double eps_star = 1.0;
  if (gap(1.0) >= 0) {
    double lo = 0.0, hi = 1.0;  // gap(0) = 2 alpha + beta^2 - 1 < 0
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      double mid = 0.5 * (lo + hi);
      (gap(mid) < 0 ? lo : hi) = mid;
    }
    eps_star = lo;
  }
  const double eps = 0.5 * eps_star;
  const double denom = C * eps + alpha + beta * beta * (1 + eps);
  const double num = C * (C + eps + (C + 1) / eps);
  const double delta = denom > 0 ? num / denom : 0.0;
  const double one_minus = 1 - alpha - C * eps;
  rep.epsilon = eps;
  rep.delta = delta;
  rep.gamma = 1.0 / eps + delta * one_minus;
  rep.ratio = denom / one_minus;
  return rep;
}

// ---------------------------------------------------------------------------
// Problem validation
// ---------------------------------------------------------------------------

struct Violation {
  std::string assumption;
  std::string detail;
};

namespace detail {

struct ProbeState {
  double y;
  double z_fill;
  bool z_alternating;
};

inline Eigen::VectorXd probe_z(const ProbeState& s, int channels) {
  Eigen::VectorXd z(channels);
  for (int k = 0; k < channels; ++k)
    z[k] = s.z_alternating ? s.z_fill * (k % 2 == 0 ? 1.0 : -1.0) : s.z_fill;
  return z;
}

}  // namespace detail

/// Checks the structural assumptions on the grid and on a deterministic
/// lattice of Lipschitz probe points. Violations are data, not failures:
/// an empty list means the problem passed every check.
inline std::vector<Violation> validate_problem(const SpdeProblem& prob) {
  std::vector<Violation> out;

  if (prob.domain.dim != 1 && prob.domain.dim != 2)
    out.push_back({"domain", "dim must be 1 or 2"});
  for (int a = 0; a < std::min(prob.domain.dim, 2); ++a) {
    if (prob.domain.resolution[a] < 3)
      out.push_back({"domain", "fewer than 3 interior nodes on axis " + std::to_string(a + 1)});
    if (prob.domain.length(a) <= 0)
      out.push_back({"domain", "non-positive extent on axis " + std::to_string(a + 1)});
  }
  if (prob.horizon <= 0) out.push_back({"horizon", "T must be positive"});
  if (prob.viscosity < 0) out.push_back({"viscosity", "eps_visc must be >= 0"});
  if (!out.empty()) return out;  // grid cannot be built, stop at structural level

  const Grid grid(prob.domain);
  const int d = prob.domain.dim;
  const int n = prob.sigma.columns;
  const int J = prob.coeffs.noise_channels();

  // (degenerate ellipticity) a = sigma sigma^T PSD with eigenvalues <= lambda0
  for (int f = 0; f < grid.full_count(); ++f) {
    const Point x = grid.full_coord(f);
    const Eigen::MatrixXd s = prob.sigma(x);
    if (s.rows() != d || s.cols() != n) {
      out.push_back({"sigma", "sigma(x) has wrong shape"});
      break;
    }
    const Eigen::MatrixXd a = s * s.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if (eig.eigenvalues().minCoeff() < -1e-10 * scale) {
      out.push_back({"sigma PSD", "a(x) not positive semidefinite at node " + std::to_string(f)});
      break;
    }
    if (eig.eigenvalues().maxCoeff() > prob.sigma.lambda0 + 1e-10 * scale) {
      out.push_back({"sigma lambda0",
                     "eigenvalue of a(x) exceeds lambda0 at node " + std::to_string(f)});
      break;
    }
  }

  // (I) initial datum: finite on the grid, vanishing on the boundary
  double xi_max = 0.0;
  for (int k = 0; k < grid.interior_count(); ++k) {
    const double v = prob.initial ? prob.initial(grid.interior_coord(k)) : 0.0;
    if (!std::isfinite(v)) {
      out.push_back({"(I) initial", "xi not finite at interior node " + std::to_string(k)});
      break;
    }
    xi_max = std::max(xi_max, std::abs(v));
  }
  for (int f : grid.boundary_full_indices()) {
    const double v = prob.initial ? prob.initial(grid.full_coord(f)) : 0.0;
    if (std::abs(v) > 1e-9 * (1 + xi_max)) {
      out.push_back({"(I) initial", "xi does not vanish on the boundary"});
      break;
    }
  }

  // (H) Lipschitz spot checks on a deterministic probe lattice
  {
    const double C = prob.coeffs.lip_C, al = prob.coeffs.lip_alpha, be = prob.coeffs.lip_beta;
    if (C < 0 || al < 0 || be < 0)
      out.push_back({"(H)", "Lipschitz constants must be nonnegative"});
    if (!(2 * al + be * be < 1.0))
      out.push_back({"(H)4 contraction", "2*alpha + beta^2 >= 1"});
    if (!prob.coeffs.g.empty() && static_cast<int>(prob.coeffs.g.size()) != n)
      out.push_back({"coefficients", "g must have one component per sigma column"});

    const std::vector<detail::ProbeState> states = {
        {0.0, 0.0, false}, {0.0, 1.0, false}, {1.5, 0.0, false},
        {-1.0, -0.75, true}, {0.5, 0.5, false}};
    std::vector<int> nodes = {0, grid.interior_count() / 4, grid.interior_count() / 2,
                              (3 * grid.interior_count()) / 4, grid.interior_count() - 1};
    const std::vector<double> times = {0.0, 0.5 * prob.horizon, prob.horizon};

    bool f_flag = false, g_flag = false, h_flag = false;
    for (int node : nodes) {
      const Point x = grid.interior_coord(node);
      for (double t : times) {
        for (std::size_t p = 0; p < states.size() && !(f_flag && g_flag && h_flag); ++p)
          for (std::size_t q = p + 1; q < states.size(); ++q) {
            const auto zp = detail::probe_z(states[p], n);
            const auto zq = detail::probe_z(states[q], n);
            const double dy = std::abs(states[p].y - states[q].y);
            const double dz = (zp - zq).norm();

            const double df =
                std::abs(prob.coeffs.f(t, x, states[p].y, zp) - prob.coeffs.f(t, x, states[q].y, zq));
            if (!f_flag && df > C * (dy + dz) + 1e-9 * (1 + df)) {
              out.push_back({"(H)1 Lipschitz f", "probe exceeds C(|dy|+|dz|)"});
              f_flag = true;
            }
            double dg2 = 0;
            for (const auto& gc : prob.coeffs.g) {
              const double diff = gc(t, x, states[p].y, zp) - gc(t, x, states[q].y, zq);
              dg2 += diff * diff;
            }
            if (!g_flag && std::sqrt(dg2) > C * dy + al * dz + 1e-9 * (1 + std::sqrt(dg2))) {
              out.push_back({"(H)2 Lipschitz g", "probe exceeds C|dy| + alpha|dz|"});
              g_flag = true;
            }
            double dh2 = 0;
            for (const auto& hc : prob.coeffs.h) {
              const double diff = hc(t, x, states[p].y, zp) - hc(t, x, states[q].y, zq);
              dh2 += diff * diff;
            }
            if (!h_flag && std::sqrt(dh2) > C * dy + be * dz + 1e-9 * (1 + std::sqrt(dh2))) {
              out.push_back({"(H)3 Lipschitz h", "probe exceeds C|dy| + beta|dz|"});
              h_flag = true;
            }
          }
      }
    }
    (void)J;
  }

  // (O) obstacle: S(0, .) <= xi on the grid
  if (prob.obstacle) {
    const Eigen::VectorXd zero_z = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < grid.interior_count(); ++k) {
      const Point x = grid.interior_coord(k);
      const double s0 = prob.obstacle->barrier(0.0, x, 0.0, zero_z);
      const double xi = prob.initial ? prob.initial(x) : 0.0;
      if (s0 > xi + 1e-12) {
        out.push_back({"(O) S0 <= xi", "obstacle exceeds initial datum at node " +
                                           std::to_string(k)});
        break;
      }
    }
    if (prob.obstacle->barrier.depends_y || prob.obstacle->barrier.depends_z)
      out.push_back({"(O)", "obstacle must not depend on the state"});
  }

  return out;
}

}  // namespace ospde
