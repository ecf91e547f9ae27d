#pragma once

#include "ospde/vector_field.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>

namespace ospde::symbolic {

/// The bracket set at one level: L_{n+1} = L_n U {[L_k, M] : M in L_n}
/// where the L_k range over the original generators.
struct LieGeneration {
  int level = 0;
  std::vector<VectorField> fields;
  std::vector<std::string> names;  // bracket expressions, parallel to fields
};

struct HormanderResult {
  std::optional<int> n0;        // smallest level whose span contains every coordinate field
  std::optional<int> n0_eff;    // n0 raised to the dimension-dependent floor
  std::optional<Rational> eta;  // 2^(-n0_eff)
  std::vector<std::string> witness;  // per coordinate: combination realizing d_i
  int depth_cap = 0;
  int levels_built = 0;
};

namespace detail {

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Gaussian elimination over Q. Returns rank of A; when rhs is present it is
/// reduced alongside and `consistent`/`solution` (free variables set to zero)
/// are filled in.
struct EliminationResult {
  int rank = 0;
  bool consistent = true;
  std::vector<Rational> solution;
};

inline EliminationResult eliminate(RationalMatrix a, std::vector<Rational>* rhs) {
  const int rows = static_cast<int>(a.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(a[0].size());
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (a[i][c] != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(a[p], a[r]);
    if (rhs) std::swap((*rhs)[p], (*rhs)[r]);
    const Rational inv = a[r][c];
    for (int j = c; j < cols; ++j) a[r][j] /= inv;
    if (rhs) (*rhs)[r] /= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c];
      for (int j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
      if (rhs) (*rhs)[i] -= f * (*rhs)[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  EliminationResult res;
  res.rank = r;
  if (rhs) {
    for (int i = r; i < rows; ++i)
      if ((*rhs)[i] != 0) {
        res.consistent = false;
        break;
      }
    if (res.consistent) {
      res.solution.assign(cols, Rational(0));
      for (int i = 0; i < r; ++i) res.solution[pivot_col[i]] = (*rhs)[i];
    }
  }
  return res;
}

/// Deterministic quasi-generic rational sample points.
inline std::vector<std::vector<Rational>> sample_points(int dim, int count) {
  std::vector<std::vector<Rational>> pts;
  pts.reserve(count);
  unsigned long long state = 0x2545F4914F6CDD1DULL;
  auto next = [&state]() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<unsigned>(state >> 33);
  };
  for (int s = 0; s < count; ++s) {
    std::vector<Rational> x(dim);
    for (int a = 0; a < dim; ++a) {
      long long num = static_cast<long long>(next() % 41) - 20;
      if (num == 0) num = 21;
      long long den = static_cast<long long>(next() % 23) + 2;
      x[a] = Rational(num, den);
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

inline std::vector<Monomial> monomials_up_to(int dim, unsigned deg) {
  std::vector<Monomial> out;
  Monomial m(dim, 0);
  std::function<void(int, unsigned)> rec = [&](int axis, unsigned left) {
    if (axis == dim) {
      out.push_back(m);
      return;
    }
    for (unsigned e = 0; e <= left; ++e) {
      m[axis] = e;
      rec(axis + 1, left - e);
    }
    m[axis] = 0;
  };
  rec(0, deg);
  return out;
}

}  // namespace detail

/// Decides whether the coordinate field d/dx_axis lies in the span of the
/// given fields with polynomial coefficients of total degree <= coeff_deg.
///
/// The membership identity is tested through evaluation at deterministic
/// rational points. The point set is enlarged until the evaluation matrix of
/// every monomial that can appear in the residual has full column rank; a
/// residual vanishing at such a point set is then the zero polynomial, so the
/// evaluation test decides the polynomial identity exactly.
inline std::optional<std::vector<Polynomial>> span_coordinates(
    const std::vector<VectorField>& fields, int axis, unsigned coeff_deg) {
  if (fields.empty()) return std::nullopt;
  const int d = fields[0].dim();
  const auto coeff_monos = detail::monomials_up_to(d, coeff_deg);

  // Support of the residual: products of coefficient monomials with the
  // monomials of every field component, plus the constant target.
  std::set<Monomial> support;
  support.insert(Monomial(d, 0));
  for (const auto& f : fields)
    for (const auto& comp : f.components)
      for (const auto& [m, c] : comp.terms())
        for (const auto& cm : coeff_monos) {
          Monomial prod(d);
          for (int i = 0; i < d; ++i) prod[i] = m[i] + cm[i];
          support.insert(prod);
        }
  const std::vector<Monomial> support_v(support.begin(), support.end());

  int n_points = 2 * static_cast<int>(support_v.size()) + d;
  std::vector<std::vector<Rational>> pts;
  for (int attempt = 0; attempt < 8; ++attempt) {
    pts = detail::sample_points(d, n_points);
    detail::RationalMatrix vander(pts.size(), std::vector<Rational>(support_v.size()));
    for (std::size_t s = 0; s < pts.size(); ++s)
      for (std::size_t j = 0; j < support_v.size(); ++j) {
        Rational v = 1;
        for (int i = 0; i < d; ++i)
          for (unsigned e = 0; e < support_v[j][i]; ++e) v *= pts[s][i];
        vander[s][j] = v;
      }
    if (detail::eliminate(std::move(vander), nullptr).rank ==
        static_cast<int>(support_v.size()))
      break;
    n_points *= 2;
    pts.clear();
  }
  if (pts.empty()) throw std::runtime_error("span_coordinates: no generic point set found");

  const int n_cols = static_cast<int>(fields.size() * coeff_monos.size());
  detail::RationalMatrix a(pts.size() * d, std::vector<Rational>(n_cols, Rational(0)));
  std::vector<Rational> b(pts.size() * d, Rational(0));
  for (std::size_t s = 0; s < pts.size(); ++s) {
    std::vector<Rational> mono_at(coeff_monos.size());
    for (std::size_t j = 0; j < coeff_monos.size(); ++j) {
      Rational v = 1;
      for (int i = 0; i < d; ++i)
        for (unsigned e = 0; e < coeff_monos[j][i]; ++e) v *= pts[s][i];
      mono_at[j] = v;
    }
    for (int comp = 0; comp < d; ++comp) {
      const std::size_t row = s * d + comp;
      for (std::size_t f = 0; f < fields.size(); ++f) {
        const Rational fv = fields[f].components[comp].eval<Rational>(pts[s]);
        if (fv == 0) continue;
        for (std::size_t j = 0; j < coeff_monos.size(); ++j)
          a[row][f * coeff_monos.size() + j] = fv * mono_at[j];
      }
      b[row] = (comp == axis) ? 1 : 0;
    }
  }

  auto res = detail::eliminate(std::move(a), &b);
  if (!res.consistent) return std::nullopt;

  std::vector<Polynomial> coeffs;
  coeffs.reserve(fields.size());
  for (std::size_t f = 0; f < fields.size(); ++f) {
    Polynomial p(d);
    for (std::size_t j = 0; j < coeff_monos.size(); ++j) {
      const Rational& c = res.solution[f * coeff_monos.size() + j];
      if (c != 0) p += Polynomial::monomial(d, coeff_monos[j], c);
    }
    coeffs.push_back(std::move(p));
  }

  // The point set certifies the identity, so this cannot fire; it guards the
  // elimination code itself.
  VectorField check(d);
  for (std::size_t f = 0; f < fields.size(); ++f)
    for (int i = 0; i < d; ++i) check.components[i] += coeffs[f] * fields[f].components[i];
  if (check != VectorField::coordinate(d, axis))
    throw std::logic_error("span_coordinates: evaluation solution fails symbolic check");
  return coeffs;
}

inline int hormander_floor(int d) {
  if (d == 1) return 2;
  if (d == 2) return 1;
  return 0;
}

/// Builds the bracket generations L_0, L_1, ... and returns the smallest
/// level at which every coordinate field lies in the polynomial-coefficient
/// span, capped at depth_cap. Duplicate and zero fields are dropped so the
/// generations stay small; the search stops early once a level adds nothing.
inline HormanderResult hormander_order(const std::vector<VectorField>& fields, int d,
                                       int depth_cap) {
  if (depth_cap < 0) throw std::invalid_argument("hormander_order: depth_cap must be >= 0");
  for (const auto& f : fields)
    if (f.dim() != d) throw std::invalid_argument("hormander_order: field dimension mismatch");

  HormanderResult result;
  result.depth_cap = depth_cap;

  LieGeneration gen;
  gen.level = 0;
  std::set<VectorField> seen;
  std::vector<VectorField> generators;
  std::vector<std::string> generator_names;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].is_zero()) continue;
    generators.push_back(fields[i]);
    generator_names.push_back("L" + std::to_string(i + 1));
    if (seen.insert(fields[i]).second) {
      gen.fields.push_back(fields[i]);
      gen.names.push_back(generator_names.back());
    }
  }

  auto try_level = [&](const LieGeneration& g) -> std::optional<std::vector<std::string>> {
    if (g.fields.empty()) return std::nullopt;
    unsigned coeff_deg = 0;
    for (const auto& f : g.fields) coeff_deg = std::max(coeff_deg, f.degree());
    coeff_deg += 1;
    std::vector<std::string> witnesses;
    for (int axis = 0; axis < d; ++axis) {
      auto coeffs = span_coordinates(g.fields, axis, coeff_deg);
      if (!coeffs) return std::nullopt;
      std::ostringstream os;
      os << "d" << (axis + 1) << " =";
      bool first = true;
      for (std::size_t f = 0; f < g.fields.size(); ++f) {
        if ((*coeffs)[f].is_zero()) continue;
        os << (first ? " " : " + ") << "(" << (*coeffs)[f].to_string() << ")*" << g.names[f];
        first = false;
      }
      if (first) os << " 0";
      witnesses.push_back(os.str());
    }
    return witnesses;
  };

  for (int level = 0; level <= depth_cap; ++level) {
    gen.level = level;
    result.levels_built = level;
    if (auto w = try_level(gen)) {
      result.n0 = level;
      result.witness = std::move(*w);
      break;
    }
    if (level == depth_cap) break;
    // next generation: brackets of the original generators with everything
    std::size_t before = gen.fields.size();
    std::vector<VectorField> current = gen.fields;
    std::vector<std::string> current_names = gen.names;
    for (std::size_t k = 0; k < generators.size(); ++k)
      for (std::size_t m = 0; m < current.size(); ++m) {
        VectorField br = lie_bracket(generators[k], current[m]);
        if (br.is_zero()) continue;
        if (seen.insert(br).second) {
          gen.fields.push_back(std::move(br));
          gen.names.push_back("[" + generator_names[k] + "," + current_names[m] + "]");
        }
      }
    if (gen.fields.size() == before) break;  // brackets stabilized, nothing new can appear
  }

  if (result.n0) {
    result.n0_eff = std::max(*result.n0, hormander_floor(d));
    Rational eta = 1;
    for (int i = 0; i < *result.n0_eff; ++i) eta /= 2;
    result.eta = eta;
  }
  return result;
}

struct EtaExponents {
  Rational eta;
  Rational alpha0;
};

/// Fractional regularity exponent eta = 2^(-n0_eff) and the tail exponent
/// alpha0 = (2*eta*k - d - 2*eta)/(d*k), valid for integrability order
/// k > 1 + d/(2*eta).
inline EtaExponents eta_exponent(const HormanderResult& result, int d, int k) {
  if (!result.n0) throw std::invalid_argument("eta_exponent: bracket order n0 is absent");
  const Rational eta = *result.eta;
  const Rational bound = 1 + Rational(d) / (2 * eta);
  if (Rational(k) <= bound) {
    throw std::invalid_argument("eta_exponent: k must exceed 1 + d/(2*eta) = " + bound.str());
  }
  EtaExponents out;
  out.eta = eta;
  out.alpha0 = (2 * eta * k - d - 2 * eta) / (d * k);
  return out;
}

}  // namespace ospde::symbolic
