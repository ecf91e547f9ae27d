#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ospde::symbolic {

using Rational = boost::multiprecision::cpp_rational;

/// Exponent vector of a monomial; size equals the ambient dimension.
using Monomial = std::vector<unsigned>;

inline unsigned total_degree(const Monomial& m) {
  unsigned d = 0;
  for (unsigned e : m) d += e;
  return d;
}

/// Multivariate polynomial with exact rational coefficients.
///
/// The representation is canonical: terms are kept in a sorted map and
/// zero coefficients are erased on every mutation, so operator== is
/// syntactic equality of the mathematical polynomial.
class Polynomial {
 public:
  Polynomial() : dim_(0) {}
  explicit Polynomial(int dim) : dim_(dim) {}

  static Polynomial constant(int dim, Rational c) {
    Polynomial p(dim);
    if (c != 0) p.terms_[Monomial(dim, 0)] = std::move(c);
    return p;
  }

  /// The coordinate polynomial x_axis (0-based axis).
  static Polynomial variable(int dim, int axis) {
    if (axis < 0 || axis >= dim) throw std::invalid_argument("variable axis out of range");
    Polynomial p(dim);
    Monomial m(dim, 0);
    m[axis] = 1;
    p.terms_[m] = 1;
    return p;
  }

  static Polynomial monomial(int dim, Monomial m, Rational c) {
    if (static_cast<int>(m.size()) != dim) throw std::invalid_argument("monomial size mismatch");
    Polynomial p(dim);
    if (c != 0) p.terms_[std::move(m)] = std::move(c);
    return p;
  }

  int dim() const { return dim_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const std::map<Monomial, Rational>& terms() const { return terms_; }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, total_degree(m));
    return d;
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_dim(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_dim(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_dim(b);
    Polynomial r(a.dim_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m(a.dim_);
        for (int i = 0; i < a.dim_; ++i) m[i] = ma[i] + mb[i];
        r.add_term(m, ca * cb);
      }
    return r;
  }

  friend Polynomial operator*(const Rational& s, Polynomial p) {
    if (s == 0) return Polynomial(p.dim_);
    for (auto& [m, c] : p.terms_) c *= s;
    return p;
  }

  friend Polynomial operator-(Polynomial p) {
    for (auto& [m, c] : p.terms_) c = -c;
    return p;
  }

  bool operator==(const Polynomial& o) const { return dim_ == o.dim_ && terms_ == o.terms_; }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }
  bool operator<(const Polynomial& o) const {
    if (dim_ != o.dim_) return dim_ < o.dim_;
    return std::lexicographical_compare(
        terms_.begin(), terms_.end(), o.terms_.begin(), o.terms_.end());
  }

  /// Partial derivative with respect to x_axis.
  Polynomial derivative(int axis) const {
    if (axis < 0 || axis >= dim_) throw std::invalid_argument("derivative axis out of range");
    Polynomial r(dim_);
    for (const auto& [m, c] : terms_) {
      if (m[axis] == 0) continue;
      Monomial n = m;
      n[axis] -= 1;
      r.add_term(n, c * m[axis]);
    }
    return r;
  }

  template <typename T>
  T eval(const std::vector<T>& x) const {
    if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("eval point size mismatch");
    T acc(0);
    for (const auto& [m, c] : terms_) {
      T t(static_cast<T>(c));
      for (int i = 0; i < dim_; ++i)
        for (unsigned e = 0; e < m[i]; ++e) t *= x[i];
      acc += t;
    }
    return acc;
  }

  double eval_double(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("eval point size mismatch");
    double acc = 0;
    for (const auto& [m, c] : terms_) {
      double t = static_cast<double>(c);
      for (int i = 0; i < dim_; ++i)
        for (unsigned e = 0; e < m[i]; ++e) t *= x[i];
      acc += t;
    }
    return acc;
  }

  /// "3/2*x1^2*x2 - x3" style rendering; variables are 1-based.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      Rational a = c;
      if (!first) {
        os << (a < 0 ? " - " : " + ");
        if (a < 0) a = -a;
      } else if (a < 0) {
        os << "-";
        a = -a;
      }
      first = false;
      bool has_var = total_degree(m) > 0;
      if (a != 1 || !has_var) {
        os << a.str();
        if (has_var) os << "*";
      }
      bool first_var = true;
      for (int i = 0; i < dim_; ++i) {
        if (m[i] == 0) continue;
        if (!first_var) os << "*";
        first_var = false;
        os << "x" << (i + 1);
        if (m[i] > 1) os << "^" << m[i];
      }
    }
    return os.str();
  }

 private:
  void check_dim(const Polynomial& o) const {
    if (dim_ != o.dim_) throw std::invalid_argument("polynomial dimension mismatch");
  }
  void add_term(const Monomial& m, Rational c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, std::move(c));
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  int dim_;
  std::map<Monomial, Rational> terms_;
};

}  // namespace ospde::symbolic
