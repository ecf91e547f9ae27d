#pragma once

#include "ospde/polynomial.hpp"

#include <cctype>
#include <optional>

namespace ospde::symbolic {

/// First-order differential operator sum_i p_i(x) d/dx_i with polynomial
/// coefficients; components[i] is the coefficient of d/dx_i.
struct VectorField {
  std::vector<Polynomial> components;

  VectorField() = default;
  explicit VectorField(int dim) : components(dim, Polynomial(dim)) {}

  int dim() const { return static_cast<int>(components.size()); }

  bool is_zero() const {
    for (const auto& p : components)
      if (!p.is_zero()) return false;
    return true;
  }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& p : components) d = std::max(d, p.degree());
    return d;
  }

  bool operator==(const VectorField& o) const { return components == o.components; }
  bool operator!=(const VectorField& o) const { return !(*this == o); }
  bool operator<(const VectorField& o) const {
    return std::lexicographical_compare(
        components.begin(), components.end(), o.components.begin(), o.components.end());
  }

  /// Coordinate field d/dx_axis.
  static VectorField coordinate(int dim, int axis) {
    VectorField f(dim);
    f.components[axis] = Polynomial::constant(dim, 1);
    return f;
  }

  std::string to_string() const {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < dim(); ++i) {
      if (components[i].is_zero()) continue;
      if (!first) os << " + ";
      first = false;
      os << "(" << components[i].to_string() << ")*d" << (i + 1);
    }
    if (first) os << "0";
    return os.str();
  }
};

inline VectorField operator+(const VectorField& a, const VectorField& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("vector field dimension mismatch");
  VectorField r(a.dim());
  for (int i = 0; i < a.dim(); ++i) r.components[i] = a.components[i] + b.components[i];
  return r;
}

inline VectorField operator-(const VectorField& a, const VectorField& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("vector field dimension mismatch");
  VectorField r(a.dim());
  for (int i = 0; i < a.dim(); ++i) r.components[i] = a.components[i] - b.components[i];
  return r;
}

inline VectorField operator*(const Rational& s, const VectorField& f) {
  VectorField r(f.dim());
  for (int i = 0; i < f.dim(); ++i) r.components[i] = s * f.components[i];
  return r;
}

/// Commutator [X, Y] = XY - YX of two first-order operators; again first
/// order, with component j equal to sum_i (X_i dY_j/dx_i - Y_i dX_j/dx_i).
inline VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("lie_bracket: dimension mismatch");
  const int d = x.dim();
  VectorField r(d);
  for (int j = 0; j < d; ++j) {
    Polynomial acc(d);
    for (int i = 0; i < d; ++i) {
      acc += x.components[i] * y.components[j].derivative(i);
      acc -= y.components[i] * x.components[j].derivative(i);
    }
    r.components[j] = std::move(acc);
  }
  return r;
}

namespace detail {

class FieldParser {
 public:
  FieldParser(std::string_view s, int dim) : s_(s), dim_(dim) {}

  VectorField parse() {
    VectorField f(dim_);
    bool expect_term = true;
    int sign = 1;
    skip_ws();
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '+' || c == '-') {
        if (expect_term && c == '-') sign = -sign;
        else if (!expect_term) sign = (c == '-') ? -1 : 1;
        ++pos_;
        expect_term = true;
        skip_ws();
        continue;
      }
      auto [poly, axis] = parse_term();
      if (axis < 0) throw error("term has no direction factor (d1, d2, ...)");
      f.components[axis] += Rational(sign) * poly;
      sign = 1;
      expect_term = false;
      skip_ws();
    }
    if (expect_term) throw error("empty or dangling expression");
    return f;
  }

 private:
  std::pair<Polynomial, int> parse_term() {
    Polynomial poly = Polynomial::constant(dim_, 1);
    int axis = -1;
    bool want_factor = true;
    while (true) {
      skip_ws();
      if (pos_ >= s_.size()) break;
      char c = s_[pos_];
      if (c == '*') {
        ++pos_;
        want_factor = true;
        continue;
      }
      if (!want_factor) break;
      if (c == 'x') {
        ++pos_;
        int idx = parse_int();
        if (idx < 1 || idx > dim_) throw error("variable index out of range");
        unsigned pw = 1;
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == '^') {
          ++pos_;
          pw = static_cast<unsigned>(parse_int());
        }
        Monomial m(dim_, 0);
        m[idx - 1] = pw;
        poly = poly * Polynomial::monomial(dim_, m, 1);
      } else if (c == 'd') {
        ++pos_;
        int idx = parse_int();
        if (idx < 1 || idx > dim_) throw error("direction index out of range");
        if (axis >= 0) throw error("more than one direction factor in a term");
        axis = idx - 1;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        long long num = parse_int();
        long long den = 1;
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == '/') {
          ++pos_;
          den = parse_int();
          if (den == 0) throw error("zero denominator");
        }
        poly = Rational(num, den) * poly;
      } else {
        break;
      }
      want_factor = false;
    }
    return {poly, axis};
  }

  long long parse_int() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) throw error("expected integer");
    return std::stoll(std::string(s_.substr(start, pos_ - start)));
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  std::invalid_argument error(const std::string& what) const {
    return std::invalid_argument("field expression '" + std::string(s_) + "': " + what +
                                 " at offset " + std::to_string(pos_));
  }

  std::string_view s_;
  int dim_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses expressions such as "x1*d2 + 3*d1" or "x1^2*d2 - 1/2*d1".
/// Factors in a term are separated by '*'; exactly one dK names the
/// direction, xK are variables (1-based), numbers may be rationals p/q.
inline VectorField parse_field(std::string_view expr, int dim) {
  return detail::FieldParser(expr, dim).parse();
}

}  // namespace ospde::symbolic
