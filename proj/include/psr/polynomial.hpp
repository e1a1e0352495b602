#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "psr/error.hpp"
#include "psr/linalg.hpp"

namespace psr {

using Rational = boost::multiprecision::cpp_rational;
using Exponent = std::vector<int>;

/// Graded lexicographic order, largest monomial first: higher total degree
/// wins, ties broken lexicographically on the declared variable order.
struct GradedLexGreater {
  bool operator()(const Exponent& a, const Exponent& b) const {
    const int da = std::accumulate(a.begin(), a.end(), 0);
    const int db = std::accumulate(b.begin(), b.end(), 0);
    if (da != db) return da > db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
  }
};

using TermMap = std::map<Exponent, Rational, GradedLexGreater>;

inline std::vector<std::string> default_variable_names(std::size_t n) {
  static const char* small[] = {"x", "y", "z", "w"};
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i)
    names.push_back(n <= 4 ? std::string(small[i]) : "x" + std::to_string(i + 1));
  return names;
}

inline std::string rational_to_string(const Rational& r) {
  std::ostringstream os;
  os << boost::multiprecision::numerator(r);
  if (boost::multiprecision::denominator(r) != 1) os << '/' << boost::multiprecision::denominator(r);
  return os.str();
}

/// Square matrix with exact rational entries.
class RationalMatrix {
 public:
  explicit RationalMatrix(std::size_t n = 0) : n_(n), a_(n * n, Rational(0)) {}

  static RationalMatrix identity(std::size_t n) {
    RationalMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  /// Every double is a dyadic rational, so this conversion is exact.
  static RationalMatrix from_doubles(const Mat& m) {
    if (m.rows() != m.cols()) fail(ErrorCode::dimension_mismatch, "linear map must be square");
    RationalMatrix r(static_cast<std::size_t>(m.rows()));
    for (std::size_t i = 0; i < r.n_; ++i)
      for (std::size_t j = 0; j < r.n_; ++j) r(i, j) = Rational(m(i, j));
    return r;
  }

  std::size_t size() const noexcept { return n_; }
  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  Mat to_doubles() const {
    Mat m(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) m(i, j) = (*this)(i, j).convert_to<double>();
    return m;
  }

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
    RationalMatrix c(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t k = 0; k < a.n_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < a.n_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.n_ == b.n_ && a.a_ == b.a_;
  }

  Rational determinant() const {
    RationalMatrix m = *this;
    Rational det = 1;
    for (std::size_t c = 0; c < n_; ++c) {
      std::size_t pivot = c;
      while (pivot < n_ && m(pivot, c) == 0) ++pivot;
      if (pivot == n_) return 0;
      if (pivot != c) {
        for (std::size_t j = 0; j < n_; ++j) std::swap(m(pivot, j), m(c, j));
        det = -det;
      }
      det *= m(c, c);
      for (std::size_t r = c + 1; r < n_; ++r) {
        if (m(r, c) == 0) continue;
        const Rational f = m(r, c) / m(c, c);
        for (std::size_t j = c; j < n_; ++j) m(r, j) -= f * m(c, j);
      }
    }
    return det;
  }

  RationalMatrix inverse() const {
    RationalMatrix m = *this;
    RationalMatrix inv = identity(n_);
    for (std::size_t c = 0; c < n_; ++c) {
      std::size_t pivot = c;
      while (pivot < n_ && m(pivot, c) == 0) ++pivot;
      if (pivot == n_) fail(ErrorCode::singular_matrix, "matrix is not invertible");
      for (std::size_t j = 0; j < n_; ++j) {
        std::swap(m(pivot, j), m(c, j));
        std::swap(inv(pivot, j), inv(c, j));
      }
      const Rational p = m(c, c);
      for (std::size_t j = 0; j < n_; ++j) {
        m(c, j) /= p;
        inv(c, j) /= p;
      }
      for (std::size_t r = 0; r < n_; ++r) {
        if (r == c || m(r, c) == 0) continue;
        const Rational f = m(r, c);
        for (std::size_t j = 0; j < n_; ++j) {
          m(r, j) -= f * m(c, j);
          inv(r, j) -= f * inv(c, j);
        }
      }
    }
    return inv;
  }

 private:
  std::size_t n_;
  std::vector<Rational> a_;
};

namespace detail {

/// Polynomial with double coefficients and flattened exponents, used for
/// fast point evaluation.
struct NumericTerms {
  std::size_t n = 0;
  std::vector<double> coef;
  std::vector<int> exps;

  double evaluate(const std::vector<std::vector<double>>& powers) const {
    double sum = 0.0;
    for (std::size_t t = 0; t < coef.size(); ++t) {
      double m = coef[t];
      const int* e = &exps[t * n];
      for (std::size_t i = 0; i < n; ++i)
        if (e[i] != 0) m *= powers[i][static_cast<std::size_t>(e[i])];
      sum += m;
    }
    return sum;
  }
};

/// Derivative polynomials of one order. Each unique sorted index tuple is
/// stored once together with every flat position it fills in the full tensor.
struct DerivativeOrder {
  std::vector<NumericTerms> unique;
  std::vector<std::vector<std::size_t>> positions;
};

struct JetTables {
  std::size_t n = 0;
  int degree = 0;
  std::vector<DerivativeOrder> orders;  // orders[k] for k = 0..4
};

inline JetTables build_jet_tables(std::size_t n, int degree, const TermMap& terms) {
  JetTables tables;
  tables.n = n;
  tables.degree = degree;
  tables.orders.resize(5);
  for (std::size_t order = 0; order <= 4; ++order) {
    std::vector<std::size_t> tuple(order, 0);
    auto& out = tables.orders[order];
    while (true) {
      NumericTerms nt;
      nt.n = n;
      std::vector<int> counts(n, 0);
      for (std::size_t idx : tuple) ++counts[idx];
      for (const auto& [exp, c] : terms) {
        double factor = c.convert_to<double>();
        Exponent reduced = exp;
        bool vanishes = false;
        for (std::size_t i = 0; i < n && !vanishes; ++i) {
          for (int k = 0; k < counts[i]; ++k) {
            if (reduced[i] == 0) {
              vanishes = true;
              break;
            }
            factor *= reduced[i];
            --reduced[i];
          }
        }
        if (vanishes) continue;
        nt.coef.push_back(factor);
        nt.exps.insert(nt.exps.end(), reduced.begin(), reduced.end());
      }
      std::vector<std::size_t> perm = tuple;
      std::vector<std::size_t> flat_positions;
      do {
        std::size_t flat = 0;
        for (std::size_t idx : perm) flat = flat * n + idx;
        flat_positions.push_back(flat);
      } while (std::next_permutation(perm.begin(), perm.end()));
      out.unique.push_back(std::move(nt));
      out.positions.push_back(std::move(flat_positions));

      // advance to the next non-decreasing tuple
      std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(order) - 1;
      while (pos >= 0 && tuple[static_cast<std::size_t>(pos)] == n - 1) --pos;
      if (pos < 0) break;
      const std::size_t v = ++tuple[static_cast<std::size_t>(pos)];
      for (std::size_t q = static_cast<std::size_t>(pos) + 1; q < order; ++q) tuple[q] = v;
    }
  }
  return tables;
}

}  // namespace detail

/// Exact sparse homogeneous polynomial with rational coefficients.
///
/// Every stored exponent sums to `degree()` and no stored coefficient is
/// zero. The zero polynomial is representable (empty term map) and keeps the
/// degree it was created with. Values are immutable; copies share the lazily
/// built floating-point evaluation tables.
class HomogeneousPolynomial {
 public:
  HomogeneousPolynomial() : HomogeneousPolynomial(1, 0, {}) {}

  HomogeneousPolynomial(std::size_t n_vars, int degree, TermMap terms,
                        std::vector<std::string> names = {})
      : n_(n_vars), degree_(degree), names_(std::move(names)), cache_(std::make_shared<Cache>()) {
    if (n_ == 0) fail(ErrorCode::invalid_argument, "polynomial needs at least one variable");
    if (degree_ < 0) fail(ErrorCode::inhomogeneous, "negative degree");
    if (names_.empty()) names_ = default_variable_names(n_);
    if (names_.size() != n_) fail(ErrorCode::dimension_mismatch, "variable name count differs from n_vars");
    for (auto& [exp, c] : terms) {
      if (c == 0) continue;
      if (exp.size() != n_) fail(ErrorCode::dimension_mismatch, "exponent length differs from n_vars");
      const int d = std::accumulate(exp.begin(), exp.end(), 0);
      if (d != degree_ || std::any_of(exp.begin(), exp.end(), [](int e) { return e < 0; }))
        fail(ErrorCode::inhomogeneous, "term of degree " + std::to_string(d) + " in a degree " +
                                           std::to_string(degree_) + " polynomial");
      terms_.emplace(exp, c);
    }
  }

  /// Infers the degree from the terms; throws `inhomogeneous` on mixed
  /// total degrees or when every coefficient cancels.
  static HomogeneousPolynomial from_terms(std::size_t n_vars, const TermMap& terms,
                                          std::vector<std::string> names = {}) {
    int degree = -1;
    for (const auto& [exp, c] : terms) {
      if (c == 0) continue;
      const int d = std::accumulate(exp.begin(), exp.end(), 0);
      if (degree < 0) degree = d;
      if (d != degree)
        fail(ErrorCode::inhomogeneous, "mixed total degrees " + std::to_string(degree) + " and " +
                                           std::to_string(d));
    }
    if (degree < 0) fail(ErrorCode::inhomogeneous, "polynomial is identically zero; degree undefined");
    return HomogeneousPolynomial(n_vars, degree, terms, std::move(names));
  }

  std::size_t n_vars() const noexcept { return n_; }
  int degree() const noexcept { return degree_; }
  const TermMap& terms() const noexcept { return terms_; }
  const std::vector<std::string>& variables() const noexcept { return names_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  Rational evaluate(const std::vector<Rational>& x) const {
    if (x.size() != n_) fail(ErrorCode::dimension_mismatch, "point dimension differs from n_vars");
    Rational sum = 0;
    for (const auto& [exp, c] : terms_) {
      Rational m = c;
      for (std::size_t i = 0; i < n_; ++i)
        for (int k = 0; k < exp[i]; ++k) m *= x[i];
      sum += m;
    }
    return sum;
  }

  double operator()(const Vec& x) const {
    require_dim(x, n_, "polynomial evaluation");
    const auto& t = tables();
    return t.orders[0].unique[0].evaluate(power_table(x));
  }

  HomogeneousPolynomial derivative(std::size_t var) const {
    if (var >= n_) fail(ErrorCode::dimension_mismatch, "derivative variable out of range");
    if (degree_ == 0) return HomogeneousPolynomial(n_, 0, {}, names_);
    TermMap out;
    for (const auto& [exp, c] : terms_) {
      if (exp[var] == 0) continue;
      Exponent e = exp;
      const int k = e[var]--;
      out[e] += c * k;
    }
    return HomogeneousPolynomial(n_, degree_ - 1, std::move(out), names_);
  }

  HomogeneousPolynomial scaled(const Rational& s) const {
    TermMap out;
    if (s != 0)
      for (const auto& [exp, c] : terms_) out.emplace(exp, c * s);
    return HomogeneousPolynomial(n_, degree_, std::move(out), names_);
  }

  /// Coefficients rounded to the nearest double (and stored exactly).
  HomogeneousPolynomial rounded() const {
    TermMap out;
    for (const auto& [exp, c] : terms_) out.emplace(exp, Rational(c.convert_to<double>()));
    return HomogeneousPolynomial(n_, degree_, std::move(out), names_);
  }

  friend HomogeneousPolynomial operator+(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b) {
    a.require_compatible(b);
    if (a.is_zero()) return b.with_degree_of(a, b);
    if (b.is_zero()) return a;
    if (a.degree_ != b.degree_) fail(ErrorCode::inhomogeneous, "sum of polynomials of different degrees");
    TermMap out = a.terms_;
    for (const auto& [exp, c] : b.terms_) out[exp] += c;
    return HomogeneousPolynomial(a.n_, a.degree_, std::move(out), a.names_);
  }

  friend HomogeneousPolynomial operator-(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b) {
    return a + b.scaled(-1);
  }

  friend HomogeneousPolynomial operator*(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b) {
    a.require_compatible(b);
    TermMap out;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponent e(a.n_);
        for (std::size_t i = 0; i < a.n_; ++i) e[i] = ea[i] + eb[i];
        out[e] += ca * cb;
      }
    return HomogeneousPolynomial(a.n_, a.degree_ + b.degree_, std::move(out), a.names_);
  }

  friend bool operator==(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b) {
    return a.n_ == b.n_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
  }

  /// Canonical text in graded-lex order, parseable by `parse_polynomial`.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [exp, c] : terms_) {
      const bool negative = c < 0;
      const Rational mag = negative ? Rational(-c) : c;
      if (first)
        os << (negative ? "-" : "");
      else
        os << (negative ? " - " : " + ");
      first = false;
      std::string mono;
      for (std::size_t i = 0; i < n_; ++i) {
        if (exp[i] == 0) continue;
        if (!mono.empty()) mono += '*';
        mono += names_[i];
        if (exp[i] > 1) mono += '^' + std::to_string(exp[i]);
      }
      if (mono.empty())
        os << rational_to_string(mag);
      else if (mag == 1)
        os << mono;
      else
        os << rational_to_string(mag) << '*' << mono;
    }
    return os.str();
  }

  /// Exact determinant of the Hessian matrix, a polynomial of degree
  /// n_vars * (degree - 2).
  HomogeneousPolynomial hessian_determinant() const {
    if (degree_ < 2) fail(ErrorCode::invalid_argument, "Hessian determinant needs degree >= 2");
    std::vector<HomogeneousPolynomial> first;
    for (std::size_t i = 0; i < n_; ++i) first.push_back(derivative(i));
    std::vector<std::vector<HomogeneousPolynomial>> m(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) m[i].push_back(first[i].derivative(j));
    std::vector<std::size_t> cols(n_);
    std::iota(cols.begin(), cols.end(), 0);
    return laplace_determinant(m, 0, cols);
  }

  const detail::JetTables& tables() const {
    std::call_once(cache_->once, [this] { cache_->tables = detail::build_jet_tables(n_, degree_, terms_); });
    return cache_->tables;
  }

  std::vector<std::vector<double>> power_table(const Vec& x) const {
    std::vector<std::vector<double>> pw(n_, std::vector<double>(static_cast<std::size_t>(degree_) + 1, 1.0));
    for (std::size_t i = 0; i < n_; ++i)
      for (int k = 1; k <= degree_; ++k) pw[i][static_cast<std::size_t>(k)] = pw[i][k - 1] * x(static_cast<Eigen::Index>(i));
    return pw;
  }

 private:
  struct Cache {
    std::once_flag once;
    detail::JetTables tables;
  };

  void require_compatible(const HomogeneousPolynomial& b) const {
    if (n_ != b.n_) fail(ErrorCode::dimension_mismatch, "polynomials in different numbers of variables");
  }

  static HomogeneousPolynomial with_degree_of(const HomogeneousPolynomial& zero,
                                              const HomogeneousPolynomial& other) {
    if (other.is_zero() && zero.degree_ != other.degree_)
      return HomogeneousPolynomial(zero.n_, zero.degree_, {}, zero.names_);
    return other;
  }

  HomogeneousPolynomial laplace_determinant(const std::vector<std::vector<HomogeneousPolynomial>>& m,
                                            std::size_t row, const std::vector<std::size_t>& cols) const {
    if (cols.size() == 1) return m[row][cols[0]];
    const int minor_degree = static_cast<int>(cols.size()) * (degree_ - 2);
    HomogeneousPolynomial sum(n_, minor_degree, {}, names_);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const auto& entry = m[row][cols[k]];
      if (entry.is_zero()) continue;
      std::vector<std::size_t> rest;
      for (std::size_t q = 0; q < cols.size(); ++q)
        if (q != k) rest.push_back(cols[q]);
      HomogeneousPolynomial term = entry * laplace_determinant(m, row + 1, rest);
      sum = (k % 2 == 0) ? sum + term : sum - term;
    }
    return sum;
  }

  std::size_t n_;
  int degree_;
  TermMap terms_;
  std::vector<std::string> names_;
  std::shared_ptr<Cache> cache_;
};

/// Returns h∘A, i.e. the polynomial x ↦ h(A x), expanded exactly.
inline HomogeneousPolynomial apply_linear_map(const HomogeneousPolynomial& h, const RationalMatrix& a) {
  const std::size_t n = h.n_vars();
  if (a.size() != n) fail(ErrorCode::dimension_mismatch, "linear map size differs from n_vars");
  if (a.determinant() == 0) fail(ErrorCode::singular_matrix, "linear map is singular");

  // powers[i][k] = (row i of A · x)^k
  std::vector<std::vector<HomogeneousPolynomial>> powers(n);
  for (std::size_t i = 0; i < n; ++i) {
    TermMap linear;
    for (std::size_t j = 0; j < n; ++j) {
      if (a(i, j) == 0) continue;
      Exponent e(n, 0);
      e[j] = 1;
      linear.emplace(e, a(i, j));
    }
    HomogeneousPolynomial lin(n, 1, linear, h.variables());
    powers[i].push_back(HomogeneousPolynomial(n, 0, {{Exponent(n, 0), Rational(1)}}, h.variables()));
    for (int k = 1; k <= h.degree(); ++k) powers[i].push_back(powers[i].back() * lin);
  }

  HomogeneousPolynomial out(n, h.degree(), {}, h.variables());
  for (const auto& [exp, c] : h.terms()) {
    HomogeneousPolynomial term(n, 0, {{Exponent(n, 0), c}}, h.variables());
    for (std::size_t i = 0; i < n; ++i)
      if (exp[i] > 0) term = term * powers[i][static_cast<std::size_t>(exp[i])];
    out = out + term;
  }
  return out;
}

/// Floating-point linear maps are converted to rationals exactly; the result
/// is exact for the matrix as rounded to doubles.
inline HomogeneousPolynomial apply_linear_map(const HomogeneousPolynomial& h, const Mat& a) {
  return apply_linear_map(h, RationalMatrix::from_doubles(a));
}

}  // namespace psr
