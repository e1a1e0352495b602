#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "psr/polynomial.hpp"

namespace psr {

namespace detail {

// Recursive-descent parser over a general (not necessarily homogeneous)
// sparse polynomial; homogeneity is checked once at the end.
class PolynomialParser {
 public:
  PolynomialParser(std::string_view text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {}

  TermMap parse() {
    TermMap out = expr();
    skip_ws();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return out;
  }

 private:
  TermMap expr() {
    TermMap acc = term();
    while (true) {
      skip_ws();
      if (peek('+')) {
        ++pos_;
        add_into(acc, term(), 1);
      } else if (peek('-')) {
        ++pos_;
        add_into(acc, term(), -1);
      } else {
        return acc;
      }
    }
  }

  TermMap term() {
    TermMap acc = factor();
    while (true) {
      skip_ws();
      if (!peek('*')) return acc;
      ++pos_;
      acc = multiply(acc, factor());
    }
  }

  TermMap factor() {
    skip_ws();
    if (pos_ >= s_.size()) error("unexpected end of input");
    const char c = s_[pos_];
    if (c == '-') {
      ++pos_;
      TermMap f = factor();
      for (auto& [e, v] : f) v = -v;
      return f;
    }
    if (c == '(') {
      ++pos_;
      TermMap inner = expr();
      skip_ws();
      if (!peek(')')) error("missing ')'");
      ++pos_;
      return maybe_power(std::move(inner));
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return constant(rational());
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return maybe_power(variable());
    error("unexpected '" + std::string(1, c) + "'");
  }

  TermMap maybe_power(TermMap base) {
    skip_ws();
    if (!peek('^')) return base;
    ++pos_;
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) error("exponent must be a positive integer");
    const std::string digits(s_.substr(start, pos_ - start));
    if (digits.size() > 3) error("exponent too large");
    const int k = std::stoi(digits);
    if (k <= 0) error("exponent must be a positive integer");
    TermMap out = constant(Rational(1));
    for (int i = 0; i < k; ++i) out = multiply(out, base);
    return out;
  }

  TermMap variable() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string name(s_.substr(start, pos_ - start));
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i] != name) continue;
      Exponent e(vars_.size(), 0);
      e[i] = 1;
      return TermMap{{e, Rational(1)}};
    }
    fail(ErrorCode::unknown_variable, "unknown variable '" + name + "' at position " + std::to_string(start));
  }

  Rational rational() {
    Rational value = number();
    skip_ws();
    if (peek('/')) {
      ++pos_;
      skip_ws();
      const std::size_t start = pos_;
      Rational den = number();
      if (s_.substr(start, pos_ - start).find('.') != std::string_view::npos)
        error("denominator must be a positive integer");
      if (den == 0) error("zero denominator");
      value /= den;
    }
    return value;
  }

  // int or decimal, converted exactly
  Rational number() {
    const std::size_t start = pos_;
    boost::multiprecision::cpp_int digits = 0;
    boost::multiprecision::cpp_int scale = 1;
    bool seen_digit = false;
    bool seen_point = false;
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        digits = digits * 10 + (c - '0');
        if (seen_point) scale *= 10;
        seen_digit = true;
      } else if (c == '.' && !seen_point) {
        seen_point = true;
      } else {
        break;
      }
      ++pos_;
    }
    if (!seen_digit) {
      pos_ = start;
      error("malformed number");
    }
    return Rational(digits, scale);
  }

  static TermMap constant(const Rational& r) { return TermMap{{Exponent{}, r}}; }

  static void add_into(TermMap& acc, const TermMap& other, int sign) {
    for (const auto& [e, v] : other) acc[e] += sign * v;
  }

  TermMap multiply(const TermMap& a, const TermMap& b) const {
    TermMap out;
    for (const auto& [ea, va] : a)
      for (const auto& [eb, vb] : b) {
        Exponent e(vars_.size(), 0);
        for (std::size_t i = 0; i < ea.size(); ++i) e[i] += ea[i];
        for (std::size_t i = 0; i < eb.size(); ++i) e[i] += eb[i];
        out[e] += va * vb;
      }
    return out;
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }

  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorCode::syntax_error, msg + " at position " + std::to_string(pos_));
  }

  std::string_view s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a polynomial expression over the given ordered variables.
/// Constants may be integers, p/q fractions or decimals (converted exactly).
inline HomogeneousPolynomial parse_polynomial(std::string_view text, const std::vector<std::string>& variables) {
  if (variables.empty()) fail(ErrorCode::invalid_argument, "no variables declared");
  TermMap raw = detail::PolynomialParser(text, variables).parse();
  // constants were stored with an empty exponent; widen them
  TermMap terms;
  for (auto& [e, v] : raw) {
    if (v == 0) continue;
    Exponent full = e;
    full.resize(variables.size(), 0);
    terms[full] += v;
  }
  return HomogeneousPolynomial::from_terms(variables.size(), terms, variables);
}

inline HomogeneousPolynomial parse_polynomial(std::string_view text) {
  return parse_polynomial(text, default_variable_names(3));
}

}  // namespace psr
