#include <gtest/gtest.h>

#include <random>

#include "psr/homogeneous_function.hpp"
#include "psr/parse.hpp"

using namespace psr;

namespace {

const std::vector<std::string> kXYZ{"x", "y", "z"};

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

// Random homogeneous polynomial with small integer coefficients.
HomogeneousPolynomial random_poly(std::mt19937_64& rng, std::size_t n, int degree) {
  std::uniform_int_distribution<int> coef(-4, 4);
  TermMap terms;
  for (int t = 0; t < 6; ++t) {
    Exponent e(n, 0);
    int left = degree;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const int k = std::uniform_int_distribution<int>(0, left)(rng);
      e[i] = k;
      left -= k;
    }
    e[n - 1] = left;
    terms[e] += coef(rng);
  }
  Exponent lead(n, 0);
  lead[0] = degree;
  terms[lead] += 1;
  return HomogeneousPolynomial(n, degree, terms);
}

}  // namespace

TEST(Parse, SingleMonomial) {
  const auto h = parse_polynomial("x*y*z", kXYZ);
  EXPECT_EQ(h.degree(), 3);
  ASSERT_EQ(h.terms().size(), 1u);
  EXPECT_EQ(h.terms().begin()->second, 1);
}

TEST(Parse, WeierstrassCubicHasFourTerms) {
  const auto h = parse_polynomial("y^2*z - 4*x^3 + 3*x*z^2 + (1/2)*z^3", kXYZ);
  EXPECT_EQ(h.degree(), 3);
  EXPECT_EQ(h.terms().size(), 4u);
  EXPECT_EQ(h.terms().at(Exponent({0, 0, 3})), Rational(1, 2));
  EXPECT_EQ(h.terms().at(Exponent({3, 0, 0})), -4);
}

TEST(Parse, MixedDegreesRejected) {
  try {
    parse_polynomial("x^2 + y^3", kXYZ);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::inhomogeneous);
  }
}

TEST(Parse, ErrorCodes) {
  auto code_of = [](const std::string& text) {
    try {
      parse_polynomial(text, kXYZ);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::invalid_argument;
  };
  EXPECT_EQ(code_of("x*(y+z"), ErrorCode::syntax_error);
  EXPECT_EQ(code_of("2x"), ErrorCode::syntax_error);  // no implicit multiplication
  EXPECT_EQ(code_of("x^0"), ErrorCode::syntax_error);
  EXPECT_EQ(code_of("x*w"), ErrorCode::unknown_variable);
  EXPECT_EQ(code_of("x - x"), ErrorCode::inhomogeneous);
  EXPECT_EQ(code_of("x*y/3"), ErrorCode::syntax_error);
}

TEST(Parse, DecimalsAreExact) {
  const auto h = parse_polynomial("0.1*x^2 - 2.50*y*z", kXYZ);
  EXPECT_EQ(h.terms().at(Exponent({2, 0, 0})), Rational(1, 10));
  EXPECT_EQ(h.terms().at(Exponent({0, 1, 1})), Rational(-5, 2));
}

TEST(Parse, ParenthesesAndUnaryMinus) {
  const auto a = parse_polynomial("-(x+y)*(x-y)", kXYZ);
  const auto b = parse_polynomial("y^2 - x^2", kXYZ);
  EXPECT_EQ(a, b);
}

TEST(Parse, PrintRoundTrip) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto h = random_poly(rng, 2 + trial % 3, 2 + trial % 4);
    const auto again = parse_polynomial(h.to_string(), h.variables());
    EXPECT_EQ(again, h) << h.to_string();
    EXPECT_EQ(again.to_string(), h.to_string());
  }
}

TEST(Jet, XyzAtOneTwoThree) {
  const auto h = parse_polynomial("x*y*z", kXYZ);
  const auto j = evaluate_jet(h, vec3(1, 2, 3));
  EXPECT_DOUBLE_EQ(j.value, 6.0);
  EXPECT_TRUE(j.grad.isApprox(vec3(6, 3, 2)));
  Mat expected(3, 3);
  expected << 0, 3, 2, 3, 0, 1, 2, 1, 0;
  EXPECT_TRUE(j.hess.isApprox(expected));
  EXPECT_EQ(j.fourth.max_abs(), 0.0);
  EXPECT_DOUBLE_EQ(j.third(0, 1, 2), 1.0);
  EXPECT_DOUBLE_EQ(j.third(2, 0, 1), 1.0);
}

TEST(Jet, XyzDeterminantIsTwoH) {
  const auto h = parse_polynomial("x*y*z", kXYZ);
  const auto j = evaluate_jet(h, vec3(1, 1, 1));
  EXPECT_NEAR(j.hess.determinant(), 2.0, 1e-14);
  EXPECT_EQ(h.hessian_determinant(), parse_polynomial("2*x*y*z", kXYZ));
}

TEST(Jet, CubicFourthTensorVanishes) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int t = 0; t < 20; ++t) {
    const auto h = random_poly(rng, 3, 3);
    EXPECT_EQ(evaluate_jet(h, vec3(g(rng), g(rng), g(rng))).fourth.max_abs(), 0.0);
  }
}

TEST(Jet, EulerChainFloat) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const int D = 2 + trial % 4;
    const auto h = random_poly(rng, n, D);
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i) x(static_cast<Eigen::Index>(i)) = g(rng);
    const auto j = evaluate_jet(h, x);
    const double scale = 1.0 + j.grad.cwiseAbs().sum() * x.cwiseAbs().maxCoeff();
    EXPECT_NEAR(j.grad.dot(x), D * j.value, 1e-10 * scale);
    EXPECT_LT((j.hess * x - (D - 1) * j.grad).cwiseAbs().maxCoeff(), 1e-10 * scale * (1 + j.hess.norm()));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        double s = 0.0;
        for (std::size_t c = 0; c < n; ++c) s += j.third(a, b, c) * x(static_cast<Eigen::Index>(c));
        EXPECT_NEAR(s, (D - 2) * j.hess(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)),
                    1e-9 * scale * (1 + j.hess.norm()));
      }
  }
}

TEST(Jet, EulerChainExact) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pick(-5, 5);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const int D = 2 + trial % 4;
    const auto h = random_poly(rng, n, D);
    std::vector<Rational> x(n);
    for (auto& xi : x) xi = Rational(pick(rng), 1 + std::abs(pick(rng)));
    Rational euler = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto hi = h.derivative(i);
      euler += hi.evaluate(x) * x[i];
      Rational second = 0;
      for (std::size_t k = 0; k < n; ++k) second += hi.derivative(k).evaluate(x) * x[k];
      EXPECT_EQ(second, (D - 1) * hi.evaluate(x));
    }
    EXPECT_EQ(euler, D * h.evaluate(x));
  }
}

TEST(Jet, CentralDifferenceOracle) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 30; ++trial) {
    const auto h = random_poly(rng, 3, 3 + trial % 3);
    const Vec x = vec3(g(rng), g(rng), g(rng));
    const auto j = evaluate_jet(h, x);
    const double s = 1e-4;
    for (Eigen::Index i = 0; i < 3; ++i) {
      Vec e = Vec::Zero(3);
      e(i) = s;
      const double fd = (h(x + e) - h(x - e)) / (2 * s);
      EXPECT_NEAR(fd, j.grad(i), 1e-6 * (1 + std::abs(j.grad(i)) + std::abs(j.value)));
      for (Eigen::Index k = 0; k < 3; ++k) {
        Vec f = Vec::Zero(3);
        f(k) = s;
        const double fd2 = (h(x + e + f) - h(x + e - f) - h(x - e + f) + h(x - e - f)) / (4 * s * s);
        EXPECT_NEAR(fd2, j.hess(i, k), 1e-5 * (1 + j.hess.cwiseAbs().maxCoeff()));
      }
    }
  }
}

TEST(LinearMap, SwapToProductForm) {
  const auto h = parse_polynomial("y^2 - z^2", kXYZ);
  RationalMatrix a = RationalMatrix::identity(3);
  a(1, 1) = 1;
  a(1, 2) = 1;
  a(2, 1) = 1;
  a(2, 2) = -1;
  EXPECT_EQ(apply_linear_map(h, a), parse_polynomial("4*y*z", kXYZ));
}

TEST(LinearMap, IdentityIsNoOp) {
  const auto h = parse_polynomial("y^2*z - 4*x^3 + 3*x*z^2 + (1/2)*z^3", kXYZ);
  EXPECT_EQ(apply_linear_map(h, RationalMatrix::identity(3)), h);
  EXPECT_EQ(apply_linear_map(h, Mat(Mat::Identity(3, 3))), h);
}

TEST(LinearMap, QuadricTimesLinearToProductPlusCube) {
  // y -> (y+z)/2, z -> (y-z)/2 turns x(x^2+y^2-z^2) into x^3 + xyz
  const auto h = parse_polynomial("x*(x^2+y^2-z^2)", kXYZ);
  RationalMatrix a(3);
  a(0, 0) = 1;
  a(1, 1) = Rational(1, 2);
  a(1, 2) = Rational(1, 2);
  a(2, 1) = Rational(1, 2);
  a(2, 2) = Rational(-1, 2);
  EXPECT_EQ(apply_linear_map(h, a), parse_polynomial("x*y*z + x^3", kXYZ));
}

TEST(LinearMap, InverseRoundTripExact) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> pick(-3, 3);
  int done = 0;
  while (done < 20) {
    RationalMatrix a(3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) a(i, j) = Rational(pick(rng), 1 + std::abs(pick(rng)));
    if (a.determinant() == 0) continue;
    const auto h = random_poly(rng, 3, 3);
    EXPECT_EQ(apply_linear_map(apply_linear_map(h, a), a.inverse()), h);
    ++done;
  }
}

TEST(LinearMap, SingularRejected) {
  const auto h = parse_polynomial("x*y*z", kXYZ);
  try {
    apply_linear_map(h, RationalMatrix(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::singular_matrix);
  }
}

TEST(HomogeneousFunction, FiniteDifferenceJetSatisfiesEuler) {
  const auto h = power_product({1.5, 0.7, 2.2});
  const HomogeneousFunction fd(3, h.degree(), [h](const Vec& x) { return h(x); });
  const Vec x = vec3(0.8, 1.3, 0.6);
  const auto j = fd.jet(x, 2);
  const auto exact = h.jet(x, 4);
  EXPECT_NEAR(j.grad.dot(x), h.degree() * j.value, 1e-7 * std::abs(j.value) * h.degree());
  EXPECT_LT((j.hess * x - (h.degree() - 1) * j.grad).norm(), 1e-7 * j.grad.norm());
  EXPECT_LT((j.grad - exact.grad).norm(), 1e-7 * exact.grad.norm());
  EXPECT_LT((j.hess - exact.hess).norm(), 1e-6 * exact.hess.norm());
}

TEST(HomogeneousFunction, PowerProductAnalyticJetMatchesDifferences) {
  const auto h = power_product({1.0, 2.0, 0.5});
  const Vec x = vec3(1.1, 0.9, 1.7);
  const auto exact = h.jet(x, 4);
  const auto fd = finite_difference_jet([h](const Vec& p) { return h(p); }, x, 4);
  EXPECT_LT((fd.hess - exact.hess).norm(), 1e-7 * exact.hess.norm());
  for (std::size_t i = 0; i < exact.third.data().size(); ++i)
    EXPECT_NEAR(fd.third.data()[i], exact.third.data()[i], 1e-5 * exact.third.max_abs());
  for (std::size_t i = 0; i < exact.fourth.data().size(); ++i)
    EXPECT_NEAR(fd.fourth.data()[i], exact.fourth.data()[i], 1e-3 * exact.fourth.max_abs());
}

TEST(HomogeneousFunction, DomainErrors) {
  const auto h = power_product({1.0, 1.0, 1.0});
  try {
    h(vec3(-1, 1, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::domain_error);
  }
  try {
    h(Vec::Ones(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::dimension_mismatch);
  }
}

TEST(HomogeneousFunction, DeterminantJetRoutesAgree) {
  const auto poly = parse_polynomial("x*(y^2-z^2) + y^3", kXYZ);
  const HomogeneousFunction exact(poly);
  const HomogeneousFunction numeric(3, 3.0, [poly](const Vec& x) { return poly(x); },
                                    [poly](const Vec& x, int o) { return evaluate_jet(poly, x, o); });
  const Vec x = vec3(2.0, -0.5, 0.3);
  const auto a = determinant_jet(exact, x);
  const auto b = determinant_jet(numeric, x);
  EXPECT_TRUE(a.exact);
  EXPECT_FALSE(b.exact);
  EXPECT_NEAR(a.value, b.value, 1e-12 * std::abs(a.value));
  EXPECT_LT((a.grad - b.grad).norm(), 1e-8 * a.grad.norm());
  EXPECT_LT((a.hess - b.hess).norm(), 1e-7 * a.hess.norm());
}
