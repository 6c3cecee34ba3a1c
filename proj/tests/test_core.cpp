#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "support.hpp"
#include "uos/core.hpp"
#include "uos/io.hpp"
#include "uos/operators.hpp"

using namespace uos;
using Catch::Approx;

TEST_CASE("real_inner basics") {
  VectorXd a(2), b(2);
  a << 1, 0;
  b << 0, 1;
  CHECK(real_inner(a, b) == 0.0);

  VectorXcd c(2);
  c << std::complex<double>(1, 1), std::complex<double>(0, 0);
  CHECK(real_inner(c, c) == Approx(2.0));

  VectorXd u(3), v(3);
  u << 2, -1, 3;
  v << 1, 1, 1;
  CHECK(real_inner(u, v) == Approx(4.0));

  VectorXd w(4);
  CHECK_THROWS_AS(real_inner(u, w), DimensionError);
}

TEST_CASE("real_inner properties") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    auto a = random_normal_vector<std::complex<double>>(6, rng);
    auto b = random_normal_vector<std::complex<double>>(6, rng);
    // symmetry of the real part
    CHECK(real_inner(a, b) == Approx(real_inner(b, a)).margin(1e-12));
    // <a,a> equals the squared norm by construction
    CHECK(real_inner(a, a) == a.squaredNorm());
    // bilinear over real scalars
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    const double s = coef(rng), u = coef(rng);
    VectorXcd combo = s * a + u * b;
    CHECK(real_inner(combo, b) ==
          Approx(s * real_inner(a, b) + u * real_inner(b, b)).margin(1e-10));
  }
}

TEST_CASE("operator_norm_sq on scaled identities") {
  ScaledIdentityOperator<double> id(5, 1.0);
  auto r = operator_norm_sq(id, 1e-10, 1000);
  CHECK(r.converged);
  CHECK(r.value == Approx(1.0).epsilon(1e-10));

  ScaledIdentityOperator<double> id3(5, 3.0);
  auto r3 = operator_norm_sq(id3, 1e-10, 1000);
  CHECK(r3.value == Approx(9.0).epsilon(1e-10));
}

TEST_CASE("operator_norm_sq matches the exact dominant eigenvalue") {
  MatrixXd m(2, 2);
  m << 1, 1, 0, 1;
  DenseOperator<double> op(m);
  auto r = operator_norm_sq(op, 1e-12, 10000);
  CHECK(r.converged);
  CHECK(r.value == Approx((3.0 + std::sqrt(5.0)) / 2.0).margin(1e-6));
}

TEST_CASE("operator_norm_sq reports non-convergence") {
  MatrixXd m(2, 2);
  m << 1, 1, 0, 1;
  DenseOperator<double> op(m);
  auto r = operator_norm_sq(op, 1e-15, 2);
  CHECK_FALSE(r.converged);
  CHECK(r.value > 0.0);
  CHECK(r.value <= (3.0 + std::sqrt(5.0)) / 2.0 + 1e-12);  // approaches from below
}

TEST_CASE("residual") {
  ScaledIdentityOperator<double> id(2, 1.0);
  VectorXd x(2), y(2);
  x << 1, 2;
  y << 2, 2;
  auto r = residual(id, x, y);
  CHECK(r.value[0] == Approx(1.0));
  CHECK(r.value[1] == Approx(0.0));
  CHECK(r.norm == Approx(1.0));

  VectorXd zero = VectorXd::Zero(2);
  auto rz = residual(id, zero, y);
  CHECK(rz.norm == Approx(y.norm()));

  auto rfit = residual(id, x, x);
  CHECK(rfit.norm == 0.0);

  VectorXd bad(3);
  CHECK_THROWS_AS(residual(id, bad, y), DimensionError);
}

TEST_CASE("adjoint consistency and norm bound across operator types") {
  std::mt19937_64 rng(7);
  auto gaussian = make_gaussian(6, 10, 3);
  auto rademacher = make_rademacher(5, 8, 4);
  auto sensing = make_matrix_sensing(3, 4, 7, 5);
  SpectralMixingOperator<double> mixing(ensemble_matrix({EnsembleSpec::Kind::Gaussian, 3, 6, 0.0, 9}), 4);

  auto check = [&](const LinearOperator<double>& op) {
    const auto norm_sq_est = operator_norm_sq(op, 1e-10, 5000);
    for (int t = 0; t < 100; ++t) {
      auto u = random_normal_vector<double>(op.cols(), rng);
      auto w = random_normal_vector<double>(op.rows(), rng);
      const double lhs = real_inner<double>(op.apply(u), w);
      const double rhs = real_inner<double>(u, op.apply_adjoint(w));
      const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
      CHECK(std::abs(lhs - rhs) <= 1e-10 * scale);
      CHECK(op.apply(u).squaredNorm() <=
            norm_sq_est.value * u.squaredNorm() * (1.0 + 10.0 * 1e-10) + 1e-12);
    }
  };
  check(gaussian);
  check(rademacher);
  check(sensing);
  check(mixing);

  // complex operator adjoint
  MatrixXcd cm(2, 3);
  cm << std::complex<double>(1, 2), std::complex<double>(0, -1), std::complex<double>(2, 0),
      std::complex<double>(-1, 1), std::complex<double>(3, 2), std::complex<double>(0, 4);
  DenseOperator<std::complex<double>> cop(cm);
  for (int t = 0; t < 100; ++t) {
    auto u = random_normal_vector<std::complex<double>>(3, rng);
    auto w = random_normal_vector<std::complex<double>>(2, rng);
    const double lhs = real_inner<std::complex<double>>(cop.apply(u), w);
    const double rhs = real_inner<std::complex<double>>(u, cop.apply_adjoint(w));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max({std::abs(lhs), std::abs(rhs), 1.0}));
  }
}

TEST_CASE("dense operator rejects non-finite and mismatched input") {
  MatrixXd m(2, 2);
  m << 1, 2, 3, std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(DenseOperator<double>(m), ParameterError);

  MatrixXd ok(2, 2);
  ok << 1, 2, 3, 4;
  DenseOperator<double> op(ok);
  VectorXd bad(3);
  CHECK_THROWS_AS(op.apply(bad), DimensionError);
  CHECK_THROWS_AS(op.apply_adjoint(bad), DimensionError);
}

TEST_CASE("matrix text round trip") {
  MatrixXd m(2, 3);
  m << 1.5, -2.25, 3.0e-7, 4, 5, -6;
  std::ostringstream os;
  save_matrix_text(os, m);
  std::istringstream is(os.str());
  MatrixXd back = load_matrix_text(is);
  CHECK((m - back).norm() == 0.0);

  MatrixXcd c(2, 2);
  c << std::complex<double>(1, -2), std::complex<double>(0.5, 0), std::complex<double>(0, 3),
      std::complex<double>(-1, -1);
  std::ostringstream oc;
  save_matrix_text(oc, c);
  std::istringstream ic(oc.str());
  MatrixXcd cback = load_matrix_complex_text(ic);
  CHECK((c - cback).norm() == 0.0);
}

TEST_CASE("matrix text loader accepts commas and reports bad fields") {
  std::istringstream ok("1, 2.5, 3\n4, 5, 6\n");
  MatrixXd m = load_matrix_text(ok);
  CHECK(m.rows() == 2);
  CHECK(m(0, 1) == 2.5);

  std::istringstream bad("1 2\n3 oops\n");
  CHECK_THROWS_WITH(load_matrix_text(bad, "input"),
                    Catch::Matchers::ContainsSubstring("line 2"));

  std::istringstream ragged("1 2\n3\n");
  CHECK_THROWS_AS(load_matrix_text(ragged), IoError);

  std::istringstream odd("1 2 3\n");
  CHECK_THROWS_AS(load_matrix_complex_text(odd), IoError);
}

TEST_CASE("operator to_dense matches the application") {
  auto op = make_gaussian(4, 6, 11);
  SpectralMixingOperator<double> mixing(ensemble_matrix({EnsembleSpec::Kind::Gaussian, 2, 3, 0.0, 12}), 3);
  std::mt19937_64 rng(13);
  const MatrixXd dense = mixing.to_dense();
  for (int t = 0; t < 20; ++t) {
    auto u = random_normal_vector<double>(mixing.cols(), rng);
    CHECK((mixing.apply(u) - dense * u).norm() <= 1e-12 * std::max(1.0, u.norm()));
  }
  CHECK(op.to_dense().rows() == 4);
}
