#include <doctest.h>

#include <cmath>

#include "cartangeo/fisher.hpp"
#include "cartangeo/rng.hpp"

using namespace cartangeo;

namespace {
Vec theta1(double v) { return Vec::Constant(1, v); }

ParametricFamily constant_family() {
  ParametricFamily fam;
  fam.name = "constant";
  fam.theta_dim = 1;
  Vec atoms(2);
  atoms << 0.0, 1.0;
  fam.space = DiscreteSpace{atoms};
  fam.log_density = [](double, const Vec&) { return std::log(0.5); };
  fam.theta_lo = Vec::Constant(1, -10.0);
  fam.theta_hi = Vec::Constant(1, 10.0);
  return fam;
}

// Bernoulli pulled back through theta = eta^2.
ParametricFamily bernoulli_squared() {
  ParametricFamily base = bernoulli_family();
  ParametricFamily fam = base;
  fam.name = "bernoulli-squared";
  fam.log_density = [base](double x, const Vec& eta) {
    return base.log_density(x, Vec::Constant(1, eta(0) * eta(0)));
  };
  fam.log_density_grad = [base](double x, const Vec& eta) {
    Vec g = base.log_density_grad(x, Vec::Constant(1, eta(0) * eta(0)));
    return Vec::Constant(1, g(0) * 2.0 * eta(0)).eval();
  };
  fam.theta_lo = Vec::Constant(1, 0.0);
  fam.theta_hi = Vec::Constant(1, 1.0);
  return fam;
}
}  // namespace

TEST_CASE("bernoulli fisher information") {
  ParametricFamily fam = bernoulli_family();
  CHECK(fisher_matrix(fam, theta1(0.5)).matrix(0, 0) == doctest::Approx(4.0).epsilon(1e-12));
  for (double th : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
    double expect = 1.0 / (th * (1.0 - th));
    CHECK(std::abs(fisher_matrix(fam, theta1(th)).matrix(0, 0) - expect) <= 1e-10 * expect);
  }
  CHECK_THROWS_AS(fisher_matrix(fam, theta1(0.0)), std::domain_error);  // boundary
}

TEST_CASE("gaussian fisher information") {
  ParametricFamily fam = gaussian1d_family();
  Rng rng(3);
  for (int t = 0; t < 5; ++t) {
    Vec theta(2);
    theta << rng.uniform(-2.0, 2.0), rng.uniform(0.5, 2.0);
    Mat F = fisher_matrix(fam, theta).matrix;
    double s2 = theta(1) * theta(1);
    CHECK(std::abs(F(0, 0) - 1.0 / s2) <= 1e-6);
    CHECK(std::abs(F(1, 1) - 2.0 / s2) <= 1e-6);
    CHECK(std::abs(F(0, 1)) <= 1e-6);
  }
}

TEST_CASE("constant family has zero fisher information") {
  ParametricFamily fam = constant_family();
  CHECK(fisher_matrix(fam, theta1(0.3)).matrix.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(score_mean_check(fam, theta1(0.3)) <= 1e-12);
}

TEST_CASE("score identities") {
  ParametricFamily bern = bernoulli_family();
  CHECK(score_mean_check(bern, theta1(0.3)) <= 1e-8);
  CHECK(fisher_second_derivative_check(bern, theta1(0.3)) <= 1e-8);

  ParametricFamily gauss = gaussian1d_family();
  Vec theta(2);
  theta << 0.7, 1.3;
  CHECK(score_mean_check(gauss, theta) <= 1e-6);
  CHECK(fisher_second_derivative_check(gauss, theta) <= 1e-6);
}

TEST_CASE("amari-chentsov tensor") {
  ParametricFamily bern = bernoulli_family();
  // theta = 1/2: the score is symmetric, the third moment vanishes
  CHECK(std::abs(amari_chentsov(bern, theta1(0.5)).at(0, 0, 0)) <= 1e-14);
  // theta = 1/4: (1-2 theta)/(theta^2 (1-theta)^2) = 128/9
  double expect = 128.0 / 9.0;
  CHECK(amari_chentsov(bern, theta1(0.25)).at(0, 0, 0) ==
        doctest::Approx(expect).epsilon(1e-10));

  // gaussian: S_111 = E[((x-m)/s^2)^3] = 0 (odd moment)
  ParametricFamily gauss = gaussian1d_family();
  Vec theta(2);
  theta << 0.4, 0.9;
  CHECK(std::abs(amari_chentsov(gauss, theta).at(0, 0, 0)) <= 1e-10);
}

TEST_CASE("statistical alpha connections") {
  ParametricFamily bern = bernoulli_family();
  Vec th = theta1(0.3);

  // alpha = 0 is the Levi-Civita connection
  AlphaChristoffels lc = levi_civita_christoffels(bern, th);
  AlphaChristoffels a0 = statistical_alpha_connection(bern, th, 0.0);
  CHECK((lc.lowered - a0.lowered).max_abs() == 0.0);

  TriTensor D = fisher_metric_derivative(bern, th);
  for (double alpha : {-1.0, -0.5, 0.5, 1.0}) {
    AlphaChristoffels gp = statistical_alpha_connection(bern, th, alpha);
    AlphaChristoffels gm = statistical_alpha_connection(bern, th, -alpha);
    // duality against d_k mu_ij
    double r = 0.0;
    for (int k = 0; k < 1; ++k)
      for (int i = 0; i < 1; ++i)
        for (int j = 0; j < 1; ++j)
          r = std::max(r, std::abs(D.at(k, i, j) - gp.lowered.at(k, i, j) -
                                   gm.lowered.at(k, j, i)));
    CHECK(r <= 1e-6);
    // Gamma^(a) + Gamma^(-a) = 2 Gamma^LC at machine precision
    double m = 0.0;
    m = std::max(m, std::abs(gp.lowered.at(0, 0, 0) + gm.lowered.at(0, 0, 0) -
                             2.0 * lc.lowered.at(0, 0, 0)));
    CHECK(m <= 1e-12);
    // nabla^a mu = a S, totally symmetric
    TriTensor S = amari_chentsov(bern, th);
    double cov = D.at(0, 0, 0) - gp.lowered.at(0, 0, 0) - gp.lowered.at(0, 0, 0);
    CHECK(std::abs(cov - alpha * S.at(0, 0, 0)) <= 1e-6);
    CHECK(gp.raised.has_value());
  }
}

TEST_CASE("metric derivative decomposition") {
  ParametricFamily bern = bernoulli_family();
  for (double th : {0.2, 0.5, 0.8})
    CHECK(metric_derivative_decomposition_check(bern, theta1(th)) <= 1e-6);
}

TEST_CASE("fisher matrices are positive semidefinite") {
  ParametricFamily cat = categorical_family(4);
  Vec theta(3);
  theta << 0.2, 0.3, 0.1;
  Mat F = fisher_matrix(cat, theta).matrix;
  Eigen::SelfAdjointEigenSolver<Mat> es(F);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10);
  // categorical closed form: diag(1/p_i) + 1/p_k
  double pk = 1.0 - theta.sum();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double expect = (i == j ? 1.0 / theta(i) : 0.0) + 1.0 / pk;
      CHECK(F(i, j) == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("reparameterization transforms fisher by the jacobian square") {
  ParametricFamily pulled = bernoulli_squared();
  ParametricFamily base = bernoulli_family();
  for (double eta : {0.5, 0.7, 0.9}) {
    double th = eta * eta;
    double expect = 4.0 * eta * eta * fisher_matrix(base, theta1(th)).matrix(0, 0);
    double got = fisher_matrix(pulled, theta1(eta)).matrix(0, 0);
    CHECK(std::abs(got - expect) <= 1e-8 * std::max(1.0, expect));
  }
}

TEST_CASE("quadrature normalization failure is reported") {
  ParametricFamily fam = constant_family();
  fam.log_density = [](double, const Vec&) { return std::log(0.6); };  // sums to 1.2
  CHECK_THROWS_AS(fisher_matrix(fam, theta1(0.3)), std::domain_error);
}
