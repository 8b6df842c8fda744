// Acceptance suite: one pass/fail line per criterion, each pinned to its
// stated tolerance. Exit code is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cartangeo/connection.hpp"
#include "cartangeo/cs_metric.hpp"
#include "cartangeo/fisher.hpp"
#include "cartangeo/mean.hpp"
#include "cartangeo/rng.hpp"

using namespace cartangeo;

namespace {

struct Criterion {
  std::string name;
  std::function<bool(std::string&)> run;
};

Vec basis_vec(int dim, int i) {
  Vec v = Vec::Zero(dim);
  v(i) = 1.0;
  return v;
}

double elapsed_seconds(const std::function<void()>& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

LieAlgebraSpec oscillator(std::initializer_list<double> lambda) {
  OscillatorSpec os;
  os.lambda = Vec(static_cast<int>(lambda.size()));
  int i = 0;
  for (double l : lambda) os.lambda(i++) = l;
  return make_oscillator(os);
}

// Quaternionic H-type data: J_1, J_2, J_3 = left multiplication by i, j, k.
HTypeSpec quaternionic_htype() {
  HTypeSpec spec;
  spec.n = 4;
  spec.m = 3;
  Mat J1 = Mat::Zero(4, 4), J2 = Mat::Zero(4, 4), J3 = Mat::Zero(4, 4);
  J1(1, 0) = 1; J1(0, 1) = -1; J1(3, 2) = 1; J1(2, 3) = -1;
  J2(2, 0) = 1; J2(3, 1) = 1; J2(0, 2) = -1; J2(1, 3) = -1;
  J3(3, 0) = 1; J3(2, 1) = -1; J3(1, 2) = 1; J3(0, 3) = -1;
  spec.gamma = {J1, J2, J3};
  return spec;
}

TriTensor random_symmetric_tensor(Rng& rng, int d) {
  TriTensor S(d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j)
      for (int k = j; k < d; ++k) {
        double v = rng.normal();
        S.at(i, j, k) = S.at(i, k, j) = S.at(j, i, k) = S.at(j, k, i) = S.at(k, i, j) =
            S.at(k, j, i) = v;
      }
  return S;
}

// Koszul-formula frame Christoffels of the metric field at sigma.
Mat koszul_gamma(const LieAlgebraSpec& alg, const Mat& g, const GroupPoint& sigma, int i, int j) {
  const int d = alg.dim();
  Mat basis = Mat::Identity(d, d);
  Mat M = metric_field_matrix(alg, g, sigma);
  Vec rhs(d);
  for (int k = 0; k < d; ++k) {
    double v = metric_field_directional_derivative(alg, g, sigma, basis.col(i), basis.col(j),
                                                   basis.col(k)) +
               metric_field_directional_derivative(alg, g, sigma, basis.col(j), basis.col(i),
                                                   basis.col(k)) -
               metric_field_directional_derivative(alg, g, sigma, basis.col(k), basis.col(i),
                                                   basis.col(j));
    v += metric_field_2nil(alg, g, sigma, alg.bracket(basis.col(i), basis.col(j)), basis.col(k));
    v -= metric_field_2nil(alg, g, sigma, alg.bracket(basis.col(i), basis.col(k)), basis.col(j));
    v -= metric_field_2nil(alg, g, sigma, alg.bracket(basis.col(j), basis.col(k)), basis.col(i));
    rhs(k) = 0.5 * v;
  }
  return M.partialPivLu().solve(rhs);
}

bool criterion_cs_space_dimensions(std::string& msg) {
  struct Case {
    LieAlgebraSpec alg;
    std::string label;
  };
  std::vector<Case> cases;
  cases.push_back({make_heisenberg(1), "H3"});
  cases.push_back({make_heisenberg(2), "H5"});
  Rng rng(101);
  for (int t = 0; t < 4; ++t) {
    int n = rng.uniform_int(2, 8);
    int m = rng.uniform_int(1, std::min(4, 12 - n));
    cases.push_back({make_htype(rng.htype(n, m)), "htype"});
  }
  for (auto& c : cases) {
    int got = 0;
    double secs = elapsed_seconds([&] { got = solve_cs_space(c.alg).dimension; });
    int d = c.alg.dim();
    if (got != d * (d + 1) / 2) {
      msg = c.label + ": dimension " + std::to_string(got) + " != " +
            std::to_string(d * (d + 1) / 2);
      return false;
    }
    if (secs >= 1.0) {
      msg = c.label + ": solver took " + std::to_string(secs) + "s";
      return false;
    }
  }
  msg = "dimensions d(d+1)/2 on H3, H5 and 4 random H-type specs, each under 1 s";
  return true;
}

bool criterion_oscillator(std::string& msg) {
  Rng rng(102);
  bool dims_ok = true, pattern_ok = true, lorentz_ok = true, adinv_zero_ok = true;
  bool iff_ok = true;
  double iff_residual = 0.0;
  for (auto lambda : {std::vector<double>{1.0}, {1.0, 2.0}, {1.0, 1.0, 3.0}}) {
    OscillatorSpec os;
    os.lambda = Vec(static_cast<int>(lambda.size()));
    for (size_t i = 0; i < lambda.size(); ++i) os.lambda(static_cast<int>(i)) = lambda[i];
    LieAlgebraSpec alg = make_oscillator(os);
    const int n = static_cast<int>(lambda.size());
    const int d = 2 * n + 2;

    CSMetricSpace space;
    double secs = elapsed_seconds([&] { space = solve_cs_space(alg); });
    dims_ok = dims_ok && secs < 1.0 && space.dimension == 2;

    // entrywise zero pattern: the only nonzero entries are (0,0), (0,1)/(1,0)
    // and the diagonal V/W entries tied to a/lambda_j
    auto pattern = [&](double a, double b) {
      Mat g = Mat::Zero(d, d);
      g(0, 0) = b;
      g(0, 1) = g(1, 0) = a;
      for (int j = 0; j < n; ++j) {
        g(2 + j, 2 + j) = a / lambda[j];
        g(2 + n + j, 2 + n + j) = a / lambda[j];
      }
      return g;
    };
    for (const Mat& B : space.basis)
      pattern_ok =
          pattern_ok && (B - pattern(B(0, 1), B(0, 0))).cwiseAbs().maxCoeff() < 1e-10;

    // nondegenerate samples are Lorentzian (orientation-normalized)
    for (int t = 0; t < 25; ++t) {
      Mat sample = Mat::Zero(d, d);
      for (const Mat& B : space.basis) sample += rng.normal() * B;
      double scale = sample.cwiseAbs().maxCoeff();
      if (scale < 1e-8 || std::abs(sample.determinant()) < 1e-8 * std::pow(scale, d)) continue;
      Signature s = signature(sample);
      if (s.p_minus > s.p_plus) s = signature((-sample).eval());
      lorentz_ok = lorentz_ok && s == Signature{2 * n + 1, 1};
    }

    // ad-invariance residual is 0 iff mu(e_{-1},e_{-1}) = 0
    adinv_zero_ok = adinv_zero_ok && check_ad_invariance(alg, pattern(1.0, 0.0)) <= 1e-12;
    iff_residual = check_ad_invariance(alg, pattern(1.0, 2.7));
    iff_ok = iff_ok && iff_residual > 1e-12;
  }
  if (!dims_ok || !pattern_ok || !lorentz_ok || !adinv_zero_ok) {
    msg = "dimension/pattern/signature/ad-invariance(b=0) clauses failed";
    return false;
  }
  if (!iff_ok) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "dimension 2, zero pattern, Lorentz signature and b=0 ad-invariance all hold, "
                  "but the iff direction fails: residual %.1e for b != 0 (b e-1^* (x) e-1^* is "
                  "itself ad-invariant since no bracket has an e-1 component; those metrics are "
                  "automorphism pullbacks of the canonical one)",
                  iff_residual);
    msg = buf;
    return false;
  }
  msg = "dimension, pattern, signature and ad-invariance clauses";
  return true;
}

bool criterion_parallelism(std::string& msg) {
  Rng rng(103);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    LieAlgebraSpec alg = make_htype(rng.htype(rng.uniform_int(2, 5), rng.uniform_int(1, 3)));
    const int d = alg.dim();
    Mat g = rng.symmetric_nondegenerate(d);
    GroupPoint sigma{Chart::Exponential, rng.vector(d)};
    Vec x = rng.vector(d);
    Mat basis = Mat::Identity(d, d);
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double lhs =
            metric_field_directional_derivative(alg, g, sigma, x, basis.col(j), basis.col(k));
        double rhs = 0.5 * (metric_field_2nil(alg, g, sigma, alg.bracket(x, basis.col(j)),
                                              basis.col(k)) +
                            metric_field_2nil(alg, g, sigma, basis.col(j),
                                              alg.bracket(x, basis.col(k))));
        worst = std::max(worst, std::abs(lhs - rhs));
      }
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "max residual %.3e", worst);
  msg = std::string(buf) + " over 20 draws";
  return worst <= 1e-12;
}

bool criterion_koszul(std::string& msg) {
  Rng rng(104);
  double worst = 0.0;
  std::vector<LieAlgebraSpec> algs;
  algs.push_back(make_heisenberg(1));
  algs.push_back(make_htype(quaternionic_htype()));
  for (const LieAlgebraSpec& alg : algs) {
    const int d = alg.dim();
    Mat g = rng.symmetric_nondegenerate(d);
    for (int t = 0; t < 50; ++t) {
      GroupPoint sigma{Chart::Exponential, rng.vector(d)};
      int i = rng.uniform_int(0, d - 1), j = rng.uniform_int(0, d - 1);
      Vec gamma = koszul_gamma(alg, g, sigma, i, j);
      Vec expect = 0.5 * alg.bracket(basis_vec(d, i), basis_vec(d, j));
      worst = std::max(worst, (gamma - expect).cwiseAbs().maxCoeff());
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "max deviation from C/2 is %.3e", worst);
  msg = buf;
  return worst <= 1e-10;
}

bool criterion_geodesics(std::string& msg) {
  LieAlgebraSpec h3 = make_heisenberg(1);
  Rng rng(105);
  Mat g = rng.symmetric_nondegenerate(3);
  const double h = 1e-3;
  const int steps = 1000;

  auto metric_at = [&](const Vec& u) {
    return coordinate_metric(h3, g, {Chart::Exponential, u});
  };
  auto accel = [&](const Vec& u, const Vec& v) {
    // -Gamma^k_{ij} v^i v^j with Gamma from central differences of the metric
    const double fd = 1e-5;
    Mat dG[3];
    for (int a = 0; a < 3; ++a) {
      Vec up = u, um = u;
      up(a) += fd;
      um(a) -= fd;
      dG[a] = (metric_at(up) - metric_at(um)) / (2.0 * fd);
    }
    Vec rhs = Vec::Zero(3);
    for (int k = 0; k < 3; ++k) {
      double s = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          s += (dG[i](j, k) + dG[j](i, k) - dG[k](i, j)) * v(i) * v(j);
      rhs(k) = -0.5 * s;
    }
    return metric_at(u).partialPivLu().solve(rhs).eval();
  };

  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    Vec v0 = rng.vector(3);
    Vec x = Vec::Zero(3), v = v0;
    for (int s = 1; s <= steps; ++s) {
      // classical RK4 on (x, v)
      Vec k1x = v, k1v = accel(x, v);
      Vec k2x = v + 0.5 * h * k1v, k2v = accel(x + 0.5 * h * k1x, v + 0.5 * h * k1v);
      Vec k3x = v + 0.5 * h * k2v, k3v = accel(x + 0.5 * h * k2x, v + 0.5 * h * k2v);
      Vec k4x = v + h * k3v, k4v = accel(x + h * k3x, v + h * k3v);
      x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      double t = s * h;
      worst = std::max(worst, (x - t * v0).cwiseAbs().maxCoeff());
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "sup-norm deviation from t*v is %.3e", worst);
  msg = buf;
  return worst <= 1e-6;
}

bool criterion_closed_forms(std::string& msg) {
  // Heisenberg table against the general 2-step formula on a 5x5x5 grid
  LieAlgebraSpec h3 = make_heisenberg(1);
  Rng rng(106);
  Mat k = rng.symmetric_nondegenerate(3);
  double worst_h = 0.0;
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b)
      for (int c = 0; c < 5; ++c) {
        Vec pt(3);
        pt << -2.0 + a, -2.0 + b, -2.0 + c;
        Mat table = heisenberg_metric_coeffs(1, k, pt);
        Mat M = metric_field_matrix(h3, k, {Chart::HeisenbergMatrix, pt});
        Mat P = Mat::Identity(3, 3);
        P(2, 1) = -pt(0);
        worst_h = std::max(worst_h, (table - P.transpose() * M * P).cwiseAbs().maxCoeff());
      }
  if (worst_h > 1e-12) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "Heisenberg grid residual %.3e", worst_h);
    msg = buf;
    return false;
  }
  // H-type closed form against the general formula, 3 specs x 100 points
  double worst_t = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    HTypeSpec spec = rng.htype(rng.uniform_int(2, 4), rng.uniform_int(1, 3));
    LieAlgebraSpec alg = make_htype(spec);
    Mat d = rng.symmetric_nondegenerate(alg.dim());
    for (int t = 0; t < 100; ++t) {
      GroupPoint sigma{Chart::Exponential, rng.vector(alg.dim())};
      worst_t = std::max(worst_t, (htype_metric_coeffs(spec, d, sigma.coords) -
                                   coordinate_metric(alg, d, sigma))
                                      .cwiseAbs()
                                      .maxCoeff());
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "grid residual %.3e, H-type residual %.3e", worst_h, worst_t);
  msg = buf;
  return worst_t <= 1e-10;
}

bool criterion_mean_certificate(std::string& msg) {
  Rng rng(107);
  double worst_agree = 0.0, worst_res = 0.0, worst_z = 0.0;
  int worst_iter = 0;
  for (int t = 0; t < 100; ++t) {
    int n = rng.uniform_int(2, 7), m = rng.uniform_int(1, 3);
    if (n + m > 10) n = 7;
    HTypeSpec spec = rng.htype(n, m);
    LieAlgebraSpec alg = make_htype(spec);
    int p = rng.uniform_int(2, 200);
    Dataset data{rng.matrix(p, n + m), Chart::Exponential, n, m};
    MeanResult cf = parametric_mean_closed_form(spec, data);
    MeanResult fp = barycenter_fixed_point(alg, data);
    worst_agree =
        std::max(worst_agree, (cf.mean.coords - fp.mean.coords).cwiseAbs().maxCoeff());
    worst_res = std::max({worst_res, cf.barycenter_residual, fp.barycenter_residual});
    worst_iter = std::max(worst_iter, fp.iterations);
    if (!fp.converged) {
      msg = "fixed point failed to converge";
      return false;
    }
  }
  // HeisenbergMatrix-chart z-mean formula
  LieAlgebraSpec h3 = make_heisenberg(1);
  for (int t = 0; t < 50; ++t) {
    Dataset data{rng.matrix(rng.uniform_int(2, 100), 3), Chart::HeisenbergMatrix, 2, 1};
    Vec mean = mean_in_chart(h3, data).mean.coords;
    Vec am = arithmetic_mean(data.points);
    double exy = 0.0;
    for (int r = 0; r < data.size(); ++r) exy += data.points(r, 0) * data.points(r, 1);
    exy /= data.size();
    worst_z = std::max(worst_z, std::abs(mean(2) - (am(2) - 0.5 * exy + 0.5 * am(0) * am(1))));
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "agreement %.2e, residual %.2e, iterations <= %d, z-formula %.2e", worst_agree,
                worst_res, worst_iter, worst_z);
  msg = buf;
  return worst_agree <= 1e-12 && worst_res <= 1e-12 && worst_iter <= 2 && worst_z <= 1e-13;
}

bool criterion_antisymmetric_flag(std::string& msg) {
  Rng rng(108);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    int n = rng.uniform_int(2, 6), m = rng.uniform_int(1, 3);
    Dataset data{rng.matrix(rng.uniform_int(2, 120), n + m), Chart::Exponential, n, m};
    HTypeSpec base;
    base.n = n;
    base.m = m;
    base.gamma.assign(m, Mat::Zero(n, n));
    std::vector<HTypeSpec> sweep;
    for (int i = 0; i < 10; ++i) sweep.push_back(rng.htype(n, m, 4.0));
    Vec arith = arithmetic_mean(data.points);
    for (const MeanReportRow& row : mean_report(base, data, sweep)) {
      if (!row.equals_arithmetic_mean) {
        msg = "equals_arithmetic_mean flag not set";
        return false;
      }
      worst = std::max(worst, (row.mean - arith).cwiseAbs().maxCoeff());
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "max deviation %.3e", worst);
  msg = buf;
  return worst <= 1e-15;
}

bool criterion_fisher(std::string& msg) {
  ParametricFamily bern = bernoulli_family();
  for (int i = 1; i <= 9; ++i) {
    double th = 0.1 * i;
    Vec theta = Vec::Constant(1, th);
    double expect = 1.0 / (th * (1.0 - th));
    if (std::abs(fisher_matrix(bern, theta).matrix(0, 0) - expect) > 1e-10 * expect) {
      msg = "bernoulli fisher misses the closed form";
      return false;
    }
    if (score_mean_check(bern, theta) > 1e-8 ||
        fisher_second_derivative_check(bern, theta) > 1e-6) {
      msg = "bernoulli score identities out of tolerance";
      return false;
    }
    double s = amari_chentsov(bern, theta).at(0, 0, 0);
    double s_expect = (1.0 - 2.0 * th) / (th * th * (1.0 - th) * (1.0 - th));
    if (std::abs(s - s_expect) > 1e-8 * std::max(1.0, std::abs(s_expect))) {
      msg = "bernoulli amari-chentsov misses the closed form";
      return false;
    }
  }
  ParametricFamily gauss = gaussian1d_family();
  Rng rng(109);
  for (int t = 0; t < 5; ++t) {
    Vec theta(2);
    theta << rng.uniform(-2.0, 2.0), rng.uniform(0.5, 2.5);
    Mat F = fisher_matrix(gauss, theta).matrix;
    double s2 = theta(1) * theta(1);
    if (std::abs(F(0, 0) - 1.0 / s2) > 1e-6 || std::abs(F(1, 1) - 2.0 / s2) > 1e-6 ||
        std::abs(F(0, 1)) > 1e-6) {
      msg = "gaussian fisher misses diag(1/s^2, 2/s^2)";
      return false;
    }
    if (score_mean_check(gauss, theta) > 1e-8 ||
        fisher_second_derivative_check(gauss, theta) > 1e-6) {
      msg = "gaussian score identities out of tolerance";
      return false;
    }
  }
  msg = "bernoulli exact sums, gaussian quadrature, score and moment identities";
  return true;
}

bool criterion_duality_suite(std::string& msg) {
  LieAlgebraSpec h3 = make_heisenberg(1);
  Rng rng(110);
  double worst_dual = 0.0, worst_mean = 0.0, worst_cov = 0.0, worst_curv = 0.0;
  ConnectionCoeffs nabla = canonical_connection(h3);
  for (int trial = 0; trial < 3; ++trial) {
    MetricAtUnit g(rng.symmetric_nondegenerate(3));
    TriTensor S = random_symmetric_tensor(rng, 3);
    std::vector<GroupPoint> samples{identity_point(h3)};
    for (int i = 0; i < 5; ++i) samples.push_back({Chart::Exponential, rng.vector(3)});
    for (double alpha : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      auto [plus, minus] = alpha_connections(h3, g, S, alpha);
      worst_dual = std::max(worst_dual, check_duality(h3, g, plus, minus, samples));
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 3; ++k)
            worst_mean = std::max(worst_mean,
                                  std::abs(0.5 * (plus.at(i, j, k) + minus.at(i, j, k)) -
                                           nabla.at(i, j, k)));
      for (const GroupPoint& sigma : samples) {
        TriTensor cov = covariant_derivative_of_metric(h3, g, plus, sigma);
        worst_cov = std::max(worst_cov, (cov - S * alpha).max_abs());
        worst_cov = std::max(worst_cov, cov.symmetry_residual());
      }
      CurvatureTensor Rp = alpha_pair_curvature_at_unit(h3, g, S, alpha);
      CurvatureTensor Rm = alpha_pair_curvature_at_unit(h3, g, S, -alpha);
      Mat basis = Mat::Identity(3, 3);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int u = 0; u < 3; ++u)
            for (int v = 0; v < 3; ++v)
              worst_curv = std::max(
                  worst_curv, std::abs(Rp.on_basis(i, j, u).dot(g.matrix() * basis.col(v)) +
                                       basis.col(u).dot(g.matrix() * Rm.on_basis(i, j, v))));
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "duality %.2e, pair-mean %.2e, cov-deriv %.2e, curvature %.2e",
                worst_dual, worst_mean, worst_cov, worst_curv);
  msg = buf;
  return worst_dual <= 1e-11 && worst_mean <= 1e-15 && worst_cov <= 1e-11 &&
         worst_curv <= 1e-11;
}

bool criterion_biinvariant(std::string& msg) {
  Rng rng(111);
  double worst_cocycle = 0.0, worst_biinv = 0.0, worst_flat = 0.0, worst_cob = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    int n = rng.uniform_int(2, 4), m = rng.uniform_int(1, 2);
    LieAlgebraSpec alg = make_htype(rng.htype(n, m));
    const int d = alg.dim();
    // closed 1-forms are supported on V; centers of these graded algebras
    // contain the Z block, so B = sum f (x) f with f|Z = 0 kills the central X
    std::vector<Mat> Bs;
    std::vector<Vec> Xs;
    for (int j = 0; j < m; ++j) {
      Vec f = Vec::Zero(d);
      f.head(n) = rng.vector(n);
      Bs.push_back(f * f.transpose());
      Vec X = Vec::Zero(d);
      X.tail(m) = rng.vector(m);
      Xs.push_back(X);
    }
    ConnectionCoeffs conn = biinvariant_connection(alg, Bs, Xs);
    BilinearMap k(d);
    ConnectionCoeffs nabla = canonical_connection(alg);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Vec kv = 2.0 * (nabla.on_basis(i, j) - conn.on_basis(i, j));
        for (int c = 0; c < d; ++c) k.at(i, j, c) = kv(c);
      }
    worst_cocycle = std::max(worst_cocycle, cocycle_check(alg, k));
    worst_biinv = std::max(worst_biinv, biinvariance_residual(alg, conn));
    worst_flat = std::max(worst_flat, curvature(conn, alg).max_abs());
  }
  // coboundaries: psi drawn from the class with [x, psi x] = 0 (skew k_psi),
  // the hypothesis under which the coboundary claim is coherent
  LieAlgebraSpec h3 = make_heisenberg(1);
  {
    const int d = 3;
    Mat basis = Mat::Identity(d, d);
    // linear constraints [e_i, psi e_j] + [e_j, psi e_i] = 0 on vec(psi)
    std::vector<Vec> rows;
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j)
        for (int c = 0; c < d; ++c) {
          Vec row = Vec::Zero(d * d);
          for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
              // coefficient of psi(a,b) in component c
              double coeff = 0.0;
              if (b == j) coeff += h3.bracket(basis.col(i), basis.col(a))(c);
              if (b == i) coeff += h3.bracket(basis.col(j), basis.col(a))(c);
              row(a * d + b) = coeff;
            }
          rows.push_back(row);
        }
    Mat system(static_cast<int>(rows.size()), d * d);
    for (size_t r = 0; r < rows.size(); ++r) system.row(static_cast<int>(r)) = rows[r];
    Mat null = nullspace(system);
    for (int t = 0; t < 10; ++t) {
      Vec coeffs = rng.vector(static_cast<int>(null.cols()));
      Vec flat = null * coeffs;
      Mat psi(d, d);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) psi(a, b) = flat(a * d + b);
      worst_cob = std::max(worst_cob, cocycle_check(h3, coboundary(h3, psi)));
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "cocycle %.2e, biinvariance %.2e, curvature %.2e, coboundary %.2e",
                worst_cocycle, worst_biinv, worst_flat, worst_cob);
  msg = buf;
  return worst_cocycle <= 1e-12 && worst_biinv <= 1e-12 && worst_flat <= 1e-13 &&
         worst_cob <= 1e-12;
}

bool criterion_hyperbolic(std::string& msg) {
  Rng rng(112);
  double worst_gram = 0.0, worst_sym = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    int n = rng.uniform_int(3, 5);  // dim 2n <= 10
    // random quadratic 2-step algebra from a totally antisymmetric 3-form
    std::vector<double> T(static_cast<size_t>(n) * n * n, 0.0);
    auto t_at = [&](int i, int j, int k) -> double& {
      return T[(static_cast<size_t>(i) * n + j) * n + k];
    };
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
          double v = rng.normal();
          t_at(i, j, k) = t_at(j, k, i) = t_at(k, i, j) = v;
          t_at(j, i, k) = t_at(i, k, j) = t_at(k, j, i) = -v;
        }
    std::vector<BracketTriple> triples;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = 0; k < n; ++k)
          if (t_at(i, j, k) != 0.0) triples.push_back({i, j, n + k, t_at(i, j, k)});
    LieAlgebraSpec alg(2 * n, triples);
    Mat g = Mat::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) g(i, n + i) = g(n + i, i) = 1.0;

    // scramble the presentation with a random change of basis
    Mat P = rng.matrix(2 * n, 2 * n);
    while (std::abs(P.determinant()) < 0.1) P = rng.matrix(2 * n, 2 * n);
    Mat Pinv = P.inverse();
    Mat g_s = Pinv.transpose() * g * Pinv;          // g_s(P u, P v) = g(u, v)
    Mat L_s = P.rightCols(0).eval();                // placeholder, replaced below
    Mat L(2 * n, n);
    L.setZero();
    for (int i = 0; i < n; ++i) L(n + i, i) = 1.0;
    L_s = P * L;

    Mat basis = hyperbolic_basis(g_s, L_s);
    Mat gram = basis.transpose() * g_s * basis;
    Mat expect = Mat::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) expect(i, n + i) = expect(n + i, i) = 1.0;
    worst_gram = std::max(worst_gram, (gram - expect).cwiseAbs().maxCoeff());

    // structure constants in the scrambled presentation, re-expressed in the new basis
    auto bracket_s = [&](const Vec& x, const Vec& y) {
      return (P * alg.bracket(Pinv * x, Pinv * y)).eval();
    };
    Eigen::PartialPivLU<Mat> lu(basis);
    std::vector<BracketTriple> new_triples;
    for (int i = 0; i < 2 * n; ++i)
      for (int j = i + 1; j < 2 * n; ++j) {
        Vec c = lu.solve(bracket_s(basis.col(i), basis.col(j)));
        for (int k = 0; k < 2 * n; ++k)
          if (std::abs(c(k)) > 1e-12) new_triples.push_back({i, j, k, c(k)});
      }
    LieAlgebraSpec hyper(2 * n, new_triples);
    worst_sym = std::max(worst_sym, check_quadratic_structure_constants(hyper));
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "gram residual %.2e, symmetry residual %.2e", worst_gram,
                worst_sym);
  msg = buf;
  return worst_gram <= 1e-10 && worst_sym <= 1e-10;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {"criterion-01 cs-space-dimensions", criterion_cs_space_dimensions},
      {"criterion-02 oscillator-metrics", criterion_oscillator},
      {"criterion-03 parallelism", criterion_parallelism},
      {"criterion-04 levi-civita-identification", criterion_koszul},
      {"criterion-05 geodesics", criterion_geodesics},
      {"criterion-06 closed-form-consistency", criterion_closed_forms},
      {"criterion-07 mean-certificate", criterion_mean_certificate},
      {"criterion-08 antisymmetric-contraction-flag", criterion_antisymmetric_flag},
      {"criterion-09 fisher-oracles", criterion_fisher},
      {"criterion-10 duality-suite", criterion_duality_suite},
      {"criterion-11 biinvariant-connections", criterion_biinvariant},
      {"criterion-12 hyperbolic-basis", criterion_hyperbolic},
  };
  int failures = 0;
  auto t0 = std::chrono::steady_clock::now();
  for (auto& c : criteria) {
    std::string msg;
    bool ok = false;
    try {
      ok = c.run(msg);
    } catch (const std::exception& e) {
      msg = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", c.name.c_str(), msg.c_str());
    if (!ok) ++failures;
  }
  double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%d/%zu criteria passed in %.1f s\n", static_cast<int>(criteria.size()) - failures,
              criteria.size(), total);
  return failures;
}
