#include "cartangeo/fisher.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "cartangeo/numerics.hpp"

namespace cartangeo {

namespace {

struct Rule {
  std::vector<double> x, w;
};

// Golub-Welsch from the Jacobi matrix of the weight.
Rule gauss_hermite(int n) {
  Mat J = Mat::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double b = std::sqrt(k / 2.0);
    J(k - 1, k) = b;
    J(k, k - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(J);
  Rule r;
  const double sqrt_pi = std::sqrt(M_PI);
  for (int i = 0; i < n; ++i) {
    r.x.push_back(es.eigenvalues()(i));
    double v0 = es.eigenvectors()(0, i);
    r.w.push_back(sqrt_pi * v0 * v0);
  }
  return r;
}

Rule gauss_legendre(int n) {
  Mat J = Mat::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k - 1, k) = b;
    J(k, k - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(J);
  Rule r;
  for (int i = 0; i < n; ++i) {
    r.x.push_back(es.eigenvalues()(i));
    double v0 = es.eigenvectors()(0, i);
    r.w.push_back(2.0 * v0 * v0);
  }
  return r;
}

const Rule& cached_hermite(int n) {
  static std::map<int, Rule> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_hermite(n)).first;
  return it->second;
}

const Rule& cached_legendre(int n) {
  static std::map<int, Rule> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_legendre(n)).first;
  return it->second;
}

// Sample points with weights already multiplied by the density.
struct WeightedNodes {
  std::vector<double> x;
  std::vector<double> wp;
};

WeightedNodes weighted_nodes(const ParametricFamily& fam, const Vec& theta) {
  WeightedNodes out;
  if (const auto* ds = std::get_if<DiscreteSpace>(&fam.space)) {
    for (int i = 0; i < ds->atoms.size(); ++i) {
      out.x.push_back(ds->atoms(i));
      out.wp.push_back(std::exp(fam.log_density(ds->atoms(i), theta)));
    }
  } else if (const auto* is = std::get_if<IntervalSpace>(&fam.space)) {
    const Rule& r = cached_legendre(is->nodes);
    double mid = 0.5 * (is->lo + is->hi), half = 0.5 * (is->hi - is->lo);
    for (size_t i = 0; i < r.x.size(); ++i) {
      double xx = mid + half * r.x[i];
      out.x.push_back(xx);
      out.wp.push_back(half * r.w[i] * std::exp(fam.log_density(xx, theta)));
    }
  } else {
    const auto& rl = std::get<RealLineSpace>(fam.space);
    auto [m, s] = rl.anchor(theta);
    const Rule& r = cached_hermite(rl.nodes);
    const double log_norm = std::log(std::sqrt(2.0 * M_PI) * s);
    const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
    for (size_t i = 0; i < r.x.size(); ++i) {
      double t = r.x[i];
      double xx = m + std::sqrt(2.0) * s * t;
      // ratio p / gaussian(m, s); exactly 1 when the density is that gaussian
      double ratio = std::exp(fam.log_density(xx, theta) + t * t + log_norm);
      out.x.push_back(xx);
      out.wp.push_back(inv_sqrt_pi * r.w[i] * ratio);
    }
  }
  return out;
}

void check_interior(const ParametricFamily& fam, const Vec& theta) {
  if (theta.size() != fam.theta_dim)
    throw std::invalid_argument("theta dimension mismatch for family " + fam.name);
  for (int i = 0; i < theta.size(); ++i) {
    double margin = 2.5e-4 * std::max(1.0, std::abs(theta(i)));
    if (!(theta(i) > fam.theta_lo(i) + margin && theta(i) < fam.theta_hi(i) - margin))
      throw std::domain_error("theta not interior to the domain of " + fam.name);
  }
}

void check_normalization(const ParametricFamily& fam, const Vec& theta) {
  WeightedNodes nodes = weighted_nodes(fam, theta);
  double total = pairwise_sum(nodes.wp);
  if (std::abs(total - 1.0) > 1e-8)
    throw std::domain_error("quadrature normalization failure for " + fam.name);
}

Vec score_fd(const ParametricFamily& fam, double x, const Vec& theta) {
  Vec g(fam.theta_dim);
  for (int i = 0; i < fam.theta_dim; ++i) {
    double h = 1e-6 * std::max(std::abs(theta(i)), 1.0);
    Vec tp = theta, tm = theta;
    tp(i) += h;
    tm(i) -= h;
    g(i) = (fam.log_density(x, tp) - fam.log_density(x, tm)) / (2.0 * h);
  }
  return g;
}

// theta-Hessian of log p at x; exact when provided, else central steps 1e-4 relative.
Mat logp_hessian(const ParametricFamily& fam, double x, const Vec& theta) {
  const int n = fam.theta_dim;
  Mat H(n, n);
  if (fam.log_density_hess) return fam.log_density_hess(x, theta);
  if (fam.log_density_grad) {
    for (int i = 0; i < n; ++i) {
      double h = 1e-4 * std::max(std::abs(theta(i)), 1.0);
      Vec tp = theta, tm = theta;
      tp(i) += h;
      tm(i) -= h;
      Vec d = (fam.log_density_grad(x, tp) - fam.log_density_grad(x, tm)) / (2.0 * h);
      H.row(i) = d.transpose();
    }
    H = 0.5 * (H + H.transpose());
    return H;
  }
  for (int i = 0; i < n; ++i) {
    double hi = 1e-4 * std::max(std::abs(theta(i)), 1.0);
    for (int j = i; j < n; ++j) {
      double hj = 1e-4 * std::max(std::abs(theta(j)), 1.0);
      if (i == j) {
        Vec tp = theta, tm = theta;
        tp(i) += hi;
        tm(i) -= hi;
        H(i, i) = (fam.log_density(x, tp) - 2.0 * fam.log_density(x, theta) +
                   fam.log_density(x, tm)) /
                  (hi * hi);
      } else {
        Vec tpp = theta, tpm = theta, tmp = theta, tmm = theta;
        tpp(i) += hi; tpp(j) += hj;
        tpm(i) += hi; tpm(j) -= hj;
        tmp(i) -= hi; tmp(j) += hj;
        tmm(i) -= hi; tmm(j) -= hj;
        H(i, j) = (fam.log_density(x, tpp) - fam.log_density(x, tpm) - fam.log_density(x, tmp) +
                   fam.log_density(x, tmm)) /
                  (4.0 * hi * hj);
        H(j, i) = H(i, j);
      }
    }
  }
  return H;
}

}  // namespace

double expectation(const ParametricFamily& fam, const Vec& theta,
                   const std::function<double(double)>& f) {
  WeightedNodes nodes = weighted_nodes(fam, theta);
  std::vector<double> terms(nodes.x.size());
  for (size_t i = 0; i < nodes.x.size(); ++i) terms[i] = nodes.wp[i] * f(nodes.x[i]);
  return pairwise_sum(terms);
}

Vec score(const ParametricFamily& fam, double x, const Vec& theta) {
  if (fam.log_density_grad) return fam.log_density_grad(x, theta);
  return score_fd(fam, x, theta);
}

FisherMatrix fisher_matrix(const ParametricFamily& fam, const Vec& theta) {
  check_interior(fam, theta);
  check_normalization(fam, theta);
  const int n = fam.theta_dim;
  WeightedNodes nodes = weighted_nodes(fam, theta);
  std::vector<Vec> scores;
  scores.reserve(nodes.x.size());
  for (double x : nodes.x) scores.push_back(score(fam, x, theta));
  Mat M(n, n);
  std::vector<double> terms(nodes.x.size());
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      for (size_t a = 0; a < nodes.x.size(); ++a)
        terms[a] = nodes.wp[a] * scores[a](i) * scores[a](j);
      M(i, j) = pairwise_sum(terms);
      M(j, i) = M(i, j);
    }
  Eigen::SelfAdjointEigenSolver<Mat> es(M);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw std::domain_error("fisher matrix failed the PSD invariant");
  return {theta, M};
}

double score_mean_check(const ParametricFamily& fam, const Vec& theta) {
  check_interior(fam, theta);
  double r = 0.0;
  for (int i = 0; i < fam.theta_dim; ++i) {
    double m = expectation(fam, theta, [&](double x) { return score(fam, x, theta)(i); });
    r = std::max(r, std::abs(m));
  }
  return r;
}

double fisher_second_derivative_check(const ParametricFamily& fam, const Vec& theta) {
  Mat mu = fisher_matrix(fam, theta).matrix;
  const int n = fam.theta_dim;
  WeightedNodes nodes = weighted_nodes(fam, theta);
  double r = 0.0;
  Mat e2 = Mat::Zero(n, n);
  std::vector<Mat> hess;
  hess.reserve(nodes.x.size());
  for (double x : nodes.x) hess.push_back(logp_hessian(fam, x, theta));
  std::vector<double> terms(nodes.x.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      for (size_t a = 0; a < nodes.x.size(); ++a) terms[a] = nodes.wp[a] * hess[a](i, j);
      e2(i, j) = pairwise_sum(terms);
      r = std::max(r, std::abs(mu(i, j) + e2(i, j)));
    }
  return r;
}

TriTensor amari_chentsov(const ParametricFamily& fam, const Vec& theta) {
  check_interior(fam, theta);
  check_normalization(fam, theta);
  const int n = fam.theta_dim;
  WeightedNodes nodes = weighted_nodes(fam, theta);
  std::vector<Vec> scores;
  scores.reserve(nodes.x.size());
  for (double x : nodes.x) scores.push_back(score(fam, x, theta));
  TriTensor S(n);
  std::vector<double> terms(nodes.x.size());
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) {
        for (size_t a = 0; a < nodes.x.size(); ++a)
          terms[a] = nodes.wp[a] * scores[a](i) * scores[a](j) * scores[a](k);
        double v = pairwise_sum(terms);
        S.at(i, j, k) = S.at(i, k, j) = S.at(j, i, k) = S.at(j, k, i) = S.at(k, i, j) =
            S.at(k, j, i) = v;
      }
  return S;
}

TriTensor fisher_metric_derivative(const ParametricFamily& fam, const Vec& theta) {
  const int n = fam.theta_dim;
  TriTensor D(n);
  for (int k = 0; k < n; ++k) {
    double h = 1e-5 * std::max(std::abs(theta(k)), 1.0);
    Vec tp = theta, tm = theta;
    tp(k) += h;
    tm(k) -= h;
    Mat diff = (fisher_matrix(fam, tp).matrix - fisher_matrix(fam, tm).matrix) / (2.0 * h);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) D.at(k, i, j) = diff(i, j);
  }
  return D;
}

AlphaChristoffels levi_civita_christoffels(const ParametricFamily& fam, const Vec& theta) {
  return statistical_alpha_connection(fam, theta, 0.0);
}

AlphaChristoffels statistical_alpha_connection(const ParametricFamily& fam, const Vec& theta,
                                               double alpha) {
  const int n = fam.theta_dim;
  TriTensor D = fisher_metric_derivative(fam, theta);
  TriTensor S = amari_chentsov(fam, theta);
  AlphaChristoffels out{TriTensor(n), std::nullopt};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double lc = 0.5 * (D.at(i, j, k) + D.at(j, i, k) - D.at(k, i, j));
        out.lowered.at(i, j, k) = lc - 0.5 * alpha * S.at(i, j, k);
      }
  Mat mu = fisher_matrix(fam, theta).matrix;
  Eigen::JacobiSVD<Mat> svd(mu, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  if (smax > 0 && svd.singularValues().minCoeff() > 1e-10 * smax) {
    TriTensor raised(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Vec low(n);
        for (int k = 0; k < n; ++k) low(k) = out.lowered.at(i, j, k);
        Vec up = svd.solve(low);
        for (int k = 0; k < n; ++k) raised.at(i, j, k) = up(k);
      }
    out.raised = raised;
  }
  return out;
}

double metric_derivative_decomposition_check(const ParametricFamily& fam, const Vec& theta) {
  const int n = fam.theta_dim;
  TriTensor D = fisher_metric_derivative(fam, theta);
  TriTensor S = amari_chentsov(fam, theta);
  WeightedNodes nodes = weighted_nodes(fam, theta);
  std::vector<Vec> scores;
  std::vector<Mat> hess;
  for (double x : nodes.x) {
    scores.push_back(score(fam, x, theta));
    hess.push_back(logp_hessian(fam, x, theta));
  }
  std::vector<double> terms(nodes.x.size());
  double r = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        for (size_t a = 0; a < nodes.x.size(); ++a)
          terms[a] = nodes.wp[a] * (hess[a](k, i) * scores[a](j) + scores[a](i) * hess[a](k, j));
        double rhs = pairwise_sum(terms) + S.at(k, i, j);
        r = std::max(r, std::abs(D.at(k, i, j) - rhs));
      }
  return r;
}

ParametricFamily bernoulli_family() {
  ParametricFamily fam;
  fam.name = "bernoulli";
  fam.theta_dim = 1;
  Vec atoms(2);
  atoms << 0.0, 1.0;
  fam.space = DiscreteSpace{atoms};
  fam.log_density = [](double x, const Vec& t) {
    return x * std::log(t(0)) + (1.0 - x) * std::log1p(-t(0));
  };
  fam.log_density_grad = [](double x, const Vec& t) {
    Vec g(1);
    g(0) = x / t(0) - (1.0 - x) / (1.0 - t(0));
    return g;
  };
  fam.log_density_hess = [](double x, const Vec& t) {
    Mat h(1, 1);
    h(0, 0) = -x / (t(0) * t(0)) - (1.0 - x) / ((1.0 - t(0)) * (1.0 - t(0)));
    return h;
  };
  fam.theta_lo = Vec::Constant(1, 0.0);
  fam.theta_hi = Vec::Constant(1, 1.0);
  return fam;
}

ParametricFamily gaussian1d_family() {
  ParametricFamily fam;
  fam.name = "gaussian1d";
  fam.theta_dim = 2;
  fam.space = RealLineSpace{[](const Vec& t) { return std::make_pair(t(0), t(1)); }, 64};
  fam.log_density = [](double x, const Vec& t) {
    double z = (x - t(0)) / t(1);
    return -0.5 * z * z - std::log(t(1)) - 0.5 * std::log(2.0 * M_PI);
  };
  fam.log_density_grad = [](double x, const Vec& t) {
    Vec g(2);
    double d = x - t(0), s = t(1);
    g(0) = d / (s * s);
    g(1) = d * d / (s * s * s) - 1.0 / s;
    return g;
  };
  fam.log_density_hess = [](double x, const Vec& t) {
    Mat h(2, 2);
    double d = x - t(0), s = t(1);
    h(0, 0) = -1.0 / (s * s);
    h(0, 1) = h(1, 0) = -2.0 * d / (s * s * s);
    h(1, 1) = -3.0 * d * d / (s * s * s * s) + 1.0 / (s * s);
    return h;
  };
  fam.theta_lo = Vec(2);
  fam.theta_hi = Vec(2);
  fam.theta_lo << -1e300, 0.0;
  fam.theta_hi << 1e300, 1e300;
  return fam;
}

ParametricFamily categorical_family(int k) {
  if (k < 2) throw std::invalid_argument("categorical: need at least 2 atoms");
  ParametricFamily fam;
  fam.name = "categorical" + std::to_string(k);
  fam.theta_dim = k - 1;
  Vec atoms(k);
  for (int i = 0; i < k; ++i) atoms(i) = i;
  fam.space = DiscreteSpace{atoms};
  fam.log_density = [k](double x, const Vec& t) {
    int i = static_cast<int>(std::lround(x));
    if (i < k - 1) return std::log(t(i));
    return std::log(1.0 - t.sum());
  };
  fam.log_density_grad = [k](double x, const Vec& t) {
    int i = static_cast<int>(std::lround(x));
    Vec g = Vec::Zero(k - 1);
    if (i < k - 1)
      g(i) = 1.0 / t(i);
    else
      g.setConstant(-1.0 / (1.0 - t.sum()));
    return g;
  };
  fam.log_density_hess = [k](double x, const Vec& t) {
    int i = static_cast<int>(std::lround(x));
    Mat h = Mat::Zero(k - 1, k - 1);
    if (i < k - 1)
      h(i, i) = -1.0 / (t(i) * t(i));
    else
      h.setConstant(-1.0 / ((1.0 - t.sum()) * (1.0 - t.sum())));
    return h;
  };
  fam.theta_lo = Vec::Constant(k - 1, 0.0);
  fam.theta_hi = Vec::Constant(k - 1, 1.0);
  return fam;
}

}  // namespace cartangeo
