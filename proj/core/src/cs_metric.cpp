#include "cartangeo/cs_metric.hpp"

#include <cmath>
#include <stdexcept>

namespace cartangeo {

namespace {

constexpr double kRankTol = 1e-10;

int sym_index(int p, int q, int dim) {
  // p <= q; row-major over the upper triangle
  return p * dim - p * (p - 1) / 2 + (q - p);
}

Mat unpack_sym(const Vec& v, int dim) {
  Mat B(dim, dim);
  for (int p = 0; p < dim; ++p)
    for (int q = p; q < dim; ++q) {
      B(p, q) = v(sym_index(p, q, dim));
      B(q, p) = B(p, q);
    }
  return B;
}

void check_two_step(const LieAlgebraSpec& alg) {
  if (!alg.is_two_step_or_less())
    throw std::invalid_argument("operation requires a 2-step nilpotent algebra");
}

void check_metric_dim(const LieAlgebraSpec& alg, const Mat& g) {
  if (g.rows() != alg.dim() || g.cols() != alg.dim())
    throw std::invalid_argument("metric dimension must equal algebra dim");
}

}  // namespace

Signature signature(const Mat& g) {
  if (g.rows() != g.cols()) throw std::invalid_argument("signature: matrix must be square");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (g + g.transpose()));
  double scale = std::max(1e-300, g.cwiseAbs().maxCoeff());
  Signature s;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    double lam = es.eigenvalues()(i);
    if (std::abs(lam) < kRankTol * scale)
      throw std::domain_error("signature: degenerate form (eigenvalue below cutoff)");
    (lam > 0 ? s.p_plus : s.p_minus)++;
  }
  return s;
}

MetricAtUnit::MetricAtUnit(Mat m) : matrix_(std::move(m)) {
  if (matrix_.rows() != matrix_.cols())
    throw std::invalid_argument("metric matrix must be square");
  double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
  if ((matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff() > 1e-14 * scale)
    throw std::invalid_argument("metric matrix must be symmetric");
  matrix_ = 0.5 * (matrix_ + matrix_.transpose());
  double det = matrix_.determinant();
  if (std::abs(det) <= 1e-10 * std::pow(matrix_.cwiseAbs().maxCoeff(), matrix_.rows()))
    throw std::invalid_argument("metric matrix is degenerate");
  sig_ = signature(matrix_);
}

CSMetricSpace solve_cs_space(const LieAlgebraSpec& alg) {
  const int d = alg.dim();
  const int nunk = d * (d + 1) / 2;
  const Mat& derived = alg.derived_ideal();

  Mat rows(std::max<int>(1, static_cast<int>(derived.cols()) * nunk), nunk);
  rows.setZero();
  int r = 0;
  for (int u = 0; u < derived.cols(); ++u) {
    Mat adu = alg.ad(derived.col(u));
    for (int a = 0; a < d; ++a)
      for (int b = a; b < d; ++b) {
        // B(ad_u e_a, e_b) + B(e_a, ad_u e_b) = 0
        for (int k = 0; k < d; ++k) {
          if (adu(k, a) != 0.0) rows(r, sym_index(std::min(k, b), std::max(k, b), d)) += adu(k, a);
          if (adu(k, b) != 0.0) rows(r, sym_index(std::min(a, k), std::max(a, k), d)) += adu(k, b);
        }
        ++r;
      }
  }
  Mat null = nullspace(rows.topRows(std::max(r, 1)));

  CSMetricSpace out;
  out.dimension = static_cast<int>(null.cols());
  for (int c = 0; c < null.cols(); ++c) {
    Mat B = unpack_sym(null.col(c), d);
    out.basis.push_back(B);
    double scale = std::max(1e-300, B.cwiseAbs().maxCoeff());
    bool nondeg = std::abs(B.determinant()) > kRankTol * std::pow(scale, d);
    out.basis_nondegenerate.push_back(nondeg);
    if (nondeg)
      out.basis_signature.push_back(signature(B));
    else
      out.basis_signature.push_back(std::nullopt);
  }
  return out;
}

double check_cs_condition(const LieAlgebraSpec& alg, const Mat& g) {
  check_metric_dim(alg, g);
  const int d = alg.dim();
  Mat basis = Mat::Identity(d, d);
  double res = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Vec u = alg.bracket(basis.col(i), basis.col(j));
      if (u.cwiseAbs().maxCoeff() == 0.0) continue;
      Mat adu = alg.ad(u);
      Mat viol = adu.transpose() * g + g * adu;  // (y,z) |-> g([u,y],z) + g(y,[u,z])
      res = std::max(res, viol.cwiseAbs().maxCoeff());
    }
  return res;
}

double metric_field_2nil(const LieAlgebraSpec& alg, const Mat& g, const GroupPoint& sigma,
                         const Vec& x, const Vec& y) {
  check_two_step(alg);
  check_metric_dim(alg, g);
  Vec u = log_chart(alg, sigma);
  Vec ux = alg.bracket(u, x);
  Vec uy = alg.bracket(u, y);
  return x.dot(g * y) + 0.5 * ux.dot(g * y) + 0.5 * x.dot(g * uy) + 0.25 * ux.dot(g * uy);
}

double metric_field_series(const LieAlgebraSpec& alg, const Mat& g, const GroupPoint& sigma,
                           const Vec& x, const Vec& y, int order) {
  if (order < 0) throw std::invalid_argument("series order must be nonnegative");
  check_metric_dim(alg, g);
  Vec u = log_chart(alg, sigma);
  std::vector<Vec> adx{x}, ady{y};
  for (int p = 1; p <= order; ++p) {
    adx.push_back(alg.bracket(u, adx.back()));
    ady.push_back(alg.bracket(u, ady.back()));
  }
  auto inv_fact = [](int p) {
    double f = 1.0;
    for (int i = 2; i <= p; ++i) f *= i;
    return 1.0 / f;
  };
  double sum = 0.0;
  for (int p = 0; p <= order; ++p)
    for (int q = 0; q <= order; ++q)
      sum += inv_fact(p) * inv_fact(q) * std::pow(0.5, p + q) * adx[p].dot(g * ady[q]);
  return sum;
}

double metric_field_series_tail(const LieAlgebraSpec& alg, const Mat& g, const GroupPoint& sigma,
                                const Vec& x, const Vec& y, int order) {
  if (order < 0) throw std::invalid_argument("series order must be nonnegative");
  check_metric_dim(alg, g);
  Vec u = log_chart(alg, sigma);
  std::vector<Vec> adx{x}, ady{y};
  for (int p = 1; p <= order; ++p) {
    adx.push_back(alg.bracket(u, adx.back()));
    ady.push_back(alg.bracket(u, ady.back()));
  }
  auto inv_fact = [](int p) {
    double f = 1.0;
    for (int i = 2; i <= p; ++i) f *= i;
    return 1.0 / f;
  };
  double tail = 0.0;
  for (int p = 0; p <= order; ++p) {
    int q = order - p;
    tail += std::abs(inv_fact(p) * inv_fact(q) * std::pow(0.5, p + q) * adx[p].dot(g * ady[q]));
  }
  return tail;
}

Mat metric_field_matrix(const LieAlgebraSpec& alg, const Mat& g, const GroupPoint& sigma) {
  check_two_step(alg);
  check_metric_dim(alg, g);
  Vec u = log_chart(alg, sigma);
  Mat E = Mat::Identity(alg.dim(), alg.dim()) + 0.5 * alg.ad(u);
  return E.transpose() * g * E;
}

double metric_field_directional_derivative(const LieAlgebraSpec& alg, const Mat& g,
                                           const GroupPoint& sigma, const Vec& x, const Vec& y,
                                           const Vec& z) {
  check_two_step(alg);
  check_metric_dim(alg, g);
  Vec u = log_chart(alg, sigma);
  Mat E = Mat::Identity(alg.dim(), alg.dim()) + 0.5 * alg.ad(u);
  Vec udot = x + 0.5 * alg.bracket(u, x);  // d/dt log(sigma exp(tx)) at t = 0
  Vec dy = 0.5 * alg.bracket(udot, y);
  Vec dz = 0.5 * alg.bracket(udot, z);
  return dy.dot(g * (E * z)) + (E * y).dot(g * dz);
}

Mat coordinate_metric(const LieAlgebraSpec& alg, const Mat& g, const GroupPoint& sigma) {
  check_two_step(alg);
  Vec u = log_chart(alg, sigma);
  Mat F = Mat::Identity(alg.dim(), alg.dim()) - 0.5 * alg.ad(u);  // (I + ad_u/2)^{-1}, class 2
  return F.transpose() * metric_field_matrix(alg, g, sigma) * F;
}

Mat heisenberg_metric_coeffs(int n, const Mat& k, const Vec& point) {
  const int d = 2 * n + 1;
  if (k.rows() != d || k.cols() != d)
    throw std::invalid_argument("heisenberg_metric_coeffs: k must be (2n+1) x (2n+1)");
  if (point.size() != d)
    throw std::invalid_argument("heisenberg_metric_coeffs: point must have length 2n+1");
  const auto x = point.head(n);
  const auto y = point.segment(n, n);
  const double kzz = k(2 * n, 2 * n);
  Mat G(d, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      G(i, j) = k(i, j) - 0.5 * y(i) * k(2 * n, j) - 0.5 * y(j) * k(i, 2 * n) +
                0.25 * y(i) * y(j) * kzz;
      G(i, n + j) = k(i, n + j) - 0.5 * y(i) * k(n + j, 2 * n) - 0.5 * x(j) * k(i, 2 * n) +
                    0.25 * y(i) * x(j) * kzz;
      G(n + j, i) = G(i, n + j);
      G(n + i, n + j) = k(n + i, n + j) - 0.5 * x(i) * k(n + j, 2 * n) -
                        0.5 * x(j) * k(n + i, 2 * n) + 0.25 * x(i) * x(j) * kzz;
    }
    G(i, 2 * n) = k(i, 2 * n) - 0.5 * y(i) * kzz;
    G(2 * n, i) = G(i, 2 * n);
    G(n + i, 2 * n) = k(n + i, 2 * n) - 0.5 * x(i) * kzz;
    G(2 * n, n + i) = G(n + i, 2 * n);
  }
  G(2 * n, 2 * n) = kzz;
  return G;
}

Mat htype_metric_coeffs(const HTypeSpec& spec, const Mat& d, const Vec& point) {
  spec.validate();
  const int n = spec.n, m = spec.m, dim = n + m;
  if (d.rows() != dim || d.cols() != dim)
    throw std::invalid_argument("htype_metric_coeffs: d must be (n+m) x (n+m)");
  if (point.size() != dim)
    throw std::invalid_argument("htype_metric_coeffs: point must have length n+m");
  const auto x = point.head(n);

  // C(j,l,q) on e_{n+q} with C = -gamma[q](j,l)
  auto C = [&](int j, int l, int q) { return -spec.gamma[q](j, l); };

  // Frame coefficient polynomials, left-invariant frame (X_i^+, Z_a^+).
  Mat M(dim, dim);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double quad = 0.0;
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
          for (int p = 0; p < n; ++p)
            for (int l = 0; l < n; ++l)
              quad += C(p, i, a) * C(l, j, b) * d(n + a, n + b) * x(p) * x(l);
      double lin = 0.0;
      for (int a = 0; a < m; ++a)
        for (int l = 0; l < n; ++l)
          lin += 0.5 * (C(l, i, a) * d(j, n + a) + C(l, j, a) * d(i, n + a)) * x(l);
      M(i, j) = 0.25 * quad + lin + d(i, j);
      M(j, i) = M(i, j);
    }
    for (int a = 0; a < m; ++a) {
      double lin = 0.0;
      for (int b = 0; b < m; ++b)
        for (int p = 0; p < n; ++p) lin += C(p, i, b) * d(n + a, n + b) * x(p);
      M(i, n + a) = 0.5 * lin + d(i, n + a);
      M(n + a, i) = M(i, n + a);
    }
  }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) M(n + a, n + b) = d(n + a, n + b);

  // Coordinate fields: d/dx_j = X_j^+ - sum_a W(a,j) Z_a^+, W(a,j) = 1/2 sum_l gamma[a](j,l) x_l.
  Mat Q = Mat::Identity(dim, dim);
  for (int a = 0; a < m; ++a)
    for (int j = 0; j < n; ++j) {
      double w = 0.0;
      for (int l = 0; l < n; ++l) w += 0.5 * spec.gamma[a](j, l) * x(l);
      Q(n + a, j) = -w;
    }
  return Q.transpose() * M * Q;
}

bool riemannian_cs_exists(const LieAlgebraSpec& alg) {
  if (!alg.is_solvable())
    throw std::invalid_argument("riemannian_cs_exists: spec must be solvable");
  return alg.is_two_step_or_less();
}

double check_ad_invariance(const LieAlgebraSpec& alg, const Mat& g) {
  check_metric_dim(alg, g);
  const int d = alg.dim();
  Mat basis = Mat::Identity(d, d);
  double res = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Vec bij = alg.bracket(basis.col(i), basis.col(j));
      for (int k = 0; k < d; ++k) {
        double lhs = bij.dot(g * basis.col(k));
        double rhs = basis.col(i).dot(g * alg.bracket(basis.col(j), basis.col(k)));
        res = std::max(res, std::abs(lhs - rhs));
      }
    }
  return res;
}

double check_quadratic_structure_constants(const LieAlgebraSpec& alg) {
  if (alg.dim() % 2 != 0)
    throw std::invalid_argument("quadratic check: dimension must be even");
  const int n = alg.dim() / 2;
  double res = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double cij = alg.c(i, j, n + k);
        double cjk = alg.c(j, k, n + i);
        double cik = alg.c(i, k, n + j);
        res = std::max(res, std::abs(cij - cjk));
        res = std::max(res, std::abs(cij + cik));
      }
  return res;
}

Mat hyperbolic_basis(const Mat& g, const Mat& lagrangian) {
  const int dim = static_cast<int>(g.rows());
  if (dim % 2 != 0) throw std::invalid_argument("hyperbolic_basis: dimension must be even");
  const int n = dim / 2;
  if (lagrangian.rows() != dim || lagrangian.cols() != n)
    throw std::invalid_argument("hyperbolic_basis: subspace must be half-dimensional");
  double gscale = std::max(1e-300, g.cwiseAbs().maxCoeff());
  if (std::abs(g.determinant()) <= kRankTol * std::pow(gscale, dim))
    throw std::invalid_argument("hyperbolic_basis: form is degenerate");
  {
    Mat iso = lagrangian.transpose() * g * lagrangian;
    double ls = std::max(1.0, lagrangian.cwiseAbs().maxCoeff());
    if (iso.cwiseAbs().maxCoeff() > 1e-12 * gscale * ls * ls)
      throw std::invalid_argument("hyperbolic_basis: subspace is not totally isotropic");
  }

  // Peel one hyperbolic plane per step: span W = current nondegenerate space,
  // L = current Lagrangian inside it.
  Mat W = Mat::Identity(dim, dim);
  Mat L = lagrangian;
  std::vector<Vec> vpart, lpart;
  for (int step = 0; step < n; ++step) {
    // v in span W, outside L, with f_v = g(v, .)|_L nonzero: take the column of W
    // maximizing |g(w, L)|.
    int best = -1;
    double bestnorm = -1.0;
    for (int c = 0; c < W.cols(); ++c) {
      double nn = (L.transpose() * g * W.col(c)).cwiseAbs().maxCoeff();
      if (nn > bestnorm) {
        bestnorm = nn;
        best = c;
      }
    }
    if (bestnorm <= 0.0)
      throw std::invalid_argument("hyperbolic_basis: form degenerate on the subspace pairing");
    Vec v = W.col(best);
    // tilde v in L with g(v, tilde v) != 0: pick the L column with largest pairing.
    Vec pair = L.transpose() * g * v;
    int lbest = 0;
    pair.cwiseAbs().maxCoeff(&lbest);
    Vec lv = L.col(lbest);
    double gvl = v.dot(g * lv);
    Vec e_v = (v - (v.dot(g * v) / (2.0 * gvl)) * lv) / gvl;  // dual partner, isotropic
    vpart.push_back(e_v);
    lpart.push_back(lv);

    // Remaining Lagrangian: kernel of f_v inside L.
    Mat fv = (L.transpose() * g * v).transpose();  // 1 x cols(L)
    Mat Lker = L * nullspace(fv);
    // Remaining space: g-orthogonal complement of span(e_v, lv) inside span W.
    Mat pairmat(dim, 2);
    pairmat.col(0) = e_v;
    pairmat.col(1) = lv;
    Mat constraints = pairmat.transpose() * g * W;  // 2 x cols(W)
    Mat Wnext = W * nullspace(constraints);
    W = Wnext;
    L = Lker;
  }

  Mat out(dim, dim);
  for (int i = 0; i < n; ++i) {
    out.col(i) = vpart[i];
    out.col(n + i) = lpart[i];
  }
  return out;
}

MetricField::MetricField(LieAlgebraSpec alg, MetricAtUnit unit, FieldStrategy strategy, int order,
                         std::optional<HTypeSpec> htype)
    : alg_(std::move(alg)), unit_(std::move(unit)), strategy_(strategy), order_(order),
      htype_(std::move(htype)) {
  if (unit_.dim() != alg_.dim())
    throw std::invalid_argument("MetricField: unit metric dim must equal algebra dim");
  if (strategy_ == FieldStrategy::ClosedForm2Nil && !alg_.is_two_step_or_less())
    throw std::invalid_argument("MetricField: closed form requires class <= 2");
  if (strategy_ == FieldStrategy::HeisenbergTable && !alg_.heisenberg_n())
    throw std::invalid_argument("MetricField: Heisenberg table requires a Heisenberg algebra");
  if (strategy_ == FieldStrategy::HTypeTable && !htype_)
    throw std::invalid_argument("MetricField: H-type table requires an HTypeSpec");
  if (strategy_ == FieldStrategy::TruncatedSeries && order_ < 0)
    throw std::invalid_argument("MetricField: series order must be nonnegative");
}

Mat MetricField::coefficient_matrix(const GroupPoint& sigma) const {
  switch (strategy_) {
    case FieldStrategy::ClosedForm2Nil:
      return metric_field_matrix(alg_, unit_.matrix(), sigma);
    case FieldStrategy::TruncatedSeries: {
      const int d = alg_.dim();
      Mat basis = Mat::Identity(d, d);
      Mat M(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          M(i, j) = metric_field_series(alg_, unit_.matrix(), sigma, basis.col(i), basis.col(j),
                                        order_);
      return M;
    }
    case FieldStrategy::HeisenbergTable: {
      GroupPoint p = convert_chart(alg_, sigma, Chart::HeisenbergMatrix);
      return heisenberg_metric_coeffs(*alg_.heisenberg_n(), unit_.matrix(), p.coords);
    }
    case FieldStrategy::HTypeTable: {
      GroupPoint p = convert_chart(alg_, sigma, Chart::Exponential);
      return htype_metric_coeffs(*htype_, unit_.matrix(), p.coords);
    }
  }
  throw std::logic_error("unreachable");
}

double MetricField::evaluate(const GroupPoint& sigma, const Vec& x, const Vec& y) const {
  return x.dot(coefficient_matrix(sigma) * y);
}

}  // namespace cartangeo
