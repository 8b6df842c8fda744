#include "cartangeo/connection.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace cartangeo {

namespace {

void check_dims(const LieAlgebraSpec& alg, int dim, const char* what) {
  if (dim != alg.dim()) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

// Deviation of a connection from the canonical one, as a bilinear map.
BilinearMap deviation(const LieAlgebraSpec& alg, const ConnectionCoeffs& conn) {
  const int d = alg.dim();
  BilinearMap P(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) P.at(i, j, k) = conn.at(i, j, k) - 0.5 * alg.c(i, j, k);
  return P;
}

// Deviation re-raised against the metric field at sigma: solves
// M_sigma P_sigma(e_i,e_j) = gbar P(e_i,e_j) entrywise.
BilinearMap deviation_at(const LieAlgebraSpec& alg, const Mat& gbar, const Mat& M_sigma,
                         const BilinearMap& P) {
  const int d = alg.dim();
  BilinearMap out(d);
  Eigen::PartialPivLU<Mat> lu(M_sigma);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Vec lowered = gbar * P.on_basis(i, j);
      Vec raised = lu.solve(lowered);
      for (int k = 0; k < d; ++k) out.at(i, j, k) = raised(k);
    }
  return out;
}

}  // namespace

double TriTensor::symmetry_residual() const {
  double r = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) {
        double v = at(i, j, k);
        r = std::max(r, std::abs(v - at(i, k, j)));
        r = std::max(r, std::abs(v - at(j, i, k)));
        r = std::max(r, std::abs(v - at(j, k, i)));
        r = std::max(r, std::abs(v - at(k, i, j)));
        r = std::max(r, std::abs(v - at(k, j, i)));
      }
  return r;
}

double TriTensor::max_abs() const {
  double r = 0.0;
  for (double v : v_) r = std::max(r, std::abs(v));
  return r;
}

TriTensor TriTensor::checked(TriTensor t) {
  if (t.symmetry_residual() > 1e-14 * std::max(1.0, t.max_abs()))
    throw std::invalid_argument("TriTensor: not totally symmetric");
  return t;
}

TriTensor TriTensor::symmetrized(const TriTensor& t) {
  const int d = t.dim();
  TriTensor out(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        out.at(i, j, k) = (t.at(i, j, k) + t.at(i, k, j) + t.at(j, i, k) + t.at(j, k, i) +
                           t.at(k, i, j) + t.at(k, j, i)) /
                          6.0;
  return out;
}

TriTensor& TriTensor::operator+=(const TriTensor& o) {
  for (size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}

TriTensor TriTensor::operator-(const TriTensor& o) const {
  TriTensor out = *this;
  for (size_t i = 0; i < v_.size(); ++i) out.v_[i] -= o.v_[i];
  return out;
}

TriTensor TriTensor::operator*(double s) const {
  TriTensor out = *this;
  for (auto& v : out.v_) v *= s;
  return out;
}

Vec BilinearMap::on_basis(int i, int j) const {
  Vec out(dim_);
  for (int k = 0; k < dim_; ++k) out(k) = at(i, j, k);
  return out;
}

Vec BilinearMap::apply(const Vec& x, const Vec& y) const {
  Vec out = Vec::Zero(dim_);
  for (int i = 0; i < dim_; ++i) {
    if (x(i) == 0.0) continue;
    for (int j = 0; j < dim_; ++j) {
      if (y(j) == 0.0) continue;
      for (int k = 0; k < dim_; ++k) out(k) += x(i) * y(j) * at(i, j, k);
    }
  }
  return out;
}

double BilinearMap::max_abs() const {
  double r = 0.0;
  for (double v : v_) r = std::max(r, std::abs(v));
  return r;
}

Vec CurvatureTensor::on_basis(int i, int j, int k) const {
  Vec out(dim_);
  for (int l = 0; l < dim_; ++l) out(l) = at(i, j, k, l);
  return out;
}

double CurvatureTensor::max_abs() const {
  double r = 0.0;
  for (double v : v_) r = std::max(r, std::abs(v));
  return r;
}

ConnectionCoeffs canonical_connection(const LieAlgebraSpec& alg) {
  const int d = alg.dim();
  ConnectionCoeffs conn(d);
  for (const auto& t : alg.triples()) {
    conn.at(t.i, t.j, t.k) = 0.5 * t.value;
    conn.at(t.j, t.i, t.k) = -0.5 * t.value;
  }
  return conn;
}

ConnectionCoeffs zero_connection(const LieAlgebraSpec& alg) {
  return ConnectionCoeffs(alg.dim());
}

double torsion_residual(const LieAlgebraSpec& alg, const ConnectionCoeffs& conn) {
  check_dims(alg, conn.dim(), "torsion_residual");
  const int d = alg.dim();
  double r = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        r = std::max(r, std::abs(conn.at(i, j, k) - conn.at(j, i, k) - alg.c(i, j, k)));
  return r;
}

CurvatureTensor curvature(const ConnectionCoeffs& conn, const LieAlgebraSpec& alg) {
  check_dims(alg, conn.dim(), "curvature");
  const int d = alg.dim();
  CurvatureTensor R(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        Vec v = Vec::Zero(d);
        for (int m = 0; m < d; ++m) {
          double gjk = conn.at(j, k, m);
          if (gjk != 0.0) v += gjk * conn.on_basis(i, m);
          double gik = conn.at(i, k, m);
          if (gik != 0.0) v -= gik * conn.on_basis(j, m);
          double cij = alg.c(i, j, m);
          if (cij != 0.0) v -= cij * conn.on_basis(m, k);
        }
        for (int l = 0; l < d; ++l) R.at(i, j, k, l) = v(l);
      }
  return R;
}

std::pair<ConnectionCoeffs, ConnectionCoeffs> alpha_connections(const LieAlgebraSpec& alg,
                                                                const MetricAtUnit& g,
                                                                const TriTensor& S, double alpha) {
  check_dims(alg, g.dim(), "alpha_connections");
  check_dims(alg, S.dim(), "alpha_connections");
  const int d = alg.dim();
  Eigen::PartialPivLU<Mat> lu(g.matrix());
  ConnectionCoeffs plus(d), minus(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Vec s(d);
      for (int k = 0; k < d; ++k) s(k) = S.at(i, j, k);
      Vec a = lu.solve(s);
      for (int k = 0; k < d; ++k) {
        double nab = 0.5 * alg.c(i, j, k);
        plus.at(i, j, k) = nab - 0.5 * alpha * a(k);
        minus.at(i, j, k) = nab + 0.5 * alpha * a(k);
      }
    }
  return {plus, minus};
}

double check_duality(const LieAlgebraSpec& alg, const MetricAtUnit& g, const ConnectionCoeffs& c1,
                     const ConnectionCoeffs& c2, const std::vector<GroupPoint>& samples) {
  const int d = alg.dim();
  check_dims(alg, c1.dim(), "check_duality");
  check_dims(alg, c2.dim(), "check_duality");
  const Mat& gbar = g.matrix();
  BilinearMap P1 = deviation(alg, c1);
  BilinearMap P2 = deviation(alg, c2);
  Mat basis = Mat::Identity(d, d);
  double res = 0.0;
  for (const GroupPoint& sigma : samples) {
    Mat M = metric_field_matrix(alg, gbar, sigma);
    BilinearMap P1s = deviation_at(alg, gbar, M, P1);
    BilinearMap P2s = deviation_at(alg, gbar, M, P2);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          double lhs = metric_field_directional_derivative(alg, gbar, sigma, basis.col(i),
                                                           basis.col(j), basis.col(k));
          Vec n1 = 0.5 * alg.bracket(basis.col(i), basis.col(j)) + P1s.on_basis(i, j);
          Vec n2 = 0.5 * alg.bracket(basis.col(i), basis.col(k)) + P2s.on_basis(i, k);
          double rhs = n1.dot(M * basis.col(k)) + basis.col(j).dot(M * n2);
          res = std::max(res, std::abs(lhs - rhs));
        }
  }
  return res;
}

TriTensor covariant_derivative_of_metric(const LieAlgebraSpec& alg, const MetricAtUnit& g,
                                         const ConnectionCoeffs& conn, const GroupPoint& sigma) {
  const int d = alg.dim();
  check_dims(alg, conn.dim(), "covariant_derivative_of_metric");
  const Mat& gbar = g.matrix();
  Mat M = metric_field_matrix(alg, gbar, sigma);
  BilinearMap Ps = deviation_at(alg, gbar, M, deviation(alg, conn));
  Mat basis = Mat::Identity(d, d);
  TriTensor T(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double lhs = metric_field_directional_derivative(alg, gbar, sigma, basis.col(i),
                                                         basis.col(j), basis.col(k));
        Vec nj = 0.5 * alg.bracket(basis.col(i), basis.col(j)) + Ps.on_basis(i, j);
        Vec nk = 0.5 * alg.bracket(basis.col(i), basis.col(k)) + Ps.on_basis(i, k);
        T.at(i, j, k) = lhs - nj.dot(M * basis.col(k)) - basis.col(j).dot(M * nk);
      }
  return T;
}

ConnectionCoeffs biinvariant_connection(const LieAlgebraSpec& alg, const std::vector<Mat>& B_list,
                                        const std::vector<Vec>& X_list) {
  const int d = alg.dim();
  if (B_list.size() != X_list.size())
    throw std::invalid_argument("biinvariant_connection: B_list and X_list sizes differ");
  Mat basis = Mat::Identity(d, d);
  for (const Vec& X : X_list) {
    if (X.size() != d) throw std::invalid_argument("biinvariant_connection: bad X dimension");
    if (alg.ad(X).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, X.cwiseAbs().maxCoeff()))
      throw std::invalid_argument("biinvariant_connection: X_j is not central");
  }
  for (const Mat& B : B_list) {
    if (B.rows() != d || B.cols() != d)
      throw std::invalid_argument("biinvariant_connection: bad B dimension");
    double scale = std::max(1.0, B.cwiseAbs().maxCoeff());
    if ((B - B.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw std::invalid_argument("biinvariant_connection: B_j is not symmetric");
    double nabla_b = 0.0;
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y) {
        Vec bxy = alg.bracket(basis.col(x), basis.col(y));
        for (int z = 0; z < d; ++z) {
          Vec bxz = alg.bracket(basis.col(x), basis.col(z));
          nabla_b = std::max(nabla_b, std::abs(bxy.dot(B * basis.col(z)) +
                                               basis.col(y).dot(B * bxz)));
        }
      }
    if (nabla_b > 1e-12 * scale)
      throw std::invalid_argument("biinvariant_connection: nabla B_j != 0");
  }
  ConnectionCoeffs conn = canonical_connection(alg);
  for (size_t j = 0; j < B_list.size(); ++j)
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y) {
        double b = B_list[j](x, y);
        if (b == 0.0) continue;
        for (int k = 0; k < d; ++k) conn.at(x, y, k) -= 0.5 * b * X_list[j](k);
      }
  return conn;
}

double cocycle_check(const LieAlgebraSpec& alg, const BilinearMap& k) {
  check_dims(alg, k.dim(), "cocycle_check");
  const int d = alg.dim();
  Mat basis = Mat::Identity(d, d);
  double r = 0.0;
  for (int z = 0; z < d; ++z)
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y) {
        Vec v = alg.bracket(basis.col(z), k.on_basis(x, y)) -
                k.apply(alg.bracket(basis.col(z), basis.col(x)), basis.col(y)) -
                k.apply(basis.col(x), alg.bracket(basis.col(z), basis.col(y)));
        r = std::max(r, v.cwiseAbs().maxCoeff());
      }
  return r;
}

double biinvariance_residual(const LieAlgebraSpec& alg, const ConnectionCoeffs& conn) {
  return cocycle_check(alg, conn);
}

double hessian_check(const LieAlgebraSpec& alg, const Mat& g, const BilinearMap& t) {
  check_dims(alg, t.dim(), "hessian_check");
  const int d = alg.dim();
  Mat basis = Mat::Identity(d, d);
  double r = 0.0;
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z) {
        double lhs = t.on_basis(x, y).dot(g * basis.col(z)) +
                     basis.col(y).dot(g * t.on_basis(x, z));
        double rhs = t.on_basis(y, x).dot(g * basis.col(z)) +
                     basis.col(x).dot(g * t.on_basis(y, z));
        r = std::max(r, std::abs(lhs - rhs));
      }
  return r;
}

CurvatureTensor alpha_pair_curvature_at_unit(const LieAlgebraSpec& alg, const MetricAtUnit& g,
                                             const TriTensor& S, double alpha) {
  if (!alg.is_two_step_or_less())
    throw std::invalid_argument("alpha_pair_curvature_at_unit requires class <= 2");
  const int d = alg.dim();
  auto [plus, minus] = alpha_connections(alg, g, S, alpha);
  (void)minus;
  CurvatureTensor R = curvature(plus, alg);

  // A from the raise at the unit; s_x = ad_x + g^{-1} ad_x^T g.
  Eigen::PartialPivLU<Mat> lu(g.matrix());
  BilinearMap A(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Vec s(d);
      for (int k = 0; k < d; ++k) s(k) = S.at(i, j, k);
      Vec a = lu.solve(s);
      for (int k = 0; k < d; ++k) A.at(i, j, k) = a(k);
    }
  Mat basis = Mat::Identity(d, d);
  std::vector<Mat> s_ops;
  for (int i = 0; i < d; ++i) {
    Mat adx = alg.ad(basis.col(i));
    s_ops.push_back(adx + lu.solve(adx.transpose() * g.matrix()));
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        Vec corr = 0.25 * alpha * (s_ops[i] * A.on_basis(j, k) - s_ops[j] * A.on_basis(i, k));
        for (int l = 0; l < d; ++l) R.at(i, j, k, l) += corr(l);
      }
  return R;
}

BilinearMap coboundary(const LieAlgebraSpec& alg, const Mat& psi) {
  const int d = alg.dim();
  if (psi.rows() != d || psi.cols() != d)
    throw std::invalid_argument("coboundary: psi must be dim x dim");
  Mat basis = Mat::Identity(d, d);
  BilinearMap k(d);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) {
      Vec v = alg.bracket(basis.col(x), psi * basis.col(y)) -
              psi * alg.bracket(basis.col(x), basis.col(y));
      for (int c = 0; c < d; ++c) k.at(x, y, c) = v(c);
    }
  return k;
}

}  // namespace cartangeo
