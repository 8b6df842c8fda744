#pragma once

#include <utility>
#include <vector>

#include "cartangeo/cs_metric.hpp"
#include "cartangeo/lie_algebra.hpp"
#include "cartangeo/lie_group.hpp"

namespace cartangeo {

/// Dense covariant 3-tensor over the algebra basis. Total symmetry is an
/// invariant of the Amari-Chentsov use sites; symmetry_residual() measures it
/// and checked() enforces it.
class TriTensor {
 public:
  explicit TriTensor(int dim) : dim_(dim), v_(static_cast<size_t>(dim) * dim * dim, 0.0) {}

  int dim() const { return dim_; }
  double at(int i, int j, int k) const {
    return v_[(static_cast<size_t>(i) * dim_ + j) * dim_ + k];
  }
  double& at(int i, int j, int k) { return v_[(static_cast<size_t>(i) * dim_ + j) * dim_ + k]; }

  double symmetry_residual() const;
  double max_abs() const;

  /// Throws unless totally symmetric within 1e-14 (relative).
  static TriTensor checked(TriTensor t);

  /// Average over the 6 index permutations.
  static TriTensor symmetrized(const TriTensor& t);

  TriTensor& operator+=(const TriTensor& o);
  TriTensor operator-(const TriTensor& o) const;
  TriTensor operator*(double s) const;

 private:
  int dim_;
  std::vector<double> v_;
};

/// Bilinear map G x G -> G in the algebra basis; doubles as connection
/// coefficients Gamma[i][j][k] of nabla_{e_i} e_j on e_k (left-invariant frame).
class BilinearMap {
 public:
  explicit BilinearMap(int dim) : dim_(dim), v_(static_cast<size_t>(dim) * dim * dim, 0.0) {}

  int dim() const { return dim_; }
  double at(int i, int j, int k) const {
    return v_[(static_cast<size_t>(i) * dim_ + j) * dim_ + k];
  }
  double& at(int i, int j, int k) { return v_[(static_cast<size_t>(i) * dim_ + j) * dim_ + k]; }

  /// Value on basis pair as a vector.
  Vec on_basis(int i, int j) const;

  /// Bilinear extension to arbitrary vectors.
  Vec apply(const Vec& x, const Vec& y) const;

  double max_abs() const;

 private:
  int dim_;
  std::vector<double> v_;
};

using ConnectionCoeffs = BilinearMap;

/// Curvature R[i][j][k][l]: component on e_l of R(e_i, e_j) e_k.
class CurvatureTensor {
 public:
  explicit CurvatureTensor(int dim) : dim_(dim), v_(static_cast<size_t>(dim) * dim * dim * dim, 0.0) {}
  int dim() const { return dim_; }
  double at(int i, int j, int k, int l) const {
    return v_[((static_cast<size_t>(i) * dim_ + j) * dim_ + k) * dim_ + l];
  }
  double& at(int i, int j, int k, int l) {
    return v_[((static_cast<size_t>(i) * dim_ + j) * dim_ + k) * dim_ + l];
  }
  Vec on_basis(int i, int j, int k) const;
  double max_abs() const;

 private:
  int dim_;
  std::vector<double> v_;
};

/// nabla_x y = 1/2 [x, y]; the unique torsion-free biinvariant one.
ConnectionCoeffs canonical_connection(const LieAlgebraSpec& alg);

ConnectionCoeffs zero_connection(const LieAlgebraSpec& alg);

/// Max |Gamma[i][j] - Gamma[j][i] - C[i][j]| over basis pairs.
double torsion_residual(const LieAlgebraSpec& alg, const ConnectionCoeffs& conn);

/// R(x,y)z = nabla_x nabla_y z - nabla_y nabla_x z - nabla_{[x,y]} z in the
/// left-invariant frame (constant coefficients).
CurvatureTensor curvature(const ConnectionCoeffs& conn, const LieAlgebraSpec& alg);

/// Solves g(A(x,y),z) = S(x,y,z) for A and returns (nabla - a/2 A, nabla + a/2 A).
std::pair<ConnectionCoeffs, ConnectionCoeffs> alpha_connections(const LieAlgebraSpec& alg,
                                                                const MetricAtUnit& g,
                                                                const TriTensor& S, double alpha);

/// Duality residual max over samples and basis triples of
/// |x+.mu(y+,z+) - mu(nabla^1_x y, z+) - mu(y+, nabla^2_x z)| at sigma.
///
/// A connection's deviation from the canonical 1/2[,] is treated as the
/// unit-level lowering of a left-invariant 3-tensor and re-raised against
/// mu_sigma at each sample, so left-invariant Amari-Chentsov data induces the
/// (non-invariant) connection field it defines; at the unit this coincides
/// with reading the coefficients as constants. Class <= 2 required.
double check_duality(const LieAlgebraSpec& alg, const MetricAtUnit& g, const ConnectionCoeffs& c1,
                     const ConnectionCoeffs& c2, const std::vector<GroupPoint>& samples);

/// nabla mu at one sample: T(x,y,z) = x+.mu(y+,z+) - mu(conn_x y, z) - mu(y, conn_x z),
/// with the same field semantics as check_duality.
TriTensor covariant_derivative_of_metric(const LieAlgebraSpec& alg, const MetricAtUnit& g,
                                         const ConnectionCoeffs& conn, const GroupPoint& sigma);

/// k(x,y) = sum_j B_j(x,y) X_j, returns nabla - 1/2 k. Each X_j must be central
/// and each B_j symmetric with B_j([x,y],z) + B_j(y,[x,z]) = 0 (checked, 1e-12).
ConnectionCoeffs biinvariant_connection(const LieAlgebraSpec& alg, const std::vector<Mat>& B_list,
                                        const std::vector<Vec>& X_list);

/// Max over basis triples of |[z, k(x,y)] - k([z,x], y) - k(x, [z,y])|.
double cocycle_check(const LieAlgebraSpec& alg, const BilinearMap& k);

/// Biinvariance residual of a connection: max |[z, conn(x,y)] - conn([z,x],y) - conn(x,[z,y])|.
double biinvariance_residual(const LieAlgebraSpec& alg, const ConnectionCoeffs& conn);

/// Codazzi symmetry residual: max |g(t(x,y),z) + g(y,t(x,z)) - g(t(y,x),z) - g(x,t(y,z))|.
double hessian_check(const LieAlgebraSpec& alg, const Mat& g, const BilinearMap& t);

/// Curvature at the unit of the alpha-connection *field* induced by (g, S):
/// the constant-frame formula plus the derivative correction
/// (alpha/4)(s_x A(y,z) - s_y A(x,z)), s_x = ad_x + ad_x^{*g}, coming from
/// A_sigma being re-raised against mu_sigma. Class <= 2 required.
CurvatureTensor alpha_pair_curvature_at_unit(const LieAlgebraSpec& alg, const MetricAtUnit& g,
                                             const TriTensor& S, double alpha);

/// Coboundary k_psi(x,y) = [x, psi(y)] - psi([x,y]) of a linear map.
BilinearMap coboundary(const LieAlgebraSpec& alg, const Mat& psi);

}  // namespace cartangeo
