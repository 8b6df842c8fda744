#pragma once

#include <optional>
#include <vector>

#include "cartangeo/lie_algebra.hpp"
#include "cartangeo/lie_group.hpp"

namespace cartangeo {

struct Signature {
  int p_plus = 0;
  int p_minus = 0;
  bool operator==(const Signature&) const = default;
};

/// Counts of positive/negative eigenvalues. Throws std::domain_error when some
/// |eigenvalue| < 1e-10 * max|entry| (degenerate form).
Signature signature(const Mat& g);

/// Symmetric nondegenerate bilinear form at the unit.
///
/// Construction enforces symmetry (1e-14), nondegeneracy (|det| > 1e-10 * scale^dim)
/// and caches the signature. Degenerate elements of a CS space cannot be wrapped.
class MetricAtUnit {
 public:
  explicit MetricAtUnit(Mat m);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Mat& matrix() const { return matrix_; }
  Signature sig() const { return sig_; }

 private:
  Mat matrix_;
  Signature sig_;
};

/// Basis of the linear space of symmetric forms B with B(ad_u x, y) + B(x, ad_u y) = 0
/// for every u in the derived ideal.
struct CSMetricSpace {
  int dimension = 0;
  std::vector<Mat> basis;
  std::vector<bool> basis_nondegenerate;
  std::vector<std::optional<Signature>> basis_signature;  // nullopt for degenerate members
};

/// Assembles the skew-adjointness system over the n(n+1)/2 symmetric unknowns,
/// one block per derived-ideal generator, and extracts its nullspace
/// (SVD, relative cutoff 1e-10). Nondegeneracy is not enforced on members.
CSMetricSpace solve_cs_space(const LieAlgebraSpec& alg);

/// Max over basis 4-tuples of |g([[x1,x2],y],z) + g(y,[[x1,x2],z])|.
double check_cs_condition(const LieAlgebraSpec& alg, const Mat& g);

/// g(x,y) + 1/2 g([log s,x],y) + 1/2 g(x,[log s,y]) + 1/4 g([log s,x],[log s,y]).
/// Requires nilpotency class <= 2.
double metric_field_2nil(const LieAlgebraSpec& alg, const Mat& g, const GroupPoint& sigma,
                         const Vec& x, const Vec& y);

/// Truncated series sum_{p,q=0}^{order} g(ad^p x, ad^q y) / (p! q! 2^{p+q});
/// exact for class-c nilpotent algebras once order >= c-1.
double metric_field_series(const LieAlgebraSpec& alg, const Mat& g, const GroupPoint& sigma,
                           const Vec& x, const Vec& y, int order);

/// Sum of |term| over the p+q == order band; no truncation bound is guessed,
/// callers inspect the tail themselves.
double metric_field_series_tail(const LieAlgebraSpec& alg, const Mat& g, const GroupPoint& sigma,
                                const Vec& x, const Vec& y, int order);

/// Frame coefficient matrix M_ij(sigma) = mu_sigma(e_i^+, e_j^+) (class <= 2 closed form).
Mat metric_field_matrix(const LieAlgebraSpec& alg, const Mat& g, const GroupPoint& sigma);

/// Exact t-derivative of t -> mu_{sigma exp(tx)}(y^+, z^+) at t = 0 (class <= 2;
/// the coefficients are quadratic polynomials, differentiated analytically).
double metric_field_directional_derivative(const LieAlgebraSpec& alg, const Mat& g,
                                           const GroupPoint& sigma, const Vec& x, const Vec& y,
                                           const Vec& z);

/// Coefficient matrix in the exponential-chart coordinate basis:
/// (I - 1/2 ad_u)^T M(sigma) (I - 1/2 ad_u), u = log sigma (class <= 2).
Mat coordinate_metric(const LieAlgebraSpec& alg, const Mat& g, const GroupPoint& sigma);

/// Degree-2 polynomial coefficient table for H_{2n+1} in the matrix-chart
/// coordinate fields (d/dx_i, d/dy_j, d/dz); k is the value at the unit.
Mat heisenberg_metric_coeffs(int n, const Mat& k, const Vec& point);

/// Closed-form coefficient table for an H-type group in the exponential-chart
/// coordinate fields (d/dx_i, d/dz_a); d is the value at the unit.
Mat htype_metric_coeffs(const HTypeSpec& spec, const Mat& d, const Vec& point);

/// For solvable specs: positive (or negative) definite Cartan-Schouten metrics
/// exist iff the algebra is at most 2-step nilpotent (identity matrix witness).
/// Throws std::invalid_argument for non-solvable input.
bool riemannian_cs_exists(const LieAlgebraSpec& alg);

/// Max over basis triples of |g([x,y],z) - g(x,[y,z])|.
double check_ad_invariance(const LieAlgebraSpec& alg, const Mat& g);

/// For a 2-nilpotent quadratic spec presented in a hyperbolic basis (V = first half,
/// center = second half): max violation of C_ij^{n+k} = C_jk^{n+i} = -C_ik^{n+j}.
double check_quadratic_structure_constants(const LieAlgebraSpec& alg);

/// Given nondegenerate g on a 2n-dim space and a basis (columns) of a totally
/// isotropic n-dim subspace, returns a basis (columns e_1..e_n, e_{n+1}..e_{2n})
/// with Gram [[0,I],[I,0]]; the last n columns span the input subspace.
/// One hyperbolic plane is peeled per induction step via
/// v* = (tilde v - g(tilde v,tilde v)/(2 g(v,tilde v)) v) / g(v,tilde v).
Mat hyperbolic_basis(const Mat& g, const Mat& lagrangian);

enum class FieldStrategy { ClosedForm2Nil, TruncatedSeries, HeisenbergTable, HTypeTable };

/// A Cartan-Schouten metric field determined by its unit value.
///
/// ClosedForm2Nil / TruncatedSeries produce left-invariant-frame coefficients;
/// HeisenbergTable / HTypeTable produce coordinate-field coefficients of their chart.
/// At the identity every strategy reproduces the unit metric exactly.
class MetricField {
 public:
  MetricField(LieAlgebraSpec alg, MetricAtUnit unit, FieldStrategy strategy, int order = 0,
              std::optional<HTypeSpec> htype = std::nullopt);

  Mat coefficient_matrix(const GroupPoint& sigma) const;
  double evaluate(const GroupPoint& sigma, const Vec& x, const Vec& y) const;

  const LieAlgebraSpec& algebra() const { return alg_; }
  const MetricAtUnit& unit_metric() const { return unit_; }
  FieldStrategy strategy() const { return strategy_; }

 private:
  LieAlgebraSpec alg_;
  MetricAtUnit unit_;
  FieldStrategy strategy_;
  int order_;
  std::optional<HTypeSpec> htype_;
};

}  // namespace cartangeo
