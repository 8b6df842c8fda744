#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace cartangeo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// One nonzero structure constant: [e_i, e_j] has coefficient value on e_k.
struct BracketTriple {
  int i = 0;
  int j = 0;
  int k = 0;
  double value = 0.0;
};

/// H-type data: dim V = n, dim center = m, gamma[q] the n x n skew matrix of J_{Z_q}.
struct HTypeSpec {
  int n = 0;
  int m = 0;
  std::vector<Mat> gamma;  // m matrices, each n x n, gamma[q](j,l) = -gamma[q](l,j)

  void validate() const;  // throws std::invalid_argument
};

/// Oscillator data: 0 < lambda_1 <= ... <= lambda_n.
struct OscillatorSpec {
  Vec lambda;

  void validate() const;
};

/// A finite-dimensional real Lie algebra given by structure constants in a fixed basis.
///
/// Immutable after construction. Constructors check antisymmetry and the Jacobi
/// identity (residual <= 1e-12) and cache the lower-central-series class, derived
/// ideal and center. Constants are kept as a triple list plus, for dim <= 64, a
/// dense dim^3 tensor for O(dim^2) brackets.
class LieAlgebraSpec {
 public:
  static constexpr double kJacobiTol = 1e-12;
  static constexpr int kDenseDimLimit = 64;

  LieAlgebraSpec(int dim, std::vector<BracketTriple> triples,
                 std::vector<std::string> labels = {});

  int dim() const { return dim_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<BracketTriple>& triples() const { return triples_; }

  /// Structure constant C[i][j][k] of [e_i,e_j] on e_k.
  double c(int i, int j, int k) const;

  /// [x, y] for coordinate vectors of length dim.
  Vec bracket(const Vec& x, const Vec& y) const;

  /// Matrix of ad_u, columns are [u, e_j].
  Mat ad(const Vec& u) const;

  /// Orthonormal basis (columns) of span{[x,y]}.
  const Mat& derived_ideal() const { return derived_ideal_; }

  /// Orthonormal basis (columns) of {z : [z, G] = 0}.
  const Mat& center() const { return center_; }

  /// Lower central series length; nullopt when the algebra is not nilpotent.
  std::optional<int> nilpotency_class() const { return nilpotency_class_; }

  bool is_two_step_or_less() const {
    return nilpotency_class_ && *nilpotency_class_ <= 2;
  }

  /// Derived series reaches zero.
  bool is_solvable() const { return solvable_; }

  bool is_abelian() const { return derived_ideal_.cols() == 0; }

  /// Max Jacobi violation over basis triples (diagnostic; < kJacobiTol by construction).
  double jacobi_residual() const;

  /// Set for algebras built by make_heisenberg; enables the HeisenbergMatrix chart.
  std::optional<int> heisenberg_n() const { return heisenberg_n_; }

 private:
  friend LieAlgebraSpec make_heisenberg(int n);

  int dim_;
  std::vector<std::string> labels_;
  std::vector<BracketTriple> triples_;
  std::vector<double> dense_;  // dim^3 row-major when dim <= kDenseDimLimit
  Mat derived_ideal_;
  Mat center_;
  std::optional<int> nilpotency_class_;
  bool solvable_ = false;
  std::optional<int> heisenberg_n_;

  void compute_caches();
};

/// Heisenberg algebra H_{2n+1}: [e_j, e_{n+j}] = e_{2n+1}.
LieAlgebraSpec make_heisenberg(int n);

/// Graded 2-step algebra V + Z from H-type data; [e_j, e_l] = sum_q -gamma[q](j,l) e_{n+q}.
LieAlgebraSpec make_htype(const HTypeSpec& spec);

/// Oscillator algebra, basis (e_{-1}, e_0, e_1..e_n, e_{n+1}..e_{2n}):
/// [e_j, e_{n+j}] = e_0, [e_{-1}, e_j] = lambda_j e_{n+j}, [e_{-1}, e_{n+j}] = -lambda_j e_j.
LieAlgebraSpec make_oscillator(const OscillatorSpec& spec);

/// Semidirect sum R D + R^n, basis (e_0, e_1..e_n) with [e_0, v] = D v.
LieAlgebraSpec make_semidirect(const Mat& D);

/// Abelian algebra of the given dimension.
LieAlgebraSpec make_abelian(int dim);

/// Rank-revealing column space of M, relative singular value cutoff 1e-10.
Mat column_space(const Mat& M);

/// Orthonormal nullspace basis (columns) of M, relative singular value cutoff 1e-10.
Mat nullspace(const Mat& M);

}  // namespace cartangeo
