#pragma once

#include <vector>

#include "cartangeo/lie_algebra.hpp"
#include "cartangeo/lie_group.hpp"

namespace cartangeo {

/// A cloud of p group points, one per row, in a fixed chart.
struct Dataset {
  Mat points;  // p x (n+m)
  Chart chart = Chart::Exponential;
  int n = 0;
  int m = 0;

  int size() const { return static_cast<int>(points.rows()); }
  int dim() const { return n + m; }
  void validate() const;
};

enum class MeanMethod { ClosedForm, FixedPoint };

struct MeanResult {
  GroupPoint mean;
  double barycenter_residual = 0.0;  // || sum_i log(mean^{-1} sigma_i) ||_2
  int iterations = 0;
  MeanMethod method = MeanMethod::ClosedForm;
  bool converged = false;
  bool equals_arithmetic_mean = false;
};

/// Closed form for an H-type structure on Exponential-chart data:
/// m^k = E(x^k), m^{n+q} = E(x^{n+q}) + 1/4 sum_jl gamma[q](j,l)(E(x^j)E(x^l) - E(x^j x^l)).
/// The correction contracts an antisymmetric array against a symmetric one, so it
/// vanishes identically; the result always carries the barycenter residual.
MeanResult parametric_mean_closed_form(const HTypeSpec& spec, const Dataset& data);

/// Iterates m <- m exp((1/p) sum_i log(m^{-1} sigma_i)) from the first data point
/// until ||sum_i log(m^{-1} sigma_i)|| <= tol. Convergence is reported, never assumed.
MeanResult barycenter_fixed_point(const LieAlgebraSpec& alg, const Dataset& data,
                                  double tol = 1e-12, int max_iter = 50);

/// Chart-aware mean: log data, average in exponential coordinates, map back to
/// the dataset chart. For the HeisenbergMatrix chart the z block becomes
/// E(z) - 1/2 E(x y^T) + 1/2 E(x) E(y)^T.
MeanResult mean_in_chart(const LieAlgebraSpec& alg, const Dataset& data);

struct MeanReportRow {
  int gamma_id = 0;  // -1 for the base spec
  Vec mean;
  double residual = 0.0;
  bool equals_arithmetic_mean = false;
};

/// Closed-form mean for the base spec and each sweep entry.
std::vector<MeanReportRow> mean_report(const HTypeSpec& spec, const Dataset& data,
                                       const std::vector<HTypeSpec>& gammas);

/// Componentwise arithmetic mean of the rows (pairwise summation).
Vec arithmetic_mean(const Mat& points);

}  // namespace cartangeo
