#include "cartangeo/mean.hpp"

#include <cmath>
#include <stdexcept>

#include "cartangeo/numerics.hpp"

namespace cartangeo {

namespace {

Vec column_mean(const Mat& points) {
  Vec out(points.cols());
  std::vector<double> terms(points.rows());
  for (int c = 0; c < points.cols(); ++c) {
    for (int r = 0; r < points.rows(); ++r) terms[r] = points(r, c);
    out(c) = pairwise_sum(terms) / static_cast<double>(points.rows());
  }
  return out;
}

double barycenter_residual_at(const LieAlgebraSpec& alg, const GroupPoint& mean,
                              const Dataset& data) {
  GroupPoint minv = group_inverse(alg, mean);
  Vec total = Vec::Zero(alg.dim());
  for (int r = 0; r < data.size(); ++r) {
    GroupPoint sigma{data.chart, data.points.row(r).transpose()};
    total += log_chart(alg, group_product(alg, minv, sigma));
  }
  return total.norm();
}

bool matches_arithmetic_mean(const Vec& mean_coords, const Mat& points) {
  Vec arith = column_mean(points);
  double scale = std::max(1.0, arith.cwiseAbs().maxCoeff());
  return (mean_coords - arith).cwiseAbs().maxCoeff() <= 1e-15 * scale;
}

}  // namespace

void Dataset::validate() const {
  if (points.rows() < 1) throw std::invalid_argument("dataset must contain at least one point");
  if (n < 0 || m < 0 || n + m != points.cols())
    throw std::invalid_argument("dataset n+m split must match the column count");
}

Vec arithmetic_mean(const Mat& points) { return column_mean(points); }

MeanResult parametric_mean_closed_form(const HTypeSpec& spec, const Dataset& data) {
  spec.validate();
  data.validate();
  if (data.chart != Chart::Exponential)
    throw std::invalid_argument("closed-form mean requires Exponential-chart data");
  if (data.n != spec.n || data.m != spec.m)
    throw std::invalid_argument("dataset split must match the H-type spec");

  const int n = spec.n, m = spec.m, p = data.size();
  Vec mean = column_mean(data.points);

  // Second moments E(x^j x^l), symmetric fill so the antisymmetric contraction
  // cancels pairwise exactly.
  Mat moment(n, n);
  std::vector<double> terms(p);
  for (int j = 0; j < n; ++j)
    for (int l = j; l < n; ++l) {
      for (int r = 0; r < p; ++r) terms[r] = data.points(r, j) * data.points(r, l);
      moment(j, l) = pairwise_sum(terms) / p;
      moment(l, j) = moment(j, l);
    }
  Mat centered(n, n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) centered(j, l) = mean(j) * mean(l) - moment(j, l);

  for (int q = 0; q < m; ++q) {
    double corr = 0.0;
    for (int j = 0; j < n; ++j)
      for (int l = j + 1; l < n; ++l)
        corr += spec.gamma[q](j, l) * (centered(j, l) - centered(l, j));
    mean(n + q) += 0.25 * corr;
  }

  MeanResult out;
  out.mean = GroupPoint{Chart::Exponential, mean};
  out.method = MeanMethod::ClosedForm;
  out.iterations = 0;
  LieAlgebraSpec alg = make_htype(spec);
  out.barycenter_residual = barycenter_residual_at(alg, out.mean, data);
  out.converged = out.barycenter_residual <= 1e-12 * std::max(1.0, mean.cwiseAbs().maxCoeff());
  out.equals_arithmetic_mean = matches_arithmetic_mean(mean, data.points);
  return out;
}

MeanResult barycenter_fixed_point(const LieAlgebraSpec& alg, const Dataset& data, double tol,
                                  int max_iter) {
  data.validate();
  if (alg.dim() != data.dim())
    throw std::invalid_argument("dataset dimension must equal algebra dim");
  const int p = data.size();

  std::vector<GroupPoint> sigmas;
  sigmas.reserve(p);
  for (int r = 0; r < p; ++r)
    sigmas.push_back(convert_chart(alg, GroupPoint{data.chart, data.points.row(r).transpose()},
                                   Chart::Exponential));

  GroupPoint mean = sigmas.front();
  MeanResult out;
  out.method = MeanMethod::FixedPoint;
  for (int it = 0; it <= max_iter; ++it) {
    GroupPoint minv = group_inverse(alg, mean);
    Mat logs(p, alg.dim());
    for (int r = 0; r < p; ++r)
      logs.row(r) = log_chart(alg, group_product(alg, minv, sigmas[r])).transpose();
    Vec avg = column_mean(logs);
    double residual = (static_cast<double>(p) * avg).norm();
    out.barycenter_residual = residual;
    out.iterations = it;
    if (residual <= tol) {
      out.converged = true;
      break;
    }
    if (it == max_iter) break;  // best iterate, flagged unconverged
    mean = group_product(alg, mean, exp_chart(alg, avg, Chart::Exponential));
  }
  out.mean = convert_chart(alg, mean, data.chart);
  Vec exp_coords = log_chart(alg, mean);
  out.equals_arithmetic_mean =
      data.chart == Chart::Exponential && matches_arithmetic_mean(exp_coords, data.points);
  return out;
}

MeanResult mean_in_chart(const LieAlgebraSpec& alg, const Dataset& data) {
  data.validate();
  if (alg.dim() != data.dim())
    throw std::invalid_argument("dataset dimension must equal algebra dim");
  Mat logs(data.size(), alg.dim());
  for (int r = 0; r < data.size(); ++r)
    logs.row(r) =
        log_chart(alg, GroupPoint{data.chart, data.points.row(r).transpose()}).transpose();
  Vec avg = column_mean(logs);
  MeanResult out;
  out.method = MeanMethod::ClosedForm;
  out.iterations = 0;
  out.mean = exp_chart(alg, avg, data.chart);
  out.barycenter_residual = barycenter_residual_at(alg, out.mean, data);
  out.converged =
      out.barycenter_residual <= 1e-12 * std::max(1.0, avg.cwiseAbs().maxCoeff());
  out.equals_arithmetic_mean = matches_arithmetic_mean(out.mean.coords, data.points);
  return out;
}

std::vector<MeanReportRow> mean_report(const HTypeSpec& spec, const Dataset& data,
                                       const std::vector<HTypeSpec>& gammas) {
  std::vector<MeanReportRow> rows;
  auto eval = [&](const HTypeSpec& s, int id) {
    MeanResult r = parametric_mean_closed_form(s, data);
    rows.push_back({id, r.mean.coords, r.barycenter_residual, r.equals_arithmetic_mean});
  };
  eval(spec, -1);
  for (size_t i = 0; i < gammas.size(); ++i) eval(gammas[i], static_cast<int>(i));
  return rows;
}

}  // namespace cartangeo
