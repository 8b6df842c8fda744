#include "cartangeo/lie_group.hpp"

#include <stdexcept>

namespace cartangeo {

namespace {

void check_point(const LieAlgebraSpec& alg, const GroupPoint& a) {
  if (a.coords.size() != alg.dim())
    throw std::invalid_argument("group point length must equal algebra dim");
  if (a.chart == Chart::HeisenbergMatrix && !alg.heisenberg_n())
    throw std::invalid_argument("HeisenbergMatrix chart requires a Heisenberg algebra");
}

void check_two_step(const LieAlgebraSpec& alg) {
  if (!alg.is_two_step_or_less())
    throw std::invalid_argument("operation requires a 2-step nilpotent algebra");
}

}  // namespace

GroupPoint identity_point(const LieAlgebraSpec& alg, Chart chart) {
  return {chart, Vec::Zero(alg.dim())};
}

Vec log_chart(const LieAlgebraSpec& alg, const GroupPoint& a) {
  check_point(alg, a);
  if (a.chart == Chart::Exponential) return a.coords;
  // log(x,y,z) = sum x_i e_i + y_i e_{n+i} + (z - 1/2 x.y) e_{2n+1}
  int n = *alg.heisenberg_n();
  Vec v = a.coords;
  v(2 * n) -= 0.5 * a.coords.head(n).dot(a.coords.segment(n, n));
  return v;
}

GroupPoint exp_chart(const LieAlgebraSpec& alg, const Vec& v, Chart chart) {
  if (v.size() != alg.dim())
    throw std::invalid_argument("algebra vector length must equal dim");
  if (chart == Chart::Exponential) return {chart, v};
  if (!alg.heisenberg_n())
    throw std::invalid_argument("HeisenbergMatrix chart requires a Heisenberg algebra");
  int n = *alg.heisenberg_n();
  Vec c = v;
  c(2 * n) += 0.5 * v.head(n).dot(v.segment(n, n));
  return {Chart::HeisenbergMatrix, c};
}

GroupPoint convert_chart(const LieAlgebraSpec& alg, const GroupPoint& a, Chart target) {
  if (a.chart == target) return a;
  return exp_chart(alg, log_chart(alg, a), target);
}

GroupPoint group_product(const LieAlgebraSpec& alg, const GroupPoint& a, const GroupPoint& b) {
  check_point(alg, a);
  check_point(alg, b);
  if (a.chart != b.chart) throw std::invalid_argument("group_product: chart mismatch");
  if (a.chart == Chart::HeisenbergMatrix) {
    int n = *alg.heisenberg_n();
    Vec c = a.coords + b.coords;
    c(2 * n) += a.coords.head(n).dot(b.coords.segment(n, n));
    return {a.chart, c};
  }
  check_two_step(alg);
  Vec c = a.coords + b.coords + 0.5 * alg.bracket(a.coords, b.coords);
  return {a.chart, c};
}

GroupPoint group_inverse(const LieAlgebraSpec& alg, const GroupPoint& a) {
  check_point(alg, a);
  if (a.chart == Chart::Exponential) {
    check_two_step(alg);
    return {a.chart, -a.coords};
  }
  return exp_chart(alg, -log_chart(alg, a), a.chart);
}

}  // namespace cartangeo
