#pragma once

#include "cartangeo/lie_algebra.hpp"

namespace cartangeo {

enum class Chart { Exponential, HeisenbergMatrix };

/// A group element as coordinates in a named chart.
///
/// Exponential: coords are exp-coordinates (the log of the element).
/// HeisenbergMatrix: (x, y, z) of the upper-triangular matrix model; only valid
/// for algebras built by make_heisenberg.
struct GroupPoint {
  Chart chart = Chart::Exponential;
  Vec coords;
};

/// Group law. Exponential chart uses the 2-step BCH formula
/// log(st) = log s + log t + 1/2 [log s, log t] and requires class <= 2;
/// HeisenbergMatrix dispatches to (x,y,z)(x',y',z') = (x+x', y+y', z+z'+x.y').
GroupPoint group_product(const LieAlgebraSpec& alg, const GroupPoint& a, const GroupPoint& b);

GroupPoint group_inverse(const LieAlgebraSpec& alg, const GroupPoint& a);

GroupPoint identity_point(const LieAlgebraSpec& alg, Chart chart = Chart::Exponential);

/// Coordinates of log(a) in the algebra basis.
Vec log_chart(const LieAlgebraSpec& alg, const GroupPoint& a);

/// Point of the given chart with log equal to v.
GroupPoint exp_chart(const LieAlgebraSpec& alg, const Vec& v, Chart chart = Chart::Exponential);

GroupPoint convert_chart(const LieAlgebraSpec& alg, const GroupPoint& a, Chart target);

}  // namespace cartangeo
