#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "cartangeo/connection.hpp"
#include "cartangeo/lie_algebra.hpp"

namespace cartangeo {

/// Finite sample space; expectations are exact sums over the atoms.
struct DiscreteSpace {
  Vec atoms;
};

/// Interval sample space; expectations by Gauss-Legendre with the given node count.
struct IntervalSpace {
  double lo = 0.0;
  double hi = 1.0;
  int nodes = 200;
};

/// Real line; expectations by Gauss-Hermite against the Gaussian anchored at
/// (mean, stdev)(theta). Densities close to the anchor integrate exactly.
struct RealLineSpace {
  std::function<std::pair<double, double>(const Vec&)> anchor;
  int nodes = 64;
};

using SampleSpace = std::variant<DiscreteSpace, IntervalSpace, RealLineSpace>;

/// Probability family p(x, theta) given through its log density.
///
/// log_density_grad / log_density_hess are optional; when absent, scores fall
/// back to central differences with relative step 1e-6 (1e-4 for second
/// derivatives).
struct ParametricFamily {
  std::string name;
  int theta_dim = 0;
  SampleSpace space;
  std::function<double(double, const Vec&)> log_density;
  std::function<Vec(double, const Vec&)> log_density_grad;  // may be empty
  std::function<Mat(double, const Vec&)> log_density_hess;  // may be empty
  Vec theta_lo, theta_hi;                                   // open box domain
};

struct FisherMatrix {
  Vec theta;
  Mat matrix;  // symmetric PSD
};

ParametricFamily bernoulli_family();
ParametricFamily gaussian1d_family();                 // theta = (mean, stdev)
ParametricFamily categorical_family(int k);           // theta = (p_1..p_{k-1})

/// Expectation E_theta[f] over the family's sample space (pairwise summation).
double expectation(const ParametricFamily& fam, const Vec& theta,
                   const std::function<double(double)>& f);

/// Gradient of log p(x, .) at theta.
Vec score(const ParametricFamily& fam, double x, const Vec& theta);

/// E_theta[score score^T]. Throws std::domain_error when theta is not interior
/// or the density fails to normalize to 1e-8 over the space.
FisherMatrix fisher_matrix(const ParametricFamily& fam, const Vec& theta);

/// max_i |E_theta[score_i]|.
double score_mean_check(const ParametricFamily& fam, const Vec& theta);

/// max_ij |mu_ij + E_theta[d2 log p / dtheta_i dtheta_j]|.
double fisher_second_derivative_check(const ParametricFamily& fam, const Vec& theta);

/// Third moment of the score, totally symmetric.
TriTensor amari_chentsov(const ParametricFamily& fam, const Vec& theta);

/// d mu_ij / d theta_k by central differences of fisher_matrix (step 1e-5 relative);
/// D.at(k,i,j) = d_k mu_ij.
TriTensor fisher_metric_derivative(const ParametricFamily& fam, const Vec& theta);

struct AlphaChristoffels {
  TriTensor lowered;                 // Gamma_{ij,k} stored at (i,j,k)
  std::optional<TriTensor> raised;   // Gamma^k_{ij} at (i,j,k); absent if Fisher singular
};

/// Levi-Civita lowered Christoffels of the Fisher metric:
/// Gamma_{ij,k} = (d_i mu_jk + d_j mu_ik - d_k mu_ij) / 2.
AlphaChristoffels levi_civita_christoffels(const ParametricFamily& fam, const Vec& theta);

/// Gamma^{(alpha)}_{ij,k} = Gamma^{LC}_{ij,k} - (alpha/2) S_ijk.
AlphaChristoffels statistical_alpha_connection(const ParametricFamily& fam, const Vec& theta,
                                               double alpha);

/// max |d_k mu_ij - E[d2_ki l . d_j l] - E[d_i l . d2_kj l] - S_kij|.
double metric_derivative_decomposition_check(const ParametricFamily& fam, const Vec& theta);

}  // namespace cartangeo
