// Command-line frontend: solver, metric evaluation, connection verification,
// Fisher reports, parametric means, and the randomized invariant suite.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <thread>

#include "cartangeo/connection.hpp"
#include "cartangeo/cs_metric.hpp"
#include "cartangeo/fisher.hpp"
#include "cartangeo/io.hpp"
#include "cartangeo/mean.hpp"
#include "cartangeo/rng.hpp"

using json = nlohmann::json;
using namespace cartangeo;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailedChecks = 1;
constexpr int kExitBadInput = 2;

json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json vector_to_json(const Vec& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json tritensor_to_json(const TriTensor& t) {
  json out = json::array();
  for (int i = 0; i < t.dim(); ++i) {
    json mi = json::array();
    for (int j = 0; j < t.dim(); ++j) {
      json mj = json::array();
      for (int k = 0; k < t.dim(); ++k) mj.push_back(t.at(i, j, k));
      mi.push_back(mj);
    }
    out.push_back(mi);
  }
  return out;
}

std::ostream& open_sink(std::ofstream& file, const std::string& out_path) {
  if (out_path.empty()) return std::cout;
  file.open(out_path);
  if (!file) throw std::invalid_argument("cannot open output file: " + out_path);
  return file;
}

Chart parse_chart(const std::string& s) {
  if (s == "exp") return Chart::Exponential;
  if (s == "heis") return Chart::HeisenbergMatrix;
  throw std::invalid_argument("chart must be 'exp' or 'heis'");
}

// ---------------------------------------------------------------------------
// verify: randomized invariant suite over one algebra
// ---------------------------------------------------------------------------

struct Check {
  std::string name;
  std::string anchor;
  double tolerance;
  std::function<double(Rng&)> run;  // returns the residual
};

struct TolOverrides {
  std::map<std::string, double> by_name;
  std::optional<double> global;

  double apply(const std::string& name, double fallback) const {
    auto it = by_name.find(name);
    if (it != by_name.end()) return it->second;
    return global.value_or(fallback);
  }
};

GroupPoint random_point(Rng& rng, const LieAlgebraSpec& alg, double scale = 1.0) {
  return {Chart::Exponential, rng.vector(alg.dim(), scale)};
}

std::vector<Check> build_verify_suite(const AlgebraInput& input) {
  const LieAlgebraSpec& alg = input.alg;
  const int d = alg.dim();
  std::vector<Check> checks;

  checks.push_back({"jacobi-identity", "bracket-axioms", 1e-12,
                    [&alg](Rng&) { return alg.jacobi_residual(); }});

  if (alg.is_two_step_or_less()) {
    checks.push_back({"group-associativity", "group-law", 1e-12, [&alg](Rng& rng) {
                        double r = 0.0;
                        for (int t = 0; t < 300; ++t) {
                          GroupPoint a = random_point(rng, alg), b = random_point(rng, alg),
                                     c = random_point(rng, alg);
                          Vec lhs = group_product(alg, group_product(alg, a, b), c).coords;
                          Vec rhs = group_product(alg, a, group_product(alg, b, c)).coords;
                          r = std::max(r, (lhs - rhs).cwiseAbs().maxCoeff());
                        }
                        return r;
                      }});
    checks.push_back({"commutator-identity", "group-law", 1e-13, [&alg](Rng& rng) {
                        double r = 0.0;
                        for (int t = 0; t < 100; ++t) {
                          GroupPoint a = random_point(rng, alg), b = random_point(rng, alg);
                          GroupPoint comm = group_product(
                              alg, group_product(alg, a, b),
                              group_product(alg, group_inverse(alg, a), group_inverse(alg, b)));
                          Vec expect = alg.bracket(a.coords, b.coords);
                          r = std::max(r, (comm.coords - expect).cwiseAbs().maxCoeff());
                        }
                        return r;
                      }});
    checks.push_back({"cs-space-dimension", "cs-space-manifold", 0.5, [&alg, d](Rng&) {
                        CSMetricSpace space = solve_cs_space(alg);
                        return std::abs(space.dimension - d * (d + 1) / 2) * 1.0;
                      }});
    checks.push_back({"metric-parallelism", "metric-parallel-transport", 1e-12,
                      [&alg, d](Rng& rng) {
                        double r = 0.0;
                        Mat basis = Mat::Identity(d, d);
                        for (int t = 0; t < 20; ++t) {
                          Mat g = rng.symmetric_nondegenerate(d);
                          GroupPoint sigma = random_point(rng, alg);
                          for (int i = 0; i < d; ++i)
                            for (int j = 0; j < d; ++j)
                              for (int k = 0; k < d; ++k) {
                                double lhs = metric_field_directional_derivative(
                                    alg, g, sigma, basis.col(i), basis.col(j), basis.col(k));
                                double rhs =
                                    0.5 * (metric_field_2nil(alg, g, sigma,
                                                             alg.bracket(basis.col(i), basis.col(j)),
                                                             basis.col(k)) +
                                           metric_field_2nil(alg, g, sigma, basis.col(j),
                                                             alg.bracket(basis.col(i),
                                                                         basis.col(k))));
                                r = std::max(r, std::abs(lhs - rhs));
                              }
                        }
                        return r;
                      }});
    checks.push_back({"series-closed-form", "series-metric-field", 1e-14, [&alg, d](Rng& rng) {
                        double r = 0.0;
                        for (int t = 0; t < 50; ++t) {
                          Mat g = rng.symmetric_nondegenerate(d);
                          GroupPoint sigma = random_point(rng, alg);
                          Vec x = rng.vector(d), y = rng.vector(d);
                          double a = metric_field_2nil(alg, g, sigma, x, y);
                          double b = metric_field_series(alg, g, sigma, x, y, 3);
                          r = std::max(r, std::abs(a - b) / std::max(1.0, std::abs(a)));
                        }
                        return r;
                      }});
    checks.push_back({"canonical-flatness", "flat-connection", 1e-13, [&alg](Rng&) {
                        return curvature(canonical_connection(alg), alg).max_abs();
                      }});
    checks.push_back({"signature-preservation", "congruent-coefficients", 0.5, [&alg, d](Rng& rng) {
                        double bad = 0.0;
                        for (int t = 0; t < 20; ++t) {
                          Mat g = rng.symmetric_nondegenerate(d);
                          Signature s0 = signature(g);
                          GroupPoint sigma = random_point(rng, alg);
                          if (!(signature(metric_field_matrix(alg, g, sigma)) == s0)) bad += 1.0;
                        }
                        return bad;
                      }});
    checks.push_back({"mean-certificate", "exponential-barycenter", 1e-12, [&alg, d](Rng& rng) {
                        double r = 0.0;
                        for (int t = 0; t < 5; ++t) {
                          int p = rng.uniform_int(2, 40);
                          Dataset data{rng.matrix(p, d), Chart::Exponential, d, 0};
                          MeanResult res = barycenter_fixed_point(alg, data);
                          r = std::max(r, res.barycenter_residual);
                        }
                        return r;
                      }});
    checks.push_back({"mean-left-equivariance", "biinvariant-mean", 1e-12, [&alg, d](Rng& rng) {
                        double r = 0.0;
                        for (int t = 0; t < 5; ++t) {
                          int p = rng.uniform_int(2, 30);
                          Mat pts = rng.matrix(p, d);
                          Dataset data{pts, Chart::Exponential, d, 0};
                          GroupPoint g = random_point(rng, alg);
                          Mat shifted(p, d);
                          for (int i = 0; i < p; ++i)
                            shifted.row(i) =
                                group_product(alg, g, GroupPoint{Chart::Exponential,
                                                                 pts.row(i).transpose()})
                                    .coords.transpose();
                          Dataset sdata{shifted, Chart::Exponential, d, 0};
                          Vec lhs = barycenter_fixed_point(alg, sdata).mean.coords;
                          Vec rhs =
                              group_product(alg, g, barycenter_fixed_point(alg, data).mean).coords;
                          r = std::max(r, (lhs - rhs).cwiseAbs().maxCoeff());
                        }
                        return r;
                      }});
  } else {
    checks.push_back({"cs-solver-basis-residual", "cs-constraint", 1e-10, [&alg](Rng&) {
                        CSMetricSpace space = solve_cs_space(alg);
                        double r = 0.0;
                        for (const Mat& B : space.basis)
                          r = std::max(r, check_cs_condition(alg, B));
                        return r;
                      }});
    checks.push_back({"skew-curvature-parallel", "parallel-metric-curvature", 1e-12,
                      [&alg, d](Rng& rng) {
                        CSMetricSpace space = solve_cs_space(alg);
                        CurvatureTensor R = curvature(canonical_connection(alg), alg);
                        Mat basis = Mat::Identity(d, d);
                        double r = 0.0;
                        for (int trial = 0; trial < 10; ++trial) {
                          Mat g = Mat::Zero(d, d);
                          for (const Mat& B : space.basis) g += rng.normal() * B;
                          double scale = g.cwiseAbs().maxCoeff();
                          if (scale < 1e-8 ||
                              std::abs(g.determinant()) < 1e-8 * std::pow(scale, d))
                            continue;
                          for (int i = 0; i < d; ++i)
                            for (int j = 0; j < d; ++j)
                              for (int u = 0; u < d; ++u)
                                for (int v = 0; v < d; ++v) {
                                  double val = R.on_basis(i, j, u).dot(g * basis.col(v)) +
                                               basis.col(u).dot(g * R.on_basis(i, j, v));
                                  r = std::max(r, std::abs(val));
                                }
                        }
                        return r;
                      }});
  }
  if (alg.is_solvable()) {
    checks.push_back({"riemannian-existence", "definite-metric-criterion", 0.5, [&alg](Rng&) {
                        bool expect = alg.is_two_step_or_less();
                        return riemannian_cs_exists(alg) == expect ? 0.0 : 1.0;
                      }});
  }
  checks.push_back({"canonical-torsion", "torsion-free-connection", 1e-13, [&alg](Rng&) {
                      return torsion_residual(alg, canonical_connection(alg));
                    }});
  if (alg.heisenberg_n()) {
    int n = *alg.heisenberg_n();
    checks.push_back({"chart-equivariance", "matrix-chart", 1e-13, [&alg, n](Rng& rng) {
                        double r = 0.0;
                        for (int t = 0; t < 100; ++t) {
                          GroupPoint a{Chart::HeisenbergMatrix, rng.vector(2 * n + 1)};
                          GroupPoint b{Chart::HeisenbergMatrix, rng.vector(2 * n + 1)};
                          Vec direct = group_product(alg, a, b).coords;
                          GroupPoint ae = convert_chart(alg, a, Chart::Exponential);
                          GroupPoint be = convert_chart(alg, b, Chart::Exponential);
                          Vec via = convert_chart(alg, group_product(alg, ae, be),
                                                  Chart::HeisenbergMatrix)
                                        .coords;
                          r = std::max(r, (direct - via).cwiseAbs().maxCoeff());
                        }
                        return r;
                      }});
    checks.push_back({"heisenberg-table", "polynomial-coefficients", 1e-12, [&alg, n](Rng& rng) {
                        const int d = 2 * n + 1;
                        double r = 0.0;
                        for (int t = 0; t < 25; ++t) {
                          Mat k = rng.symmetric_nondegenerate(d);
                          GroupPoint pt{Chart::HeisenbergMatrix, rng.vector(d)};
                          Mat table = heisenberg_metric_coeffs(n, k, pt.coords);
                          Mat M = metric_field_matrix(alg, k, pt);
                          Mat P = Mat::Identity(d, d);
                          for (int j = 0; j < n; ++j) P(2 * n, n + j) = -pt.coords(j);
                          r = std::max(r, (table - P.transpose() * M * P).cwiseAbs().maxCoeff());
                        }
                        return r;
                      }});
  }
  if (input.htype) {
    const HTypeSpec spec = *input.htype;
    checks.push_back({"htype-table", "closed-form-coefficients", 1e-10, [&alg, spec](Rng& rng) {
                        double r = 0.0;
                        for (int t = 0; t < 25; ++t) {
                          Mat dmat = rng.symmetric_nondegenerate(alg.dim());
                          GroupPoint pt = random_point(rng, alg);
                          Mat table = htype_metric_coeffs(spec, dmat, pt.coords);
                          Mat G = coordinate_metric(alg, dmat, pt);
                          r = std::max(r, (table - G).cwiseAbs().maxCoeff());
                        }
                        return r;
                      }});
    checks.push_back({"closed-form-mean-agreement", "parametric-mean", 1e-12,
                      [&alg, spec](Rng& rng) {
                        double r = 0.0;
                        for (int t = 0; t < 5; ++t) {
                          int p = rng.uniform_int(2, 50);
                          Dataset data{rng.matrix(p, alg.dim()), Chart::Exponential, spec.n,
                                       spec.m};
                          MeanResult cf = parametric_mean_closed_form(spec, data);
                          MeanResult fp = barycenter_fixed_point(alg, data);
                          r = std::max(r, (cf.mean.coords - fp.mean.coords).cwiseAbs().maxCoeff());
                          r = std::max(r, cf.barycenter_residual);
                        }
                        return r;
                      }});
  }
  return checks;
}

int run_verify(const std::string& alg_path, std::uint64_t seed, const TolOverrides& tols,
               const std::string& out_path) {
  AlgebraInput input = load_algebra_spec(alg_path);
  std::vector<Check> checks = build_verify_suite(input);

  int workers = 1;
  if (const char* env = std::getenv("CARTAN_GEO_THREADS")) {
    workers = std::max(1, std::atoi(env));
  } else {
    workers = std::max(1u, std::min(4u, std::thread::hardware_concurrency()));
  }
  workers = std::min<int>(workers, static_cast<int>(checks.size()));

  std::vector<CheckLine> lines(checks.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= checks.size()) return;
      // Per-check RNG stream: independent of scheduling, bit-stable under threads.
      Rng rng(seed * 0x9e3779b97f4a7c15ULL + i);
      CheckLine line;
      line.name = checks[i].name;
      line.anchor = checks[i].anchor;
      line.tolerance = tols.apply(checks[i].name, checks[i].tolerance);
      try {
        line.residual = checks[i].run(rng);
        line.pass = line.residual <= line.tolerance;
      } catch (const std::exception& e) {
        line.residual = std::numeric_limits<double>::infinity();
        line.pass = false;
      }
      lines[i] = line;
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::ofstream file;
  std::ostream& os = open_sink(file, out_path);
  bool all_pass = true;
  for (const CheckLine& line : lines) {
    os << check_line_json(line) << "\n";
    all_pass = all_pass && line.pass;
  }
  return all_pass ? kExitOk : kExitFailedChecks;
}

// ---------------------------------------------------------------------------
// connections verify
// ---------------------------------------------------------------------------

int run_connections(const std::string& alg_path, const std::string& metric_path,
                    const std::string& tensor_path, double alpha, std::uint64_t seed,
                    std::optional<double> tol_override, const std::string& out_path) {
  AlgebraInput input = load_algebra_spec(alg_path);
  const LieAlgebraSpec& alg = input.alg;
  MetricAtUnit g(load_metric(metric_path));
  TriTensor S = load_tritensor(tensor_path);
  if (S.dim() != alg.dim()) throw std::invalid_argument("tensor dim must match the algebra");

  Rng rng(seed);
  auto [plus, minus] = alpha_connections(alg, g, S, alpha);
  ConnectionCoeffs nabla = canonical_connection(alg);

  std::vector<GroupPoint> samples{identity_point(alg)};
  for (int i = 0; i < 5; ++i) samples.push_back(random_point(rng, alg));

  struct Row {
    std::string check;
    double residual;
    double tol;
  };
  std::vector<Row> rows;
  rows.push_back({"alpha-plus-torsion", torsion_residual(alg, plus), 1e-13});
  rows.push_back({"alpha-minus-torsion", torsion_residual(alg, minus), 1e-13});
  {
    double r = 0.0;
    for (int i = 0; i < alg.dim(); ++i)
      for (int j = 0; j < alg.dim(); ++j)
        for (int k = 0; k < alg.dim(); ++k)
          r = std::max(r, std::abs(0.5 * (plus.at(i, j, k) + minus.at(i, j, k)) -
                                   nabla.at(i, j, k)));
    rows.push_back({"alpha-pair-mean", r, 1e-15});
  }
  rows.push_back({"duality", check_duality(alg, g, plus, minus, samples), 1e-11});
  rows.push_back(
      {"canonical-self-duality", check_duality(alg, g, nabla, nabla, samples), 1e-12});
  {
    double r = 0.0, rsum = 0.0;
    for (const GroupPoint& sigma : samples) {
      TriTensor tp = covariant_derivative_of_metric(alg, g, plus, sigma);
      TriTensor tm = covariant_derivative_of_metric(alg, g, minus, sigma);
      TriTensor diff = tp - S * alpha;
      r = std::max(r, diff.max_abs());
      r = std::max(r, tp.symmetry_residual());
      TriTensor sum = tp;
      sum += tm;
      rsum = std::max(rsum, sum.max_abs());
    }
    rows.push_back({"alpha-covariant-derivative", r, 1e-11});
    rows.push_back({"alpha-pair-derivative-sum", rsum, 1e-11});
  }
  {
    CurvatureTensor Rp = alpha_pair_curvature_at_unit(alg, g, S, alpha);
    CurvatureTensor Rm = alpha_pair_curvature_at_unit(alg, g, S, -alpha);
    const int d = alg.dim();
    Mat basis = Mat::Identity(d, d);
    double r = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int u = 0; u < d; ++u)
          for (int v = 0; v < d; ++v)
            r = std::max(r, std::abs(Rp.on_basis(i, j, u).dot(g.matrix() * basis.col(v)) +
                                     basis.col(u).dot(g.matrix() * Rm.on_basis(i, j, v))));
    rows.push_back({"dual-curvature-skew", r, 1e-11});
  }

  std::ofstream file;
  std::ostream& os = open_sink(file, out_path);
  bool all_pass = true;
  for (const Row& row : rows) {
    double tol = tol_override.value_or(row.tol);
    os << residual_line_json(row.check, row.residual, tol) << "\n";
    all_pass = all_pass && row.residual <= tol;
  }
  return all_pass ? kExitOk : kExitFailedChecks;
}

// ---------------------------------------------------------------------------

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

ParametricFamily family_by_name(const std::string& name) {
  if (name == "bernoulli") return bernoulli_family();
  if (name == "gaussian1d") return gaussian1d_family();
  if (name.rfind("categorical", 0) == 0) {
    int k = std::atoi(name.c_str() + std::string("categorical").size());
    return categorical_family(k);
  }
  // otherwise treat as a JSON table path
  return load_family_table(name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cartan-Schouten geometry on Lie groups"};
  app.require_subcommand(1);

  std::string alg_path, metric_path, tensor_path, data_path, gamma_path, sweep_dir, out_path;
  std::string chart_str = "exp", family_str, theta_str, basis_str = "chart";
  double alpha = 0.0, tol_flag = -1.0;
  std::uint64_t seed = 0;
  int n_flag = 0, m_flag = 0;
  std::vector<std::string> tol_pairs;

  auto* solve = app.add_subcommand("cs-solve", "solve for the space of unit-level metrics");
  solve->add_option("--alg", alg_path, "algebra spec JSON")->required();
  solve->add_option("--out", out_path, "write output here instead of stdout");

  auto* eval = app.add_subcommand("metric-eval", "evaluate metric coefficients at points");
  eval->add_option("--alg", alg_path)->required();
  eval->add_option("--metric", metric_path)->required();
  eval->add_option("--point", data_path, "CSV of points, one per row")->required();
  eval->add_option("--chart", chart_str, "exp|heis");
  eval->add_option("--basis", basis_str, "chart (coordinate fields) or frame");
  eval->add_option("--out", out_path);

  auto* conn = app.add_subcommand("connections", "verify dual-connection identities");
  conn->add_option("--alg", alg_path)->required();
  conn->add_option("--metric", metric_path)->required();
  conn->add_option("--tensor", tensor_path)->required();
  conn->add_option("--alpha", alpha);
  conn->add_option("--seed", seed);
  conn->add_option("--tol", tol_flag, "override every tolerance");
  conn->add_option("--out", out_path);
  std::string conn_action = "verify";
  conn->add_option("action", conn_action, "action to run (verify)");

  auto* fish = app.add_subcommand("fisher", "Fisher information report for a family");
  fish->add_option("--family", family_str, "bernoulli|gaussian1d|categoricalK|table.json")
      ->required();
  fish->add_option("--theta", theta_str, "comma-separated parameter vector")->required();
  fish->add_option("--alpha", alpha);
  fish->add_option("--out", out_path);

  auto* mean_cmd = app.add_subcommand("mean", "parametric biinvariant mean of a cloud");
  mean_cmd->add_option("--data", data_path, "CSV cloud, one point per row")->required();
  mean_cmd->add_option("--n", n_flag)->required();
  mean_cmd->add_option("--m", m_flag)->required();
  mean_cmd->add_option("--chart", chart_str, "exp|heis");
  mean_cmd->add_option("--gamma", gamma_path, "H-type spec JSON with the gamma parameters");
  mean_cmd->add_option("--sweep", sweep_dir, "directory of H-type spec JSONs to sweep");
  mean_cmd->add_option("--tol", tol_flag);
  mean_cmd->add_option("--out", out_path);

  auto* verify = app.add_subcommand("verify", "randomized invariant suite for an algebra");
  verify->add_option("--alg", alg_path)->required();
  verify->add_option("--seed", seed);
  verify->add_option("--tol", tol_pairs, "name=value overrides, or a bare value for all");
  verify->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      AlgebraInput input = load_algebra_spec(alg_path);
      CSMetricSpace space = solve_cs_space(input.alg);
      json j;
      j["dimension"] = space.dimension;
      j["basis"] = json::array();
      for (int i = 0; i < space.dimension; ++i) {
        json b;
        b["matrix"] = matrix_to_json(space.basis[i]);
        b["nondegenerate"] = static_cast<bool>(space.basis_nondegenerate[i]);
        if (space.basis_signature[i])
          b["signature"] = {space.basis_signature[i]->p_plus, space.basis_signature[i]->p_minus};
        else
          b["signature"] = nullptr;
        j["basis"].push_back(b);
      }
      std::ofstream file;
      open_sink(file, out_path) << j.dump() << "\n";
      return kExitOk;
    }

    if (eval->parsed()) {
      AlgebraInput input = load_algebra_spec(alg_path);
      Mat g = load_metric(metric_path);
      MetricAtUnit unit(g);  // validates symmetry and nondegeneracy
      Mat points = load_points_csv(data_path);
      Chart chart = parse_chart(chart_str);
      std::ofstream file;
      std::ostream& os = open_sink(file, out_path);
      for (int r = 0; r < points.rows(); ++r) {
        GroupPoint pt{chart, points.row(r).transpose()};
        Mat coeff;
        std::string basis_used;
        if (basis_str == "frame") {
          coeff = metric_field_matrix(input.alg, g, pt);
          basis_used = "left-invariant-frame";
        } else if (chart == Chart::HeisenbergMatrix) {
          coeff = heisenberg_metric_coeffs(*input.alg.heisenberg_n(), g, pt.coords);
          basis_used = "matrix-chart-coordinates";
        } else if (input.htype) {
          coeff = htype_metric_coeffs(*input.htype, g, pt.coords);
          basis_used = "exponential-chart-coordinates";
        } else {
          coeff = metric_field_matrix(input.alg, g, pt);
          basis_used = "left-invariant-frame";
        }
        json j;
        j["point"] = vector_to_json(pt.coords);
        j["basis"] = basis_used;
        j["matrix"] = matrix_to_json(coeff);
        os << j.dump() << "\n";
      }
      return kExitOk;
    }

    if (conn->parsed()) {
      if (conn_action != "verify")
        throw std::invalid_argument("connections: unknown action '" + conn_action + "'");
      std::optional<double> tol =
          tol_flag >= 0 ? std::optional<double>(tol_flag) : std::nullopt;
      return run_connections(alg_path, metric_path, tensor_path, alpha, seed, tol, out_path);
    }

    if (fish->parsed()) {
      ParametricFamily fam = family_by_name(family_str);
      std::vector<std::string> parts = split(theta_str, ',');
      Vec theta(static_cast<int>(parts.size()));
      for (size_t i = 0; i < parts.size(); ++i) theta(static_cast<int>(i)) = std::stod(parts[i]);
      FisherMatrix fm = fisher_matrix(fam, theta);
      TriTensor S = amari_chentsov(fam, theta);
      AlphaChristoffels gam = statistical_alpha_connection(fam, theta, alpha);
      json j;
      j["family"] = fam.name;
      j["theta"] = vector_to_json(theta);
      j["alpha"] = alpha;
      j["fisher"] = matrix_to_json(fm.matrix);
      j["amari_chentsov"] = tritensor_to_json(S);
      j["christoffels_lowered"] = tritensor_to_json(gam.lowered);
      j["christoffels_raised"] = gam.raised ? tritensor_to_json(*gam.raised) : json(nullptr);
      json res;
      res["score_mean"] = score_mean_check(fam, theta);
      res["second_derivative"] = fisher_second_derivative_check(fam, theta);
      res["decomposition"] = metric_derivative_decomposition_check(fam, theta);
      Eigen::SelfAdjointEigenSolver<Mat> es(fm.matrix);
      res["psd_min_eigenvalue"] = es.eigenvalues().minCoeff();
      j["residuals"] = res;
      std::ofstream file;
      open_sink(file, out_path) << j.dump() << "\n";
      return kExitOk;
    }

    if (mean_cmd->parsed()) {
      Mat points = load_points_csv(data_path);
      Chart chart = parse_chart(chart_str);
      Dataset data{points, chart, n_flag, m_flag};
      data.validate();
      double tol = tol_flag >= 0 ? tol_flag : 1e-12;
      std::ofstream file;
      std::ostream& os = open_sink(file, out_path);

      if (!sweep_dir.empty()) {
        HTypeSpec base;
        base.n = n_flag;
        base.m = m_flag;
        base.gamma.assign(m_flag, Mat::Zero(n_flag, n_flag));
        if (!gamma_path.empty()) {
          AlgebraInput gi = load_algebra_spec(gamma_path);
          if (!gi.htype) throw std::invalid_argument("--gamma must be an htype spec");
          base = *gi.htype;
        }
        std::vector<HTypeSpec> sweep;
        namespace fs = std::filesystem;
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(sweep_dir))
          if (entry.path().extension() == ".json") files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& p : files) {
          AlgebraInput gi = load_algebra_spec(p.string());
          if (!gi.htype) throw std::invalid_argument("sweep entries must be htype specs");
          sweep.push_back(*gi.htype);
        }
        for (const MeanReportRow& row : mean_report(base, data, sweep)) {
          json j;
          j["gamma_id"] = row.gamma_id;
          j["mean"] = vector_to_json(row.mean);
          j["residual"] = row.residual;
          j["equals_arithmetic_mean"] = row.equals_arithmetic_mean;
          os << j.dump() << "\n";
        }
        return kExitOk;
      }

      MeanResult result;
      if (chart == Chart::Exponential) {
        HTypeSpec spec;
        spec.n = n_flag;
        spec.m = m_flag;
        spec.gamma.assign(m_flag, Mat::Zero(n_flag, n_flag));
        if (!gamma_path.empty()) {
          AlgebraInput gi = load_algebra_spec(gamma_path);
          if (!gi.htype) throw std::invalid_argument("--gamma must be an htype spec");
          spec = *gi.htype;
        }
        if (spec.n != n_flag || spec.m != m_flag)
          throw std::invalid_argument("--gamma split must match --n/--m");
        result = parametric_mean_closed_form(spec, data);
      } else {
        if (m_flag != 1 || n_flag % 2 != 0)
          throw std::invalid_argument("heis chart needs n = 2k larger block and m = 1");
        LieAlgebraSpec alg = make_heisenberg(n_flag / 2);
        result = mean_in_chart(alg, data);
      }
      json j;
      j["mean"] = vector_to_json(result.mean.coords);
      j["residual"] = result.barycenter_residual;
      j["iterations"] = result.iterations;
      j["method"] = result.method == MeanMethod::ClosedForm ? "closed_form" : "fixed_point";
      j["equals_arithmetic_mean"] = result.equals_arithmetic_mean;
      j["converged"] = result.converged;
      os << j.dump() << "\n";
      return result.barycenter_residual <= tol ? kExitOk : kExitFailedChecks;
    }

    if (verify->parsed()) {
      TolOverrides tols;
      for (const std::string& s : tol_pairs) {
        auto eq = s.find('=');
        if (eq == std::string::npos)
          tols.global = std::stod(s);
        else
          tols.by_name[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
      }
      return run_verify(alg_path, seed, tols, out_path);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kExitFailedChecks;
  }
  return kExitOk;
}
