#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cartangeo/connection.hpp"
#include "cartangeo/fisher.hpp"
#include "cartangeo/lie_algebra.hpp"

namespace cartangeo {

/// Parsed algebra description; htype is retained when the JSON kind carries it
/// so coefficient tables and the parametric mean can reuse the gamma data.
struct AlgebraInput {
  LieAlgebraSpec alg;
  std::optional<HTypeSpec> htype;
  std::string kind;
};

/// Kinds: "heisenberg" {n}, "oscillator" {lambda}, "semidirect" {D},
/// "htype" {n, m, gamma:[{q,j,l,value}]}, "raw" {dim, triples:[{i,j,k,value}]}.
/// Indices are 1-based; antisymmetric completion is applied on load.
AlgebraInput load_algebra_spec(const std::string& path);
AlgebraInput parse_algebra_spec(const std::string& json_text);

/// {"matrix": [[...], ...]}, symmetric.
Mat load_metric(const std::string& path);
Mat parse_metric(const std::string& json_text);

/// {"dim": d, "entries": [{i,j,k,value}]}, 1-based, symmetrized over all
/// index permutations on load.
TriTensor load_tritensor(const std::string& path);
TriTensor parse_tritensor(const std::string& json_text);

/// Rows of floats; a non-numeric first line is treated as a header.
Mat load_points_csv(const std::string& path);
Mat parse_points_csv(const std::string& text);

/// Discrete family from a JSON table:
/// {"atoms":[...], "theta_dim":n, "logp":[[{"powers":[..],"coeff":c},...], ...]}
/// with one polynomial-in-theta per atom.
ParametricFamily parse_family_table(const std::string& json_text);
ParametricFamily load_family_table(const std::string& path);

/// One verification line of a machine-readable report.
struct CheckLine {
  std::string name;
  std::string anchor;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// {"name":..., "paper_anchor":..., "residual":..., "tolerance":..., "pass":...}
std::string check_line_json(const CheckLine& line);

/// {"check":..., "residual":..., "tolerance":..., "pass":...}
std::string residual_line_json(const std::string& check, double residual, double tolerance);

std::string read_text_file(const std::string& path);

}  // namespace cartangeo
