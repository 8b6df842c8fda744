#include "cartangeo/io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cartangeo {

namespace {

using nlohmann::json;

json parse_json(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw std::invalid_argument(std::string(what) + ": malformed JSON");
  return j;
}

Mat json_to_matrix(const json& rows, const char* what) {
  if (!rows.is_array() || rows.empty())
    throw std::invalid_argument(std::string(what) + ": expected a non-empty array of rows");
  const int r = static_cast<int>(rows.size());
  const int c = static_cast<int>(rows[0].size());
  Mat M(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c)
      throw std::invalid_argument(std::string(what) + ": ragged rows");
    for (int j = 0; j < c; ++j) M(i, j) = rows[i][j].get<double>();
  }
  return M;
}

int index1(const json& j, const char* field, int limit, const char* what) {
  if (!j.contains(field)) throw std::invalid_argument(std::string(what) + ": missing " + field);
  int v = j[field].get<int>();
  if (v < 1 || v > limit)
    throw std::invalid_argument(std::string(what) + ": index " + field + " out of range");
  return v - 1;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

AlgebraInput parse_algebra_spec(const std::string& text) {
  json j = parse_json(text, "algebra spec");
  if (!j.contains("kind")) throw std::invalid_argument("algebra spec: missing kind");
  std::string kind = j["kind"].get<std::string>();

  if (kind == "heisenberg") {
    int n = j.at("n").get<int>();
    return {make_heisenberg(n), std::nullopt, kind};
  }
  if (kind == "oscillator") {
    OscillatorSpec os;
    auto lam = j.at("lambda");
    os.lambda = Vec(lam.size());
    for (size_t i = 0; i < lam.size(); ++i) os.lambda(static_cast<int>(i)) = lam[i].get<double>();
    return {make_oscillator(os), std::nullopt, kind};
  }
  if (kind == "semidirect") {
    Mat D = json_to_matrix(j.at("D"), "semidirect D");
    return {make_semidirect(D), std::nullopt, kind};
  }
  if (kind == "htype") {
    HTypeSpec hs;
    hs.n = j.at("n").get<int>();
    hs.m = j.at("m").get<int>();
    hs.gamma.assign(hs.m, Mat::Zero(hs.n, hs.n));
    std::vector<Mat> seen(hs.m, Mat::Zero(hs.n, hs.n));
    for (const auto& e : j.at("gamma")) {
      int q = index1(e, "q", hs.m, "htype gamma");
      int a = index1(e, "j", hs.n, "htype gamma");
      int b = index1(e, "l", hs.n, "htype gamma");
      double v = e.at("value").get<double>();
      if (a == b && v != 0.0)
        throw std::invalid_argument("htype gamma: diagonal entries must vanish");
      if (seen[q](a, b) != 0.0 && std::abs(hs.gamma[q](a, b) - v) > 1e-14)
        throw std::invalid_argument("htype gamma: conflicting duplicate entry");
      hs.gamma[q](a, b) = v;
      hs.gamma[q](b, a) = -v;  // antisymmetric completion
      seen[q](a, b) = seen[q](b, a) = 1.0;
    }
    return {make_htype(hs), hs, kind};
  }
  if (kind == "raw") {
    int dim = j.at("dim").get<int>();
    std::vector<BracketTriple> triples;
    if (j.contains("triples"))
      for (const auto& e : j["triples"]) {
        BracketTriple t;
        t.i = index1(e, "i", dim, "raw triple");
        t.j = index1(e, "j", dim, "raw triple");
        t.k = index1(e, "k", dim, "raw triple");
        t.value = e.at("value").get<double>();
        triples.push_back(t);
      }
    return {LieAlgebraSpec(dim, std::move(triples)), std::nullopt, kind};
  }
  throw std::invalid_argument("algebra spec: unknown kind '" + kind + "'");
}

AlgebraInput load_algebra_spec(const std::string& path) {
  return parse_algebra_spec(read_text_file(path));
}

Mat parse_metric(const std::string& text) {
  json j = parse_json(text, "metric");
  return json_to_matrix(j.at("matrix"), "metric");
}

Mat load_metric(const std::string& path) { return parse_metric(read_text_file(path)); }

TriTensor parse_tritensor(const std::string& text) {
  json j = parse_json(text, "tensor");
  int dim = j.at("dim").get<int>();
  TriTensor t(dim);
  TriTensor filled(dim);
  for (const auto& e : j.at("entries")) {
    int a = index1(e, "i", dim, "tensor entry");
    int b = index1(e, "j", dim, "tensor entry");
    int c = index1(e, "k", dim, "tensor entry");
    double v = e.at("value").get<double>();
    const int idx[3] = {a, b, c};
    int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (auto& p : perms) {
      int i = idx[p[0]], jj = idx[p[1]], k = idx[p[2]];
      if (filled.at(i, jj, k) != 0.0 && std::abs(t.at(i, jj, k) - v) > 1e-14)
        throw std::invalid_argument("tensor: conflicting duplicate entry");
      t.at(i, jj, k) = v;
      filled.at(i, jj, k) = 1.0;
    }
  }
  return t;
}

TriTensor load_tritensor(const std::string& path) { return parse_tritensor(read_text_file(path)); }

Mat parse_points_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ls, cell, ',')) {
      try {
        size_t pos = 0;
        double v = std::stod(cell, &pos);
        while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
        if (pos != cell.size()) throw std::invalid_argument("trailing");
        row.push_back(v);
      } catch (...) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw std::invalid_argument("points csv: non-numeric cell");
    }
    first = false;
    if (!rows.empty() && rows.back().size() != row.size())
      throw std::invalid_argument("points csv: ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("points csv: no data rows");
  Mat M(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < rows[r].size(); ++c)
      M(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
  return M;
}

Mat load_points_csv(const std::string& path) { return parse_points_csv(read_text_file(path)); }

ParametricFamily parse_family_table(const std::string& text) {
  json j = parse_json(text, "family table");
  ParametricFamily fam;
  fam.name = j.value("name", std::string("table"));
  fam.theta_dim = j.at("theta_dim").get<int>();
  auto atoms_json = j.at("atoms");
  Vec atoms(atoms_json.size());
  for (size_t i = 0; i < atoms_json.size(); ++i)
    atoms(static_cast<int>(i)) = atoms_json[i].get<double>();
  fam.space = DiscreteSpace{atoms};

  // logp[a] is a list of monomials {powers (length theta_dim), coeff}
  struct Monomial {
    std::vector<int> powers;
    double coeff;
  };
  auto logp_json = j.at("logp");
  if (logp_json.size() != atoms_json.size())
    throw std::invalid_argument("family table: one logp polynomial per atom required");
  auto table = std::make_shared<std::vector<std::vector<Monomial>>>();
  for (const auto& poly : logp_json) {
    std::vector<Monomial> ms;
    for (const auto& mono : poly) {
      Monomial m;
      m.coeff = mono.at("coeff").get<double>();
      for (const auto& p : mono.at("powers")) m.powers.push_back(p.get<int>());
      if (static_cast<int>(m.powers.size()) != fam.theta_dim)
        throw std::invalid_argument("family table: powers length must equal theta_dim");
      ms.push_back(std::move(m));
    }
    table->push_back(std::move(ms));
  }
  Vec atoms_copy = atoms;
  auto atom_index = [atoms_copy](double x) {
    for (int i = 0; i < atoms_copy.size(); ++i)
      if (std::abs(atoms_copy(i) - x) < 1e-12) return i;
    throw std::invalid_argument("family table: x is not an atom");
  };
  fam.log_density = [table, atom_index](double x, const Vec& t) {
    double v = 0.0;
    for (const auto& m : (*table)[atom_index(x)]) {
      double term = m.coeff;
      for (size_t i = 0; i < m.powers.size(); ++i) term *= std::pow(t(static_cast<int>(i)), m.powers[i]);
      v += term;
    }
    return v;
  };
  fam.log_density_grad = [table, atom_index](double x, const Vec& t) {
    Vec g = Vec::Zero(t.size());
    for (const auto& m : (*table)[atom_index(x)]) {
      for (int d = 0; d < t.size(); ++d) {
        if (m.powers[d] == 0) continue;
        double term = m.coeff * m.powers[d];
        for (int i = 0; i < t.size(); ++i) {
          int p = m.powers[i] - (i == d ? 1 : 0);
          term *= std::pow(t(i), p);
        }
        g(d) += term;
      }
    }
    return g;
  };
  fam.log_density_hess = [table, atom_index](double x, const Vec& t) {
    Mat h = Mat::Zero(t.size(), t.size());
    for (const auto& m : (*table)[atom_index(x)]) {
      for (int a = 0; a < t.size(); ++a)
        for (int b = 0; b < t.size(); ++b) {
          double factor = a == b ? m.powers[a] * (m.powers[a] - 1.0)
                                 : m.powers[a] * static_cast<double>(m.powers[b]);
          if (factor == 0.0) continue;
          double term = m.coeff * factor;
          for (int i = 0; i < t.size(); ++i) {
            int p = m.powers[i];
            if (i == a) --p;
            if (i == b) --p;
            term *= std::pow(t(i), p);
          }
          h(a, b) += term;
        }
    }
    return h;
  };
  if (j.contains("theta_lo")) {
    fam.theta_lo = Vec(fam.theta_dim);
    fam.theta_hi = Vec(fam.theta_dim);
    for (int i = 0; i < fam.theta_dim; ++i) {
      fam.theta_lo(i) = j["theta_lo"][i].get<double>();
      fam.theta_hi(i) = j["theta_hi"][i].get<double>();
    }
  } else {
    fam.theta_lo = Vec::Constant(fam.theta_dim, -1e300);
    fam.theta_hi = Vec::Constant(fam.theta_dim, 1e300);
  }
  return fam;
}

ParametricFamily load_family_table(const std::string& path) {
  return parse_family_table(read_text_file(path));
}

std::string check_line_json(const CheckLine& line) {
  json j;
  j["name"] = line.name;
  j["paper_anchor"] = line.anchor;
  j["residual"] = line.residual;
  j["tolerance"] = line.tolerance;
  j["pass"] = line.pass;
  return j.dump();
}

std::string residual_line_json(const std::string& check, double residual, double tolerance) {
  json j;
  j["check"] = check;
  j["residual"] = residual;
  j["tolerance"] = tolerance;
  j["pass"] = residual <= tolerance;
  return j.dump();
}

}  // namespace cartangeo
