#include "cartangeo/lie_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cartangeo {

namespace {

constexpr double kRankTol = 1e-10;

Mat orthonormal_range(const Mat& M) {
  if (M.cols() == 0 || M.rows() == 0) return Mat(M.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  double cutoff = s.size() ? kRankTol * std::max(1.0, s(0)) : kRankTol;
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) ++rank;
  return svd.matrixU().leftCols(rank);
}

}  // namespace

Mat column_space(const Mat& M) { return orthonormal_range(M); }

Mat nullspace(const Mat& M) {
  if (M.rows() == 0) return Mat::Identity(M.cols(), M.cols());
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double cutoff = s.size() ? kRankTol * std::max(1.0, s(0)) : kRankTol;
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) ++rank;
  return svd.matrixV().rightCols(M.cols() - rank);
}

void HTypeSpec::validate() const {
  if (n <= 0 || m <= 0) throw std::invalid_argument("htype: n and m must be positive");
  if (static_cast<int>(gamma.size()) != m)
    throw std::invalid_argument("htype: expected m gamma matrices");
  for (const Mat& g : gamma) {
    if (g.rows() != n || g.cols() != n)
      throw std::invalid_argument("htype: gamma matrices must be n x n");
    if ((g + g.transpose()).cwiseAbs().maxCoeff() > 1e-14 * std::max(1.0, g.cwiseAbs().maxCoeff()))
      throw std::invalid_argument("htype: gamma matrices must be antisymmetric");
  }
}

void OscillatorSpec::validate() const {
  if (lambda.size() == 0) throw std::invalid_argument("oscillator: lambda must be nonempty");
  for (int j = 0; j < lambda.size(); ++j) {
    if (!(lambda(j) > 0)) throw std::invalid_argument("oscillator: lambda_j must be positive");
    if (j > 0 && lambda(j) < lambda(j - 1))
      throw std::invalid_argument("oscillator: lambda must be nondecreasing");
  }
}

LieAlgebraSpec::LieAlgebraSpec(int dim, std::vector<BracketTriple> triples,
                               std::vector<std::string> labels)
    : dim_(dim), labels_(std::move(labels)) {
  if (dim <= 0) throw std::invalid_argument("algebra dimension must be positive");
  if (labels_.empty()) {
    labels_.reserve(dim);
    for (int i = 0; i < dim; ++i) labels_.push_back("e_" + std::to_string(i + 1));
  }
  if (static_cast<int>(labels_.size()) != dim)
    throw std::invalid_argument("label count must equal dim");

  // Keep i < j entries only; completion by antisymmetry. Conflicting duplicates rejected.
  std::vector<double> acc;
  auto key = [&](int i, int j, int k) { return (static_cast<long>(i) * dim + j) * dim + k; };
  std::vector<std::pair<long, double>> seen;
  for (const auto& t : triples) {
    if (t.i < 0 || t.i >= dim || t.j < 0 || t.j >= dim || t.k < 0 || t.k >= dim)
      throw std::invalid_argument("structure constant index out of range");
    if (t.i == t.j) {
      if (t.value != 0.0) throw std::invalid_argument("antisymmetry violated: [e_i,e_i] != 0");
      continue;
    }
    int i = t.i, j = t.j;
    double v = t.value;
    if (i > j) {
      std::swap(i, j);
      v = -v;
    }
    long kk = key(i, j, t.k);
    bool merged = false;
    for (auto& [k0, v0] : seen) {
      if (k0 == kk) {
        if (std::abs(v0 - v) > 1e-14 * std::max(1.0, std::abs(v0)))
          throw std::invalid_argument("conflicting structure constants for the same (i,j,k)");
        merged = true;
        break;
      }
    }
    if (!merged && v != 0.0) seen.emplace_back(kk, v);
  }
  triples_.clear();
  for (auto& [kk, v] : seen) {
    int k = static_cast<int>(kk % dim);
    int j = static_cast<int>((kk / dim) % dim);
    int i = static_cast<int>(kk / dim / dim);
    triples_.push_back({i, j, k, v});
  }
  std::sort(triples_.begin(), triples_.end(), [](const auto& a, const auto& b) {
    return std::tie(a.i, a.j, a.k) < std::tie(b.i, b.j, b.k);
  });

  if (dim_ <= kDenseDimLimit) {
    dense_.assign(static_cast<size_t>(dim_) * dim_ * dim_, 0.0);
    for (const auto& t : triples_) {
      dense_[(static_cast<size_t>(t.i) * dim_ + t.j) * dim_ + t.k] = t.value;
      dense_[(static_cast<size_t>(t.j) * dim_ + t.i) * dim_ + t.k] = -t.value;
    }
  }

  compute_caches();

  if (jacobi_residual() > kJacobiTol)
    throw std::invalid_argument("structure constants violate the Jacobi identity");
}

double LieAlgebraSpec::c(int i, int j, int k) const {
  if (!dense_.empty())
    return dense_[(static_cast<size_t>(i) * dim_ + j) * dim_ + k];
  for (const auto& t : triples_) {
    if (t.i == i && t.j == j && t.k == k) return t.value;
    if (t.i == j && t.j == i && t.k == k) return -t.value;
  }
  return 0.0;
}

Vec LieAlgebraSpec::bracket(const Vec& x, const Vec& y) const {
  if (x.size() != dim_ || y.size() != dim_)
    throw std::invalid_argument("bracket: vector length must equal dim");
  Vec out = Vec::Zero(dim_);
  for (const auto& t : triples_) {
    out(t.k) += t.value * (x(t.i) * y(t.j) - x(t.j) * y(t.i));
  }
  return out;
}

Mat LieAlgebraSpec::ad(const Vec& u) const {
  if (u.size() != dim_) throw std::invalid_argument("ad: vector length must equal dim");
  Mat out = Mat::Zero(dim_, dim_);
  for (const auto& t : triples_) {
    out(t.k, t.j) += t.value * u(t.i);
    out(t.k, t.i) -= t.value * u(t.j);
  }
  return out;
}

double LieAlgebraSpec::jacobi_residual() const {
  double r = 0.0;
  Mat basis = Mat::Identity(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j) {
      Vec bij = bracket(basis.col(i), basis.col(j));
      for (int l = j + 1; l < dim_; ++l) {
        Vec s = bracket(bij, basis.col(l)) +
                bracket(bracket(basis.col(j), basis.col(l)), basis.col(i)) +
                bracket(bracket(basis.col(l), basis.col(i)), basis.col(j));
        r = std::max(r, s.cwiseAbs().maxCoeff());
      }
    }
  return r;
}

void LieAlgebraSpec::compute_caches() {
  // Derived ideal: column space of all bracket images.
  Mat images(dim_, std::max<size_t>(triples_.size(), 1));
  images.setZero();
  for (size_t t = 0; t < triples_.size(); ++t) {
    images(triples_[t].k, static_cast<int>(t)) = triples_[t].value;
  }
  derived_ideal_ = column_space(images);

  // Center: common nullspace of all ad_{e_i}.
  Mat stacked(dim_ * dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    Vec ei = Vec::Zero(dim_);
    ei(i) = 1.0;
    stacked.middleRows(i * dim_, dim_) = ad(ei);
  }
  center_ = nullspace(stacked);

  // Lower central series.
  Mat g_k = Mat::Identity(dim_, dim_);
  int cls = 0;
  solvable_ = false;
  for (int iter = 0; iter <= dim_ + 1; ++iter) {
    if (g_k.cols() == 0) {
      nilpotency_class_ = cls;
      break;
    }
    Mat next(dim_, dim_ * g_k.cols());
    for (int i = 0; i < dim_; ++i) {
      Vec ei = Vec::Zero(dim_);
      ei(i) = 1.0;
      next.middleCols(i * g_k.cols(), g_k.cols()) = ad(ei) * g_k;
    }
    Mat g_next = column_space(next);
    if (g_next.cols() == g_k.cols()) {
      nilpotency_class_ = std::nullopt;  // stationary nonzero: not nilpotent
      break;
    }
    g_k = g_next;
    ++cls;
  }

  // Derived series for solvability.
  Mat d_k = Mat::Identity(dim_, dim_);
  for (int iter = 0; iter <= dim_ + 1; ++iter) {
    if (d_k.cols() == 0) {
      solvable_ = true;
      break;
    }
    Mat next(dim_, d_k.cols() * d_k.cols());
    for (int a = 0; a < d_k.cols(); ++a)
      for (int b = 0; b < d_k.cols(); ++b)
        next.col(a * d_k.cols() + b) = bracket(d_k.col(a), d_k.col(b));
    Mat d_next = column_space(next);
    if (d_next.cols() == d_k.cols()) break;
    d_k = d_next;
  }
}

LieAlgebraSpec make_heisenberg(int n) {
  if (n <= 0) throw std::invalid_argument("heisenberg: n must be positive");
  int d = 2 * n + 1;
  std::vector<BracketTriple> triples;
  for (int j = 0; j < n; ++j) triples.push_back({j, n + j, 2 * n, 1.0});
  LieAlgebraSpec alg(d, std::move(triples));
  alg.heisenberg_n_ = n;
  return alg;
}

LieAlgebraSpec make_htype(const HTypeSpec& spec) {
  spec.validate();
  int d = spec.n + spec.m;
  std::vector<BracketTriple> triples;
  for (int q = 0; q < spec.m; ++q)
    for (int j = 0; j < spec.n; ++j)
      for (int l = j + 1; l < spec.n; ++l) {
        double v = -spec.gamma[q](j, l);  // C[j][l][n+q] = -gamma[q](j,l)
        if (v != 0.0) triples.push_back({j, l, spec.n + q, v});
      }
  std::vector<std::string> labels;
  for (int j = 1; j <= spec.n; ++j) labels.push_back("X_" + std::to_string(j));
  for (int q = 1; q <= spec.m; ++q) labels.push_back("Z_" + std::to_string(q));
  return LieAlgebraSpec(d, std::move(triples), std::move(labels));
}

LieAlgebraSpec make_oscillator(const OscillatorSpec& spec) {
  spec.validate();
  int n = static_cast<int>(spec.lambda.size());
  int d = 2 * n + 2;
  // index 0 = e_{-1}, 1 = e_0, 1+j = e_j, 1+n+j = e_{n+j} for j = 1..n
  std::vector<BracketTriple> triples;
  for (int j = 1; j <= n; ++j) {
    triples.push_back({1 + j, 1 + n + j, 1, 1.0});
    triples.push_back({0, 1 + j, 1 + n + j, spec.lambda(j - 1)});
    triples.push_back({0, 1 + n + j, 1 + j, -spec.lambda(j - 1)});
  }
  std::vector<std::string> labels;
  labels.push_back("e_{-1}");
  labels.push_back("e_0");
  for (int j = 1; j <= 2 * n; ++j) labels.push_back("e_" + std::to_string(j));
  return LieAlgebraSpec(d, std::move(triples), std::move(labels));
}

LieAlgebraSpec make_semidirect(const Mat& D) {
  if (D.rows() != D.cols() || D.rows() == 0)
    throw std::invalid_argument("semidirect: D must be square and nonempty");
  int n = static_cast<int>(D.rows());
  std::vector<BracketTriple> triples;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (D(j, i) != 0.0) triples.push_back({0, 1 + i, 1 + j, D(j, i)});
  return LieAlgebraSpec(n + 1, std::move(triples));
}

LieAlgebraSpec make_abelian(int dim) { return LieAlgebraSpec(dim, {}); }

}  // namespace cartangeo
