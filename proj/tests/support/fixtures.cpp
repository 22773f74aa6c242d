#include "fixtures.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace chainglue::test {

namespace {

ChainModel from_rows(std::initializer_list<std::initializer_list<double>> rows,
                     std::vector<std::string> labels) {
  const auto n = static_cast<Index>(rows.size());
  Matrix q(n, n);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (const double x : row) q(i, j++) = x;
    ++i;
  }
  return make_model(q, std::move(labels));
}

}  // namespace

ChainModel example1_a() {
  return from_rows({{-6, 4, 2}, {1, -2, 1}, {2, 0, -2}}, {"0", "1", "2"});
}

ChainModel example1_b() {
  return from_rows({{-3, 1, 0, 2}, {3, -3, 0, 0}, {0, 4, -4, 0}, {0, 0, 1, -1}},
                   {"1", "2", "3", "4"});
}

ChainModel example2_a() {
  return from_rows({{-4, 0, 0, 0, 4},
                    {1, -1, 0, 0, 0},
                    {0, 0, -6, 4, 2},
                    {0, 2, 1, -3, 0},
                    {0, 0, 2, 0, -2}},
                   {"-2", "-1", "0", "1", "2"});
}

ChainModel example2_b() { return from_rows({{-2, 2}, {3, -3}}, {"1", "2"}); }

GlueSpec example1_spec() { return GlueSpec{{{1, 0}, {2, 1}}, {}}; }

GlueSpec example2_spec() { return GlueSpec{{{3, 0}, {4, 1}}, {}}; }

Index uniform_index(std::mt19937_64& gen, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(gen);
}

std::pair<Index, Index> distinct_pair(std::mt19937_64& gen, Index n) {
  const Index a = uniform_index(gen, 0, n - 1);
  Index b = uniform_index(gen, 0, n - 2);
  if (b >= a) ++b;
  return {a, b};
}

ChainModel random_chain(std::mt19937_64& gen, Index n, double density) {
  std::uniform_real_distribution<double> log_rate(std::log(0.1), std::log(10.0));
  std::bernoulli_distribution edge(density);
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), gen);

  Matrix q = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < order.size(); ++k) {
    q(order[k], order[(k + 1) % order.size()]) = std::exp(log_rate(gen));
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j && q(i, j) == 0.0 && edge(gen)) q(i, j) = std::exp(log_rate(gen));
    }
  }
  return make_model(RateMatrix::from_rates(q).dense());
}

Vector gauss_solve(Matrix a, Vector b) {
  const Index n = a.rows();
  for (Index c = 0; c < n; ++c) {
    Index piv = c;
    for (Index r = c + 1; r < n; ++r) {
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    }
    if (a(piv, c) == 0.0) throw std::runtime_error("gauss_solve: singular matrix");
    if (piv != c) {
      for (Index k = 0; k < n; ++k) std::swap(a(c, k), a(piv, k));
      std::swap(b(c), b(piv));
    }
    for (Index r = c + 1; r < n; ++r) {
      const double f = a(r, c) / a(c, c);
      if (f == 0.0) continue;
      for (Index k = c; k < n; ++k) a(r, k) -= f * a(c, k);
      b(r) -= f * b(c);
    }
  }
  Vector x(n);
  for (Index r = n - 1; r >= 0; --r) {
    double s = b(r);
    for (Index k = r + 1; k < n; ++k) s -= a(r, k) * x(k);
    x(r) = s / a(r, r);
  }
  return x;
}

Vector oracle_stationary(const Matrix& q) {
  const Index n = q.rows();
  Matrix a = q.transpose();
  Vector b = Vector::Zero(n);
  a.row(0).setOnes();
  b(0) = 1.0;
  return gauss_solve(a, b);
}

bool oracle_irreducible(const Matrix& q) {
  const Index n = q.rows();
  std::vector<std::vector<bool>> reach(static_cast<std::size_t>(n),
                                       std::vector<bool>(static_cast<std::size_t>(n), false));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) reach[i][j] = (i == j) || q(i, j) > 0.0;
  }
  for (Index k = 0; k < n; ++k) {
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
      }
    }
  }
  for (const auto& row : reach) {
    for (const bool r : row) {
      if (!r) return false;
    }
  }
  return true;
}

double max_abs_diff(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return INFINITY;
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

std::string data_dir() { return CHAINGLUE_TEST_DATA_DIR; }

}  // namespace chainglue::test
