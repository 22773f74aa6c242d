#include "chainglue/core.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <unordered_set>

#include "chainglue/errors.hpp"
#include "chainglue/lu.hpp"

namespace chainglue {

namespace {

std::string entry_name(const ChainModel& model, Index i, Index j) {
  auto label = [&](Index k) {
    return k < static_cast<Index>(model.labels.size()) ? model.labels[k] : std::to_string(k);
  };
  return "(" + label(i) + " -> " + label(j) + ")";
}

// Breadth-first reachability from state 0, following edges forward or backward.
std::vector<bool> reachable_from_first(const Matrix& q, bool reverse) {
  const Index n = q.rows();
  std::vector<bool> seen(n, false);
  std::deque<Index> queue{0};
  seen[0] = true;
  while (!queue.empty()) {
    const Index i = queue.front();
    queue.pop_front();
    for (Index j = 0; j < n; ++j) {
      const double rate = reverse ? q(j, i) : q(i, j);
      if (j != i && !seen[j] && rate > 0.0) {
        seen[j] = true;
        queue.push_back(j);
      }
    }
  }
  return seen;
}

}  // namespace

RateMatrix RateMatrix::from_rates(const Matrix& off_diagonal) {
  Matrix q = off_diagonal;
  for (Index i = 0; i < q.rows(); ++i) {
    q(i, i) = 0.0;
    q(i, i) = -q.row(i).sum();
  }
  return RateMatrix(std::move(q));
}

double RateMatrix::scale() const { return q_.size() == 0 ? 0.0 : q_.cwiseAbs().maxCoeff(); }

double RateMatrix::inf_norm() const {
  return q_.size() == 0 ? 0.0 : q_.cwiseAbs().rowwise().sum().maxCoeff();
}

RateMatrix RateMatrix::with_exact_diagonal() const { return from_rates(q_); }

std::optional<Index> ChainModel::find(std::string_view label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) return std::nullopt;
  return static_cast<Index>(it - labels.begin());
}

std::vector<std::string> default_labels(Index n) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Index i = 1; i <= n; ++i) out.push_back(std::to_string(i));
  return out;
}

ChainModel make_model(const Matrix& rates, std::vector<std::string> labels) {
  if (labels.empty()) labels = default_labels(rates.rows());
  ChainModel model{RateMatrix(rates), std::move(labels)};
  if (rates.rows() != rates.cols()) {
    throw InvalidModel("rate matrix must be square");
  }
  for (const auto& v : validate(model)) {
    if (v.kind != ViolationKind::reducible) throw InvalidModel(v.message);
  }
  model.rates = model.rates.with_exact_diagonal();
  return model;
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::direct: return "direct";
    case Method::glued_one: return "glued_one";
    case Method::glued_two: return "glued_two";
    case Method::parallel: return "parallel";
    case Method::simulated: return "simulated";
  }
  return "unknown";
}

std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::too_few_states: return "too_few_states";
    case ViolationKind::label_count: return "label_count";
    case ViolationKind::duplicate_label: return "duplicate_label";
    case ViolationKind::non_finite: return "non_finite";
    case ViolationKind::negative_rate: return "negative_rate";
    case ViolationKind::row_sum: return "row_sum";
    case ViolationKind::reducible: return "reducible";
  }
  return "unknown";
}

ValidationReport validate(const ChainModel& model) {
  ValidationReport report;
  const Matrix& q = model.rates.dense();
  const Index n = q.rows();

  if (q.rows() != q.cols()) {
    report.push_back({ViolationKind::too_few_states, -1, -1, "rate matrix is not square"});
    return report;
  }
  if (n < 2) {
    report.push_back({ViolationKind::too_few_states, -1, -1,
                      "chain has " + std::to_string(n) + " states; at least 2 required"});
  }
  if (static_cast<Index>(model.labels.size()) != n) {
    report.push_back({ViolationKind::label_count, -1, -1,
                      "expected " + std::to_string(n) + " labels, got " +
                          std::to_string(model.labels.size())});
  }
  std::unordered_set<std::string> seen;
  for (const auto& label : model.labels) {
    if (!seen.insert(label).second) {
      report.push_back({ViolationKind::duplicate_label, -1, -1, "duplicate state label '" + label + "'"});
    }
  }

  bool finite = true;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (!std::isfinite(q(i, j))) {
        finite = false;
        report.push_back({ViolationKind::non_finite, i, j,
                          "non-finite rate at " + entry_name(model, i, j)});
      } else if (i != j && q(i, j) < 0.0) {
        std::ostringstream msg;
        msg << "negative rate " << q(i, j) << " at " << entry_name(model, i, j);
        report.push_back({ViolationKind::negative_rate, i, j, msg.str()});
      }
    }
  }
  if (!finite) return report;

  const double tol = kRowSumTolerance * model.rates.scale();
  for (Index i = 0; i < n; ++i) {
    const double sum = q.row(i).sum();
    if (std::abs(sum) > tol) {
      std::ostringstream msg;
      msg << "row " << (i < static_cast<Index>(model.labels.size()) ? model.labels[i] : std::to_string(i))
          << " sums to " << sum << " (tolerance " << tol << ")";
      report.push_back({ViolationKind::row_sum, i, -1, msg.str()});
    }
  }

  if (n >= 1 && !is_irreducible(model.rates)) {
    report.push_back({ViolationKind::reducible, -1, -1,
                      "chain is reducible: positive-rate digraph is not strongly connected"});
  }
  return report;
}

bool is_irreducible(const RateMatrix& rates) {
  const Matrix& q = rates.dense();
  if (q.rows() == 0) return false;
  const auto forward = reachable_from_first(q, false);
  const auto backward = reachable_from_first(q, true);
  for (Index i = 0; i < q.rows(); ++i) {
    if (!forward[i] || !backward[i]) return false;
  }
  return true;
}

bool is_irreducible(const ChainModel& model) { return is_irreducible(model.rates); }

void require_valid(const ChainModel& model) {
  const auto report = validate(model);
  for (const auto& v : report) {
    if (v.kind != ViolationKind::reducible) throw InvalidModel(v.message);
  }
  if (!report.empty()) throw ReducibleChain(report.front().message);
}

double stationary_residual(const Vector& pi, const RateMatrix& rates) {
  return (rates.dense().transpose() * pi).cwiseAbs().maxCoeff();
}

StationaryResult stationary_direct(const ChainModel& model) {
  require_valid(model);
  const RateMatrix q = model.rates.with_exact_diagonal();
  const Index n = q.size();

  // pi^T Q = 0 is Q^T pi = 0; the last balance equation is redundant and is
  // replaced by sum(pi) = 1.
  Matrix system = q.dense().transpose();
  system.row(n - 1).setOnes();
  Vector rhs = Vector::Zero(n);
  rhs(n - 1) = 1.0;

  Vector pi = DenseLu(system).solve(rhs);
  if (!pi.allFinite() || (pi.array() <= 0.0).any()) {
    throw SingularSystem("direct stationary solve produced a non-positive entry");
  }
  pi /= pi.sum();
  return {std::move(pi), Method::direct};
}

}  // namespace chainglue
