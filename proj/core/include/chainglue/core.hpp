#ifndef CHAINGLUE_CORE_HPP
#define CHAINGLUE_CORE_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace chainglue {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative tolerance for the zero-row-sum invariant of a generator.
inline constexpr double kRowSumTolerance = 1e-12;

/// Dense transition rate matrix of a finite continuous-time Markov chain.
///
/// Construction does not check anything; use validate() or make_model() to
/// enforce the generator invariants (nonnegative off-diagonal entries, rows
/// summing to zero).
class RateMatrix {
 public:
  RateMatrix() = default;
  explicit RateMatrix(Matrix entries) : q_(std::move(entries)) {}

  /// Builds a generator from off-diagonal rates; the diagonal of the input is
  /// ignored and replaced by the negative row sum.
  static RateMatrix from_rates(const Matrix& off_diagonal);

  Index size() const { return q_.rows(); }
  double operator()(Index i, Index j) const { return q_(i, j); }
  double exit_rate(Index i) const { return -q_(i, i); }
  const Matrix& dense() const { return q_; }

  /// Largest absolute entry.
  double scale() const;
  /// Maximum absolute row sum.
  double inf_norm() const;

  /// Same off-diagonal rates with the diagonal reset to the exact negative
  /// off-diagonal row sum.
  RateMatrix with_exact_diagonal() const;

 private:
  Matrix q_;
};

/// A rate matrix together with one distinct label per state.
struct ChainModel {
  RateMatrix rates;
  std::vector<std::string> labels;

  Index size() const { return rates.size(); }
  std::optional<Index> find(std::string_view label) const;
};

/// Labels "1", "2", ..., "n".
std::vector<std::string> default_labels(Index n);

/// Checked constructor. Throws InvalidModel on any rate or label violation
/// other than reducibility, and resets the diagonal exactly. Empty labels are
/// replaced by default_labels().
ChainModel make_model(const Matrix& rates, std::vector<std::string> labels = {});

enum class Method { direct, glued_one, glued_two, parallel, simulated };

std::string_view to_string(Method m);

struct StationaryResult {
  Vector probabilities;
  Method method = Method::direct;

  Index size() const { return probabilities.size(); }
  double operator[](Index i) const { return probabilities(i); }
};

enum class ViolationKind {
  too_few_states,
  label_count,
  duplicate_label,
  non_finite,
  negative_rate,
  row_sum,
  reducible,
};

std::string_view to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  Index row = -1;
  Index col = -1;
  std::string message;
};

using ValidationReport = std::vector<Violation>;

/// Lists every violated invariant of the model. Never throws.
ValidationReport validate(const ChainModel& model);

/// True iff the digraph with an edge i->j for every positive off-diagonal
/// rate is strongly connected.
bool is_irreducible(const RateMatrix& rates);
bool is_irreducible(const ChainModel& model);

/// Throws InvalidModel or ReducibleChain unless validate() is clean.
void require_valid(const ChainModel& model);

/// ||pi^T Q||_inf.
double stationary_residual(const Vector& pi, const RateMatrix& rates);

/// Unique stationary distribution by normalization-row replacement and a
/// partially pivoted LU solve.
StationaryResult stationary_direct(const ChainModel& model);

}  // namespace chainglue

#endif  // CHAINGLUE_CORE_HPP
