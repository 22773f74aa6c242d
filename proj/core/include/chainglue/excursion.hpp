#ifndef CHAINGLUE_EXCURSION_HPP
#define CHAINGLUE_EXCURSION_HPP

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "chainglue/core.hpp"
#include "chainglue/lu.hpp"

namespace chainglue {

/// One of the two marked states of a chain.
enum class Mark : int { first = 0, second = 1 };

inline constexpr std::array<Mark, 2> kMarks{Mark::first, Mark::second};

inline constexpr Mark other(Mark m) { return m == Mark::first ? Mark::second : Mark::first; }
inline constexpr std::size_t slot(Mark m) { return static_cast<std::size_t>(m); }

/// Probabilities outside [-kProbabilityClamp, 1 + kProbabilityClamp] raise
/// NumericalDrift; values inside are clamped to [0, 1].
inline constexpr double kProbabilityClamp = 1e-10;
/// Reaching a mark with probability at most this counts as impossible when
/// conditioning occupation times on it; the complement of a probability
/// that should be exactly one is otherwise left as roundoff.
inline constexpr double kNullProbability = kProbabilityClamp;
/// u is treated as zero when it is at most this times the sup norm of its
/// solution column.
inline constexpr double kOccupationZero = 1e-12;

/// An irreducible chain with two distinct marked states. Every other state is
/// an interior state.
class MarkedChain {
 public:
  MarkedChain(ChainModel model, Index first, Index second);

  static MarkedChain by_labels(ChainModel model, std::string_view first, std::string_view second);

  const ChainModel& model() const { return model_; }
  const RateMatrix& rates() const { return model_.rates; }
  Index size() const { return model_.size(); }
  Index state(Mark m) const { return m == Mark::first ? first_ : second_; }
  bool is_marked(Index i) const { return i == first_ || i == second_; }
  /// Interior states in increasing index order.
  const std::vector<Index>& interior() const { return interior_; }

 private:
  ChainModel model_;
  Index first_;
  Index second_;
  std::vector<Index> interior_;
};

/// Q with both marked columns zeroed except on the diagonal. Throws
/// SingularQ0 if the result is singular.
Matrix build_q0(const MarkedChain& chain);

/// The factorized column-zeroed matrix of one marked chain. All excursion
/// systems of the chain share this left-hand side.
class ExcursionSolver {
 public:
  explicit ExcursionSolver(const MarkedChain& chain);

  const MarkedChain& chain() const { return chain_; }
  const Matrix& q0() const { return q0_; }
  Vector solve(const Vector& rhs) const { return lu_.solve(rhs); }
  Matrix solve(const Matrix& rhs) const { return lu_.solve(rhs); }

 private:
  MarkedChain chain_;
  Matrix q0_;
  DenseLu lu_;
};

/// Per-state probabilities of reaching one marked state before the other.
/// For a marked starting state this is the probability that an excursion
/// leaving it ends in the given mark.
struct ExcursionProbabilities {
  Vector to_first;
  Vector to_second;

  const Vector& to(Mark target) const { return target == Mark::first ? to_first : to_second; }
  double from_state(Index i, Mark target) const { return to(target)(i); }
};

/// Raw solution of the hitting system for one target, clamp-checked but not
/// derived by complement.
Vector hitting_probabilities(const ExcursionSolver& solver, Mark target);

/// Solves the first-mark system and takes the second as its complement.
ExcursionProbabilities excursion_probabilities(const ExcursionSolver& solver);
ExcursionProbabilities excursion_probabilities(const MarkedChain& chain);

/// Expected time in each interior state during an excursion, conditioned on
/// the excursion's start and end marks. Zero when the conditioning event has
/// probability zero.
struct OccupationTable {
  std::vector<Index> interior;
  std::array<std::array<Vector, 2>, 2> conditional;  // [from][to], indexed like interior

  double operator()(Mark from, Mark to, std::size_t k) const {
    return conditional[slot(from)][slot(to)](static_cast<Index>(k));
  }
};

/// One batched solve per target mark against the shared factorization.
OccupationTable occupation_expectations(const ExcursionSolver& solver,
                                        const ExcursionProbabilities& p);

/// Rates of leaving a marked state on an excursion of each end type.
struct Intensities {
  std::array<std::array<double, 2>, 2> rate{};  // [from][to]

  double operator()(Mark from, Mark to) const { return rate[slot(from)][slot(to)]; }
};

Intensities intensities(const MarkedChain& chain, const ExcursionProbabilities& p);

/// Interior stationary mass is first_mass * first + second_mass * second.
struct SideWeights {
  Vector first;
  Vector second;
};

SideWeights weight_vectors(const Intensities& q, const OccupationTable& occ);

/// Everything the gluing formulas need from one chain.
struct ExcursionProfile {
  Index first = 0;
  Index second = 0;
  std::vector<Index> interior;
  double exit_first = 0.0;
  double exit_second = 0.0;
  ExcursionProbabilities p;
  Intensities q;
  OccupationTable occ;
  SideWeights weights;

  double probability(Mark from, Mark to) const {
    return p.from_state(from == Mark::first ? first : second, to);
  }
};

ExcursionProfile excursion_profile(const MarkedChain& chain);

}  // namespace chainglue

#endif  // CHAINGLUE_EXCURSION_HPP
