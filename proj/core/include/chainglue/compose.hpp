#ifndef CHAINGLUE_COMPOSE_HPP
#define CHAINGLUE_COMPOSE_HPP

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "chainglue/core.hpp"
#include "chainglue/excursion.hpp"

namespace chainglue {

/// Relative tolerance of the cross-multiplied ratio equalities.
inline constexpr double kConditionATolerance = 1e-9;
/// Relative gap below which a bound counts as attained rather than strict.
inline constexpr double kStrictnessThreshold = 1e-12;

/// State `a` of chain A is identified with state `b` of chain B.
struct GluePair {
  Index a = 0;
  Index b = 0;
};

/// One or two identified state pairs. With two pairs, pairs[0] plays the
/// role of the first marked state and pairs[1] of the second.
struct GlueSpec {
  std::vector<GluePair> pairs;
  /// Optional output labels for the glued states; A-side labels otherwise.
  std::vector<std::string> labels;

  static GlueSpec by_labels(const ChainModel& a, const ChainModel& b,
                            const std::vector<std::pair<std::string, std::string>>& pairs);
};

/// Placement of source states in the glued chain: A's states keep their
/// order and come first, followed by B's non-glued states in B order.
struct GlueLayout {
  Index size = 0;
  std::vector<Index> from_a;
  std::vector<Index> from_b;
  std::vector<GluePair> pairs;
  std::vector<Index> a_interior;  // A indices not glued
  std::vector<Index> b_interior;  // B indices not glued

  Index shared(std::size_t k) const { return from_a[static_cast<std::size_t>(pairs[k].a)]; }
};

/// Throws InvalidGlueSpec on out-of-range, repeated, or wrongly counted pairs.
GlueLayout make_layout(Index a_size, Index b_size, const GlueSpec& spec);

struct GluedChain {
  ChainModel model;
  GlueLayout layout;
  /// Rates contributed to the shared edges, [0] first->second and
  /// [1] second->first. Only meaningful for two-pair glues.
  std::array<double, 2> a_shared{};
  std::array<double, 2> b_shared{};
};

GluedChain glue_two(const ChainModel& a, const ChainModel& b, const GlueSpec& spec);
GluedChain glue_one(const ChainModel& a, const ChainModel& b, const GlueSpec& spec);
/// Dispatches on the number of pairs.
GluedChain glue(const ChainModel& a, const ChainModel& b, const GlueSpec& spec);

StationaryResult stationary_glue_one(const StationaryResult& pa, const StationaryResult& pb,
                                     const GlueLayout& layout);

/// Cross-multiplied |n1 d2 - d1 n2| <= tol (n1 d2 + d1 n2).
bool ratios_equal(double n1, double d1, double n2, double d2, double tol = kConditionATolerance);

/// Both glued pairs have the same stationary ratio in A and in B.
bool check_condition_a(const StationaryResult& pa, const StationaryResult& pb,
                       const GlueLayout& layout, double tol = kConditionATolerance);

/// The two algebraic forms of the parallel-case normalizing constant.
std::pair<double, double> parallel_normalizers(const StationaryResult& pa,
                                               const StationaryResult& pb,
                                               const GlueLayout& layout);

/// Closed form for the parallel case. Throws ConditionAViolated otherwise.
StationaryResult stationary_parallel(const StationaryResult& pa, const StationaryResult& pb,
                                     const GlueLayout& layout, double tol = kConditionATolerance);

/// Stationary distribution of a two-pair glue from the excursion profiles of
/// A (marked at pairs[0].a, pairs[1].a) and B (at pairs[0].b, pairs[1].b).
StationaryResult stationary_glue_two(const ExcursionProfile& a, const ExcursionProfile& b,
                                     const GlueLayout& layout);

/// The full excursion route: profile both chains and combine.
StationaryResult stationary_pipeline(const ChainModel& a, const ChainModel& b,
                                     const GlueSpec& spec);

struct GluedWeights {
  SideWeights a;  // indexed like GlueLayout::a_interior
  SideWeights b;  // indexed like GlueLayout::b_interior
};

/// Weights recovered from the three stationary vectors when the parallel
/// condition fails. Throws ParallelCase if a denominator vanishes.
GluedWeights weights_from_pi(const StationaryResult& pi, const StationaryResult& pa,
                             const StationaryResult& pb, const GlueLayout& layout,
                             double tol = kConditionATolerance);

struct InteriorBound {
  Index state = 0;  // glued index
  char side = 'A';
  double ratio = 0.0;  // pi_i / pi^side_i
  double lower = 0.0;
  double upper = 0.0;
  bool strict_vs_first = false;   // ratio differs from the first-mark end
  bool strict_vs_second = false;  // ratio differs from the second-mark end
};

struct BoundsReport {
  bool condition_a = false;
  double glued_ratio = 0.0;  // pi_1 / pi_2
  double ratio_a = 0.0;
  double ratio_b = 0.0;
  bool glued_ratio_strict = false;
  std::vector<InteriorBound> interior;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Checks the interior sandwich bounds and the strict sandwich of
/// pi_1 / pi_2. When pipeline weights are given, the strictness pattern is
/// cross-checked against their positivity. Violations are reported, never
/// thrown.
BoundsReport bounds_report(const StationaryResult& pi, const StationaryResult& pa,
                           const StationaryResult& pb, const GlueLayout& layout,
                           const GluedWeights* pipeline = nullptr);

/// The three parallelism predicates, which are equivalent for valid input.
struct ParallelPredicates {
  bool sources_agree = false;  // pi^A ratio == pi^B ratio
  bool glued_matches_a = false;
  bool glued_matches_b = false;
};

ParallelPredicates parallel_predicates(const StationaryResult& pi, const StationaryResult& pa,
                                       const StationaryResult& pb, const GlueLayout& layout,
                                       double tol = kConditionATolerance);

}  // namespace chainglue

#endif  // CHAINGLUE_COMPOSE_HPP
