#ifndef CHAINGLUE_SIMULATE_HPP
#define CHAINGLUE_SIMULATE_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "chainglue/compose.hpp"
#include "chainglue/core.hpp"
#include "chainglue/excursion.hpp"
#include "chainglue/rng.hpp"

namespace chainglue {

/// Jumps allowed inside a single excursion before SimulationError.
inline constexpr std::size_t kExcursionWatchdog = 10'000'000;

/// Per-state holding rates and cumulative jump tables of a generator.
class JumpSampler {
 public:
  explicit JumpSampler(const RateMatrix& rates);

  Index size() const { return static_cast<Index>(exit_.size()); }
  double exit_rate(Index i) const { return exit_[static_cast<std::size_t>(i)]; }
  double holding_time(Index i, Rng& rng) const { return rng.exponential(exit_rate(i)); }
  /// Next state, chosen with probability Q_ij / -Q_ii.
  Index next(Index from, Rng& rng) const;

 private:
  std::vector<double> exit_;
  std::vector<std::vector<std::pair<double, Index>>> cumulative_;
};

struct Trajectory {
  /// Entry time of each visited state; jump_times[0] == 0.
  std::vector<double> jump_times;
  std::vector<Index> states;
  std::uint64_t seed = 0;
};

/// n_jumps transitions starting from `start`. Reproducible given the seed.
Trajectory simulate_path(const ChainModel& model, Index start, std::size_t n_jumps,
                         std::uint64_t seed);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

struct OccupancyEstimate {
  Vector mean;
  Vector std_error;
  double total_time = 0.0;
};

/// Long-run time fractions of a trajectory, with batch-means standard errors
/// (the trajectory is cut into `batches` runs of equal jump count).
OccupancyEstimate occupancy_fractions(const Trajectory& path, Index n_states,
                                      std::size_t batches = 50);

/// Convenience wrapper: simulate from state 0 and estimate occupancy.
OccupancyEstimate estimate_stationary(const ChainModel& model, std::size_t n_jumps,
                                      std::uint64_t seed, std::size_t batches = 50);

/// Monte Carlo estimates of excursion probabilities and conditional
/// occupation times, from n excursions launched at each marked state.
struct ExcursionEstimate {
  std::size_t per_start = 0;
  std::array<std::array<std::size_t, 2>, 2> counts{};  // [from][to]
  std::array<std::array<Estimate, 2>, 2> p{};
  std::vector<Index> interior;
  std::array<std::array<Vector, 2>, 2> occ_mean;  // [from][to], indexed like interior
  std::array<std::array<Vector, 2>, 2> occ_error;
};

ExcursionEstimate empirical_excursion_stats(const MarkedChain& chain, std::size_t n_excursions,
                                            std::uint64_t seed);

enum class Side : char { shared = 'S', a = 'A', b = 'B' };

/// What the cycle simulator needs to know about a two-pair glue: the two
/// shared states, which source every other state came from, and how the
/// shared edges split between the sources.
struct GlueMarkers {
  Index first = 0;
  Index second = 0;
  std::vector<Side> side;
  /// Fraction of the first->second (second->first) rate contributed by A.
  double a_share_down = 0.0;
  double a_share_up = 0.0;
};

GlueMarkers make_markers(const GluedChain& glued);

/// One regeneration cycle: from an entry into the first shared state that
/// follows a visit to the second, up to the next such entry.
struct CycleStats {
  std::uint64_t xi_1a1 = 0;
  std::uint64_t xi_1b1 = 0;
  std::uint64_t xi_2a2 = 0;
  std::uint64_t xi_2b2 = 0;
  Side down_side = Side::a;  // source of the first->second excursion
  Side up_side = Side::a;    // source of the second->first excursion
  double tau = 0.0;
  Vector occupation;
};

/// Harvests n_cycles complete cycles; the segment before the first renewal
/// is discarded.
std::vector<CycleStats> regenerative_cycles(const GluedChain& glued, const GlueMarkers& markers,
                                            std::size_t n_cycles, std::uint64_t seed);

struct CycleSummary {
  std::size_t cycles = 0;
  Estimate xi_1a1, xi_1b1, xi_2a2, xi_2b2;
  Estimate tau;
  /// mean(X(i)) / mean(tau), with delta-method standard errors.
  Vector pi;
  Vector pi_error;
};

CycleSummary summarize_cycles(const std::vector<CycleStats>& cycles);

}  // namespace chainglue

#endif  // CHAINGLUE_SIMULATE_HPP
