#include "chainglue/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chainglue/errors.hpp"

namespace chainglue {

namespace {

Estimate mean_and_error(double sum, double sum_sq, std::size_t n) {
  Estimate e;
  if (n == 0) return e;
  const double dn = static_cast<double>(n);
  e.mean = sum / dn;
  if (n > 1) {
    const double var = std::max(0.0, (sum_sq - dn * e.mean * e.mean) / (dn - 1.0));
    e.std_error = std::sqrt(var / dn);
  }
  return e;
}

}  // namespace

JumpSampler::JumpSampler(const RateMatrix& rates) {
  const Index n = rates.size();
  exit_.resize(static_cast<std::size_t>(n));
  cumulative_.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    double total = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (j != i && rates(i, j) > 0.0) {
        total += rates(i, j);
        cumulative_[i].emplace_back(total, j);
      }
    }
    exit_[i] = total;
  }
}

Index JumpSampler::next(Index from, Rng& rng) const {
  const auto& table = cumulative_[static_cast<std::size_t>(from)];
  if (table.empty()) throw SimulationError("state has no outgoing transitions");
  const double u = rng.uniform() * exit_[static_cast<std::size_t>(from)];
  auto it = std::upper_bound(table.begin(), table.end(), u,
                             [](double value, const auto& entry) { return value < entry.first; });
  if (it == table.end()) --it;
  return it->second;
}

Trajectory simulate_path(const ChainModel& model, Index start, std::size_t n_jumps,
                         std::uint64_t seed) {
  require_valid(model);
  if (start < 0 || start >= model.size()) throw InvalidModel("start state out of range");
  const JumpSampler sampler(model.rates.with_exact_diagonal());
  Rng rng(seed);
  Trajectory path;
  path.seed = seed;
  path.jump_times.reserve(n_jumps + 1);
  path.states.reserve(n_jumps + 1);
  path.jump_times.push_back(0.0);
  path.states.push_back(start);
  double t = 0.0;
  Index state = start;
  for (std::size_t k = 0; k < n_jumps; ++k) {
    t += sampler.holding_time(state, rng);
    state = sampler.next(state, rng);
    path.jump_times.push_back(t);
    path.states.push_back(state);
  }
  return path;
}

OccupancyEstimate occupancy_fractions(const Trajectory& path, Index n_states, std::size_t batches) {
  OccupancyEstimate out;
  out.mean = Vector::Zero(n_states);
  out.std_error = Vector::Zero(n_states);
  const std::size_t jumps = path.jump_times.size() - 1;
  if (jumps == 0) return out;
  batches = std::clamp<std::size_t>(batches, 1, jumps);

  Matrix batch_time = Matrix::Zero(n_states, static_cast<Index>(batches));
  Vector batch_length = Vector::Zero(static_cast<Index>(batches));
  for (std::size_t k = 0; k < jumps; ++k) {
    const auto b = static_cast<Index>(k * batches / jumps);
    const double h = path.jump_times[k + 1] - path.jump_times[k];
    batch_time(path.states[k], b) += h;
    batch_length(b) += h;
  }
  out.total_time = batch_length.sum();
  out.mean = batch_time.rowwise().sum() / out.total_time;
  if (batches > 1) {
    const double mean_length = out.total_time / static_cast<double>(batches);
    const double nb = static_cast<double>(batches);
    for (Index i = 0; i < n_states; ++i) {
      const Vector resid = batch_time.row(i).transpose() - out.mean(i) * batch_length;
      out.std_error(i) = std::sqrt(resid.squaredNorm() / (nb * (nb - 1.0))) / mean_length;
    }
  }
  return out;
}

OccupancyEstimate estimate_stationary(const ChainModel& model, std::size_t n_jumps,
                                      std::uint64_t seed, std::size_t batches) {
  return occupancy_fractions(simulate_path(model, 0, n_jumps, seed), model.size(), batches);
}

ExcursionEstimate empirical_excursion_stats(const MarkedChain& chain, std::size_t n_excursions,
                                            std::uint64_t seed) {
  const JumpSampler sampler(chain.rates());
  const auto& interior = chain.interior();
  const auto m = static_cast<Index>(interior.size());
  std::vector<Index> position(static_cast<std::size_t>(chain.size()), -1);
  for (Index c = 0; c < m; ++c) position[interior[static_cast<std::size_t>(c)]] = c;

  ExcursionEstimate out;
  out.per_start = n_excursions;
  out.interior = interior;
  std::array<std::array<Vector, 2>, 2> sum, sum_sq;
  for (std::size_t f = 0; f < 2; ++f) {
    for (std::size_t t = 0; t < 2; ++t) {
      sum[f][t] = sum_sq[f][t] = Vector::Zero(m);
    }
  }

  const Rng base(seed);
  Vector chi = Vector::Zero(m);
  for (const Mark from : kMarks) {
    Rng rng = base.split(slot(from));
    for (std::size_t e = 0; e < n_excursions; ++e) {
      chi.setZero();
      Index state = sampler.next(chain.state(from), rng);
      std::size_t steps = 0;
      while (!chain.is_marked(state)) {
        chi(position[state]) += sampler.holding_time(state, rng);
        state = sampler.next(state, rng);
        if (++steps > kExcursionWatchdog) {
          throw SimulationError("excursion exceeded the jump watchdog");
        }
      }
      const Mark to = state == chain.state(Mark::first) ? Mark::first : Mark::second;
      ++out.counts[slot(from)][slot(to)];
      sum[slot(from)][slot(to)] += chi;
      sum_sq[slot(from)][slot(to)] += chi.cwiseAbs2();
    }
  }

  const double n = static_cast<double>(n_excursions);
  for (std::size_t f = 0; f < 2; ++f) {
    for (std::size_t t = 0; t < 2; ++t) {
      const std::size_t count = out.counts[f][t];
      const double p = n > 0 ? static_cast<double>(count) / n : 0.0;
      out.p[f][t] = {p, n > 0 ? std::sqrt(p * (1.0 - p) / n) : 0.0};
      out.occ_mean[f][t] = Vector::Zero(m);
      out.occ_error[f][t] = Vector::Zero(m);
      for (Index k = 0; k < m; ++k) {
        const Estimate est = mean_and_error(sum[f][t](k), sum_sq[f][t](k), count);
        out.occ_mean[f][t](k) = est.mean;
        out.occ_error[f][t](k) = est.std_error;
      }
    }
  }
  return out;
}

GlueMarkers make_markers(const GluedChain& glued) {
  const GlueLayout& layout = glued.layout;
  if (layout.pairs.size() != 2) throw InvalidGlueSpec("cycle markers need a two-pair glue");
  GlueMarkers m;
  m.first = layout.shared(0);
  m.second = layout.shared(1);
  m.side.assign(static_cast<std::size_t>(layout.size), Side::shared);
  for (const Index i : layout.a_interior) m.side[layout.from_a[i]] = Side::a;
  for (const Index j : layout.b_interior) m.side[layout.from_b[j]] = Side::b;
  auto share = [](double a, double b) { return a + b > 0.0 ? a / (a + b) : 0.0; };
  m.a_share_down = share(glued.a_shared[0], glued.b_shared[0]);
  m.a_share_up = share(glued.a_shared[1], glued.b_shared[1]);
  return m;
}

std::vector<CycleStats> regenerative_cycles(const GluedChain& glued, const GlueMarkers& markers,
                                            std::size_t n_cycles, std::uint64_t seed) {
  require_valid(glued.model);
  const JumpSampler sampler(glued.model.rates);
  const Index n = glued.model.size();
  Rng rng(seed);

  std::vector<CycleStats> cycles;
  cycles.reserve(n_cycles);
  CycleStats current;
  current.occupation = Vector::Zero(n);
  bool started = false;
  Index at = markers.first;

  while (cycles.size() < n_cycles) {
    const double hold = sampler.holding_time(at, rng);
    if (started) {
      current.tau += hold;
      current.occupation(at) += hold;
    }
    const Index target = markers.second == at ? markers.first : markers.second;
    Index state = sampler.next(at, rng);
    Side side = markers.side[static_cast<std::size_t>(state)];
    if (state == target) {
      const double share = at == markers.first ? markers.a_share_down : markers.a_share_up;
      side = rng.uniform() < share ? Side::a : Side::b;
    }
    std::size_t steps = 0;
    while (state != markers.first && state != markers.second) {
      const double h = sampler.holding_time(state, rng);
      if (started) {
        current.tau += h;
        current.occupation(state) += h;
      }
      state = sampler.next(state, rng);
      if (++steps > kExcursionWatchdog) throw SimulationError("excursion exceeded the jump watchdog");
    }

    if (started) {
      if (state == at) {
        const bool from_first = at == markers.first;
        auto& counter = from_first ? (side == Side::a ? current.xi_1a1 : current.xi_1b1)
                                   : (side == Side::a ? current.xi_2a2 : current.xi_2b2);
        ++counter;
      } else if (at == markers.first) {
        current.down_side = side;
      } else {
        current.up_side = side;
      }
    }
    if (at == markers.second && state == markers.first) {
      if (started) {
        cycles.push_back(current);
        current = CycleStats{};
        current.occupation = Vector::Zero(n);
      }
      started = true;
    }
    at = state;
  }
  return cycles;
}

CycleSummary summarize_cycles(const std::vector<CycleStats>& cycles) {
  CycleSummary s;
  s.cycles = cycles.size();
  if (cycles.empty()) return s;
  auto stat = [&](auto field) {
    double sum = 0.0, sq = 0.0;
    for (const auto& c : cycles) {
      const double x = static_cast<double>(field(c));
      sum += x;
      sq += x * x;
    }
    return mean_and_error(sum, sq, cycles.size());
  };
  s.xi_1a1 = stat([](const CycleStats& c) { return c.xi_1a1; });
  s.xi_1b1 = stat([](const CycleStats& c) { return c.xi_1b1; });
  s.xi_2a2 = stat([](const CycleStats& c) { return c.xi_2a2; });
  s.xi_2b2 = stat([](const CycleStats& c) { return c.xi_2b2; });
  s.tau = stat([](const CycleStats& c) { return c.tau; });

  const Index n = cycles.front().occupation.size();
  Vector total = Vector::Zero(n);
  for (const auto& c : cycles) total += c.occupation;
  const double nc = static_cast<double>(cycles.size());
  s.pi = total / (s.tau.mean * nc);
  s.pi_error = Vector::Zero(n);
  if (cycles.size() > 1) {
    for (const auto& c : cycles) {
      s.pi_error += (c.occupation - s.pi * c.tau).cwiseAbs2();
    }
    s.pi_error = (s.pi_error / (nc * (nc - 1.0))).cwiseSqrt() / s.tau.mean;
  }
  return s;
}

}  // namespace chainglue
