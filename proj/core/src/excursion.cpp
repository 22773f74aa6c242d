#include "chainglue/excursion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "chainglue/errors.hpp"

namespace chainglue {

namespace {

double clamp_probability(double value, Index state) {
  if (!std::isfinite(value) || value < -kProbabilityClamp || value > 1.0 + kProbabilityClamp) {
    std::ostringstream msg;
    msg << "excursion probability " << value << " at state " << state << " outside [0, 1]";
    throw NumericalDrift(msg.str());
  }
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace

MarkedChain::MarkedChain(ChainModel model, Index first, Index second)
    : model_(std::move(model)), first_(first), second_(second) {
  require_valid(model_);
  model_.rates = model_.rates.with_exact_diagonal();
  const Index n = model_.size();
  if (first < 0 || first >= n || second < 0 || second >= n) {
    throw InvalidModel("marked state index out of range");
  }
  if (first == second) throw InvalidModel("marked states must be distinct");
  for (Index i = 0; i < n; ++i) {
    if (!is_marked(i)) interior_.push_back(i);
  }
}

MarkedChain MarkedChain::by_labels(ChainModel model, std::string_view first,
                                   std::string_view second) {
  const auto a = model.find(first);
  const auto b = model.find(second);
  if (!a) throw InvalidModel("unknown state label '" + std::string(first) + "'");
  if (!b) throw InvalidModel("unknown state label '" + std::string(second) + "'");
  return MarkedChain(std::move(model), *a, *b);
}

namespace {

DenseLu factorize_q0(const Matrix& q0) {
  try {
    return DenseLu(q0);
  } catch (const SingularSystem& e) {
    throw SingularQ0(std::string("column-zeroed excursion matrix is singular: ") + e.what());
  }
}

Matrix zero_marked_columns(const MarkedChain& chain) {
  Matrix q0 = chain.rates().dense();
  for (const Mark m : kMarks) {
    const Index c = chain.state(m);
    for (Index i = 0; i < q0.rows(); ++i) {
      if (i != c) q0(i, c) = 0.0;
    }
  }
  return q0;
}

}  // namespace

Matrix build_q0(const MarkedChain& chain) {
  Matrix q0 = zero_marked_columns(chain);
  factorize_q0(q0);
  return q0;
}

ExcursionSolver::ExcursionSolver(const MarkedChain& chain)
    : chain_(chain), q0_(zero_marked_columns(chain)), lu_(factorize_q0(q0_)) {}

Vector hitting_probabilities(const ExcursionSolver& solver, Mark target) {
  const MarkedChain& chain = solver.chain();
  const Index t = chain.state(target);
  Vector rhs = -chain.rates().dense().col(t);
  rhs(t) = 0.0;
  Vector p = solver.solve(rhs);
  for (Index i = 0; i < p.size(); ++i) p(i) = clamp_probability(p(i), i);
  return p;
}

ExcursionProbabilities excursion_probabilities(const ExcursionSolver& solver) {
  ExcursionProbabilities out;
  out.to_first = hitting_probabilities(solver, Mark::first);
  out.to_second = Vector::Ones(out.to_first.size()) - out.to_first;
  return out;
}

ExcursionProbabilities excursion_probabilities(const MarkedChain& chain) {
  return excursion_probabilities(ExcursionSolver(chain));
}

OccupationTable occupation_expectations(const ExcursionSolver& solver,
                                        const ExcursionProbabilities& p) {
  const MarkedChain& chain = solver.chain();
  const auto& interior = chain.interior();
  const Index n = chain.size();
  const Index m = static_cast<Index>(interior.size());

  OccupationTable table;
  table.interior = interior;
  for (auto& row : table.conditional) {
    for (auto& v : row) v = Vector::Zero(m);
  }
  if (m == 0) return table;

  for (const Mark target : kMarks) {
    // Column c carries -p_{k,target} e_k for the c-th interior state k.
    Matrix rhs = Matrix::Zero(n, m);
    for (Index c = 0; c < m; ++c) {
      const Index k = interior[static_cast<std::size_t>(c)];
      const double pk = p.from_state(k, target);
      rhs(k, c) = pk > kNullProbability ? -pk : 0.0;
    }
    const Matrix u = solver.solve(rhs);

    for (Index c = 0; c < m; ++c) {
      const double scale = u.col(c).cwiseAbs().maxCoeff();
      for (const Mark from : kMarks) {
        const Index s = chain.state(from);
        const double value = u(s, c);
        const double ps = p.from_state(s, target);
        if (ps <= kNullProbability) continue;
        if (value > kOccupationZero * scale) {
          table.conditional[slot(from)][slot(target)](c) = value / ps;
        } else if (value < -1e-9 * scale) {
          std::ostringstream msg;
          msg << "negative weighted occupation " << value << " for interior state "
              << interior[static_cast<std::size_t>(c)];
          throw NumericalDrift(msg.str());
        }
      }
    }
  }
  return table;
}

Intensities intensities(const MarkedChain& chain, const ExcursionProbabilities& p) {
  Intensities q;
  for (const Mark from : kMarks) {
    const Index s = chain.state(from);
    for (const Mark to : kMarks) {
      q.rate[slot(from)][slot(to)] = chain.rates().exit_rate(s) * p.from_state(s, to);
    }
  }
  return q;
}

SideWeights weight_vectors(const Intensities& q, const OccupationTable& occ) {
  const auto& c = occ.conditional;
  constexpr auto f = slot(Mark::first);
  constexpr auto s = slot(Mark::second);
  SideWeights w;
  w.first = q(Mark::first, Mark::first) * c[f][f] + q(Mark::first, Mark::second) * c[f][s];
  w.second = q(Mark::second, Mark::second) * c[s][s] + q(Mark::second, Mark::first) * c[s][f];
  return w;
}

ExcursionProfile excursion_profile(const MarkedChain& chain) {
  const ExcursionSolver solver(chain);
  ExcursionProfile profile;
  profile.first = chain.state(Mark::first);
  profile.second = chain.state(Mark::second);
  profile.interior = chain.interior();
  profile.exit_first = chain.rates().exit_rate(profile.first);
  profile.exit_second = chain.rates().exit_rate(profile.second);
  profile.p = excursion_probabilities(solver);
  profile.q = intensities(chain, profile.p);
  profile.occ = occupation_expectations(solver, profile.p);
  profile.weights = weight_vectors(profile.q, profile.occ);
  return profile;
}

}  // namespace chainglue
