#include "chainglue/compose.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "chainglue/errors.hpp"

namespace chainglue {

namespace {

double at(const StationaryResult& r, Index i) { return r.probabilities(i); }

void check_distribution(const StationaryResult& r, Index n, const char* name) {
  if (r.size() != n) {
    std::ostringstream msg;
    msg << name << " has " << r.size() << " entries, layout expects " << n;
    throw InvalidGlueSpec(msg.str());
  }
}

GluedChain build_glued(const ChainModel& a, const ChainModel& b, const GlueSpec& spec) {
  require_valid(a);
  require_valid(b);
  GluedChain out;
  out.layout = make_layout(a.size(), b.size(), spec);
  const GlueLayout& layout = out.layout;

  Matrix q = Matrix::Zero(layout.size, layout.size);
  const Matrix& qa = a.rates.dense();
  const Matrix& qb = b.rates.dense();
  for (Index i = 0; i < a.size(); ++i) {
    for (Index j = 0; j < a.size(); ++j) {
      if (i != j) q(layout.from_a[i], layout.from_a[j]) += qa(i, j);
    }
  }
  for (Index i = 0; i < b.size(); ++i) {
    for (Index j = 0; j < b.size(); ++j) {
      if (i != j) q(layout.from_b[i], layout.from_b[j]) += qb(i, j);
    }
  }

  std::vector<std::string> labels(static_cast<std::size_t>(layout.size));
  for (Index i = 0; i < a.size(); ++i) labels[layout.from_a[i]] = a.labels[i];
  for (std::size_t k = 0; k < spec.labels.size(); ++k) {
    labels[layout.shared(k)] = spec.labels[k];
  }
  std::set<std::string> taken(labels.begin(), labels.end());
  taken.erase(std::string());
  for (const Index j : layout.b_interior) {
    std::string label = b.labels[j];
    while (taken.count(label)) label = "B:" + label;
    taken.insert(label);
    labels[layout.from_b[j]] = label;
  }

  out.model = make_model(RateMatrix::from_rates(q).dense(), std::move(labels));
  if (layout.pairs.size() == 2) {
    const auto& p = layout.pairs;
    out.a_shared = {qa(p[0].a, p[1].a), qa(p[1].a, p[0].a)};
    out.b_shared = {qb(p[0].b, p[1].b), qb(p[1].b, p[0].b)};
  }
  return out;
}

}  // namespace

GlueSpec GlueSpec::by_labels(const ChainModel& a, const ChainModel& b,
                             const std::vector<std::pair<std::string, std::string>>& pairs) {
  GlueSpec spec;
  for (const auto& [la, lb] : pairs) {
    const auto ia = a.find(la);
    const auto ib = b.find(lb);
    if (!ia) throw InvalidGlueSpec("chain A has no state labelled '" + la + "'");
    if (!ib) throw InvalidGlueSpec("chain B has no state labelled '" + lb + "'");
    spec.pairs.push_back({*ia, *ib});
  }
  return spec;
}

GlueLayout make_layout(Index a_size, Index b_size, const GlueSpec& spec) {
  const std::size_t k = spec.pairs.size();
  if (k != 1 && k != 2) throw InvalidGlueSpec("a glue needs one or two state pairs");
  if (!spec.labels.empty() && spec.labels.size() != k) {
    throw InvalidGlueSpec("glued-state label count must match the number of pairs");
  }
  for (const auto& p : spec.pairs) {
    if (p.a < 0 || p.a >= a_size || p.b < 0 || p.b >= b_size) {
      throw InvalidGlueSpec("glue pair references a state out of range");
    }
  }
  if (k == 2 && (spec.pairs[0].a == spec.pairs[1].a || spec.pairs[0].b == spec.pairs[1].b)) {
    throw InvalidGlueSpec("glue pairs must be distinct on both sides");
  }
  if (k == 2 && !spec.labels.empty() && spec.labels[0] == spec.labels[1]) {
    throw InvalidGlueSpec("glued-state labels must be distinct");
  }

  GlueLayout layout;
  layout.pairs = spec.pairs;
  layout.size = a_size + b_size - static_cast<Index>(k);
  layout.from_a.resize(static_cast<std::size_t>(a_size));
  layout.from_b.assign(static_cast<std::size_t>(b_size), -1);
  for (Index i = 0; i < a_size; ++i) layout.from_a[i] = i;
  for (const auto& p : spec.pairs) layout.from_b[p.b] = p.a;

  auto glued_a = [&](Index i) {
    return std::any_of(spec.pairs.begin(), spec.pairs.end(), [&](const GluePair& p) { return p.a == i; });
  };
  for (Index i = 0; i < a_size; ++i) {
    if (!glued_a(i)) layout.a_interior.push_back(i);
  }
  Index next = a_size;
  for (Index j = 0; j < b_size; ++j) {
    if (layout.from_b[j] < 0) {
      layout.from_b[j] = next++;
      layout.b_interior.push_back(j);
    }
  }
  return layout;
}

GluedChain glue_two(const ChainModel& a, const ChainModel& b, const GlueSpec& spec) {
  if (spec.pairs.size() != 2) throw InvalidGlueSpec("glue_two needs exactly two pairs");
  return build_glued(a, b, spec);
}

GluedChain glue_one(const ChainModel& a, const ChainModel& b, const GlueSpec& spec) {
  if (spec.pairs.size() != 1) throw InvalidGlueSpec("glue_one needs exactly one pair");
  return build_glued(a, b, spec);
}

GluedChain glue(const ChainModel& a, const ChainModel& b, const GlueSpec& spec) {
  return build_glued(a, b, spec);
}

StationaryResult stationary_glue_one(const StationaryResult& pa, const StationaryResult& pb,
                                     const GlueLayout& layout) {
  if (layout.pairs.size() != 1) throw InvalidGlueSpec("one-state formula needs a one-pair layout");
  check_distribution(pa, static_cast<Index>(layout.from_a.size()), "pi^A");
  check_distribution(pb, static_cast<Index>(layout.from_b.size()), "pi^B");
  const double a1 = at(pa, layout.pairs[0].a);
  const double b1 = at(pb, layout.pairs[0].b);
  const double c = 1.0 / (a1 + b1 - a1 * b1);

  Vector pi(layout.size);
  for (std::size_t i = 0; i < layout.from_a.size(); ++i) {
    pi(layout.from_a[i]) = c * at(pa, static_cast<Index>(i)) * b1;
  }
  for (const Index j : layout.b_interior) pi(layout.from_b[j]) = c * a1 * at(pb, j);
  return {std::move(pi), Method::glued_one};
}

bool ratios_equal(double n1, double d1, double n2, double d2, double tol) {
  return std::abs(n1 * d2 - d1 * n2) <= tol * (n1 * d2 + d1 * n2);
}

bool check_condition_a(const StationaryResult& pa, const StationaryResult& pb,
                       const GlueLayout& layout, double tol) {
  if (layout.pairs.size() != 2) throw InvalidGlueSpec("parallel condition needs a two-pair layout");
  const auto& p = layout.pairs;
  return ratios_equal(at(pa, p[0].a), at(pa, p[1].a), at(pb, p[0].b), at(pb, p[1].b), tol);
}

std::pair<double, double> parallel_normalizers(const StationaryResult& pa,
                                               const StationaryResult& pb,
                                               const GlueLayout& layout) {
  const auto& p = layout.pairs;
  const double a1 = at(pa, p[0].a), a2 = at(pa, p[1].a);
  const double b1 = at(pb, p[0].b), b2 = at(pb, p[1].b);
  return {1.0 / (a1 + b1 - a1 * (b1 + b2)), 1.0 / (a1 + b1 - b1 * (a1 + a2))};
}

StationaryResult stationary_parallel(const StationaryResult& pa, const StationaryResult& pb,
                                     const GlueLayout& layout, double tol) {
  check_distribution(pa, static_cast<Index>(layout.from_a.size()), "pi^A");
  check_distribution(pb, static_cast<Index>(layout.from_b.size()), "pi^B");
  if (!check_condition_a(pa, pb, layout, tol)) {
    throw ConditionAViolated("stationary ratios of the glued states differ between A and B");
  }
  const double a1 = at(pa, layout.pairs[0].a);
  const double b1 = at(pb, layout.pairs[0].b);
  const double c = parallel_normalizers(pa, pb, layout).first;

  Vector pi(layout.size);
  for (std::size_t i = 0; i < layout.from_a.size(); ++i) {
    pi(layout.from_a[i]) = c * at(pa, static_cast<Index>(i)) * b1;
  }
  for (const Index j : layout.b_interior) pi(layout.from_b[j]) = c * a1 * at(pb, j);
  return {std::move(pi), Method::parallel};
}

StationaryResult stationary_glue_two(const ExcursionProfile& a, const ExcursionProfile& b,
                                     const GlueLayout& layout) {
  if (layout.pairs.size() != 2) throw InvalidGlueSpec("two-state formula needs a two-pair layout");
  const auto& p = layout.pairs;
  if (a.first != p[0].a || a.second != p[1].a || b.first != p[0].b || b.second != p[1].b) {
    throw InvalidGlueSpec("excursion profiles are marked at different states than the layout");
  }
  if (a.interior != layout.a_interior || b.interior != layout.b_interior) {
    throw InvalidGlueSpec("excursion profile interiors do not match the layout");
  }

  const double up = a.q(Mark::second, Mark::first) + b.q(Mark::second, Mark::first);
  const double down = a.q(Mark::first, Mark::second) + b.q(Mark::first, Mark::second);
  if (!(down > 0.0) || !(up > 0.0)) {
    throw DegenerateIntensities("crossing intensities between the glued states must be positive");
  }
  const double first_load = a.weights.first.sum() + b.weights.first.sum() + 1.0;
  const double second_load = a.weights.second.sum() + b.weights.second.sum() + 1.0;
  const double denom = up * first_load + down * second_load;
  const double pi1 = up / denom;
  const double pi2 = down / denom;

  Vector pi(layout.size);
  pi(layout.shared(0)) = pi1;
  pi(layout.shared(1)) = pi2;
  for (std::size_t k = 0; k < layout.a_interior.size(); ++k) {
    const auto c = static_cast<Index>(k);
    pi(layout.from_a[layout.a_interior[k]]) = pi1 * a.weights.first(c) + pi2 * a.weights.second(c);
  }
  for (std::size_t k = 0; k < layout.b_interior.size(); ++k) {
    const auto c = static_cast<Index>(k);
    pi(layout.from_b[layout.b_interior[k]]) = pi1 * b.weights.first(c) + pi2 * b.weights.second(c);
  }
  return {std::move(pi), Method::glued_two};
}

StationaryResult stationary_pipeline(const ChainModel& a, const ChainModel& b,
                                     const GlueSpec& spec) {
  const GlueLayout layout = make_layout(a.size(), b.size(), spec);
  if (layout.pairs.size() == 1) {
    return stationary_glue_one(stationary_direct(a), stationary_direct(b), layout);
  }
  const auto& p = layout.pairs;
  const ExcursionProfile pa = excursion_profile(MarkedChain(a, p[0].a, p[1].a));
  const ExcursionProfile pb = excursion_profile(MarkedChain(b, p[0].b, p[1].b));
  return stationary_glue_two(pa, pb, layout);
}

namespace {

SideWeights side_weights(const StationaryResult& pi, const StationaryResult& ps,
                         const std::vector<Index>& interior, const std::vector<Index>& to_glued,
                         Index s1, Index s2, Index g1, Index g2, double tol, char side) {
  const double p1 = at(pi, g1), p2 = at(pi, g2);
  const double a1 = at(ps, s1), a2 = at(ps, s2);
  const double den_first = a2 * p1 - p2 * a1;
  const double den_second = a1 * p2 - p1 * a2;
  if (std::abs(den_first) <= tol * (a2 * p1 + p2 * a1)) {
    throw ParallelCase(std::string("glued and ") + side +
                       "-side ratios coincide; weights are not identifiable");
  }
  SideWeights w;
  const auto m = static_cast<Index>(interior.size());
  w.first.resize(m);
  w.second.resize(m);
  for (Index k = 0; k < m; ++k) {
    const Index i = interior[static_cast<std::size_t>(k)];
    const double gi = at(pi, to_glued[static_cast<std::size_t>(i)]);
    const double si = at(ps, i);
    w.first(k) = (a2 * gi - p2 * si) / den_first;
    w.second(k) = (a1 * gi - p1 * si) / den_second;
  }
  return w;
}

}  // namespace

GluedWeights weights_from_pi(const StationaryResult& pi, const StationaryResult& pa,
                             const StationaryResult& pb, const GlueLayout& layout, double tol) {
  if (layout.pairs.size() != 2) throw InvalidGlueSpec("weights need a two-pair layout");
  check_distribution(pi, layout.size, "pi");
  check_distribution(pa, static_cast<Index>(layout.from_a.size()), "pi^A");
  check_distribution(pb, static_cast<Index>(layout.from_b.size()), "pi^B");
  const auto& p = layout.pairs;
  const Index g1 = layout.shared(0), g2 = layout.shared(1);
  GluedWeights out;
  out.a = side_weights(pi, pa, layout.a_interior, layout.from_a, p[0].a, p[1].a, g1, g2, tol, 'A');
  out.b = side_weights(pi, pb, layout.b_interior, layout.from_b, p[0].b, p[1].b, g1, g2, tol, 'B');
  return out;
}

namespace {

void side_bounds(BoundsReport& report, const StationaryResult& pi, const StationaryResult& ps,
                 const std::vector<Index>& interior, const std::vector<Index>& to_glued, Index s1,
                 Index s2, Index g1, Index g2, char side, const SideWeights* weights) {
  const double end_first = at(pi, g1) / at(ps, s1);
  const double end_second = at(pi, g2) / at(ps, s2);
  const double lower = std::min(end_first, end_second);
  const double upper = std::max(end_first, end_second);

  for (std::size_t k = 0; k < interior.size(); ++k) {
    const Index i = interior[k];
    InteriorBound b;
    b.state = to_glued[static_cast<std::size_t>(i)];
    b.side = side;
    b.ratio = at(pi, b.state) / at(ps, i);
    b.lower = lower;
    b.upper = upper;
    const double scale = std::max(upper, b.ratio);
    b.strict_vs_first = std::abs(b.ratio - end_first) > kStrictnessThreshold * scale;
    b.strict_vs_second = std::abs(b.ratio - end_second) > kStrictnessThreshold * scale;

    std::ostringstream where;
    where << side << "-side state at glued index " << b.state;
    const double slack = kConditionATolerance * scale;
    if (report.condition_a) {
      if (std::abs(b.ratio - end_first) > slack || std::abs(b.ratio - end_second) > slack) {
        report.violations.push_back(where.str() + ": parallel case requires equal ratios");
      }
    } else {
      if (b.ratio < lower - slack || b.ratio > upper + slack) {
        report.violations.push_back(where.str() + ": ratio outside sandwich bounds");
      }
      if (!b.strict_vs_first && !b.strict_vs_second) {
        report.violations.push_back(where.str() + ": ratio attains both ends");
      }
      if (weights) {
        const auto c = static_cast<Index>(k);
        if ((weights->first(c) > 0.0) != b.strict_vs_second ||
            (weights->second(c) > 0.0) != b.strict_vs_first) {
          report.violations.push_back(where.str() +
                                      ": strictness pattern disagrees with weight positivity");
        }
      }
    }
    report.interior.push_back(b);
  }
}

}  // namespace

BoundsReport bounds_report(const StationaryResult& pi, const StationaryResult& pa,
                           const StationaryResult& pb, const GlueLayout& layout,
                           const GluedWeights* pipeline) {
  BoundsReport report;
  if (layout.pairs.size() != 2) {
    report.violations.push_back("bounds need a two-pair layout");
    return report;
  }
  if (pi.size() != layout.size || pa.size() != static_cast<Index>(layout.from_a.size()) ||
      pb.size() != static_cast<Index>(layout.from_b.size())) {
    report.violations.push_back("distribution sizes do not match the layout");
    return report;
  }
  const auto& p = layout.pairs;
  const Index g1 = layout.shared(0), g2 = layout.shared(1);
  report.condition_a = check_condition_a(pa, pb, layout);
  report.glued_ratio = at(pi, g1) / at(pi, g2);
  report.ratio_a = at(pa, p[0].a) / at(pa, p[1].a);
  report.ratio_b = at(pb, p[0].b) / at(pb, p[1].b);

  const double lo = std::min(report.ratio_a, report.ratio_b);
  const double hi = std::max(report.ratio_a, report.ratio_b);
  const double scale = std::max(hi, report.glued_ratio);
  if (report.condition_a) {
    if (std::abs(report.glued_ratio - report.ratio_a) > kConditionATolerance * scale) {
      report.violations.push_back("parallel case requires pi_1/pi_2 to equal the source ratios");
    }
  } else {
    report.glued_ratio_strict = report.glued_ratio - lo > kStrictnessThreshold * scale &&
                                hi - report.glued_ratio > kStrictnessThreshold * scale;
    if (!report.glued_ratio_strict) {
      report.violations.push_back("pi_1/pi_2 is not strictly between the source ratios");
    }
  }

  side_bounds(report, pi, pa, layout.a_interior, layout.from_a, p[0].a, p[1].a, g1, g2, 'A',
              pipeline ? &pipeline->a : nullptr);
  side_bounds(report, pi, pb, layout.b_interior, layout.from_b, p[0].b, p[1].b, g1, g2, 'B',
              pipeline ? &pipeline->b : nullptr);
  return report;
}

ParallelPredicates parallel_predicates(const StationaryResult& pi, const StationaryResult& pa,
                                       const StationaryResult& pb, const GlueLayout& layout,
                                       double tol) {
  const auto& p = layout.pairs;
  const double g1 = at(pi, layout.shared(0)), g2 = at(pi, layout.shared(1));
  ParallelPredicates out;
  out.sources_agree = check_condition_a(pa, pb, layout, tol);
  out.glued_matches_a = ratios_equal(g1, g2, at(pa, p[0].a), at(pa, p[1].a), tol);
  out.glued_matches_b = ratios_equal(g1, g2, at(pb, p[0].b), at(pb, p[1].b), tol);
  return out;
}

}  // namespace chainglue
