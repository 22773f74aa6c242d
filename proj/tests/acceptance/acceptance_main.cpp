// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails or exceeds its time limit.
//
// Usage: acceptance [seed]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "chainglue/compose.hpp"
#include "chainglue/core.hpp"
#include "chainglue/errors.hpp"
#include "chainglue/excursion.hpp"
#include "chainglue/simulate.hpp"
#include "fixtures.hpp"

namespace {

using namespace chainglue;

constexpr Mark F = Mark::first;
constexpr Mark S = Mark::second;

std::uint64_t kSeed = 20261016;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void check(bool cond, const std::string& what) {
    if (!cond && ok) detail << "failed: " << what << "; ";
    ok = ok && cond;
  }
};

struct Criterion {
  std::string name;
  double limit_seconds;
  std::function<void(Outcome&)> body;
};

std::string sci(double x) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(2) << x;
  return s.str();
}

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (const double x : xs) v(i++) = x;
  return v;
}

double inf_dist(const Vector& a, const Vector& b) { return test::max_abs_diff(a, b); }

void golden_example_1(Outcome& o) {
  const auto a = test::example1_a(), b = test::example1_b();
  const GlueSpec spec = GlueSpec::by_labels(a, b, {{"1", "1"}, {"2", "2"}});
  const GluedChain g = glue_two(a, b, spec);
  const Vector expected = vec({0.1, 0.2, 0.2, 0.1, 0.4});
  const auto pa = stationary_direct(a), pb = stationary_direct(b);

  const double d_direct = inf_dist(stationary_direct(g.model).probabilities, expected);
  const double d_pipeline = inf_dist(stationary_pipeline(a, b, spec).probabilities, expected);
  const bool cond = check_condition_a(pa, pb, g.layout);
  o.check(cond, "condition A detected true");
  const double d_closed = cond ? inf_dist(stationary_parallel(pa, pb, g.layout).probabilities, expected) : 1.0;
  o.check(d_direct <= 1e-9, "direct within 1e-9");
  o.check(d_pipeline <= 1e-9, "pipeline within 1e-9");
  o.check(d_closed <= 1e-9, "parallel closed form within 1e-9");
  o.detail << "direct " << sci(d_direct) << ", pipeline " << sci(d_pipeline) << ", closed form "
           << sci(d_closed) << ", condition A " << (cond ? "true" : "false");
}

void golden_example_2(Outcome& o) {
  const auto a = test::example2_a(), b = test::example2_b();
  const GlueSpec spec = GlueSpec::by_labels(a, b, {{"1", "1"}, {"2", "2"}});
  const GluedChain g = glue_two(a, b, spec);
  const Vector expected = vec({0.1, 0.4, 0.1, 0.2, 0.2});
  const auto pa = stationary_direct(a), pb = stationary_direct(b);

  const auto direct = stationary_direct(g.model);
  const auto pipeline = stationary_pipeline(a, b, spec);
  const double d_direct = inf_dist(direct.probabilities, expected);
  const double d_pipeline = inf_dist(pipeline.probabilities, expected);
  const bool cond = check_condition_a(pa, pb, g.layout);
  o.check(d_direct <= 1e-9, "direct within 1e-9");
  o.check(d_pipeline <= 1e-9, "pipeline within 1e-9");
  o.check(!cond, "condition A detected false");

  const auto prof_a = excursion_profile(MarkedChain(a, 3, 4));
  const auto prof_b = excursion_profile(MarkedChain(b, 0, 1));
  const GluedWeights weights{prof_a.weights, prof_b.weights};
  const auto report = bounds_report(pipeline, pa, pb, g.layout, &weights);
  o.check(report.ok(), "bounds report clean");
  const double ratios[] = {1.2, 1.2, 0.8};
  o.check(report.interior.size() == 3, "three interior bounds");
  for (std::size_t k = 0; k < report.interior.size() && k < 3; ++k) {
    const auto& ib = report.interior[k];
    o.check(std::abs(ib.ratio - ratios[k]) <= 1e-9, "interior ratio value");
    o.check(std::abs(ib.lower - 48.0 / 70) <= 1e-9 && std::abs(ib.upper - 1.2) <= 1e-9,
            "sandwich ends 48/70 and 12/10");
    o.check(ib.ratio >= 48.0 / 70 - 1e-9 && ib.ratio <= 1.2 + 1e-9, "ratio inside sandwich");
  }
  const double r = report.glued_ratio;
  o.check(std::abs(r - 1.0) <= 1e-9, "pi_1/pi_2 = 1");
  o.check(4.0 / 7 < r && r < 1.5 && report.glued_ratio_strict, "4/7 < pi_1/pi_2 < 3/2 strictly");

  const auto& v = prof_a.weights.first;
  const auto& w = prof_a.weights.second;
  const double zero = 1e-12;
  o.check(v(0) > zero && v(1) > zero && v(2) > zero && w(2) > zero, "v(-2), v(-1), v(0), w(0) > 0");
  o.check(std::abs(w(0)) <= zero && std::abs(w(1)) <= zero, "w(-2) = w(-1) = 0");

  o.detail << "direct " << sci(d_direct) << ", pipeline " << sci(d_pipeline) << ", condition A "
           << (cond ? "true" : "false") << ", pi_1/pi_2 " << r << ", ratios (" << report.interior[0].ratio
           << ", " << report.interior[1].ratio << ", " << report.interior[2].ratio << ")";
}

void equivalence_sweep(Outcome& o) {
  std::mt19937_64 gen(kSeed);
  std::uniform_real_distribution<double> density(0.2, 1.0);
  double worst = 0.0;
  std::size_t violations = 0, disagreements = 0, parallel = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = test::random_chain(gen, test::uniform_index(gen, 2, 10), density(gen));
    const auto b = test::random_chain(gen, test::uniform_index(gen, 2, 10), density(gen));
    const auto [a1, a2] = test::distinct_pair(gen, a.size());
    const auto [b1, b2] = test::distinct_pair(gen, b.size());
    const GlueSpec spec{{{a1, b1}, {a2, b2}}, {}};
    const GluedChain g = glue_two(a, b, spec);
    const auto prof_a = excursion_profile(MarkedChain(a, a1, a2));
    const auto prof_b = excursion_profile(MarkedChain(b, b1, b2));
    const auto pipeline = stationary_glue_two(prof_a, prof_b, g.layout);
    const auto direct = stationary_direct(g.model);
    worst = std::max(worst, inf_dist(pipeline.probabilities, direct.probabilities));

    const auto pa = stationary_direct(a), pb = stationary_direct(b);
    const GluedWeights weights{prof_a.weights, prof_b.weights};
    violations += bounds_report(pipeline, pa, pb, g.layout, &weights).violations.size();
    const auto pred = parallel_predicates(direct, pa, pb, g.layout);
    if (pred.sources_agree != pred.glued_matches_a || pred.sources_agree != pred.glued_matches_b) {
      ++disagreements;
    }
    parallel += pred.sources_agree ? 1 : 0;
  }
  o.check(worst <= 1e-9, "pipeline vs direct within 1e-9");
  o.check(violations == 0, "zero bounds violations");
  o.check(disagreements == 0, "parallelism predicates co-true");
  o.detail << "200 instances, max |pipeline - direct| " << sci(worst) << ", bounds violations "
           << violations << ", predicate disagreements " << disagreements << " (" << parallel
           << " parallel)";
}

void one_state_glue(Outcome& o) {
  std::mt19937_64 gen(kSeed + 1);
  std::uniform_real_distribution<double> density(0.2, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = test::random_chain(gen, test::uniform_index(gen, 2, 10), density(gen));
    const auto b = test::random_chain(gen, test::uniform_index(gen, 2, 10), density(gen));
    const GlueSpec spec{{{test::uniform_index(gen, 0, a.size() - 1),
                          test::uniform_index(gen, 0, b.size() - 1)}},
                        {}};
    const GluedChain g = glue_one(a, b, spec);
    const auto formula = stationary_glue_one(stationary_direct(a), stationary_direct(b), g.layout);
    worst = std::max(worst, inf_dist(formula.probabilities, stationary_direct(g.model).probabilities));
  }
  o.check(worst <= 1e-10, "formula vs direct within 1e-10");
  o.detail << "100 instances, max |formula - direct| " << sci(worst);
}

void structural_identities(Outcome& o) {
  std::mt19937_64 gen(kSeed + 2);
  std::uniform_real_distribution<double> density(0.0, 1.0);
  double complement = 0.0, reconstruction = 0.0, ratio = 0.0;
  int nonsingular = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = test::uniform_index(gen, 2, 10);
    const auto model = test::random_chain(gen, n, density(gen));
    const auto [s1, s2] = test::distinct_pair(gen, n);
    const MarkedChain mc(model, s1, s2);
    try {
      const ExcursionSolver solver(mc);
      ++nonsingular;
      const Vector sum = hitting_probabilities(solver, F) + hitting_probabilities(solver, S);
      complement = std::max(complement, (sum.array() - 1.0).abs().maxCoeff());
    } catch (const Error&) {
      continue;
    }
    const auto prof = excursion_profile(mc);
    const Vector pi = stationary_direct(model).probabilities;
    const double p1 = pi(s1), p2 = pi(s2);
    for (std::size_t k = 0; k < prof.interior.size(); ++k) {
      const auto c = static_cast<Index>(k);
      reconstruction = std::max(reconstruction, std::abs(p1 * prof.weights.first(c) +
                                                         p2 * prof.weights.second(c) -
                                                         pi(prof.interior[k])));
    }
    const double r = p1 / p2;
    ratio = std::max(ratio, std::abs(r - prof.q(S, F) / prof.q(F, S)) / std::max(1.0, r));
  }
  o.check(nonsingular == 500, "Q0 nonsingular on all 500");
  o.check(complement <= 1e-10, "complement identity within 1e-10");
  o.check(reconstruction <= 1e-9, "interior reconstruction within 1e-9");
  o.check(ratio <= 1e-9, "marked-state ratio within 1e-9");
  o.detail << nonsingular << "/500 nonsingular, complement " << sci(complement)
           << ", reconstruction " << sci(reconstruction) << ", ratio " << sci(ratio);
}

void monte_carlo(Outcome& o) {
  constexpr std::size_t kN = 100000;
  int comparisons = 0;
  double worst_z = 0.0;
  auto within = [&](double estimate, double se, double exact, const std::string& what) {
    ++comparisons;
    const double diff = std::abs(estimate - exact);
    if (se > 0.0) worst_z = std::max(worst_z, diff / se);
    o.check(diff <= 3.0 * se + 1e-12, what);
  };

  struct Marked {
    const char* name;
    ChainModel model;
    Index s1, s2;
  };
  const Marked marked[] = {{"example 1 A", test::example1_a(), 1, 2},
                           {"example 1 B", test::example1_b(), 0, 1},
                           {"example 2 A", test::example2_a(), 3, 4},
                           {"example 2 B", test::example2_b(), 0, 1}};
  std::uint64_t seed = kSeed + 3;
  for (const auto& m : marked) {
    const MarkedChain mc(m.model, m.s1, m.s2);
    const auto prof = excursion_profile(mc);
    const auto est = empirical_excursion_stats(mc, kN, seed++);
    for (const Mark e : kMarks) {
      for (const Mark t : kMarks) {
        const auto& p = est.p[slot(e)][slot(t)];
        within(p.mean, p.std_error, prof.probability(e, t), std::string(m.name) + " p");
        for (std::size_t k = 0; k < prof.interior.size(); ++k) {
          const auto c = static_cast<Index>(k);
          within(est.occ_mean[slot(e)][slot(t)](c), est.occ_error[slot(e)][slot(t)](c),
                 prof.occ(e, t, k), std::string(m.name) + " occ");
        }
      }
    }
  }

  struct Glue {
    const char* name;
    ChainModel a, b;
    GlueSpec spec;
  };
  const Glue glues[] = {{"example 1", test::example1_a(), test::example1_b(), test::example1_spec()},
                        {"example 2", test::example2_a(), test::example2_b(), test::example2_spec()}};
  for (const auto& gl : glues) {
    const GluedChain g = glue_two(gl.a, gl.b, gl.spec);
    const auto& p = g.layout.pairs;
    const auto prof_a = excursion_profile(MarkedChain(gl.a, p[0].a, p[1].a));
    const auto prof_b = excursion_profile(MarkedChain(gl.b, p[0].b, p[1].b));
    const auto summary = summarize_cycles(regenerative_cycles(g, make_markers(g), kN, seed++));
    within(summary.xi_1a1.mean, summary.xi_1a1.std_error,
           prof_a.q(F, F) / (prof_a.q(F, S) + prof_b.q(F, S)), std::string(gl.name) + " xi_1A1");
    const Vector pi = stationary_glue_two(prof_a, prof_b, g.layout).probabilities;
    for (Index i = 0; i < pi.size(); ++i) {
      within(summary.pi(i), summary.pi_error(i), pi(i), std::string(gl.name) + " cycle pi");
    }
  }
  o.detail << comparisons << " comparisons at 1e5 samples, largest |z| " << std::fixed
           << std::setprecision(2) << worst_z;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) kSeed = std::stoull(argv[1]);
  const std::vector<Criterion> criteria = {
      {"golden example 1: three routes agree, parallel detected", 1.0, golden_example_1},
      {"golden example 2: pipeline, bounds and weight signs", 1.0, golden_example_2},
      {"equivalence sweep: 200 random two-pair glues", 30.0, equivalence_sweep},
      {"one-state glue: 100 random pairs", 10.0, one_state_glue},
      {"structural identities: 500 random marked chains", 60.0, structural_identities},
      {"monte carlo: excursions and regenerative cycles", 60.0, monte_carlo},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail << "exception: " << e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.limit_seconds;
    const bool pass = o.ok && in_time;
    failed += pass ? 0 : 1;
    std::cout << (pass ? "PASS" : "FAIL") << "  " << c.name << "  [" << std::fixed
              << std::setprecision(3) << seconds << " s / limit " << std::setprecision(0)
              << c.limit_seconds << " s" << (in_time ? "" : ", too slow") << "]  "
              << o.detail.str() << '\n';
    std::cout.unsetf(std::ios::fixed);
    std::cout << std::setprecision(6);
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << '\n';
  return failed == 0 ? 0 : 1;
}
