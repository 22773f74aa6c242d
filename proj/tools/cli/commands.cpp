#include "cli/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chainglue/compose.hpp"
#include "chainglue/core.hpp"
#include "chainglue/errors.hpp"
#include "chainglue/excursion.hpp"
#include "chainglue/simulate.hpp"
#include "cli/chain_file.hpp"

namespace chainglue::cli {

using nlohmann::json;

namespace {

/// Largest |pipeline - direct| accepted by --verify.
constexpr double kVerifyTolerance = 1e-9;

std::string format_number(double x, int precision) {
  std::ostringstream s;
  s << std::setprecision(precision) << (x == 0.0 ? 0.0 : x);
  return s.str();
}

/// JSON numbers carry the same digits as the text output.
json number(double x, int precision) {
  if (!std::isfinite(x)) return nullptr;
  return std::stod(format_number(x, precision));
}

json numbers(const Vector& v, int precision) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(number(v(i), precision));
  return arr;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

std::pair<std::string, std::string> parse_mark(const std::string& mark) {
  const auto parts = split(mark, ',');
  if (parts.size() != 2 || parts[0].empty() || parts[1].empty()) {
    throw InvalidModel("--mark expects two state labels 's1,s2'");
  }
  return {parts[0], parts[1]};
}

void emit(std::ostream& out, const json& record) { out << record.dump() << '\n'; }

void print_distribution(std::ostream& out, const std::vector<std::string>& labels, const Vector& pi,
                        int precision, const Vector* errors = nullptr) {
  std::size_t width = 5;
  for (const auto& l : labels) width = std::max(width, l.size());
  out << std::left << std::setw(static_cast<int>(width)) << "state" << "  probability";
  if (errors) out << "  std_error";
  out << '\n';
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto k = static_cast<Index>(i);
    out << std::left << std::setw(static_cast<int>(width)) << labels[i] << "  "
        << format_number(pi(k), precision);
    if (errors) out << "  " << format_number((*errors)(k), precision);
    out << '\n';
  }
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace

std::uint64_t default_seed() {
  if (const char* env = std::getenv("CHAINGLUE_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
  }
  return 1;
}

int cmd_validate(const std::string& path, const OutputOptions& o, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    const ChainModel model = read_chain_file(path);
    const ValidationReport report = validate(model);
    if (o.format == Format::json) {
      json violations = json::array();
      for (const auto& v : report) {
        json item{{"kind", to_string(v.kind)}, {"message", v.message}};
        if (v.row >= 0 && v.row < static_cast<Index>(model.labels.size())) item["row"] = model.labels[static_cast<std::size_t>(v.row)];
        if (v.col >= 0 && v.col < static_cast<Index>(model.labels.size())) item["col"] = model.labels[static_cast<std::size_t>(v.col)];
        violations.push_back(std::move(item));
      }
      emit(out, {{"type", "validation"},
                 {"ok", report.empty()},
                 {"states", model.size()},
                 {"violations", std::move(violations)}});
    } else if (report.empty()) {
      out << "ok: " << model.size() << " states, irreducible generator\n";
    } else {
      for (const auto& v : report) out << "violation [" << to_string(v.kind) << "]: " << v.message << '\n';
    }
    return report.empty() ? kOk : kDomainError;
  });
}

int cmd_stationary(const std::string& path, const StationaryOptions& opts, const OutputOptions& o,
                   std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ChainModel model = read_chain_file(path);
    require_valid(model);
    if (opts.method == "direct") {
      const StationaryResult pi = stationary_direct(model);
      const double residual = stationary_residual(pi.probabilities, model.rates);
      if (o.format == Format::json) {
        emit(out, {{"type", "stationary"},
                   {"method", to_string(pi.method)},
                   {"states", model.labels},
                   {"probabilities", numbers(pi.probabilities, o.precision)},
                   {"residual", number(residual, 3)}});
      } else {
        out << "method: " << to_string(pi.method) << '\n';
        print_distribution(out, model.labels, pi.probabilities, o.precision);
        out << "residual: " << format_number(residual, 3) << '\n';
      }
      return kOk;
    }
    if (opts.method == "simulate") {
      const OccupancyEstimate est = estimate_stationary(model, opts.jumps, opts.seed);
      if (o.format == Format::json) {
        emit(out, {{"type", "stationary"},
                   {"method", to_string(Method::simulated)},
                   {"states", model.labels},
                   {"probabilities", numbers(est.mean, o.precision)},
                   {"std_errors", numbers(est.std_error, o.precision)},
                   {"jumps", opts.jumps},
                   {"seed", opts.seed}});
      } else {
        out << "method: " << to_string(Method::simulated) << " (" << opts.jumps
            << " jumps, seed " << opts.seed << ")\n";
        print_distribution(out, model.labels, est.mean, o.precision, &est.std_error);
      }
      return kOk;
    }
    throw InvalidModel("unknown method '" + opts.method + "' (expected direct or simulate)");
  });
}

int cmd_glue(const std::string& path_a, const std::string& path_b, const GlueOptions& opts,
             const OutputOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ChainModel a = read_chain_file(path_a);
    const ChainModel b = read_chain_file(path_b);
    require_valid(a);
    require_valid(b);
    if (opts.method != "pipeline" && opts.method != "direct" && opts.method != "auto") {
      throw InvalidGlueSpec("unknown method '" + opts.method + "' (expected pipeline, direct or auto)");
    }

    std::vector<std::pair<std::string, std::string>> label_pairs;
    for (const auto& item : split(opts.pairs, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == item.size()) {
        throw InvalidGlueSpec("--pairs expects 'a1:b1[,a2:b2]', got '" + item + "'");
      }
      label_pairs.emplace_back(item.substr(0, colon), item.substr(colon + 1));
    }
    GlueSpec spec = GlueSpec::by_labels(a, b, label_pairs);
    if (!opts.labels.empty()) spec.labels = split(opts.labels, ',');

    const GluedChain glued = glue(a, b, spec);
    const GlueLayout& layout = glued.layout;
    const StationaryResult pa = stationary_direct(a);
    const StationaryResult pb = stationary_direct(b);

    StationaryResult pi;
    std::optional<bool> parallel;
    std::optional<BoundsReport> bounds;
    if (layout.pairs.size() == 1) {
      pi = opts.method == "direct" ? stationary_direct(glued.model) : stationary_glue_one(pa, pb, layout);
    } else {
      parallel = check_condition_a(pa, pb, layout);
      const auto& p = layout.pairs;
      const ExcursionProfile prof_a = excursion_profile(MarkedChain(a, p[0].a, p[1].a));
      const ExcursionProfile prof_b = excursion_profile(MarkedChain(b, p[0].b, p[1].b));
      if (opts.method == "direct") {
        pi = stationary_direct(glued.model);
      } else if (opts.method == "auto" && *parallel) {
        pi = stationary_parallel(pa, pb, layout);
      } else {
        pi = stationary_glue_two(prof_a, prof_b, layout);
      }
      const GluedWeights weights{prof_a.weights, prof_b.weights};
      bounds = bounds_report(pi, pa, pb, layout, &weights);
    }

    std::optional<double> delta;
    if (opts.verify) {
      const StationaryResult direct = stationary_direct(glued.model);
      delta = (pi.probabilities - direct.probabilities).cwiseAbs().maxCoeff();
    }
    if (!opts.chain_out.empty()) write_chain_file(opts.chain_out, glued.model);

    const auto& labels = glued.model.labels;
    if (o.format == Format::json) {
      emit(out, {{"type", "glued_chain"}, {"chain", chain_to_json(glued.model)}});
      emit(out, {{"type", "stationary"},
                 {"method", to_string(pi.method)},
                 {"states", labels},
                 {"probabilities", numbers(pi.probabilities, o.precision)}});
      if (parallel) {
        emit(out, {{"type", "condition_a"},
                   {"holds", *parallel},
                   {"verdict", *parallel ? "parallel" : "non-parallel"}});
      }
      if (bounds) {
        json interior = json::array();
        for (const auto& ib : bounds->interior) {
          interior.push_back({{"state", labels[static_cast<std::size_t>(ib.state)]},
                              {"side", std::string(1, ib.side)},
                              {"ratio", number(ib.ratio, o.precision)},
                              {"lower", number(ib.lower, o.precision)},
                              {"upper", number(ib.upper, o.precision)},
                              {"strict_vs_first", ib.strict_vs_first},
                              {"strict_vs_second", ib.strict_vs_second}});
        }
        emit(out, {{"type", "bounds"},
                   {"glued_ratio", number(bounds->glued_ratio, o.precision)},
                   {"ratio_a", number(bounds->ratio_a, o.precision)},
                   {"ratio_b", number(bounds->ratio_b, o.precision)},
                   {"glued_ratio_strict", bounds->glued_ratio_strict},
                   {"interior", std::move(interior)},
                   {"violations", bounds->violations}});
      }
      if (delta) {
        emit(out, {{"type", "verify"},
                   {"max_abs_delta", number(*delta, 3)},
                   {"tolerance", kVerifyTolerance},
                   {"ok", *delta <= kVerifyTolerance}});
      }
    } else {
      out << "glued chain (" << glued.model.size() << " states): "
          << chain_to_json(glued.model).dump() << '\n';
      out << "method: " << to_string(pi.method) << '\n';
      print_distribution(out, labels, pi.probabilities, o.precision);
      if (parallel) out << "condition A: " << (*parallel ? "parallel" : "non-parallel") << '\n';
      if (bounds) {
        out << "pi_1/pi_2 = " << format_number(bounds->glued_ratio, o.precision) << "  (A: "
            << format_number(bounds->ratio_a, o.precision)
            << ", B: " << format_number(bounds->ratio_b, o.precision) << ")\n";
        for (const auto& ib : bounds->interior) {
          out << "  " << ib.side << ' ' << labels[static_cast<std::size_t>(ib.state)] << ": "
              << format_number(ib.lower, o.precision) << " <= "
              << format_number(ib.ratio, o.precision) << " <= "
              << format_number(ib.upper, o.precision) << '\n';
        }
        if (bounds->ok()) {
          out << "bounds: satisfied\n";
        } else {
          for (const auto& v : bounds->violations) out << "bounds violation: " << v << '\n';
        }
      }
      if (delta) {
        out << "verify: max |pi - direct| = " << format_number(*delta, 3)
            << (*delta <= kVerifyTolerance ? " (ok)" : " (FAILED)") << '\n';
      }
    }
    const bool failed = (delta && *delta > kVerifyTolerance) || (bounds && !bounds->ok());
    return failed ? kDomainError : kOk;
  });
}

int cmd_excursions(const std::string& path, const ExcursionOptions& opts, const OutputOptions& o,
                   std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto [l1, l2] = parse_mark(opts.mark);
    const MarkedChain chain = MarkedChain::by_labels(read_chain_file(path), l1, l2);
    const ExcursionProfile prof = excursion_profile(chain);
    const auto& labels = chain.model().labels;
    std::vector<std::string> interior;
    for (const Index k : prof.interior) interior.push_back(labels[static_cast<std::size_t>(k)]);
    const auto f = slot(Mark::first), s = slot(Mark::second);
    const std::pair<const char*, std::pair<std::size_t, std::size_t>> keys[] = {
        {"11", {f, f}}, {"12", {f, s}}, {"21", {s, f}}, {"22", {s, s}}};

    std::optional<ExcursionEstimate> mc;
    if (opts.monte_carlo > 0) mc = empirical_excursion_stats(chain, opts.monte_carlo, opts.seed);

    if (o.format == Format::json) {
      json q = json::array();
      for (const Mark from : kMarks) {
        q.push_back({number(prof.q(from, Mark::first), o.precision),
                     number(prof.q(from, Mark::second), o.precision)});
      }
      json occ = json::object();
      for (const auto& [key, ij] : keys) occ[key] = numbers(prof.occ.conditional[ij.first][ij.second], o.precision);
      emit(out, {{"type", "excursions"},
                 {"marked", {l1, l2}},
                 {"states", labels},
                 {"p_to_first", numbers(prof.p.to_first, o.precision)},
                 {"p_to_second", numbers(prof.p.to_second, o.precision)},
                 {"q", std::move(q)},
                 {"interior", interior},
                 {"occ", std::move(occ)},
                 {"v", numbers(prof.weights.first, o.precision)},
                 {"w", numbers(prof.weights.second, o.precision)}});
      if (mc) {
        json p = json::object(), pe = json::object(), om = json::object(), oe = json::object();
        for (const auto& [key, ij] : keys) {
          p[key] = number(mc->p[ij.first][ij.second].mean, o.precision);
          pe[key] = number(mc->p[ij.first][ij.second].std_error, o.precision);
          om[key] = numbers(mc->occ_mean[ij.first][ij.second], o.precision);
          oe[key] = numbers(mc->occ_error[ij.first][ij.second], o.precision);
        }
        emit(out, {{"type", "excursions_monte_carlo"},
                   {"per_start", mc->per_start},
                   {"seed", opts.seed},
                   {"p", p},
                   {"p_error", pe},
                   {"occ", om},
                   {"occ_error", oe}});
      }
      return kOk;
    }

    const int p = o.precision;
    out << "marked states: first = " << l1 << ", second = " << l2 << '\n';
    out << "excursion probabilities (state: to " << l1 << ", to " << l2 << ")\n";
    for (Index i = 0; i < chain.size(); ++i) {
      out << "  " << labels[static_cast<std::size_t>(i)] << ": " << format_number(prof.p.to_first(i), p)
          << ", " << format_number(prof.p.to_second(i), p) << '\n';
    }
    out << "intensities q(from -> to)\n";
    for (const Mark from : kMarks) {
      for (const Mark to : kMarks) {
        out << "  " << (from == Mark::first ? l1 : l2) << " -> " << (to == Mark::first ? l1 : l2)
            << ": " << format_number(prof.q(from, to), p) << '\n';
      }
    }
    if (interior.empty()) {
      out << "no interior states\n";
    } else {
      out << "conditional occupation E[from,to](state)\n";
      for (std::size_t k = 0; k < interior.size(); ++k) {
        out << "  " << interior[k] << ':';
        for (const auto& [key, ij] : keys) {
          out << " E" << key << " = "
              << format_number(prof.occ.conditional[ij.first][ij.second](static_cast<Index>(k)), p);
        }
        out << '\n';
      }
      out << "weights (state: v, w)\n";
      for (std::size_t k = 0; k < interior.size(); ++k) {
        const auto c = static_cast<Index>(k);
        out << "  " << interior[k] << ": " << format_number(prof.weights.first(c), p) << ", "
            << format_number(prof.weights.second(c), p) << '\n';
      }
    }
    if (mc) {
      out << "monte carlo (" << mc->per_start << " excursions per start, seed " << opts.seed << ")\n";
      for (const auto& [key, ij] : keys) {
        out << "  p" << key << " = " << format_number(mc->p[ij.first][ij.second].mean, p) << " +- "
            << format_number(mc->p[ij.first][ij.second].std_error, 3) << '\n';
      }
    }
    return kOk;
  });
}

int cmd_simulate(const std::string& path, const SimulateOptions& opts, const OutputOptions& o,
                 std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ChainModel model = read_chain_file(path);
    require_valid(model);
    if (!opts.mark.empty()) {
      ExcursionOptions ex;
      ex.mark = opts.mark;
      ex.monte_carlo = opts.n;
      ex.seed = opts.seed;
      const auto [l1, l2] = parse_mark(opts.mark);
      const MarkedChain chain = MarkedChain::by_labels(std::move(model), l1, l2);
      const ExcursionEstimate est = empirical_excursion_stats(chain, opts.n, opts.seed);
      json p = json::object();
      for (const Mark from : kMarks) {
        for (const Mark to : kMarks) {
          const std::string key = std::to_string(slot(from) + 1) + std::to_string(slot(to) + 1);
          p[key] = {{"mean", number(est.p[slot(from)][slot(to)].mean, o.precision)},
                    {"std_error", number(est.p[slot(from)][slot(to)].std_error, o.precision)}};
        }
      }
      if (o.format == Format::json) {
        emit(out, {{"type", "excursion_simulation"}, {"per_start", opts.n}, {"seed", opts.seed}, {"p", p}});
      } else {
        out << "excursions per start: " << opts.n << ", seed " << opts.seed << '\n';
        for (const auto& [key, v] : p.items()) {
          out << "  p" << key << " = " << v["mean"].dump() << " +- " << v["std_error"].dump() << '\n';
        }
      }
      return kOk;
    }

    Index start = 0;
    if (!opts.start.empty()) {
      const auto s = model.find(opts.start);
      if (!s) throw InvalidModel("unknown start state '" + opts.start + "'");
      start = *s;
    }
    const Trajectory path_ = simulate_path(model, start, opts.n, opts.seed);
    const OccupancyEstimate est = occupancy_fractions(path_, model.size());
    if (o.format == Format::json) {
      emit(out, {{"type", "path_simulation"},
                 {"jumps", opts.n},
                 {"seed", opts.seed},
                 {"total_time", number(est.total_time, o.precision)},
                 {"states", model.labels},
                 {"occupancy", numbers(est.mean, o.precision)},
                 {"std_errors", numbers(est.std_error, o.precision)}});
    } else {
      out << "jumps: " << opts.n << ", seed " << opts.seed << ", simulated time "
          << format_number(est.total_time, o.precision) << '\n';
      print_distribution(out, model.labels, est.mean, o.precision, &est.std_error);
    }
    return kOk;
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stationary distributions of glued continuous-time Markov chains", "chainglue"};
  app.require_subcommand(1);
  app.fallthrough();

  OutputOptions o;
  std::string format = "text";
  app.add_option("--output", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--precision", o.precision, "Significant digits in numeric output")
      ->check(CLI::Range(1, 17));

  std::string path, path_b;
  const std::uint64_t seed0 = default_seed();

  auto* validate_cmd = app.add_subcommand("validate", "Check a chain file against the generator invariants");
  validate_cmd->add_option("chain", path, "Chain file")->required();

  StationaryOptions st;
  st.seed = seed0;
  auto* stationary_cmd = app.add_subcommand("stationary", "Stationary distribution of one chain");
  stationary_cmd->add_option("chain", path, "Chain file")->required();
  stationary_cmd->add_option("--method", st.method, "direct or simulate")
      ->check(CLI::IsMember({"direct", "simulate"}));
  stationary_cmd->add_option("--seed", st.seed, "Simulation seed");
  stationary_cmd->add_option("--n", st.jumps, "Number of simulated jumps");

  GlueOptions gl;
  auto* glue_cmd = app.add_subcommand("glue", "Glue two chains at one or two states");
  glue_cmd->add_option("chain_a", path, "Chain A file")->required();
  glue_cmd->add_option("chain_b", path_b, "Chain B file")->required();
  glue_cmd->add_option("--pairs", gl.pairs, "Identified states 'a1:b1[,a2:b2]'")->required();
  glue_cmd->add_option("--labels", gl.labels, "Labels for the glued states 'l1[,l2]'");
  glue_cmd->add_option("--method", gl.method, "pipeline, direct or auto")
      ->check(CLI::IsMember({"pipeline", "direct", "auto"}));
  glue_cmd->add_flag("--verify", gl.verify, "Cross-check against a direct solve of the glued chain");
  glue_cmd->add_option("--chain-out", gl.chain_out, "Write the glued chain file here");

  ExcursionOptions ex;
  ex.seed = seed0;
  auto* excursions_cmd = app.add_subcommand("excursions", "Excursion statistics relative to two marked states");
  excursions_cmd->add_option("chain", path, "Chain file")->required();
  excursions_cmd->add_option("--mark", ex.mark, "Marked states 's1,s2'")->required();
  excursions_cmd->add_option("--n", ex.monte_carlo, "Also simulate this many excursions per start");
  excursions_cmd->add_option("--seed", ex.seed, "Simulation seed");

  SimulateOptions sim;
  sim.seed = seed0;
  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a path or excursions");
  simulate_cmd->add_option("chain", path, "Chain file")->required();
  simulate_cmd->add_option("--n", sim.n, "Jumps, or excursions per start with --mark");
  simulate_cmd->add_option("--seed", sim.seed, "Simulation seed");
  simulate_cmd->add_option("--start", sim.start, "Start state label");
  simulate_cmd->add_option("--mark", sim.mark, "Simulate excursions between 's1,s2'");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }
  o.format = format == "json" ? Format::json : Format::text;

  if (*validate_cmd) return cmd_validate(path, o, out, err);
  if (*stationary_cmd) return cmd_stationary(path, st, o, out, err);
  if (*glue_cmd) return cmd_glue(path, path_b, gl, o, out, err);
  if (*excursions_cmd) return cmd_excursions(path, ex, o, out, err);
  if (*simulate_cmd) return cmd_simulate(path, sim, o, out, err);
  return kInputError;
}

}  // namespace chainglue::cli
