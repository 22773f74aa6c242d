#ifndef CHAINGLUE_CLI_COMMANDS_HPP
#define CHAINGLUE_CLI_COMMANDS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

namespace chainglue::cli {

enum ExitCode : int { kOk = 0, kDomainError = 1, kInputError = 2 };

enum class Format { text, json };

struct OutputOptions {
  Format format = Format::text;
  int precision = 12;
};

/// Default seed: $CHAINGLUE_SEED if set and numeric, else 1.
std::uint64_t default_seed();

int cmd_validate(const std::string& path, const OutputOptions& out_opts, std::ostream& out,
                 std::ostream& err);

struct StationaryOptions {
  std::string method = "direct";  // direct | simulate
  std::uint64_t seed = 1;
  std::size_t jumps = 1'000'000;
};

int cmd_stationary(const std::string& path, const StationaryOptions& opts,
                   const OutputOptions& out_opts, std::ostream& out, std::ostream& err);

struct GlueOptions {
  std::string pairs;   // "a1:b1[,a2:b2]" by label
  std::string labels;  // optional "l1[,l2]" for the glued states
  std::string method = "auto";  // pipeline | direct | auto
  bool verify = false;
  std::string chain_out;  // write the glued chain file here
};

int cmd_glue(const std::string& path_a, const std::string& path_b, const GlueOptions& opts,
             const OutputOptions& out_opts, std::ostream& out, std::ostream& err);

struct ExcursionOptions {
  std::string mark;           // "s1,s2" by label
  std::size_t monte_carlo = 0;  // excursions per start; 0 disables
  std::uint64_t seed = 1;
};

int cmd_excursions(const std::string& path, const ExcursionOptions& opts,
                   const OutputOptions& out_opts, std::ostream& out, std::ostream& err);

struct SimulateOptions {
  std::size_t n = 1'000'000;  // jumps, or excursions per start with --mark
  std::uint64_t seed = 1;
  std::string start;  // label; defaults to the first state
  std::string mark;   // "s1,s2": simulate excursions instead of a path
};

int cmd_simulate(const std::string& path, const SimulateOptions& opts,
                 const OutputOptions& out_opts, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace chainglue::cli

#endif  // CHAINGLUE_CLI_COMMANDS_HPP
