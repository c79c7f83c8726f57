#pragma once

// Command-line front end. Exit status: 0 holds, 1 fails, 2 error.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mlspec/formula.hpp"
#include "mlspec/io/config.hpp"

namespace mlspec::cli {

inline constexpr int kHolds = 0;
inline constexpr int kFails = 1;
inline constexpr int kError = 2;

struct Options {
  bool json = false;
  bool trace = false;
  std::optional<std::string> only;
  std::optional<std::uint64_t> seed;
};

struct Check {
  std::string name;
  DatasetFormula formula;
  std::string world;  // a world name or "all"
};

/// Reads {"checks": [{name, formula | template: {kind, params}, world}]}
/// against the model's declarations. Throws Error(ConfigError),
/// Error(UnknownKind) and parser errors.
std::vector<Check> parse_spec(std::string_view json_text, const DistributionalModel& model);

/// Builds a template formula from its JSON parameter object (as text).
DatasetFormula build_template(const std::string& kind, std::string_view params_json,
                              const DistributionalModel& model);

int cmd_eval(const std::filesystem::path& model, const std::string& world, const std::string& formula,
             const Options& options, std::ostream& out, std::ostream& err);

int cmd_check(const std::filesystem::path& model, const std::filesystem::path& spec,
              const Options& options, std::ostream& out, std::ostream& err);

/// groups: empty, or {G0, G1} where G1 may be "!G0" for the complement.
int cmd_report(const std::filesystem::path& model, const std::string& world, const std::string& label,
               const std::vector<std::string>& groups, const Options& options, std::ostream& out,
               std::ostream& err);

/// Parses argv and dispatches.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mlspec::cli
