#pragma once

// Batch front end. Commands read a JSON config, apply flag overrides and
// write CSV/JSONL files into the output directory.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace gremfield::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kAcceptance = 3 };

struct Flags {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::filesystem::path> out;
  bool zero_disorder = false;
  std::optional<int> top_k;
};

/// Loads the config (empty object when no path), rejects keys not accepted
/// by `command` and folds the seed / zero-disorder / top-k flags in.
nlohmann::json resolve_config(const std::string& command, const Flags& flags);

/// Keys accepted by a command; throws std::invalid_argument for an unknown command.
const std::vector<std::string>& allowed_keys(const std::string& command);

int cmd_tstar(const nlohmann::json& cfg, const Flags& flags, std::ostream& out);
int cmd_coarse_grain(const nlohmann::json& cfg, const Flags& flags, std::ostream& out);
int cmd_free_energy(const nlohmann::json& cfg, const Flags& flags, std::ostream& out);
int cmd_simulate(const nlohmann::json& cfg, const Flags& flags, std::ostream& out);
int cmd_fluctuations(const nlohmann::json& cfg, const Flags& flags, std::ostream& out);
int cmd_cascade(const nlohmann::json& cfg, const Flags& flags, std::ostream& out);
int cmd_validate(const nlohmann::json& cfg, const Flags& flags, std::ostream& out);

/// Full entry point: parses argv, dispatches, maps errors to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gremfield::cli
