#pragma once

#include "deepresearch/engine.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace deepresearch {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitProvider = 3;
inline constexpr int kExitInternal = 4;

// Everything needed to reproduce or audit one research run.
struct RunManifest {
  ResearchParams params;
  std::string started_at;
  std::string finished_at;
  std::string output_path;
  EngineStats stats;
  std::string llm_provider;
  std::string search_provider;

  nlohmann::json to_json() const;
};

// Entry point behind the deepresearch binary; parses argv and dispatches
// to the research/score/compare subcommands.
int run_cli(int argc, const char* const* argv);

}  // namespace deepresearch
