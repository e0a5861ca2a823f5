#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "lsledger/ingest.hpp"
#include "lsledger/interplay.hpp"

namespace lsl::cli {

struct RunConfig {
  std::string command;
  std::filesystem::path input;
  std::filesystem::path out;
  std::optional<std::string> remuniter;
  Duration window = 2'592'000;  // 30 days
  Duration bin = 86'400;
  std::size_t samples = 100;
  std::uint64_t seed = 1;
  ParseMode mode = ParseMode::Lenient;
  PairConvention pairs = PairConvention::Unordered;
  std::size_t min_certs = 5;
  // fixture subcommand only
  std::string fixture_kind = "figure1";
};

// Throws ParameterError when window < bin or samples < 1.
void validate(const RunConfig& config);

// Snapshot location shared by every command.
std::filesystem::path snapshot_path(const RunConfig& config);

void cmd_ingest(const RunConfig& config, std::ostream& log);
void cmd_overview(const RunConfig& config, std::ostream& log);
void cmd_graph(const RunConfig& config, std::ostream& log);
void cmd_closures(const RunConfig& config, std::ostream& log);
void cmd_match(const RunConfig& config, std::ostream& log);
void cmd_relations(const RunConfig& config, std::ostream& log);
void cmd_neighborhoods(const RunConfig& config, std::ostream& log);
void cmd_fixture(const RunConfig& config, std::ostream& log);

// Full command-line entry point. Returns the process exit status: 0 on
// success, non-zero iff an error was raised.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lsl::cli
