#include <cstdlib>
#include <functional>
#include <map>
#include <ostream>

#include <CLI11.hpp>

#include "lsledger/cli.hpp"
#include "lsledger/error.hpp"

namespace lsl::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Link-stream analytics for certification and transaction ledgers", "ls-ledger"};
  app.require_subcommand(1);

  RunConfig config;
  std::string out_dir;
  std::string pairs = "unordered";
  bool strict = false;

  using Command = std::function<void(const RunConfig&, std::ostream&)>;
  const std::vector<std::tuple<std::string, std::string, Command>> commands = {
      {"ingest", "Parse records, classify keys and write the stream snapshot", cmd_ingest},
      {"overview", "Activity series, rolling sums, degree reports and correlations", cmd_overview},
      {"graph", "Degrees, clustering, triangles, null model and certification distances", cmd_graph},
      {"closures", "2- and 3-closure of every link of C and T_MM", cmd_closures},
      {"match", "Certification/transaction matching and transaction classes", cmd_match},
      {"relations", "Relation-set ratio table and certification fraction by k", cmd_relations},
      {"neighborhoods", "Aggregated neighborhoods and their overlap", cmd_neighborhoods},
      {"fixture", "Write a bundled fixture ledger to <out>/records.jsonl", cmd_fixture},
  };

  std::map<const CLI::App*, const Command*> dispatch;
  for (const auto& [name, help, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    auto* input = sub->add_option("--input", config.input, "Record file (JSON lines)");
    if (name == "ingest") input->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory")->envname("LS_LEDGER_OUT")->required();
    sub->add_option("--remuniter", config.remuniter, "Key of the miner-reward wallet");
    sub->add_option("--window", config.window, "Rolling window in seconds")->capture_default_str();
    sub->add_option("--bin", config.bin, "Activity bin width in seconds")->capture_default_str();
    sub->add_option("--samples", config.samples, "Null-model samples")->capture_default_str();
    sub->add_option("--seed", config.seed, "Null-model / fixture seed")->capture_default_str();
    sub->add_flag("--strict", strict, "Abort on the first malformed record");
    sub->add_option("--pairs", pairs, "Member-pair convention for ratios")
        ->check(CLI::IsMember({"unordered", "ordered"}))
        ->capture_default_str();
    sub->add_option("--min-certs", config.min_certs, "Membership certification threshold")
        ->capture_default_str();
    if (name == "fixture") {
      sub->add_option("--kind", config.fixture_kind, "figure1 | random")
          ->check(CLI::IsMember({"figure1", "random"}))
          ->capture_default_str();
    }
    dispatch[sub] = &fn;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    const CLI::App* chosen = app.get_subcommands().front();
    config.command = chosen->get_name();
    config.out = out_dir;
    config.mode = strict ? ParseMode::Strict : ParseMode::Lenient;
    config.pairs = pairs == "ordered" ? PairConvention::Ordered : PairConvention::Unordered;
    validate(config);
    (*dispatch.at(chosen))(config, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace lsl::cli
