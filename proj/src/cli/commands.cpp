#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>

#include <fmt/format.h>

#include "lsledger/cli.hpp"
#include "lsledger/dataset.hpp"
#include "lsledger/error.hpp"
#include "lsledger/fixtures.hpp"
#include "lsledger/graph.hpp"
#include "lsledger/interplay.hpp"
#include "lsledger/temporal.hpp"
#include "lsledger/util/csv.hpp"

namespace lsl::cli {

namespace fs = std::filesystem;

void validate(const RunConfig& config) {
  if (config.bin <= 0) throw ParameterError("bin width must be positive");
  if (config.window < config.bin) throw ParameterError("rolling window smaller than bin width");
  if (config.samples < 1) throw ParameterError("null-model samples must be at least 1");
}

fs::path snapshot_path(const RunConfig& config) { return config.out / "snapshot.lsl"; }

namespace {

const char* to_string(PairConvention p) {
  return p == PairConvention::Unordered ? "unordered" : "ordered";
}

std::vector<std::string> config_comments(const RunConfig& c) {
  return {
      fmt::format("ls-ledger {}", c.command),
      fmt::format("window={} bin={} samples={} seed={} pairs={} min_certs={} remuniter={} mode={}",
                  c.window, c.bin, c.samples, c.seed, to_string(c.pairs), c.min_certs,
                  c.remuniter.value_or("none"), c.mode == ParseMode::Strict ? "strict" : "lenient"),
  };
}

class CsvFile {
 public:
  CsvFile(const RunConfig& config, const fs::path& path, std::string_view columns,
          const std::vector<std::string>& extra_comments = {})
      : path_(path) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) throw IoError(fmt::format("cannot write '{}'", path.string()));
    auto comments = config_comments(config);
    comments.insert(comments.end(), extra_comments.begin(), extra_comments.end());
    csv::write_header(out_, comments, columns);
  }
  ~CsvFile() = default;

  std::ostream& row() { return out_; }
  void close() {
    out_.close();
    if (!out_) throw IoError(fmt::format("failed writing '{}'", path_.string()));
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

std::string key_of(const Dataset& d, NodeId v) { return csv::field(d.keys->key(v)); }

std::string pair_label(const Dataset& d, UnorderedPair p) {
  return csv::field(d.keys->key(p.lo) + "|" + d.keys->key(p.hi));
}

std::string optional_number(const std::optional<Duration>& v, std::string_view none) {
  return v ? std::to_string(*v) : std::string(none);
}

Dataset load(const RunConfig& config) { return read_snapshot(snapshot_path(config)); }

struct NamedStream {
  const char* tag;
  const LinkStream* stream;
};

// Re-anchors a stream on a shared interval so series of different streams align.
LinkStream on_interval(const LinkStream& s, Interval iv) {
  return build_stream(std::vector<Link>(s.links().begin(), s.links().end()),
                      {iv, std::vector<NodeId>(s.nodes().begin(), s.nodes().end()), s.keys()});
}

std::optional<double> try_correlation(std::span<const double> xs, std::span<const double> ys) {
  try {
    return degree_correlation(xs, ys);
  } catch (const UndefinedCorrelationError&) {
    return std::nullopt;
  } catch (const ParameterError&) {
    return std::nullopt;
  }
}

}  // namespace

void cmd_ingest(const RunConfig& config, std::ostream& log) {
  std::ifstream in(config.input, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read input '{}'", config.input.string()));
  const auto records = parse_records(in, config.mode);
  for (const auto& issue : records.issues) {
    log << fmt::format("warning: line {}: {}\n", issue.line, issue.message);
  }
  const Dataset data = build_dataset(records);

  std::error_code ec;
  fs::create_directories(config.out, ec);
  write_snapshot(data, snapshot_path(config));

  log << fmt::format("identities:{} certs:{} txs:{}\n", records.identities.size(),
                     records.certifications.size(), records.transactions.size());
  log << fmt::format("members:{} anonymous:{}\n", data.classification.members().size(),
                     data.classification.anonymous().size());

  const auto report = repartition(data.transactions, data.classification);
  {
    CsvFile f(config, config.out / "repartition.csv", "substream,count,count_share,amount,amount_share");
    for (const auto& r : report.rows) {
      f.row() << to_string(r.substream) << ',' << r.count << ',' << csv::fixed4(r.count_share) << ','
              << r.amount << ',' << csv::fixed4(r.amount_share) << '\n';
    }
    f.close();
  }
  for (Substream s : kSubstreams) {
    log << fmt::format("T_{}: {} links ({})\n", to_string(s), report[s].count,
                       csv::fixed4(report[s].count_share));
  }

  if (config.remuniter) {
    const auto wallet = data.keys->find(*config.remuniter);
    if (!wallet || !data.transactions.has_node(*wallet)) {
      throw LookupError(fmt::format("remuniter key '{}' does not appear in the transactions",
                                    *config.remuniter));
    }
    const auto filtered = filter_wallet(data.transactions, *wallet);
    const auto without = repartition(filtered, data.classification);
    CsvFile f(config, config.out / "repartition_without_remuniter.csv",
              "substream,count,count_share,amount,amount_share");
    for (const auto& r : without.rows) {
      f.row() << to_string(r.substream) << ',' << r.count << ',' << csv::fixed4(r.count_share) << ','
              << r.amount << ',' << csv::fixed4(r.amount_share) << '\n';
    }
    f.close();

    const auto miners = identify_miners(data.transactions, data.classification, *wallet);
    CsvFile m(config, config.out / "miners.csv", "node");
    for (NodeId v : miners) m.row() << key_of(data, v) << '\n';
    m.close();
    const double share = report.total_count
                             ? 1.0 - static_cast<double>(filtered.links().size()) /
                                         static_cast<double>(report.total_count)
                             : 0.0;
    log << fmt::format("remuniter share:{} miners:{}\n", csv::fixed4(share), miners.size());
  }

  const auto flagged = validate_membership(data.certifications, data.classification, config.min_certs);
  CsvFile f(config, config.out / "membership.csv", "node,in_degree");
  for (const auto& [v, in] : flagged) f.row() << key_of(data, v) << ',' << in << '\n';
  f.close();
  log << fmt::format("members below {} certifications:{}\n", config.min_certs, flagged.size());
}

void cmd_overview(const RunConfig& config, std::ostream& log) {
  const Dataset data = load(config);
  const LinkStream& certs = data.certifications;
  const LinkStream& mm = data.sub(Substream::MM);

  Interval iv = certs.interval();
  if (certs.empty()) iv = mm.interval();
  if (!certs.empty() && !mm.empty()) {
    iv = {std::min(certs.interval().begin, mm.interval().begin),
          std::max(certs.interval().end, mm.interval().end)};
  }
  const auto c_series = activity_series(on_interval(certs, iv), config.bin);
  const auto t_series = activity_series(on_interval(mm, iv), config.bin);
  const auto c_roll = rolling_sum(c_series, config.window);
  const auto t_roll = rolling_sum(t_series, config.window);
  {
    CsvFile f(config, config.out / "activity.csv", "bin_start,cert_count,cert_rolling,tx_mm_count,tx_mm_rolling");
    for (std::size_t i = 0; i < c_series.values.size(); ++i) {
      f.row() << c_series.bin_start(i) << ',' << c_series.values[i] << ',' << c_roll.values[i] << ','
              << t_series.values[i] << ',' << t_roll.values[i] << '\n';
    }
    f.close();
  }
  std::vector<double> cx(c_roll.values.begin(), c_roll.values.end());
  std::vector<double> ty(t_roll.values.begin(), t_roll.values.end());
  const auto activity_r = try_correlation(cx, ty);
  log << "activity correlation (rolling C vs T_MM): "
      << (activity_r ? csv::fixed4(*activity_r) : std::string("undefined (zero variance)")) << '\n';

  const auto gc = induced_graph(certs);
  const auto gt = induced_graph(mm);
  const auto dc = degree_report(gc);
  const auto dt = degree_report(gt);
  for (const auto& [tag, report] : {std::pair{"C", &dc}, std::pair{"T_MM", &dt}}) {
    CsvFile f(config, config.out / tag / "degree_histogram.csv", "direction,degree,nodes");
    for (const auto& [deg, n] : report->in_histogram) f.row() << "in," << deg << ',' << n << '\n';
    for (const auto& [deg, n] : report->out_histogram) f.row() << "out," << deg << ',' << n << '\n';
    f.close();
  }

  // Per-member degree pairs in both graphs (scatter data).
  std::vector<double> c_in, c_out, t_in, t_out;
  {
    CsvFile f(config, config.out / "degree_scatter.csv", "node,cert_in,cert_out,tx_mm_in,tx_mm_out");
    for (NodeId m : data.classification.members()) {
      std::size_t ci = 0, co = 0, ti = 0, to = 0;
      if (auto l = gc.local_index(m)) ci = dc.in_degree[*l], co = dc.out_degree[*l];
      if (auto l = gt.local_index(m)) ti = dt.in_degree[*l], to = dt.out_degree[*l];
      c_in.push_back(static_cast<double>(ci));
      c_out.push_back(static_cast<double>(co));
      t_in.push_back(static_cast<double>(ti));
      t_out.push_back(static_cast<double>(to));
      f.row() << key_of(data, m) << ',' << ci << ',' << co << ',' << ti << ',' << to << '\n';
    }
    f.close();
  }
  CsvFile f(config, config.out / "correlations.csv", "pair,pearson");
  const std::pair<const char*, std::optional<double>> rows[] = {
      {"activity_rolling_C_vs_T_MM", activity_r},
      {"cert_in_vs_cert_out", try_correlation(c_in, c_out)},
      {"tx_mm_in_vs_tx_mm_out", try_correlation(t_in, t_out)},
      {"cert_out_vs_tx_mm_out", try_correlation(c_out, t_out)},
      {"cert_in_vs_tx_mm_in", try_correlation(c_in, t_in)},
  };
  for (const auto& [name, r] : rows) f.row() << name << ',' << csv::fixed4(r) << '\n';
  f.close();
}

void cmd_graph(const RunConfig& config, std::ostream& log) {
  const Dataset data = load(config);
  const NamedStream streams[] = {{"C", &data.certifications},
                                 {"T_MM", &data.sub(Substream::MM)},
                                 {"T_AA", &data.sub(Substream::AA)}};
  CsvFile summary(config, config.out / "graph_summary.csv",
                  "stream,nodes,edges,undirected_edges,triangles,avg_clustering,avg_clustering_deg2,"
                  "null_mean,null_stddev,null_ratio");
  for (const auto& [tag, stream] : streams) {
    const auto g = induced_graph(*stream);
    const auto degrees = degree_report(g);
    {
      CsvFile f(config, config.out / tag / "degrees.csv", "node,in,out");
      for (std::size_t i = 0; i < degrees.nodes.size(); ++i) {
        f.row() << key_of(data, degrees.nodes[i]) << ',' << degrees.in_degree[i] << ','
                << degrees.out_degree[i] << '\n';
      }
      f.close();
    }
    const auto cl = clustering(g);
    {
      CsvFile f(config, config.out / tag / "clustering.csv", "node,coefficient",
                {fmt::format("average_all_nodes={} average_degree_ge2={}", csv::fixed4(cl.average),
                             csv::fixed4(cl.average_degree2))});
      for (std::size_t i = 0; i < cl.nodes.size(); ++i) {
        f.row() << key_of(data, cl.nodes[i]) << ',' << csv::fixed4(cl.coefficient[i]) << '\n';
      }
      f.close();
    }
    const auto triangles = triangle_count(g);
    std::optional<NullModelResult> null_model;
    try {
      null_model = null_model_triangles(g, config.samples, config.seed);
    } catch (const DegenerateModelError& e) {
      log << fmt::format("{}: null model skipped: {}\n", tag, e.what());
    }
    {
      CsvFile f(config, config.out / tag / "null_model.csv", "sample,triangles",
                {null_model ? "model=double-edge-swap swaps_per_sample=10xE" : "model=degenerate"});
      if (null_model) {
        for (std::size_t s = 0; s < null_model->sample_triangles.size(); ++s) {
          f.row() << s << ',' << null_model->sample_triangles[s] << '\n';
        }
      }
      f.close();
    }
    summary.row() << tag << ',' << g.node_count() << ',' << g.directed_edges().size() << ','
                  << g.undirected_edge_count() << ',' << triangles << ',' << csv::fixed4(cl.average)
                  << ',' << csv::fixed4(cl.average_degree2) << ','
                  << (null_model ? csv::fixed4(null_model->mean) : "undefined") << ','
                  << (null_model ? csv::fixed4(null_model->stddev) : "undefined") << ','
                  << (null_model ? csv::fixed4(null_model->ratio) : "undefined") << '\n';
    log << fmt::format("{}: triangles:{} avg_clustering:{} null_ratio:{}\n", tag, triangles,
                       csv::fixed4(cl.average),
                       null_model ? csv::fixed4(null_model->ratio) : std::string("undefined"));
  }
  summary.close();

  // Certification distances of member transactions between uncertified pairs.
  const auto gc = induced_graph(data.certifications);
  const auto cert_sets = relation_sets(data.certifications);
  std::vector<std::pair<NodeId, NodeId>> per_tx, per_pair;
  for (const Link& l : data.sub(Substream::MM).links()) {
    const auto p = UnorderedPair::of(l.source, l.target);
    if (!std::binary_search(cert_sets.any.begin(), cert_sets.any.end(), p)) per_tx.emplace_back(p.lo, p.hi);
  }
  per_pair = per_tx;
  std::sort(per_pair.begin(), per_pair.end());
  per_pair.erase(std::unique(per_pair.begin(), per_pair.end()), per_pair.end());
  for (const auto& [file, pairs] : {std::pair{"distances.csv", &per_tx}, std::pair{"distances_pairs.csv", &per_pair}}) {
    const auto h = distance_distribution(*pairs, gc);
    CsvFile f(config, config.out / file, "distance,count",
              {std::string("unit=") + (pairs == &per_tx ? "transaction" : "pair")});
    for (const auto& [d, n] : h.finite) f.row() << d << ',' << n << '\n';
    f.row() << "unreachable," << h.unreachable << '\n';
    f.close();
  }
}

void cmd_closures(const RunConfig& config, std::ostream& log) {
  const Dataset data = load(config);
  const NamedStream streams[] = {{"C", &data.certifications}, {"T_MM", &data.sub(Substream::MM)}};
  CsvFile summary(config, config.out / "closure_summary.csv", "stream,k,links,finite,infinite");
  for (const auto& [tag, stream] : streams) {
    for (int k : {2, 3}) {
      const auto dist = closure_distribution(*stream, k);
      CsvFile f(config, config.out / tag / fmt::format("closures_k{}.csv", k), "t,source,target,lookback");
      for (const auto& r : dist.results) {
        f.row() << r.link.t << ',' << key_of(data, r.link.source) << ',' << key_of(data, r.link.target)
                << ',' << optional_number(r.lookback, "inf") << '\n';
      }
      f.close();
      summary.row() << tag << ',' << k << ',' << dist.results.size() << ','
                    << dist.results.size() - dist.infinite << ',' << dist.infinite << '\n';
      log << fmt::format("{} k={}: finite:{} infinite:{}\n", tag, k, dist.results.size() - dist.infinite,
                         dist.infinite);
    }
  }
  summary.close();
}

void cmd_match(const RunConfig& config, std::ostream& log) {
  const Dataset data = load(config);
  const LinkStream& mm = data.sub(Substream::MM);
  const auto match = match_certifications(data.certifications, mm);
  {
    CsvFile f(config, config.out / "match_cert.csv", "pair,anchor,category,delay");
    for (const auto& o : match.outcomes) {
      f.row() << pair_label(data, o.pair) << ',' << o.anchor << ',' << to_string(o.category) << ','
              << optional_number(o.delay, "") << '\n';
    }
    f.close();
  }
  {
    CsvFile f(config, config.out / "match_summary.csv", "category,count,fraction",
              {fmt::format("both_sided={}", match.both_sided)});
    for (auto c : {MatchCategory::Never, MatchCategory::Before, MatchCategory::After}) {
      f.row() << to_string(c) << ',' << match.counts[static_cast<std::size_t>(c)] << ','
              << csv::fixed4(match.fraction(c)) << '\n';
    }
    f.close();
  }
  {
    std::map<std::size_t, std::size_t> preceding;
    for (const auto& o : match.outcomes) {
      if (o.category == MatchCategory::Before) ++preceding[o.preceding];
    }
    CsvFile f(config, config.out / "preceding_counts.csv", "preceding_transactions,certifications");
    for (const auto& [n, c] : preceding) f.row() << n << ',' << c << '\n';
    f.close();
  }
  log << fmt::format("certifications: never:{} before:{} after:{}\n",
                     csv::fixed4(match.fraction(MatchCategory::Never)),
                     csv::fixed4(match.fraction(MatchCategory::Before)),
                     csv::fixed4(match.fraction(MatchCategory::After)));

  const auto classes = classify_transactions(mm, data.certifications);
  {
    CsvFile f(config, config.out / "tx_classes.csv", "t,from,to,category");
    const auto links = mm.links();
    for (std::size_t i = 0; i < links.size(); ++i) {
      f.row() << links[i].t << ',' << key_of(data, links[i].source) << ',' << key_of(data, links[i].target)
              << ',' << to_string(classes.categories[i]) << '\n';
    }
    f.close();
  }
  {
    CsvFile f(config, config.out / "tx_class_summary.csv", "category,count,fraction");
    for (auto c : {TxCategory::AlreadyCertified, TxCategory::FutureCertified, TxCategory::Never}) {
      f.row() << to_string(c) << ',' << classes.counts[static_cast<std::size_t>(c)] << ','
              << csv::fixed4(classes.fraction(c)) << '\n';
    }
    f.close();
  }
  log << fmt::format("transactions: already_certified:{} future_certified:{} never:{}\n",
                     csv::fixed4(classes.fraction(TxCategory::AlreadyCertified)),
                     csv::fixed4(classes.fraction(TxCategory::FutureCertified)),
                     csv::fixed4(classes.fraction(TxCategory::Never)));

  const auto delays = new_transaction_cert_delays(mm, data.certifications);
  CsvFile f(config, config.out / "new_tx_delays.csv", "pair,first_tx,delay",
            {fmt::format("unmatched={}", delays.unmatched)});
  for (const auto& e : delays.entries) {
    f.row() << pair_label(data, e.pair) << ',' << e.first_transaction << ',' << optional_number(e.delay, "")
            << '\n';
  }
  f.close();
}

void cmd_relations(const RunConfig& config, std::ostream& log) {
  const Dataset data = load(config);
  const auto c = relation_sets(data.certifications, data.classification);
  const auto t = relation_sets(data.sub(Substream::MM), data.classification);
  const auto table = relation_ratio_table(c, t, data.classification.members().size(), config.pairs);
  {
    CsvFile f(config, config.out / "ratios.csv", "cell,numerator,denominator,value",
              {fmt::format("member_pairs={} convention={}", table.member_pairs, to_string(table.convention))});
    for (const auto& cell : table.cells) {
      f.row() << cell.name << ',' << cell.numerator << ',' << cell.denominator << ','
              << csv::fixed4(cell.value) << '\n';
      log << fmt::format("{} = {}\n", cell.name, csv::fixed4(cell.value));
    }
    f.close();
  }
  const auto rows = certification_fraction_by_k(pair_transaction_counts(data.sub(Substream::MM)), c);
  CsvFile f(config, config.out / "fraction_by_k.csv", "k,n_pairs,frac_any,frac_bi");
  for (const auto& r : rows) {
    f.row() << r.k << ',' << r.n_pairs << ',' << csv::fixed4(r.frac_any) << ',' << csv::fixed4(r.frac_bi) << '\n';
  }
  f.close();
}

void cmd_neighborhoods(const RunConfig& config, std::ostream& log) {
  const Dataset data = load(config);
  const LinkStream& mm = data.sub(Substream::MM);
  const auto gc = induced_graph(data.certifications);
  const auto gt = induced_graph(mm);

  auto neighbors_of = [](const InducedGraph& g, NodeId v) {
    std::vector<NodeId> out;
    if (auto l = g.local_index(v)) {
      for (auto u : g.neighbors(*l)) out.push_back(g.node(u));
    }
    return out;
  };

  CsvFile nf(config, config.out / "neighborhoods.csv", "node,stream,neighbor");
  CsvFile of(config, config.out / "overlap.csv", "node,inclusion,jaccard");
  double inclusion_sum = 0.0;
  std::size_t inclusion_n = 0, full = 0;
  for (NodeId m : data.classification.members()) {
    const auto nc = neighbors_of(gc, m);
    const auto nt = neighbors_of(gt, m);
    for (NodeId u : nc) nf.row() << key_of(data, m) << ",C," << key_of(data, u) << '\n';
    for (NodeId u : nt) nf.row() << key_of(data, m) << ",T_MM," << key_of(data, u) << '\n';
    const auto o = set_overlap(nc, nt);
    of.row() << key_of(data, m) << ',' << csv::fixed4(o.inclusion) << ',' << csv::fixed4(o.jaccard) << '\n';
    if (o.inclusion) {
      inclusion_sum += *o.inclusion;
      ++inclusion_n;
      if (*o.inclusion == 1.0) ++full;
    }
  }
  nf.close();
  of.close();
  log << fmt::format("members with transactions:{} mean inclusion:{} fully included:{}\n", inclusion_n,
                     inclusion_n ? csv::fixed4(inclusion_sum / static_cast<double>(inclusion_n))
                                 : std::string("undefined"),
                     full);
}

void cmd_fixture(const RunConfig& config, std::ostream& log) {
  LedgerRecords records;
  if (config.fixture_kind == "figure1") {
    records = fixtures::figure1_records();
  } else if (config.fixture_kind == "random") {
    records = fixtures::random_records(config.seed, {});
  } else {
    throw ParameterError(fmt::format("unknown fixture kind '{}'", config.fixture_kind));
  }
  std::error_code ec;
  fs::create_directories(config.out, ec);
  const auto path = config.out / "records.jsonl";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  serialize_records(records, out);
  out.close();
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
  log << fmt::format("wrote {} ({} records)\n", path.string(),
                     records.identities.size() + records.certifications.size() + records.transactions.size());
}

}  // namespace lsl::cli
