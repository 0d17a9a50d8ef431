// ihoplab: corpus generation, preprocessing, experiment runs and summaries.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "ihop/core/io.hpp"
#include "ihop/harness/experiment.hpp"
#include "ihop/harness/results.hpp"
#include "ihop/harness/spec.hpp"
#include "ihop/lap/selftest.hpp"
#include "ihop/pancake/pancake.hpp"
#include "ihop/pipeline/corpus.hpp"
#include "ihop/pipeline/graph.hpp"
#include "ihop/pipeline/synthetic.hpp"

namespace fs = std::filesystem;
using namespace ihop;

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

int cmd_gen(const pipeline::SyntheticConfig& cfg, std::uint64_t seed, const std::string& out) {
  const auto docs = pipeline::generate_synthetic(cfg, seed);
  io::save_collection(out, docs);
  std::cerr << "wrote " << docs.num_docs() << " documents over " << docs.num_keywords() << " keywords to " << out << "\n";
  return 0;
}

struct PreprocessArgs {
  std::string input;
  bool lines = false;
  std::string stopwords;
  pipeline::CorpusConfig config;
  std::string path_filter;
  std::string out;
  std::string keywords_out;
};

int cmd_preprocess(PreprocessArgs& a) {
  if (!a.stopwords.empty()) a.config.stopwords = pipeline::load_stopwords(a.stopwords);
  const auto raw = a.lines ? pipeline::read_corpus_lines(a.input) : pipeline::read_corpus_directory(a.input, a.path_filter);
  const auto corpus = pipeline::preprocess_corpus(raw, a.config);
  io::save_collection(a.out, corpus.docs);
  const std::string names = a.keywords_out.empty() ? a.out + ".keywords" : a.keywords_out;
  pipeline::save_keywords(names, corpus.keywords);
  std::cerr << "kept " << corpus.keywords.size() << " stems over " << corpus.docs.num_docs() << " documents\n";
  return 0;
}

int cmd_run(const std::string& spec_path, const std::string& out_path, std::optional<std::size_t> threads) {
  auto parsed = harness::load_spec(spec_path);
  if (threads)
    for (auto& c : parsed.configurations) c.threads = *threads;

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    const bool append = fs::exists(out_path) && fs::file_size(out_path) > 0;
    if (append) {
      std::ifstream check(out_path);
      std::string header;
      std::getline(check, header);
      if (header != harness::kResultsHeader) throw std::runtime_error(out_path + " has a different header");
    }
    file.open(out_path, append ? std::ios::app : std::ios::trunc);
    if (!file) throw std::runtime_error("cannot write " + out_path);
    if (!append) harness::write_results_header(file);
    out = &file;
  } else {
    harness::write_results_header(std::cout);
  }
  std::size_t count = 0;
  harness::run_all(parsed.configurations, [&](const harness::ResultRow& row) {
    harness::write_result_row(*out, row);
    out->flush();
    ++count;
  });
  std::cerr << parsed.configurations.size() << " configuration(s), " << count << " row(s)\n";
  return 0;
}

int cmd_summarize(const std::string& csv, const std::string& out_path) {
  std::ifstream in(csv);
  if (!in) throw std::runtime_error("cannot open " + csv);
  const auto summary = harness::summarize(harness::read_results_csv(in));
  if (out_path.empty()) {
    harness::write_summary_csv(std::cout, summary);
  } else {
    auto out = open_out(out_path);
    harness::write_summary_csv(out, summary);
  }
  return 0;
}

int cmd_lap_selftest(std::size_t instances, std::uint64_t seed) {
  const auto report = lap::run_selftest(instances, seed);
  for (const auto& f : report.failures) std::cout << "mismatch: " << f << "\n";
  std::cout << "lap-selftest: " << report.passed << " passed, " << report.failed << " failed\n";
  return report.failed == 0 ? 0 : 1;
}

int cmd_pancake_sim(const std::string& chain_path, std::size_t n, std::size_t rho, std::uint64_t seed,
                    const std::string& out_path) {
  Matrix F;
  if (!chain_path.empty()) {
    std::ifstream in(chain_path);
    if (!in) throw std::runtime_error("cannot open " + chain_path);
    F = io::read_matrix_csv(in);
  } else {
    F = pipeline::random_correlated_chain(n, derive_seed(seed, 100));
  }
  const auto trace = pancake::pancake_simulate(F, rho, seed);
  auto out = open_out(out_path);
  pancake::write_triples_csv(out, trace.triples);
  std::cerr << "wrote " << trace.triples.size() << " triples over " << trace.state.num_replicas() << " replicas\n";
  return 0;
}

int cmd_graph_chain(const std::string& graph_path, const std::string& category_path, std::size_t n, double restart,
                    const std::string& out_path) {
  const auto graph = pipeline::load_clickstream_tsv(graph_path);
  const auto category = pipeline::load_keywords(category_path);
  const auto universe = pipeline::select_universe_from_graph(graph, category, n);
  const Matrix F = pipeline::build_markov_from_graph(graph, universe, restart);
  auto out = open_out(out_path);
  io::write_matrix_csv(out, F);
  pipeline::save_keywords(out_path + ".keywords", universe);
  std::cerr << "wrote " << universe.size() << "x" << universe.size() << " chain to " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ihoplab: leakage simulation and query-recovery experiments"};
  app.require_subcommand(1);

  pipeline::SyntheticConfig gen_cfg;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic document collection");
  gen->add_option("--keywords", gen_cfg.n, "Number of keywords")->capture_default_str();
  gen->add_option("--docs", gen_cfg.num_docs, "Number of documents")->capture_default_str();
  gen->add_option("--zipf", gen_cfg.zipf_exponent, "Zipf exponent of keyword volumes")->capture_default_str();
  gen->add_option("--mixing", gen_cfg.mixing, "Topic co-occurrence strength in [0,1]")->capture_default_str();
  gen->add_option("--topics", gen_cfg.topics, "Number of topics")->capture_default_str();
  gen->add_option("--max-volume", gen_cfg.max_volume, "Volume of the most common keyword")->capture_default_str();
  gen->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();
  gen->add_option("-o,--out", gen_out, "Output collection file")->required();

  PreprocessArgs pre;
  bool sent_mail_only = false;
  auto* prep = app.add_subcommand("preprocess", "Turn raw text documents into a keyword collection");
  prep->add_option("input", pre.input, "Corpus directory, or a file with one document per line")->required();
  prep->add_flag("--lines", pre.lines, "Input is one document per line");
  prep->add_option("--stopwords", pre.stopwords, "Stopword file (default: built-in English list)");
  prep->add_option("--min-len", pre.config.min_len)->capture_default_str();
  prep->add_option("--max-len", pre.config.max_len)->capture_default_str();
  prep->add_option("--top-k", pre.config.top_k)->capture_default_str();
  prep->add_flag("--sent-mail-only", sent_mail_only, "Only read files below a _sent_mail directory");
  prep->add_flag("--strip-unsubscribe", pre.config.strip_unsubscribe_footer, "Cut each document at 'To unsubscribe'");
  prep->add_option("-o,--out", pre.out, "Output collection file")->required();
  prep->add_option("--keywords-out", pre.keywords_out, "Keyword names file (default: <out>.keywords)");

  std::string spec_path, run_out;
  std::optional<std::size_t> run_threads;
  auto* run = app.add_subcommand("run", "Run every configuration of a spec file");
  run->add_option("spec", spec_path, "Spec file")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--out", run_out, "Results CSV (appended; stdout if omitted)");
  run->add_option("--threads", run_threads, "Override the spec's thread count");

  std::string sum_csv, sum_out;
  auto* summarize = app.add_subcommand("summarize", "Mean accuracy with 95% confidence half-widths");
  summarize->add_option("csv", sum_csv, "Results CSV")->required()->check(CLI::ExistingFile);
  summarize->add_option("-o,--out", sum_out, "Summary CSV (stdout if omitted)");

  std::size_t st_instances = 1000;
  std::uint64_t st_seed = 0;
  auto* selftest = app.add_subcommand("lap-selftest", "Check the LAP solver against brute force");
  selftest->add_option("--instances", st_instances)->capture_default_str();
  selftest->add_option("--seed", st_seed)->capture_default_str();

  std::string ps_chain, ps_out;
  std::size_t ps_n = 10, ps_rho = 10'000;
  std::uint64_t ps_seed = 0;
  auto* psim = app.add_subcommand("pancake-sim", "Simulate a PANCAKE token-triple trace");
  psim->add_option("--chain", ps_chain, "Client chain CSV (default: random correlated chain)");
  psim->add_option("--keywords", ps_n, "Keywords of the random chain")->capture_default_str();
  psim->add_option("--rho", ps_rho, "Client queries")->capture_default_str();
  psim->add_option("--seed", ps_seed)->capture_default_str();
  psim->add_option("-o,--out", ps_out, "Triples CSV")->required();

  std::string gc_graph, gc_category, gc_out;
  std::size_t gc_n = 500;
  double gc_restart = 0.05;
  auto* gchain = app.add_subcommand("graph-chain", "Build a keyword universe and Markov chain from a clickstream");
  gchain->add_option("graph", gc_graph, "Clickstream TSV")->required()->check(CLI::ExistingFile);
  gchain->add_option("--category", gc_category, "Seed node labels, one per line")->required()->check(CLI::ExistingFile);
  gchain->add_option("--keywords", gc_n, "Universe size")->capture_default_str();
  gchain->add_option("--restart", gc_restart)->capture_default_str();
  gchain->add_option("-o,--out", gc_out, "Chain CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen(gen_cfg, gen_seed, gen_out);
    if (*prep) {
      if (sent_mail_only) pre.path_filter = "_sent_mail";
      return cmd_preprocess(pre);
    }
    if (*run) return cmd_run(spec_path, run_out, run_threads);
    if (*summarize) return cmd_summarize(sum_csv, sum_out);
    if (*selftest) return cmd_lap_selftest(st_instances, st_seed);
    if (*psim) return cmd_pancake_sim(ps_chain, ps_n, ps_rho, ps_seed, ps_out);
    if (*gchain) return cmd_graph_chain(gc_graph, gc_category, gc_n, gc_restart, gc_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
