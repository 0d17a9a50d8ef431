#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ihop/core/statistics.hpp"
#include "ihop/pipeline/corpus.hpp"
#include "ihop/pipeline/frequency.hpp"
#include "ihop/pipeline/graph.hpp"
#include "ihop/pipeline/porter.hpp"
#include "ihop/pipeline/synthetic.hpp"

using namespace ihop;
using namespace ihop::pipeline;
namespace fs = std::filesystem;

TEST_CASE("Porter reference vocabulary") {
  std::ifstream in(IHOP_TEST_DATA "/porter_vectors.txt");
  REQUIRE(in);
  std::size_t total = 0, wrong = 0;
  std::string word, stem;
  while (in >> word >> stem) {
    ++total;
    if (porter_stem(word) != stem) {
      if (++wrong <= 10) MESSAGE(word << " -> " << porter_stem(word) << " (want " << stem << ")");
    }
  }
  CHECK(total > 10000);
  CHECK(wrong == 0);
}

TEST_CASE("Porter classics") {
  CHECK(porter_stem("caresses") == "caress");
  CHECK(porter_stem("ponies") == "poni");
  CHECK(porter_stem("relational") == "relat");
  CHECK(porter_stem("hopping") == "hop");
  CHECK(porter_stem("generalizations") == "gener");
  CHECK(porter_stem("timed") == "time");
  CHECK(porter_stem("timely") == "time");
  CHECK(porter_stem("is") == "is");
}

TEST_CASE("stopwords") {
  CHECK(default_stopwords().size() == 179);
  CHECK(default_stopwords().count("the"));
  CHECK(load_stopwords(IHOP_TEST_DATA "/../../data/stopwords_en.txt") == default_stopwords());
}

TEST_CASE("document stems") {
  CorpusConfig cfg;
  cfg.stopwords = {};
  CHECK(document_stems("Time timed TIMELY x1", cfg) == std::set<std::string>{"time"});

  CorpusConfig def;
  const auto stems = document_stems("The cat sat on the mat; an ox ran.", def);
  CHECK_FALSE(stems.count("the"));
  CHECK_FALSE(stems.count("ox"));  // too short
  CHECK(stems.count("cat"));
  CHECK(stems.count("mat"));

  CorpusConfig lim;
  lim.max_len = 5;
  CHECK(document_stems("pear apples", lim) == std::set<std::string>{"pear"});

  const auto runs = word_runs("a_b,c-d e2");
  CHECK(runs.size() == 4);
  CHECK(runs[0] == "a_b");
  CHECK(runs[3] == "e2");
}

TEST_CASE("corpus preprocessing") {
  const std::vector<std::string> raw{
      "Walking dogs walked", "dogs bark loudly", "cats and dogs", "cats walk", "zebra"};
  CorpusConfig cfg;
  cfg.top_k = 3;
  const auto pc = preprocess_corpus(raw, cfg);
  // Document frequencies: dog 3, walk 2, cat 2, bark 1, loudli 1, zebra 1.
  CHECK(pc.keywords == std::vector<std::string>{"dog", "cat", "walk"});
  CHECK(pc.docs.num_docs() == 5);
  CHECK(pc.docs.document(0).size() == 2);
  CHECK(pc.docs.document(4).empty());
  CHECK(pc.stem_words.at("walk") == std::set<std::string>{"walk", "walked", "walking"});
  CHECK_FALSE(pc.truncated_request);

  const auto again = select_top_keywords(pc.keywords, pc.docs, 3);
  CHECK(again.keywords == pc.keywords);
  CHECK(again.docs == pc.docs);

  cfg.top_k = 100;
  CHECK(preprocess_corpus(raw, cfg).truncated_request);
  CHECK_THROWS(preprocess_corpus({}, cfg));
  CorpusConfig bad;
  bad.min_len = 9;
  bad.max_len = 3;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("unsubscribe footer") {
  CorpusConfig cfg;
  cfg.strip_unsubscribe_footer = true;
  CHECK(document_stems("release notes\nTo unsubscribe send mail", cfg) == std::set<std::string>{"note", "releas"});
}

TEST_CASE("corpus directory") {
  const fs::path dir = fs::temp_directory_path() / "ihop_corpus_test";
  fs::remove_all(dir);
  fs::create_directories(dir / "alice" / "_sent_mail");
  fs::create_directories(dir / "alice" / "inbox");
  std::ofstream(dir / "alice" / "_sent_mail" / "1.") << "sent one";
  std::ofstream(dir / "alice" / "_sent_mail" / "2.") << "sent two";
  std::ofstream(dir / "alice" / "inbox" / "1.") << "received";
  CHECK(read_corpus_directory(dir).size() == 3);
  const auto sent = read_corpus_directory(dir, "_sent_mail");
  CHECK(sent == std::vector<std::string>{"sent one", "sent two"});
  save_keywords(dir / "kw.txt", {"alpha", "beta"});
  CHECK(load_keywords(dir / "kw.txt") == std::vector<std::string>{"alpha", "beta"});
  fs::remove_all(dir);
}

TEST_CASE("clickstream graph and Markov chain") {
  std::stringstream tsv(
      "a\tb\tlink\t6\n"
      "a\tc\tlink\t2\n"
      "b\ta\t4\n"
      "other-search\ta\texternal\t30\n"
      "other-empty\tb\texternal\t10\n"
      "other-search\tc\texternal\t60\n");
  const auto g = parse_clickstream_tsv(tsv);
  CHECK(g.size() == 3);
  CHECK(g.external(g.index("c")) == 60);
  CHECK(g.neighbors(g.index("a")).size() == 2);

  const std::vector<std::string> uni{"a", "b", "c"};
  const Matrix F = build_markov_from_graph(g, uni, 0.05);
  Vector p(3);
  p << 0.3, 0.1, 0.6;
  CHECK(F(1, 0) == doctest::Approx(0.95 * 0.75 + 0.05 * 0.1));
  CHECK(F(2, 0) == doctest::Approx(0.95 * 0.25 + 0.05 * 0.6));
  CHECK(F(0, 0) == doctest::Approx(0.05 * 0.3));
  CHECK(F(0, 1) == doctest::Approx(0.95 + 0.05 * 0.3));
  CHECK(F.col(2).isApprox(p));  // sink
  CHECK((F.colwise().sum().array() - 1).abs().maxCoeff() < 1e-12);
  CHECK(build_markov_from_graph(g, uni, 1.0).col(0).isApprox(p));
  CHECK_THROWS(build_markov_from_graph(g, {"a", "zz"}));

  std::stringstream bad("a\tb\n");
  CHECK_THROWS(parse_clickstream_tsv(bad));
}

TEST_CASE("universe selection") {
  SUBCASE("already the right size") {
    TransitionGraph g;
    g.add_edge("a", "b", 1);
    g.add_edge("b", "c", 1);
    g.add_edge("c", "a", 1);
    g.add_edge("c", "d", 1);
    g.add_edge("d", "a", 1);
    CHECK(select_universe_from_graph(g, {"a", "b", "c", "d"}, 4) == std::vector<std::string>{"a", "b", "c", "d"});
  }
  SUBCASE("star leaves go first") {
    TransitionGraph g;
    for (const char* leaf : {"l1", "l2", "l3", "l4"}) g.add_edge("c", leaf, 1);
    g.add_edge("a", "b", 1);
    g.add_edge("b", "d", 1);
    g.add_edge("d", "a", 1);
    g.add_edge("c", "a", 1);
    const std::vector<std::string> cat{"a", "b", "c", "d", "l1", "l2", "l3", "l4"};
    CHECK(select_universe_from_graph(g, cat, 4) == std::vector<std::string>{"a", "b", "c", "d"});
  }
  SUBCASE("grow and swap") {
    TransitionGraph g;
    // Dense block x1..x4 outside the category, thin category p-q.
    for (const char* u : {"x1", "x2", "x3", "x4"})
      for (const char* v : {"x1", "x2", "x3", "x4"})
        if (std::string(u) < v) g.add_edge(u, v, 1);
    g.add_edge("p", "q", 1);
    g.add_edge("q", "x1", 1);
    g.add_edge("p", "x1", 1);
    for (std::size_t n : {2u, 3u, 4u, 5u}) CHECK(select_universe_from_graph(g, {"p", "q"}, n).size() == n);
    // p and q have one internal link each and are dropped, then regrown by label.
    const auto u = select_universe_from_graph(g, {"p", "q"}, 4);
    CHECK(u == std::vector<std::string>{"p", "q", "x1", "x2"});
    CHECK_THROWS(select_universe_from_graph(g, {"p"}, 99));
  }
}

TEST_CASE("frequency tables") {
  std::stringstream csv(
      "keyword,w1,w2,w3,w4\n"
      "alpha,1,3,2,2\n"
      "beta,3,1,6,2\n");
  const auto t = parse_frequency_table(csv);
  CHECK(t.keywords == std::vector<std::string>{"alpha", "beta"});
  const auto s = split_halves(t);
  CHECK(s.ftilde(0) == doctest::Approx(0.5));
  CHECK(s.freal(0) == doctest::Approx(4.0 / 12));
  CHECK(s.freal.sum() == doctest::Approx(1.0));

  std::stringstream one("keyword,only\nalpha,2\nbeta,6\n");
  const auto s1 = split_halves(parse_frequency_table(one));
  CHECK(s1.ftilde.isApprox(s1.freal));

  const auto aligned = align_frequency_table(t, {"beta", "gamma"});
  CHECK(aligned.values(0, 0) == 3);
  CHECK(aligned.values.row(1).isZero());

  std::stringstream bad("word,w1\nalpha,1\n");
  CHECK_THROWS(parse_frequency_table(bad));
}

TEST_CASE("synthetic generator") {
  SyntheticConfig cfg;
  cfg.n = 30;
  cfg.num_docs = 20000;
  cfg.mixing = 0.0;
  cfg.max_volume = 0.3;
  const auto docs = generate_synthetic(cfg, 1);
  CHECK(docs == generate_synthetic(cfg, 1));
  const auto pats = docs.keyword_patterns();
  const Matrix V = compute_observed_volume(pats, docs.num_docs());
  double worst = 0;
  for (int i = 0; i < 6; ++i)
    for (int k = i + 1; k < 6; ++k) {
      const double expect = V(i, i) * V(k, k);
      worst = std::max(worst, std::abs(V(i, k) - expect) / std::sqrt(expect * (1 - expect) / 20000));
    }
  CHECK(worst < 4.0);
  CHECK(V(0, 0) == doctest::Approx(0.3).epsilon(0.05));
  CHECK(V(9, 9) == doctest::Approx(0.03).epsilon(0.2));

  cfg.zipf_exponent = 0;
  cfg.max_volume = 0.2;
  const auto flat = generate_synthetic(cfg, 2).keyword_counts();
  for (auto c : flat) CHECK(std::abs(static_cast<double>(c) - 4000) < 4 * std::sqrt(20000 * 0.2 * 0.8));

  auto max_dependence = [&](double mixing) {
    cfg.mixing = mixing;
    cfg.zipf_exponent = 1.0;
    cfg.topics = 2;
    cfg.max_volume = 0.4;
    cfg.num_docs = 50000;
    const auto d = generate_synthetic(cfg, 3);
    const Matrix Vm = compute_observed_volume(d.keyword_patterns(), d.num_docs());
    double dev = 0;
    for (int i = 0; i < 10; ++i)
      for (int k = i + 1; k < 10; ++k) dev = std::max(dev, std::abs(Vm(i, k) - Vm(i, i) * Vm(k, k)));
    return dev;
  };
  CHECK(max_dependence(1.0) > 2 * max_dependence(0.0));

  cfg.mixing = 2;
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("zipf and chains") {
  const Vector z = zipf_frequencies(4, 1.0);
  CHECK(z.sum() == doctest::Approx(1.0));
  CHECK(z(0) / z(3) == doctest::Approx(4.0));
  CHECK(zipf_frequencies(3, 0).isApprox(Vector::Constant(3, 1.0 / 3)));

  const Matrix F = random_correlated_chain(12, 3);
  CHECK(F == random_correlated_chain(12, 3));
  CHECK((F.colwise().sum().array() - 1).abs().maxCoeff() < 1e-12);
  CHECK((F.array() > 0).all());
  CHECK(F.colwise().maxCoeff().minCoeff() > 0.2);  // sharply peaked
}
