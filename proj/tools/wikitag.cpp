#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "httplib.h"
#include "json.hpp"
#include "wikitag/evalkit.hpp"
#include "wikitag/pipeline.hpp"
#include "wikitag/service.hpp"

namespace {

using namespace wikitag;
using nlohmann::json;

std::string DefaultKbPath() {
  const char* env = std::getenv("WIKITAG_KB");
  return env ? env : "";
}

struct PipelineFlags {
  double rho = 0.2;
  double eps = 0.3;
  double tau = 0.02;
  std::size_t window = 10;
  std::string pruner = "avg";
  std::string lr_model_path;

  void Register(CLI::App* cmd) {
    cmd->add_option("--rho", rho, "Pruning threshold rho_NA")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--eps", eps, "Disambiguation top-set width epsilon")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--tau", tau, "Commonness cutoff tau")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--window", window, "Voter window size for long texts")
        ->check(CLI::Range(std::size_t{2}, std::size_t{10000}))
        ->capture_default_str();
    cmd->add_option("--pruner", pruner, "Pruning method: only_lp, avg, lr")
        ->check(CLI::IsMember({"only_lp", "avg", "lr"}))
        ->capture_default_str();
    cmd->add_option("--lr-model", lr_model_path,
                    "Coefficient file for the lr pruner");
  }

  PipelineConfig ToConfig() const {
    PipelineConfig cfg;
    cfg.prune.rho_na = rho;
    cfg.disamb.epsilon = eps;
    cfg.disamb.tau = tau;
    cfg.window_anchors = window;
    cfg.prune.method = *PruneMethodFromString(pruner);
    if (cfg.prune.method == PruneMethod::kLr) {
      if (lr_model_path.empty()) {
        throw CLI::ValidationError("--pruner lr requires --lr-model");
      }
      cfg.prune.lr_model = LrModel::Load(lr_model_path);
    }
    return cfg;
  }
};

void PrintStats(const KbStats& stats) {
  std::cout << "pages " << stats.n_pages << "  anchors " << stats.n_anchors
            << "  edges " << stats.n_edges << "  avg_senses "
            << stats.avg_senses_per_anchor << "  avg_in_degree "
            << stats.avg_in_degree << "\n";
}

int CmdBuildKb(const std::string& corpus_path, const std::string& out_path,
               std::uint32_t min_link, double min_lp, bool strict) {
  ParsedCorpus corpus = ParseCorpus(corpus_path, strict);
  for (const ParseError& e : corpus.errors) {
    std::cerr << "warning: line " << e.line << ": " << e.message << "\n";
  }
  DictionaryFilters filters{min_link, min_lp};
  KnowledgeBase kb = BuildKb(corpus.pages, filters);
  kb.Save(out_path);
  PrintStats(kb.Stats());
  if (!corpus.errors.empty()) {
    std::cerr << corpus.errors.size() << " malformed line(s) skipped\n";
  }
  return 0;
}

// Batch input: one text per line, optional leading "id<TAB>".
std::pair<std::string, std::string> SplitIdLine(const std::string& line) {
  std::size_t tab = line.find('\t');
  if (tab == std::string::npos) return {"", line};
  return {line.substr(0, tab), line.substr(tab + 1)};
}

int CmdAnnotate(const KnowledgeBase& kb, const PipelineConfig& cfg,
                const std::string& text, const std::string& input_path,
                const std::string& output_path) {
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!output_path.empty()) {
    file.open(output_path, std::ios::trunc);
    if (!file) {
      std::cerr << "error: cannot write " << output_path << "\n";
      return 1;
    }
    out = &file;
  }
  auto emit = [&](const std::string& id, const std::string& t) {
    json doc = TagDocument(t, kb, cfg);
    doc["id"] = id;
    (*out) << doc.dump() << "\n";
  };
  if (!text.empty()) {
    emit("0", text);
    return 0;
  }
  std::istream* in = &std::cin;
  std::ifstream infile;
  if (!input_path.empty() && input_path != "-") {
    infile.open(input_path);
    if (!infile) {
      std::cerr << "error: cannot read " << input_path << "\n";
      return 1;
    }
    in = &infile;
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(*in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto [id, t] = SplitIdLine(line);
    emit(id.empty() ? std::to_string(line_no) : id, t);
  }
  return 0;
}

// The KB must have been built from this corpus: every catalog page id must
// appear in the corpus with the same title.
void CheckKbMatchesCorpus(const std::vector<RawPage>& pages,
                          const KnowledgeBase& kb) {
  std::unordered_map<PageId, const RawPage*> by_id;
  for (const RawPage& p : pages) by_id.emplace(p.id, &p);
  for (const auto& [id, rec] : kb.catalog().pages()) {
    auto it = by_id.find(id);
    if (it == by_id.end() || it->second->title != rec.title) {
      throw KbError("KB does not match corpus: page " + std::to_string(id));
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wikitag: annotate short texts with senses from a "
               "Wikipedia-like knowledge base"};
  app.require_subcommand(1);

  // build-kb
  auto* build = app.add_subcommand("build-kb", "Build the index from a corpus");
  std::string corpus_path, out_path;
  std::uint32_t min_link = 2;
  double min_lp = 0.001;
  bool strict = false;
  build->add_option("--corpus", corpus_path, "Corpus file (see CORPUS_FORMAT.md)")
      ->required();
  build->add_option("--out", out_path, "Output index file")->required();
  build->add_option("--min-link", min_link, "Minimum link(a) for an anchor")
      ->capture_default_str();
  build->add_option("--min-lp", min_lp, "Minimum lp(a); 0 disables the filter")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  build->add_flag("--strict", strict, "Abort on the first malformed line");

  // annotate
  auto* annotate = app.add_subcommand("annotate", "Annotate a text or a batch");
  std::string kb_path = DefaultKbPath();
  std::string text, input_path, output_path;
  PipelineFlags ann_flags;
  annotate->add_option("--kb", kb_path, "Index file (default: $WIKITAG_KB)");
  annotate->add_option("--text", text, "Single text to annotate");
  annotate->add_option("--input", input_path,
                       "Batch file, one text per line ('-' for stdin)");
  annotate->add_option("--output", output_path, "Output file (default stdout)");
  ann_flags.Register(annotate);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate an evaluation dataset");
  std::string gen_type = "disamb", gen_kb = DefaultKbPath(), gen_corpus,
              gen_out;
  std::size_t gen_n = 1000, gen_words = 30, gen_min_links = 10;
  std::uint64_t gen_seed = 1;
  gen->add_option("--type", gen_type, "disamb, annot or long")
      ->check(CLI::IsMember({"disamb", "annot", "long"}))
      ->capture_default_str();
  gen->add_option("--kb", gen_kb, "Index file");
  gen->add_option("--corpus", gen_corpus, "Corpus the KB was built from")
      ->required();
  gen->add_option("--n", gen_n, "Number of cases")->capture_default_str();
  gen->add_option("--words", gen_words, "Fragment length in words")
      ->capture_default_str();
  gen->add_option("--min-links", gen_min_links,
                  "Minimum links per article (long only)")
      ->capture_default_str();
  gen->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output dataset file")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate on a dataset");
  std::string eval_kb = DefaultKbPath(), eval_dataset, eval_type = "annot",
              eval_algo = "dt";
  std::uint64_t eval_seed = 1;
  PipelineFlags eval_flags;
  eval->add_option("--kb", eval_kb, "Index file");
  eval->add_option("--dataset", eval_dataset, "Dataset file")->required();
  eval->add_option("--type", eval_type, "disamb or annot")
      ->check(CLI::IsMember({"disamb", "annot"}))
      ->capture_default_str();
  eval->add_option("--algo", eval_algo, "Disambiguator: dt, mc or random")
      ->check(CLI::IsMember({"dt", "mc", "random"}))
      ->capture_default_str();
  eval->add_option("--seed", eval_seed, "Seed for the random baseline")
      ->capture_default_str();
  eval_flags.Register(eval);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Sweep rho_NA over a grid");
  std::string sweep_kb = DefaultKbPath(), sweep_dataset, sweep_out;
  double sweep_step = 0.01;
  PipelineFlags sweep_flags;
  sweep->add_option("--kb", sweep_kb, "Index file");
  sweep->add_option("--dataset", sweep_dataset, "Annotation dataset file")
      ->required();
  sweep->add_option("--step", sweep_step, "Grid step")
      ->check(CLI::Range(0.001, 1.0))
      ->capture_default_str();
  sweep->add_option("--out", sweep_out, "CSV output (default stdout)");
  sweep_flags.Register(sweep);

  // stats
  auto* stats = app.add_subcommand(
      "stats", "KB statistics, or anchor coverage over fragments");
  std::string stats_kb = DefaultKbPath(), stats_input;
  stats->add_option("--kb", stats_kb, "Index file");
  stats->add_option("--input", stats_input,
                    "Fragment file (one per line) for coverage stats");

  // train-lr
  auto* train = app.add_subcommand("train-lr", "Fit the lr pruner coefficients");
  std::string train_kb = DefaultKbPath(), train_dataset, train_out;
  PipelineFlags train_flags;
  train->add_option("--kb", train_kb, "Index file");
  train->add_option("--dataset", train_dataset, "Annotation dataset file")
      ->required();
  train->add_option("--out", train_out, "Model output file")->required();
  train_flags.Register(train);

  // serve
  auto* serve = app.add_subcommand("serve", "HTTP annotation service");
  std::string serve_kb = DefaultKbPath(), serve_host = "127.0.0.1";
  int serve_port = 8080;
  std::size_t serve_max_len = 1 << 16;
  PipelineFlags serve_flags;
  serve->add_option("--kb", serve_kb, "Index file");
  serve->add_option("--host", serve_host, "Bind address")->capture_default_str();
  serve->add_option("--port", serve_port, "Port")->capture_default_str();
  serve->add_option("--max-text-len", serve_max_len,
                    "Reject texts longer than this many bytes")
      ->capture_default_str();
  serve_flags.Register(serve);

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) {
      return CmdBuildKb(corpus_path, out_path, min_link, min_lp, strict);
    }
    if (annotate->parsed()) {
      if (text.empty() && input_path.empty()) {
        std::cerr << "error: one of --text or --input is required\n";
        return 1;
      }
      KnowledgeBase kb = KnowledgeBase::Load(kb_path);
      return CmdAnnotate(kb, ann_flags.ToConfig(), text, input_path,
                         output_path);
    }
    if (gen->parsed()) {
      KnowledgeBase kb = KnowledgeBase::Load(gen_kb);
      ParsedCorpus corpus = ParseCorpus(gen_corpus);
      CheckKbMatchesCorpus(corpus.pages, kb);
      GenReport report;
      if (gen_type == "disamb") {
        auto cases = GenDisamb(corpus.pages, kb, gen_n, gen_words, gen_seed,
                               &report);
        SaveDisambCases(cases, gen_out);
      } else if (gen_type == "annot") {
        auto cases =
            GenAnnot(corpus.pages, kb, gen_n, gen_words, gen_seed, &report);
        SaveAnnotCases(cases, gen_out);
      } else {
        auto cases = GenLong(corpus.pages, kb, gen_n, gen_min_links, gen_seed,
                             &report);
        SaveAnnotCases(cases, gen_out);
      }
      std::cout << "emitted " << report.emitted << " cases\n";
      if (report.emitted < report.requested) {
        std::cerr << "warning: corpus exhausted after " << report.emitted
                  << " of " << report.requested << " cases\n";
      }
      return 0;
    }
    if (eval->parsed()) {
      KnowledgeBase kb = KnowledgeBase::Load(eval_kb);
      PipelineConfig cfg = eval_flags.ToConfig();
      if (eval_type == "disamb") {
        DisambAlgo algo = eval_algo == "mc"       ? DisambAlgo::kMc
                          : eval_algo == "random" ? DisambAlgo::kRandom
                                                  : DisambAlgo::kDt;
        auto cases = LoadDisambCases(eval_dataset);
        MetricReport report =
            EvalDisamb(cases, kb, cfg.disamb, algo, eval_seed);
        std::cout << "disamb P " << report.disamb.precision << "  R "
                  << report.disamb.recall << "  F " << report.disamb.f1
                  << "  (" << report.disamb.tp << "/"
                  << report.disamb.system_total << "/"
                  << report.disamb.gold_total << ")\n";
      } else {
        auto cases = LoadAnnotCases(eval_dataset);
        MetricReport report = EvalAnnot(cases, kb, cfg);
        std::cout << "ann    P " << report.ann.precision << "  R "
                  << report.ann.recall << "  F " << report.ann.f1 << "\n"
                  << "topics P " << report.topics.precision << "  R "
                  << report.topics.recall << "  F " << report.topics.f1
                  << "\n";
      }
      return 0;
    }
    if (sweep->parsed()) {
      KnowledgeBase kb = KnowledgeBase::Load(sweep_kb);
      auto cases = LoadAnnotCases(sweep_dataset);
      auto rows = SweepRho(cases, kb, sweep_flags.ToConfig(), sweep_step);
      if (sweep_out.empty()) {
        WriteSweepCsv(rows, std::cout);
      } else {
        std::ofstream out(sweep_out, std::ios::trunc);
        if (!out) {
          std::cerr << "error: cannot write " << sweep_out << "\n";
          return 1;
        }
        WriteSweepCsv(rows, out);
      }
      return 0;
    }
    if (stats->parsed()) {
      KnowledgeBase kb = KnowledgeBase::Load(stats_kb);
      if (stats_input.empty()) {
        PrintStats(kb.Stats());
        return 0;
      }
      std::ifstream in(stats_input);
      if (!in) {
        std::cerr << "error: cannot read " << stats_input << "\n";
        return 1;
      }
      std::vector<std::string> fragments;
      std::string line;
      while (std::getline(in, line)) {
        if (!line.empty()) fragments.push_back(line);
      }
      CoverageStats cov = ComputeCoverage(fragments, kb);
      std::cout << "fragments " << cov.anchors_per_fragment.size() << "\n";
      for (std::size_t k = 1; k <= 5; ++k) {
        std::cout << "frac_with_at_least_" << k << "_anchors "
                  << cov.FractionWithAtLeast(k) << "\n";
      }
      for (double q : {0.05, 0.25, 0.5, 0.75, 0.95}) {
        std::cout << "max_lp_q" << q << " "
                  << CoverageStats::Quantile(cov.max_lp, q) << "  top5_lp_q"
                  << q << " " << CoverageStats::Quantile(cov.mean_top5_lp, q)
                  << "\n";
      }
      return 0;
    }
    if (train->parsed()) {
      KnowledgeBase kb = KnowledgeBase::Load(train_kb);
      auto cases = LoadAnnotCases(train_dataset);
      auto training = BuildTrainingCases(cases, kb, train_flags.ToConfig());
      LrModel model = TrainLr(training);
      model.Save(train_out);
      std::cout << "trained on " << training.size() << " cases: alpha "
                << model.alpha << "  beta " << model.beta << "  gamma "
                << model.gamma << "\n";
      return 0;
    }
    if (serve->parsed()) {
      KnowledgeBase kb = KnowledgeBase::Load(serve_kb);
      PipelineConfig defaults = serve_flags.ToConfig();

      httplib::Server server;
      server.Get("/health", [&](const httplib::Request&,
                                httplib::Response& res) {
        KbStats s = kb.Stats();
        json doc{{"status", "ok"},
                 {"version", "1.0"},
                 {"pages", s.n_pages},
                 {"anchors", s.n_anchors}};
        res.set_content(doc.dump(), "application/json");
      });
      server.Get("/tag", [&](const httplib::Request& req,
                             httplib::Response& res) {
        if (!req.has_param("text")) {
          res.status = 400;
          res.set_content(json{{"error", "missing 'text' parameter"}}.dump(),
                          "application/json");
          return;
        }
        std::string input = req.get_param_value("text");
        if (input.size() > serve_max_len) {
          res.status = 413;
          res.set_content(json{{"error", "text too long"}}.dump(),
                          "application/json");
          return;
        }
        PipelineConfig cfg = defaults;  // per-request, stateless
        for (const auto& [key, value] : req.params) {
          if (key == "text") continue;
          if (auto err = ApplyQueryParam(cfg, key, value)) {
            res.status = 400;
            res.set_content(json{{"error", err->message}}.dump(),
                            "application/json");
            return;
          }
        }
        res.set_content(TagDocument(input, kb, cfg).dump(),
                        "application/json");
      });
      std::cout << "serving on " << serve_host << ":" << serve_port << "\n";
      if (!server.listen(serve_host, serve_port)) {
        std::cerr << "error: cannot bind " << serve_host << ":" << serve_port
                  << "\n";
        return 1;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
