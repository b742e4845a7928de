// Copyright 2026 The Toklab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// toklab: command-line front end. Exit codes: 0 success, 1 usage error,
// 2 data or validation error.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "selftest.hpp"
#include "toklab/corpus.hpp"
#include "toklab/corruptor.hpp"
#include "toklab/error.hpp"
#include "toklab/io.hpp"
#include "toklab/metrics.hpp"
#include "toklab/normalize.hpp"
#include "toklab/service.hpp"
#include "toklab/subword.hpp"

namespace toklab::tools {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

// Writes to `path`, or stdout when it is empty or "-".
void Emit(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
    if (!contents.empty() && contents.back() != '\n') std::cout << '\n';
  } else {
    io::WriteFile(path, contents);
  }
}

void EmitJson(const std::string& path, const Json& j) { Emit(path, j.dump(2) + "\n"); }

std::vector<std::string> SplitList(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

std::vector<std::string> Texts(const corpus::Corpus& c) {
  std::vector<std::string> out;
  for (const auto& d : c.documents()) out.push_back(d.text);
  return out;
}

corpus::Corpus MapTexts(const corpus::Corpus& c,
                        const std::function<std::string(const std::string&)>& f) {
  std::vector<corpus::Document> docs = c.documents();
  for (auto& d : docs) d.text = f(d.text);
  return corpus::Corpus(std::move(docs));
}

struct Options {
  std::string in, out, config, rules, split, model, text, ids, report, zipf_out, nests,
      methods, corpus_id, lang, addr = "127.0.0.1:8080", models_dir, rules_dir, reports_dir, static_dir,
      algo = "bpe", algos, vocab_sizes, word_freqs, stem_rules, lemmas, name = "corpus",
      version = "1.0", description;
  std::vector<std::string> model_files, external_files, limitations;
  uint64_t seed = 0;
  double test_fraction = 0.2, ratio = 0.1;
  int vocab_size = 8000, threads = 1, max_piece_len = 16;
  int64_t min_freq = 2, min_tokens = 5'000'000;
  size_t timing_tokens = 20000, max_text_bytes = 64 * 1024;
  bool surface = false, no_timing = false;
};

int Validate(const Options& o) {
  const auto c = corpus::LoadCorpus(o.in);
  EmitJson(o.out, {{"valid", true}, {"documents", c.size()}, {"tokens", c.total_tokens()}});
  return 0;
}

int Stats(const Options& o) {
  EmitJson(o.out, corpus::StatsToJson(corpus::ComputeStats(corpus::LoadCorpus(o.in))));
  return 0;
}

int Clean(const Options& o) {
  const normalize::CleanConfig cfg =
      o.config.empty() ? normalize::CleanConfig{} : normalize::LoadCleanConfig(o.config);
  const auto c = MapTexts(corpus::LoadCorpus(o.in),
                          [&](const std::string& t) { return normalize::Clean(t, cfg); });
  Emit(o.out, corpus::SerializeCorpus(c));
  return 0;
}

int Standardize(const Options& o) {
  const normalize::RuleSet rules = o.rules.empty() || o.rules == "default"
                                       ? normalize::DefaultRules()
                                       : normalize::LoadRules(o.rules);
  const auto c = MapTexts(corpus::LoadCorpus(o.in), [&](const std::string& t) {
    return normalize::Standardize(t, rules);
  });
  Emit(o.out, corpus::SerializeCorpus(c));
  return 0;
}

int Split(const Options& o) {
  const corpus::SplitSpec spec{o.seed, o.test_fraction};
  EmitJson(o.out, corpus::SplitToJson(corpus::SplitCorpus(corpus::LoadCorpus(o.in), spec), spec));
  return 0;
}

int VerifySplit(const Options& o) {
  const auto c = corpus::LoadCorpus(o.in);
  const auto split = corpus::SplitFromJson(io::ReadJson(o.split));
  const auto report = corpus::VerifySplit(c, split.train_ids, split.test_ids,
                                          corpus::WhitespaceVocabulary(c, split.train_ids));
  EmitJson(o.out, corpus::SplitReportToJson(report));
  if (!report.valid()) {
    std::cerr << "error: train and test share " << report.id_intersection.size()
              << " document id(s)\n";
    return kDataError;
  }
  return 0;
}

subword::WordFreqs TrainingWords(const Options& o) {
  if (!o.word_freqs.empty()) return subword::WordFreqsFromTsv(io::ReadFile(o.word_freqs));
  auto c = corpus::LoadCorpus(o.in);
  if (!o.split.empty()) {
    c = corpus::Select(c, corpus::SplitFromJson(io::ReadJson(o.split)).train_ids);
  }
  return subword::CountWords(Texts(c), surface::SurfaceTokenizer::Whitespace(), o.threads);
}

int Train(const Options& o) {
  if (o.in.empty() == o.word_freqs.empty()) {
    throw CLI::ValidationError("train", "give exactly one of --in and --word-freqs");
  }
  subword::TrainConfig cfg;
  cfg.algorithm = subword::ParseAlgorithm(o.algo);
  cfg.vocab_size = o.vocab_size;
  cfg.min_frequency = o.min_freq;
  cfg.seed = o.seed;
  cfg.max_piece_len = o.max_piece_len;
  cfg.threads = o.threads;
  const auto model = subword::Train(TrainingWords(o), cfg);
  subword::SaveModel(model, o.out);
  std::cerr << "wrote " << subword::AlgorithmName(model.algorithm()) << " model with "
            << model.size() << " entries to " << o.out << "\n";
  return 0;
}

int Encode(const Options& o) {
  const auto model = subword::LoadModel(o.model);
  if (!o.text.empty()) {
    EmitJson(o.out, service::SegmentJson(model, o.text));
    return 0;
  }
  std::string out;
  const corpus::Corpus c = corpus::LoadCorpus(o.in);
  for (const auto& d : c.documents()) {
    Json seg = service::SegmentJson(model, d.text);
    Json line = {{"doc_id", d.id},
                 {"tokens", seg["tokens"]},
                 {"ids", seg["ids"]},
                 {"word_index", seg["word_index"]}};
    out += line.dump() + "\n";
  }
  Emit(o.out, out);
  return 0;
}

std::vector<subword::Segmentation> Words(const std::vector<int>& ids,
                                         const std::vector<size_t>& word_index) {
  std::vector<subword::Segmentation> words;
  for (size_t k = 0; k < ids.size(); ++k) {
    if (k == 0 || word_index[k] != word_index[k - 1]) words.emplace_back();
    words.back().ids.push_back(ids[k]);
  }
  return words;
}

int Decode(const Options& o) {
  const auto model = subword::LoadModel(o.model);
  if (!o.ids.empty()) {
    // Words separated by spaces, pieces by commas: "4,7 12".
    std::vector<subword::Segmentation> words;
    for (const auto& w : SplitList(o.ids, ' ')) {
      subword::Segmentation seg;
      for (const auto& id : SplitList(w, ',')) {
        try {
          seg.ids.push_back(std::stoi(id));
        } catch (const std::exception&) {
          throw Error(ErrorKind::kParse, "bad token id '" + id + "'");
        }
      }
      words.push_back(std::move(seg));
    }
    Emit(o.out, model.Decode(words) + "\n");
    return 0;
  }
  std::string out;
  size_t line_no = 0;
  std::istringstream in(io::ReadFile(o.in));
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const Json j = Json::parse(line);
      const auto ids = j.at("ids").get<std::vector<int>>();
      const auto wi = j.at("word_index").get<std::vector<size_t>>();
      if (ids.size() != wi.size()) throw Error(ErrorKind::kParse, "ids/word_index mismatch");
      out += Json{{"doc_id", j.value("doc_id", "")},
                  {"text", model.Decode(Words(ids, wi))}}.dump() +
             "\n";
    } catch (const Json::exception& e) {
      throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  Emit(o.out, out);
  return 0;
}

std::vector<metrics::MethodSpec> EvalMethods(const Options& o) {
  std::vector<metrics::MethodSpec> methods;
  if (o.surface) {
    metrics::MethodSpec ws;
    ws.name = "whitespace";
    methods.push_back(ws);
    ws.name = "lowercase";
    ws.lowercase = true;
    methods.push_back(ws);
    if (!o.stem_rules.empty()) {
      metrics::MethodSpec stem = ws;
      stem.name = "stem";
      stem.normalizer = metrics::MethodSpec::Normalizer::kStem;
      stem.stems = std::make_shared<surface::StemRuleTable>(surface::LoadStemRules(o.stem_rules));
      methods.push_back(stem);
    }
    if (!o.lemmas.empty()) {
      metrics::MethodSpec lemma = ws;
      lemma.name = "lemma";
      lemma.normalizer = metrics::MethodSpec::Normalizer::kLemma;
      lemma.lemmas = std::make_shared<surface::LemmaMap>(surface::LoadLemmaMap(o.lemmas));
      methods.push_back(lemma);
    }
  }
  if (!o.algos.empty()) {
    const auto sizes = SplitList(o.vocab_sizes.empty() ? std::to_string(o.vocab_size)
                                                       : o.vocab_sizes,
                                 ',');
    for (const auto& algo : SplitList(o.algos, ',')) {
      for (const auto& size : sizes) {
        metrics::MethodSpec m;
        m.kind = metrics::MethodSpec::Kind::kSubword;
        m.train.algorithm = subword::ParseAlgorithm(algo);
        m.train.vocab_size = std::stoi(size);
        m.train.min_frequency = o.min_freq;
        m.train.seed = o.seed;
        m.train.max_piece_len = o.max_piece_len;
        m.name = std::string(subword::AlgorithmName(m.train.algorithm)) + "-" + size;
        methods.push_back(std::move(m));
      }
    }
  }
  for (const auto& path : o.model_files) {
    metrics::MethodSpec m;
    m.kind = metrics::MethodSpec::Kind::kSubword;
    m.name = fs::path(path).stem().string();
    m.model = std::make_shared<subword::SubwordModel>(subword::LoadModel(path));
    methods.push_back(std::move(m));
  }
  for (const auto& path : o.external_files) {
    metrics::MethodSpec m;
    m.kind = metrics::MethodSpec::Kind::kExternal;
    m.name = fs::path(path).stem().string();
    m.external = std::make_shared<std::map<std::string, std::vector<std::string>>>(
        metrics::LoadExternalTokens(path));
    methods.push_back(std::move(m));
  }
  if (!o.methods.empty()) {
    const Json j = io::ReadJson(o.methods);
    const Json& list = j.is_object() ? j.at("methods") : j;
    const std::string base = fs::path(o.methods).parent_path().string();
    for (const auto& m : list) {
      methods.push_back(metrics::MethodSpecFromJson(m, base.empty() ? "." : base));
    }
  }
  return methods;
}

int Eval(const Options& o) {
  const auto methods = EvalMethods(o);
  if (methods.empty()) {
    throw CLI::ValidationError(
        "eval", "no methods: use --surface, --algos, --model, --external or --methods");
  }
  const auto c = corpus::LoadCorpus(o.in);
  const corpus::Split split = o.split.empty()
                                  ? corpus::SplitCorpus(c, {o.seed, o.test_fraction})
                                  : corpus::SplitFromJson(io::ReadJson(o.split));
  const auto nests = o.nests.empty() ? std::vector<metrics::LexemeNest>{}
                                     : metrics::LoadNests(o.nests);
  metrics::CompareOptions opts;
  opts.threads = o.threads;
  opts.measure_time = !o.no_timing;
  opts.timing_tokens = o.timing_tokens;
  const std::string id = o.corpus_id.empty() ? fs::path(o.in).stem().string() : o.corpus_id;
  const auto report = metrics::CompareMethods(id, c, split, methods, nests, opts);
  Emit(o.out, metrics::ReportCsv(report.rows));
  if (!o.report.empty()) EmitJson(o.report, metrics::ReportToJson(report));
  if (!o.zipf_out.empty()) Emit(o.zipf_out, metrics::ZipfPointsCsv(report.zipf_points));
  for (const auto& r : report.rows) {
    if (r.error) std::cerr << "warning: method " << r.method << " failed: " << *r.error << "\n";
  }
  return 0;
}

int Zipf(const Options& o) {
  std::map<std::string, int64_t> freqs;
  const corpus::Corpus c = corpus::LoadCorpus(o.in);
  for (const auto& d : c.documents()) {
    for (auto& w : text::SplitWhitespace(d.text)) ++freqs[std::move(w)];
  }
  const auto points = metrics::ZipfPoints(freqs);
  if (!o.out.empty()) Emit(o.out, metrics::ZipfPointsCsv(points));
  EmitJson("", metrics::ZipfFitToJson(metrics::FitZipf(points)));
  return 0;
}

corruptor::CorruptionRuleSet CorruptionRules(const Options& o) {
  if (!o.rules.empty()) return corruptor::LoadCorruptionRules(o.rules);
  return corruptor::BuiltinRules(o.lang.empty() ? "ru" : o.lang);
}

int Corrupt(const Options& o) {
  const auto rules = CorruptionRules(o);
  if (!o.text.empty()) {
    EmitJson(o.out, corruptor::ResultToJson(corruptor::Corrupt(o.text, rules, o.ratio, o.seed)));
    return 0;
  }
  auto c = corpus::LoadCorpus(o.in);
  std::set<std::string> test_ids;
  if (!o.split.empty()) {
    const auto split = corpus::SplitFromJson(io::ReadJson(o.split));
    test_ids.insert(split.test_ids.begin(), split.test_ids.end());
  }
  std::vector<corruptor::CorruptionResult> results;
  const auto out = corruptor::CorruptCorpus(c, rules, o.ratio, o.seed,
                                            o.split.empty() ? nullptr : &test_ids, o.threads,
                                            &results);
  for (size_t i = 0; i < results.size(); ++i) {
    if (results[i].warning) {
      std::cerr << "warning: " << c.documents()[i].id << ": " << *results[i].warning << "\n";
    }
  }
  Emit(o.out, corpus::SerializeCorpus(out));
  return 0;
}

int Datasheet(const Options& o) {
  corpus::DatasheetOptions opts;
  opts.name = o.name;
  opts.version = o.version;
  opts.processing_description = o.description;
  opts.known_limitations = o.limitations;
  opts.recommended_min_tokens = o.min_tokens;
  EmitJson(o.out, corpus::DatasheetToJson(corpus::BuildDatasheet(corpus::LoadCorpus(o.in), opts)));
  return 0;
}

int Serve(const Options& o) {
  service::ServiceOptions opts;
  opts.models_dir = o.models_dir;
  if (const char* env = std::getenv("TOKLAB_MODELS_DIR"); env != nullptr && *env != '\0') {
    opts.models_dir = env;
  }
  opts.rules_dir = o.rules_dir;
  opts.reports_dir = o.reports_dir;
  opts.max_text_bytes = o.max_text_bytes;
  const auto svc = service::Service::Load(opts);
  service::RunServer(svc, o.addr, o.static_dir);
  return 0;
}

int SelfTest(const Options& o) {
  const auto results = RunSelfTest(static_cast<unsigned>(o.seed));
  bool ok = true;
  std::ostringstream table;
  for (const auto& r : results) {
    table << (r.passed ? "PASS" : "FAIL") << "  " << r.name;
    if (!r.passed) table << "  (" << r.detail << ")";
    table << "\n";
    ok = ok && r.passed;
  }
  Emit(o.out, table.str());
  return ok ? 0 : kDataError;
}

}  // namespace

int Main(int argc, char** argv) {
  CLI::App app{"toklab: corpus tokenization and normalization laboratory", "toklab"};
  app.require_subcommand(1);
  Options o;

  auto in = [&](CLI::App* c, bool required = true) {
    auto* opt = c->add_option("--in", o.in, "Input corpus (JSONL)");
    if (required) opt->required();
  };
  auto out = [&](CLI::App* c, const std::string& what = "Output path (default stdout)") {
    c->add_option("--out", o.out, what);
  };

  auto* validate = app.add_subcommand("validate", "Check a corpus against the schema");
  in(validate);
  out(validate);
  auto* stats = app.add_subcommand("stats", "Descriptive corpus statistics");
  in(stats);
  out(stats);
  auto* clean = app.add_subcommand("clean", "Strip markup and normalize whitespace");
  in(clean);
  out(clean);
  clean->add_option("--config", o.config, "Clean config JSON");
  auto* standardize = app.add_subcommand("standardize", "Replace entities with markers");
  in(standardize);
  out(standardize);
  standardize->add_option("--rules", o.rules, "Rule file JSON or 'default'");
  auto* split = app.add_subcommand("split", "Seeded train/test split");
  in(split);
  out(split);
  split->add_option("--seed", o.seed, "Shuffle seed");
  split->add_option("--test-fraction", o.test_fraction, "Test share in (0,1)")
      ->check(CLI::Range(0.0, 1.0));
  auto* verify = app.add_subcommand("verify-split", "Check a split for leakage");
  in(verify);
  out(verify);
  verify->add_option("--split", o.split, "Split JSON")->required();
  auto* train = app.add_subcommand("train", "Train a subword model");
  in(train, false);
  train->add_option("--word-freqs", o.word_freqs, "Word frequency TSV instead of --in");
  train->add_option("--split", o.split, "Split JSON; trains on its train ids");
  train->add_option("--algo", o.algo, "bpe, wordpiece or unigram");
  train->add_option("--vocab-size", o.vocab_size, "Learned vocabulary size")
      ->check(CLI::PositiveNumber);
  train->add_option("--min-freq", o.min_freq, "Minimum pair/piece frequency");
  train->add_option("--seed", o.seed, "Seed");
  train->add_option("--max-piece-len", o.max_piece_len, "Unigram maximum piece length");
  train->add_option("--threads", o.threads, "Worker threads");
  train->add_option("--out", o.out, "Model path")->required();
  auto* encode = app.add_subcommand("encode", "Segment text or a corpus");
  encode->add_option("--model", o.model, "Model JSON")->required();
  auto* enc_text = encode->add_option("--text", o.text, "Text to segment");
  encode->add_option("--in", o.in, "Corpus to segment (JSONL)")->excludes(enc_text);
  out(encode);
  auto* decode = app.add_subcommand("decode", "Turn token ids back into text");
  decode->add_option("--model", o.model, "Model JSON")->required();
  auto* dec_ids = decode->add_option("--ids", o.ids, "Ids: commas within a word, spaces between");
  decode->add_option("--in", o.in, "JSONL from encode")->excludes(dec_ids);
  out(decode);
  auto* eval = app.add_subcommand("eval", "Compare tokenization methods");
  in(eval);
  out(eval, "Metrics CSV path (default stdout)");
  eval->add_option("--split", o.split, "Split JSON (default: split with --seed)");
  eval->add_option("--seed", o.seed, "Seed for training and the default split");
  eval->add_option("--test-fraction", o.test_fraction, "Test share for the default split");
  eval->add_flag("--surface", o.surface, "Add whitespace/lowercase (and stem/lemma) methods");
  eval->add_option("--stem-rules", o.stem_rules, "Stem rule table for the stem method");
  eval->add_option("--lemmas", o.lemmas, "Lemma TSV for the lemma method");
  eval->add_option("--algos", o.algos, "Comma list of subword algorithms to train");
  eval->add_option("--vocab-sizes", o.vocab_sizes, "Comma list of vocabulary sizes");
  eval->add_option("--min-freq", o.min_freq, "Minimum frequency for training");
  eval->add_option("--max-piece-len", o.max_piece_len, "Unigram maximum piece length");
  eval->add_option("--model", o.model_files, "Pre-trained model (repeatable)");
  eval->add_option("--external", o.external_files, "External tokens JSONL (repeatable)");
  eval->add_option("--methods", o.methods, "Method list JSON");
  eval->add_option("--nests", o.nests, "Lexeme nest TSV");
  eval->add_option("--corpus-id", o.corpus_id, "Report id (default: input file stem)");
  eval->add_option("--report", o.report, "Report JSON path");
  eval->add_option("--zipf-out", o.zipf_out, "Zipf points CSV path");
  eval->add_option("--threads", o.threads, "Worker threads");
  eval->add_option("--timing-tokens", o.timing_tokens, "Tokens in the timing slice");
  eval->add_flag("--no-timing", o.no_timing, "Skip timing");
  auto* zipf = app.add_subcommand("zipf", "Rank-frequency fit; prints the fit");
  in(zipf);
  out(zipf, "Points CSV path");
  auto* corrupt = app.add_subcommand("corrupt", "Inject typos into a corpus or text");
  auto* cor_text = corrupt->add_option("--text", o.text, "Corrupt one text");
  corrupt->add_option("--in", o.in, "Corpus (test split) JSONL")->excludes(cor_text);
  auto* lang = corrupt->add_option("--lang", o.lang, "Built-in rule set: ru or tg");
  corrupt->add_option("--rules", o.rules, "Rule file JSON")->excludes(lang);
  corrupt->add_option("--ratio", o.ratio, "Share of eligible words in (0,1]")->required();
  corrupt->add_option("--seed", o.seed, "Seed");
  corrupt->add_option("--split", o.split, "Split JSON; refuses non-test documents");
  corrupt->add_option("--threads", o.threads, "Worker threads");
  out(corrupt);
  auto* datasheet = app.add_subcommand("datasheet", "Structured corpus description");
  in(datasheet);
  out(datasheet);
  datasheet->add_option("--name", o.name, "Corpus name");
  datasheet->add_option("--version", o.version, "Corpus version");
  datasheet->add_option("--description", o.description, "Processing description");
  datasheet->add_option("--limitation", o.limitations, "Known limitation (repeatable)");
  datasheet->add_option("--min-tokens", o.min_tokens, "Recommended minimum token count");
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--addr", o.addr, "host:port")->capture_default_str();
  serve->add_option("--models", o.models_dir, "Model directory (TOKLAB_MODELS_DIR overrides)");
  serve->add_option("--rules", o.rules_dir, "Corruption rule directory");
  serve->add_option("--reports", o.reports_dir, "Report directory");
  serve->add_option("--max-text-bytes", o.max_text_bytes, "Largest accepted text");
  serve->add_option("--static", o.static_dir, "Directory of static files served at /");
  auto* selftest = app.add_subcommand("selftest", "Run the invariant checks");
  selftest->add_option("--seed", o.seed, "Seed");
  out(selftest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  const std::map<CLI::App*, int (*)(const Options&)> handlers = {
      {validate, Validate}, {stats, Stats},       {clean, Clean},       {standardize, Standardize},
      {split, Split},       {verify, VerifySplit}, {train, Train},       {encode, Encode},
      {decode, Decode},     {eval, Eval},         {zipf, Zipf},         {corrupt, Corrupt},
      {datasheet, Datasheet}, {serve, Serve},     {selftest, SelfTest}};
  CLI::App* chosen = app.get_subcommands().front();
  try {
    if ((chosen == encode && o.text.empty() && o.in.empty()) ||
        (chosen == decode && o.ids.empty() && o.in.empty()) ||
        (chosen == corrupt && o.text.empty() && o.in.empty())) {
      throw CLI::ValidationError(chosen->get_name(), "give --text/--ids or --in");
    }
    return handlers.at(chosen)(o);
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n" << chosen->help();
    return kUsageError;
  } catch (const Error& e) {
    std::cerr << "error (" << ErrorKindName(e.kind()) << "): " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
}

}  // namespace toklab::tools

int main(int argc, char** argv) { return toklab::tools::Main(argc, argv); }
