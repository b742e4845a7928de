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

// Python bindings. Structured values cross the boundary as JSON-compatible
// Python objects (dict, list, str, int, float, bool, None).

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "toklab/corpus.hpp"
#include "toklab/corruptor.hpp"
#include "toklab/error.hpp"
#include "toklab/metrics.hpp"
#include "toklab/normalize.hpp"
#include "toklab/service.hpp"
#include "toklab/subword.hpp"
#include "toklab/surface.hpp"

namespace py = pybind11;

namespace toklab {
namespace {

using Json = nlohmann::ordered_json;

py::object ToPy(const Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

Json FromPy(const py::handle& obj) {
  const std::string s = py::module_::import("json").attr("dumps")(obj).cast<std::string>();
  return Json::parse(s);
}

std::vector<std::string> Texts(const py::iterable& texts) {
  std::vector<std::string> out;
  for (const auto& t : texts) out.push_back(t.cast<std::string>());
  return out;
}

surface::SurfaceTokenizer PreTokenizer(const std::string& pattern) {
  return pattern.empty() ? surface::SurfaceTokenizer::Whitespace()
                         : surface::SurfaceTokenizer::FromPattern(pattern);
}

subword::TrainConfig TrainConfigFrom(const std::string& algorithm, int vocab_size,
                                     int64_t min_frequency, uint64_t seed, int threads,
                                     const py::dict& extra) {
  Json j = FromPy(extra);
  j["algorithm"] = algorithm;
  j["vocab_size"] = vocab_size;
  j["min_frequency"] = min_frequency;
  j["seed"] = seed;
  j["threads"] = threads;
  return subword::TrainConfigFromJson(j);
}

corruptor::CorruptionRuleSet RuleSetFrom(const py::object& rules) {
  if (py::isinstance<py::str>(rules)) return corruptor::BuiltinRules(rules.cast<std::string>());
  return corruptor::RuleSetFromJson(FromPy(rules));
}

}  // namespace
}  // namespace toklab

PYBIND11_MODULE(_toklab, m) {
  using namespace toklab;
  m.doc() = "Tokenization laboratory: cleaning, subword models, metrics, corruption";

  // Subclass of ValueError carrying the error kind, e.g. "validation".
  static py::handle error_type = py::exception<Error>(m, "Error", PyExc_ValueError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("kind") = ErrorKindName(e.kind());
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  // corpus
  m.def("load_corpus", [](const std::string& path) {
    const corpus::Corpus c = corpus::LoadCorpus(path);
    Json docs = Json::array();
    for (const auto& d : c.documents()) {
      docs.push_back(corpus::DocumentToJson(d));
    }
    return ToPy(docs);
  }, py::arg("path"), "Reads and validates a JSONL corpus; returns a list of documents.");
  m.def("corpus_stats", [](const std::string& path) {
    return ToPy(corpus::StatsToJson(corpus::ComputeStats(corpus::LoadCorpus(path))));
  }, py::arg("path"));
  m.def("split_ids", [](std::vector<std::string> ids, uint64_t seed, double test_fraction) {
    const corpus::SplitSpec spec{seed, test_fraction};
    return ToPy(corpus::SplitToJson(corpus::SplitIds(std::move(ids), spec), spec));
  }, py::arg("ids"), py::arg("seed") = 0, py::arg("test_fraction") = 0.2);

  // normalize
  m.def("clean", [](const std::string& text, const py::object& config) {
    const auto cfg = config.is_none() ? normalize::CleanConfig{}
                                      : normalize::CleanConfigFromJson(FromPy(config));
    return normalize::Clean(text, cfg);
  }, py::arg("text"), py::arg("config") = py::none());
  m.def("standardize", [](const std::string& text, const py::object& rules) {
    const auto rs = rules.is_none() ? normalize::DefaultRules()
                                    : normalize::RuleSetFromJson(FromPy(rules));
    return normalize::Standardize(text, rs);
  }, py::arg("text"), py::arg("rules") = py::none());

  // subword
  m.def("count_words", [](const py::iterable& texts, const std::string& pattern, int threads) {
    return subword::CountWords(Texts(texts), PreTokenizer(pattern), threads);
  }, py::arg("texts"), py::arg("pattern") = "", py::arg("threads") = 1);

  py::class_<subword::SubwordModel>(m, "SubwordModel")
      .def_static("train",
                  [](const subword::WordFreqs& freqs, const std::string& algorithm,
                     int vocab_size, int64_t min_frequency, uint64_t seed, int threads,
                     const py::kwargs& extra) {
                    return subword::Train(freqs, TrainConfigFrom(algorithm, vocab_size,
                                                                 min_frequency, seed, threads,
                                                                 extra));
                  },
                  py::arg("word_freqs"), py::arg("algorithm") = "bpe",
                  py::arg("vocab_size") = 8000, py::arg("min_frequency") = 2,
                  py::arg("seed") = 0, py::arg("threads") = 1)
      .def_static("load", &subword::LoadModel, py::arg("path"))
      .def_static("from_json", [](const std::string& s) {
        return subword::SubwordModel::Deserialize(s);
      }, py::arg("contents"))
      .def("save", [](const subword::SubwordModel& model, const std::string& path) {
        subword::SaveModel(model, path);
      }, py::arg("path"))
      .def("to_json", &subword::SubwordModel::Serialize)
      .def_property_readonly("algorithm", [](const subword::SubwordModel& model) {
        return std::string(subword::AlgorithmName(model.algorithm()));
      })
      .def_property_readonly("vocab", &subword::SubwordModel::vocab)
      .def_property_readonly("merges", &subword::SubwordModel::merges)
      .def("__len__", &subword::SubwordModel::size)
      .def("id_of", &subword::SubwordModel::IdOf, py::arg("token"))
      .def("encode_word", [](const subword::SubwordModel& model, const std::string& word) {
        return model.EncodeWord(word).tokens;
      }, py::arg("word"))
      .def("encode", [](const subword::SubwordModel& model, const std::string& text) {
        return ToPy(service::SegmentJson(model, text));
      }, py::arg("text"),
         "Returns {tokens, ids, offsets, is_unknown, word_index} for whitespace words.")
      .def("decode", [](const subword::SubwordModel& model, const std::vector<std::vector<int>>& words) {
        std::vector<std::string> out;
        for (const auto& ids : words) out.push_back(model.DecodeWord(ids));
        return text::Join(out, " ");
      }, py::arg("word_ids"), "Decodes one id list per word and joins the words with spaces.");

  // preprocessor
  py::class_<surface::Preprocessor>(m, "Preprocessor")
      .def_static("from_config", [](const py::object& config) {
        return surface::Preprocessor::FromConfig(FromPy(config));
      }, py::arg("config"))
      .def_static("load", &surface::Preprocessor::Load, py::arg("path"))
      .def("fit", [](surface::Preprocessor& p, const py::iterable& texts) -> surface::Preprocessor& {
        p.Fit(Texts(texts));
        return p;
      }, py::arg("texts"), py::return_value_policy::reference_internal)
      .def("transform", &surface::Preprocessor::Transform, py::arg("text"))
      .def("surface_tokens", &surface::Preprocessor::SurfaceTokens, py::arg("text"))
      .def_property_readonly("fitted", &surface::Preprocessor::fitted)
      .def("save", &surface::Preprocessor::Save, py::arg("path"));

  // metrics
  m.def("oov_rate", [](const std::set<std::string>& vocab, const std::vector<std::string>& heldout) {
    return metrics::OovRate(vocab, heldout);
  }, py::arg("vocab"), py::arg("heldout"));
  m.def("nest_compression", [](const py::function& method, const std::vector<std::string>& forms) {
    const metrics::TokenMapping f = [&method](std::string_view s) {
      return method(std::string(s)).cast<std::vector<std::string>>();
    };
    return metrics::NestCompression(f, {"", forms});
  }, py::arg("method"), py::arg("forms"),
     "Distinct token tuples over nest size for a callable mapping a form to tokens.");
  m.def("fragmentation", [](const subword::SubwordModel& model, const std::vector<std::string>& words) {
    return metrics::Fragmentation(model, words);
  }, py::arg("model"), py::arg("words"));
  m.def("reconstruction_rate", [](const subword::SubwordModel& model, const std::vector<std::string>& texts) {
    return metrics::ReconstructionRate(model, texts);
  }, py::arg("model"), py::arg("texts"));
  m.def("fit_zipf", [](const std::map<std::string, int64_t>& counts) {
    return ToPy(metrics::ZipfFitToJson(metrics::FitZipf(counts)));
  }, py::arg("counts"));
  m.def("compare_methods", [](const std::string& corpus_path, const py::object& split,
                              const py::object& methods, const std::string& nests_path,
                              const std::string& corpus_id, const std::string& base_dir) {
    const auto c = corpus::LoadCorpus(corpus_path);
    std::vector<metrics::MethodSpec> specs;
    for (const auto& j : FromPy(methods)) specs.push_back(metrics::MethodSpecFromJson(j, base_dir));
    const auto nests = nests_path.empty() ? std::vector<metrics::LexemeNest>{}
                                          : metrics::LoadNests(nests_path);
    metrics::CompareOptions options;
    options.measure_time = false;
    return ToPy(metrics::ReportToJson(metrics::CompareMethods(
        corpus_id, c, corpus::SplitFromJson(FromPy(split)), specs, nests, options)));
  }, py::arg("corpus_path"), py::arg("split"), py::arg("methods"), py::arg("nests_path") = "",
     py::arg("corpus_id") = "corpus", py::arg("base_dir") = ".",
     "Runs the method comparison without timing; returns the report document.");

  // corruptor
  m.def("builtin_rule_languages", &corruptor::BuiltinLanguages);
  m.def("corrupt", [](const std::string& text, const py::object& rules, double ratio, uint64_t seed) {
    return ToPy(corruptor::ResultToJson(corruptor::Corrupt(text, RuleSetFrom(rules), ratio, seed)));
  }, py::arg("text"), py::arg("rules"), py::arg("ratio"), py::arg("seed") = 0,
     "`rules` is a built-in language code or a rule-set dict.");
}
