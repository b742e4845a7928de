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

#include <algorithm>
#include <cinttypes>
#include <climits>
#include <cmath>
#include <cstdio>
#include <set>

#include "toklab/error.hpp"
#include "toklab/io.hpp"
#include "toklab/parallel.hpp"
#include "toklab/rng.hpp"
#include "toklab/subword.hpp"
#include "toklab/text.hpp"

namespace toklab::subword {
namespace {

constexpr const char* kModelFormat = "toklab-subword-model";
// Words longer than this are a single <UNK> under WordPiece.
constexpr size_t kMaxWordPieceChars = 100;
// Score gap between the worst known piece and an unknown character.
constexpr double kUnkPenalty = 10.0;

uint64_t PairKey(int a, int b) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) |
         static_cast<uint32_t>(b);
}

std::string Checksum(const Json& body) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016" PRIx64,
                Fnv1a64(body.dump()));
  return buf;
}

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

const char* AlgorithmName(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kBpe: return "bpe";
    case Algorithm::kWordPiece: return "wordpiece";
    case Algorithm::kUnigram: return "unigram";
  }
  return "bpe";
}

Algorithm ParseAlgorithm(std::string_view name) {
  if (name == "bpe") return Algorithm::kBpe;
  if (name == "wordpiece") return Algorithm::kWordPiece;
  if (name == "unigram") return Algorithm::kUnigram;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown algorithm '" + std::string(name) + "'");
}

Json TrainConfigToJson(const TrainConfig& cfg) {
  Json j = Json::object();
  j["algorithm"] = AlgorithmName(cfg.algorithm);
  j["vocab_size"] = cfg.vocab_size;
  j["min_frequency"] = cfg.min_frequency;
  j["seed"] = cfg.seed;
  j["max_piece_len"] = cfg.max_piece_len;
  j["unigram_seed_multiplier"] = cfg.unigram_seed_multiplier;
  j["unigram_prune_fraction"] = cfg.unigram_prune_fraction;
  j["unigram_em_iters_per_round"] = cfg.unigram_em_iters_per_round;
  return j;
}

TrainConfig TrainConfigFromJson(const Json& j) {
  TrainConfig cfg;
  try {
    cfg.algorithm = ParseAlgorithm(j.value("algorithm", "bpe"));
    cfg.vocab_size = j.value("vocab_size", cfg.vocab_size);
    cfg.min_frequency = j.value("min_frequency", cfg.min_frequency);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.max_piece_len = j.value("max_piece_len", cfg.max_piece_len);
    cfg.unigram_seed_multiplier =
        j.value("unigram_seed_multiplier", cfg.unigram_seed_multiplier);
    cfg.unigram_prune_fraction =
        j.value("unigram_prune_fraction", cfg.unigram_prune_fraction);
    cfg.unigram_em_iters_per_round =
        j.value("unigram_em_iters_per_round", cfg.unigram_em_iters_per_round);
    cfg.threads = j.value("threads", cfg.threads);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kValidation,
                std::string("invalid training config: ") + e.what());
  }
  return cfg;
}

WordFreqs CountWords(const std::vector<std::string>& texts,
                     const surface::SurfaceTokenizer& pre_tokenizer,
                     int threads) {
  constexpr size_t kChunk = 256;
  const size_t chunks = ChunkCount(texts.size(), kChunk);
  std::vector<WordFreqs> partial(chunks);
  ParallelFor(chunks, threads, [&](size_t c) {
    const size_t end = std::min(texts.size(), (c + 1) * kChunk);
    for (size_t i = c * kChunk; i < end; ++i) {
      for (auto& w : pre_tokenizer.Tokenize(texts[i])) ++partial[c][std::move(w)];
    }
  });
  WordFreqs total;
  for (auto& p : partial) {
    for (auto& [w, n] : p) total[w] += n;
  }
  return total;
}

std::string WordFreqsToTsv(const WordFreqs& freqs) {
  std::string out;
  for (const auto& [w, n] : freqs) {
    out += w;
    out += '\t';
    out += std::to_string(n);
    out += '\n';
  }
  return out;
}

WordFreqs WordFreqsFromTsv(std::string_view tsv) {
  WordFreqs freqs;
  for (const auto& row : io::ParseTsv(tsv)) {
    if (row.fields.size() != 2) {
      throw Error(ErrorKind::kParse, "word-frequency line " +
                                         std::to_string(row.line) +
                                         ": expected word<TAB>count");
    }
    int64_t n = 0;
    try {
      size_t used = 0;
      n = std::stoll(row.fields[1], &used);
      if (used != row.fields[1].size()) throw std::invalid_argument("count");
    } catch (const std::exception&) {
      throw Error(ErrorKind::kParse, "word-frequency line " +
                                         std::to_string(row.line) +
                                         ": invalid count");
    }
    freqs[row.fields[0]] += n;
  }
  return freqs;
}

SubwordModel::SubwordModel(
    Algorithm algorithm, std::vector<std::string> vocab,
    std::vector<std::pair<std::string, std::string>> merges,
    std::vector<double> scores, TrainConfig training)
    : algorithm_(algorithm),
      vocab_(std::move(vocab)),
      merges_(std::move(merges)),
      scores_(std::move(scores)),
      training_(training) {
  if (vocab_.empty() || vocab_[0] != kUnkToken) {
    throw Error(ErrorKind::kValidation, "vocabulary must start with <UNK>");
  }
  if (algorithm_ == Algorithm::kUnigram) {
    if (scores_.size() != vocab_.size()) {
      throw Error(ErrorKind::kValidation, "unigram scores/vocab size mismatch");
    }
    for (size_t i = 1; i < scores_.size(); ++i) {
      if (!std::isfinite(scores_[i])) {
        throw Error(ErrorKind::kValidation,
                    "non-finite score for piece '" + vocab_[i] + "'");
      }
    }
  } else {
    scores_.clear();
  }
  BuildIndex();
}

void SubwordModel::BuildIndex() {
  index_.clear();
  index_.reserve(vocab_.size());
  max_piece_chars_ = 1;
  for (size_t i = 0; i < vocab_.size(); ++i) {
    if (!index_.emplace(vocab_[i], static_cast<int>(i)).second) {
      throw Error(ErrorKind::kValidation,
                  "duplicate vocabulary entry '" + vocab_[i] + "'");
    }
    if (i > 0) {
      max_piece_chars_ = std::max(max_piece_chars_, text::CharacterCount(vocab_[i]));
    }
  }
  merge_ranks_.clear();
  for (size_t r = 0; r < merges_.size(); ++r) {
    const auto& [l, rr] = merges_[r];
    auto li = IdOf(l), ri = IdOf(rr), mi = IdOf(l + rr);
    if (!li || !ri || !mi) {
      throw Error(ErrorKind::kValidation,
                  "merge ('" + l + "', '" + rr + "') references unknown pieces");
    }
    merge_ranks_.emplace(PairKey(*li, *ri),
                         std::make_pair(static_cast<int>(r), *mi));
  }
  if (algorithm_ == Algorithm::kUnigram && scores_.size() > 1) {
    double worst = 0.0;
    for (size_t i = 1; i < scores_.size(); ++i) worst = std::min(worst, scores_[i]);
    unk_score_ = worst - kUnkPenalty;
  }
}

std::optional<int> SubwordModel::IdOf(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Segmentation SubwordModel::EncodeWord(std::string_view word) const {
  switch (algorithm_) {
    case Algorithm::kBpe: return EncodeBpe(word);
    case Algorithm::kWordPiece: return EncodeWordPiece(word);
    case Algorithm::kUnigram: return EncodeUnigram(word);
  }
  return {};
}

std::vector<Segmentation> SubwordModel::Encode(
    std::string_view text, const surface::SurfaceTokenizer& pre_tokenizer) const {
  std::vector<Segmentation> out;
  for (const auto& w : pre_tokenizer.Tokenize(text)) out.push_back(EncodeWord(w));
  return out;
}

Segmentation SubwordModel::EncodeBpe(std::string_view word) const {
  struct Symbol {
    std::string text;
    int id;  // -1 when outside the vocabulary
    size_t begin, end;
  };
  const std::vector<std::string> chars = text::Characters(word);
  std::vector<Symbol> symbols;
  symbols.reserve(chars.size());
  for (size_t i = 0; i < chars.size(); ++i) {
    std::string s = chars[i];
    if (i + 1 == chars.size()) s += kWordEndMarker;
    const auto id = IdOf(s);
    symbols.push_back({std::move(s), id ? *id : -1, i, i + 1});
  }
  while (symbols.size() > 1) {
    int best_rank = INT_MAX;
    uint64_t best_key = 0;
    for (size_t k = 0; k + 1 < symbols.size(); ++k) {
      if (symbols[k].id < 0 || symbols[k + 1].id < 0) continue;
      const uint64_t key = PairKey(symbols[k].id, symbols[k + 1].id);
      auto it = merge_ranks_.find(key);
      if (it != merge_ranks_.end() && it->second.first < best_rank) {
        best_rank = it->second.first;
        best_key = key;
      }
    }
    if (best_rank == INT_MAX) break;
    const int merged_id = merge_ranks_.at(best_key).second;
    std::vector<Symbol> next;
    next.reserve(symbols.size());
    for (size_t k = 0; k < symbols.size(); ++k) {
      if (k + 1 < symbols.size() && symbols[k].id >= 0 &&
          symbols[k + 1].id >= 0 &&
          PairKey(symbols[k].id, symbols[k + 1].id) == best_key) {
        next.push_back({symbols[k].text + symbols[k + 1].text, merged_id,
                        symbols[k].begin, symbols[k + 1].end});
        ++k;
      } else {
        next.push_back(std::move(symbols[k]));
      }
    }
    symbols = std::move(next);
  }
  Segmentation seg;
  for (auto& s : symbols) {
    seg.unknown.push_back(s.id < 0);
    seg.ids.push_back(s.id < 0 ? unk_id() : s.id);
    seg.tokens.push_back(std::move(s.text));
    seg.offsets.emplace_back(s.begin, s.end);
  }
  return seg;
}

Segmentation SubwordModel::EncodeWordPiece(std::string_view word) const {
  const std::vector<std::string> chars = text::Characters(word);
  Segmentation seg;
  if (chars.empty()) return seg;
  auto unknown_word = [&] {
    Segmentation unk;
    unk.tokens.emplace_back(kUnkToken);
    unk.ids.push_back(unk_id());
    unk.offsets.emplace_back(0, chars.size());
    unk.unknown.push_back(true);
    return unk;
  };
  if (chars.size() > kMaxWordPieceChars) return unknown_word();
  size_t start = 0;
  while (start < chars.size()) {
    size_t end = std::min(chars.size(), start + max_piece_chars_);
    std::optional<int> found;
    std::string piece;
    for (; end > start; --end) {
      piece = start > 0 ? std::string(kContinuationMarker) : std::string();
      for (size_t k = start; k < end; ++k) piece += chars[k];
      found = IdOf(piece);
      if (found) break;
    }
    if (!found) return unknown_word();
    seg.tokens.push_back(piece);
    seg.ids.push_back(*found);
    seg.offsets.emplace_back(start, end);
    seg.unknown.push_back(false);
    start = end;
  }
  return seg;
}

Segmentation SubwordModel::EncodeUnigram(std::string_view word) const {
  const std::vector<std::string> chars = text::Characters(word);
  const size_t n = chars.size();
  Segmentation seg;
  if (n == 0) return seg;

  struct Cell {
    double score = -INFINITY;
    size_t tokens = 0;
    size_t from = 0;
    int id = -2;  // -1: unknown single character
  };
  std::vector<Cell> best(n + 1);
  best[0].score = 0.0;

  // Token sequence ending at `pos` if the last step were `last`.
  auto sequence = [&](size_t pos, const Cell& last) {
    std::vector<std::string> seq;
    Cell cur = last;
    size_t p = pos;
    while (p > 0) {
      std::string piece;
      for (size_t k = cur.from; k < p; ++k) piece += chars[k];
      seq.push_back(std::move(piece));
      p = cur.from;
      cur = best[p];
    }
    std::reverse(seq.begin(), seq.end());
    return seq;
  };

  for (size_t end = 1; end <= n; ++end) {
    const size_t lo = end > max_piece_chars_ ? end - max_piece_chars_ : 0;
    std::string piece;
    for (size_t start = end; start-- > lo;) {
      piece.insert(0, chars[start]);
      if (!std::isfinite(best[start].score)) continue;
      auto id = IdOf(piece);
      int cand_id;
      double piece_score;
      if (id && *id != unk_id()) {
        cand_id = *id;
        piece_score = scores_[static_cast<size_t>(*id)];
      } else if (start + 1 == end) {
        cand_id = -1;
        piece_score = unk_score_;
      } else {
        continue;
      }
      Cell cand{best[start].score + piece_score, best[start].tokens + 1, start,
                cand_id};
      Cell& cur = best[end];
      bool take = false;
      if (!std::isfinite(cur.score) || cand.score > cur.score) {
        take = true;
      } else if (cand.score == cur.score) {
        if (cand.tokens != cur.tokens) {
          take = cand.tokens < cur.tokens;
        } else {
          take = sequence(end, cand) < sequence(end, cur);
        }
      }
      if (take) cur = cand;
    }
  }
  std::vector<Cell> path;
  for (size_t p = n; p > 0; p = best[p].from) path.push_back(best[p]);
  std::reverse(path.begin(), path.end());
  for (size_t k = 0; k < path.size(); ++k) {
    const Cell& c = path[k];
    const size_t e = k + 1 < path.size() ? path[k + 1].from : n;
    std::string piece;
    for (size_t i = c.from; i < e; ++i) piece += chars[i];
    seg.tokens.push_back(std::move(piece));
    seg.ids.push_back(c.id < 0 ? unk_id() : c.id);
    seg.unknown.push_back(c.id < 0);
    seg.offsets.emplace_back(c.from, e);
  }
  return seg;
}

std::string SubwordModel::PieceText(int id, bool word_initial,
                                    bool word_final) const {
  if (id < 0 || static_cast<size_t>(id) >= vocab_.size()) {
    throw Error(ErrorKind::kNotFound, "unknown token id " + std::to_string(id));
  }
  if (id == unk_id()) return std::string(kUnkToken);
  std::string_view piece = vocab_[static_cast<size_t>(id)];
  if (algorithm_ == Algorithm::kBpe && word_final &&
      EndsWith(piece, kWordEndMarker)) {
    piece.remove_suffix(kWordEndMarker.size());
  } else if (algorithm_ == Algorithm::kWordPiece && !word_initial &&
             piece.substr(0, kContinuationMarker.size()) == kContinuationMarker) {
    piece.remove_prefix(kContinuationMarker.size());
  }
  return std::string(piece);
}

std::string SubwordModel::DecodeWord(const std::vector<int>& ids) const {
  std::string out;
  for (size_t k = 0; k < ids.size(); ++k) {
    out += PieceText(ids[k], k == 0, k + 1 == ids.size());
  }
  return out;
}

std::string SubwordModel::Decode(const std::vector<Segmentation>& words) const {
  std::string out;
  bool first = true;
  for (const Segmentation& w : words) {
    if (w.ids.empty()) continue;
    if (!first) out += ' ';
    first = false;
    out += DecodeWord(w.ids);
  }
  return out;
}

Json SubwordModel::ToJson() const {
  Json body = Json::object();
  body["format"] = kModelFormat;
  body["version"] = kFormatVersion;
  body["algorithm"] = AlgorithmName(algorithm_);
  body["unk_token"] = kUnkToken;
  body["word_end_marker"] = kWordEndMarker;
  body["continuation_marker"] = kContinuationMarker;
  body["training"] = TrainConfigToJson(training_);
  body["vocab"] = vocab_;
  Json merges = Json::array();
  for (const auto& [l, r] : merges_) merges.push_back(Json::array({l, r}));
  body["merges"] = merges;
  Json scores = Json::array();
  for (size_t i = 0; i < scores_.size(); ++i) {
    if (i == 0) {
      scores.push_back(nullptr);
    } else {
      scores.push_back(scores_[i]);
    }
  }
  body["scores"] = scores;
  body["checksum"] = Checksum(body);
  return body;
}

SubwordModel SubwordModel::FromJson(const Json& j) {
  if (!j.is_object() || j.value("format", "") != kModelFormat) {
    throw Error(ErrorKind::kCorrupt, "not a subword model file");
  }
  const Json version = j.value("version", Json());
  if (!version.is_string() || version.get<std::string>() != kFormatVersion) {
    throw Error(ErrorKind::kVersion,
                "unsupported model format version " + version.dump() +
                    " (expected \"" + std::string(kFormatVersion) + "\")");
  }
  if (!j.contains("checksum") || !j["checksum"].is_string()) {
    throw Error(ErrorKind::kCorrupt, "model file has no checksum");
  }
  Json body = j;
  body.erase("checksum");
  if (Checksum(body) != j["checksum"].get<std::string>()) {
    throw Error(ErrorKind::kCorrupt, "model checksum mismatch");
  }
  try {
    const Algorithm algorithm = ParseAlgorithm(j.at("algorithm").get<std::string>());
    auto vocab = j.at("vocab").get<std::vector<std::string>>();
    std::vector<std::pair<std::string, std::string>> merges;
    for (const auto& m : j.at("merges")) {
      merges.emplace_back(m.at(0).get<std::string>(), m.at(1).get<std::string>());
    }
    std::vector<double> scores;
    for (const auto& s : j.at("scores")) {
      scores.push_back(s.is_null() ? 0.0 : s.get<double>());
    }
    return SubwordModel(algorithm, std::move(vocab), std::move(merges),
                        std::move(scores), TrainConfigFromJson(j.at("training")));
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kCorrupt, std::string("malformed model: ") + e.what());
  }
}

std::string SubwordModel::Serialize() const { return ToJson().dump(1) + "\n"; }

SubwordModel SubwordModel::Deserialize(std::string_view contents) {
  Json j;
  try {
    j = Json::parse(contents);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::kCorrupt,
                std::string("truncated or malformed model file: ") + e.what());
  }
  return FromJson(j);
}

void SaveModel(const SubwordModel& model, const std::string& path) {
  io::WriteFile(path, model.Serialize());
}

SubwordModel LoadModel(const std::string& path) {
  return SubwordModel::Deserialize(io::ReadFile(path));
}

SubwordModel Train(const WordFreqs& word_freqs, const TrainConfig& cfg) {
  switch (cfg.algorithm) {
    case Algorithm::kBpe: return TrainBpe(word_freqs, cfg);
    case Algorithm::kWordPiece: return TrainWordPiece(word_freqs, cfg);
    case Algorithm::kUnigram: return TrainUnigram(word_freqs, cfg);
  }
  return TrainBpe(word_freqs, cfg);
}

}  // namespace toklab::subword
