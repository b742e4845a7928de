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

// Subword models: BPE, WordPiece and Unigram LM. Training is deterministic
// (independent of thread count and input order); trained models are
// immutable and safe to use from several threads.

#ifndef TOKLAB_SUBWORD_HPP_
#define TOKLAB_SUBWORD_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "toklab/tokenizer.hpp"

namespace toklab::subword {

using Json = nlohmann::ordered_json;

enum class Algorithm { kBpe, kWordPiece, kUnigram };

const char* AlgorithmName(Algorithm algorithm);
Algorithm ParseAlgorithm(std::string_view name);

inline constexpr std::string_view kUnkToken = "<UNK>";
inline constexpr std::string_view kWordEndMarker = "</w>";
inline constexpr std::string_view kContinuationMarker = "##";
inline constexpr std::string_view kFormatVersion = "1.0";

struct TrainConfig {
  Algorithm algorithm = Algorithm::kBpe;
  // Learned pieces, not counting the special <UNK> token.
  int vocab_size = 8000;
  int64_t min_frequency = 2;
  uint64_t seed = 0;
  int max_piece_len = 16;
  int unigram_seed_multiplier = 8;
  double unigram_prune_fraction = 0.2;
  int unigram_em_iters_per_round = 2;
  // Workers for counting and EM. Results never depend on this value.
  int threads = 1;
};

Json TrainConfigToJson(const TrainConfig& cfg);
TrainConfig TrainConfigFromJson(const Json& j);

// word -> occurrence count. Ordered so that every traversal is
// deterministic.
using WordFreqs = std::map<std::string, int64_t>;

WordFreqs CountWords(const std::vector<std::string>& texts,
                     const surface::SurfaceTokenizer& pre_tokenizer,
                     int threads = 1);
std::string WordFreqsToTsv(const WordFreqs& freqs);
WordFreqs WordFreqsFromTsv(std::string_view tsv);

struct Segmentation {
  std::vector<std::string> tokens;
  std::vector<int> ids;
  // [begin, end) character offsets into the pre-tokenized word.
  std::vector<std::pair<size_t, size_t>> offsets;
  std::vector<bool> unknown;

  size_t size() const { return tokens.size(); }
  bool operator==(const Segmentation&) const = default;
};

class SubwordModel {
 public:
  SubwordModel() = default;

  // `scores` is parallel to `vocab`; the entry for <UNK> is ignored.
  SubwordModel(Algorithm algorithm, std::vector<std::string> vocab,
               std::vector<std::pair<std::string, std::string>> merges,
               std::vector<double> scores, TrainConfig training);

  Algorithm algorithm() const { return algorithm_; }
  const std::vector<std::string>& vocab() const { return vocab_; }
  const std::vector<std::pair<std::string, std::string>>& merges() const {
    return merges_;
  }
  const std::vector<double>& scores() const { return scores_; }
  const TrainConfig& training() const { return training_; }
  int unk_id() const { return 0; }
  size_t size() const { return vocab_.size(); }

  std::optional<int> IdOf(std::string_view token) const;

  Segmentation EncodeWord(std::string_view word) const;
  std::vector<Segmentation> Encode(
      std::string_view text,
      const surface::SurfaceTokenizer& pre_tokenizer =
          surface::SurfaceTokenizer::Whitespace()) const;

  // The word text carried by one piece: markers stripped, <UNK> for the
  // unknown id. Throws Error(kNotFound) for ids outside the vocabulary.
  std::string PieceText(int id, bool word_initial, bool word_final) const;
  std::string DecodeWord(const std::vector<int>& ids) const;
  std::string Decode(const std::vector<Segmentation>& words) const;

  Json ToJson() const;
  static SubwordModel FromJson(const Json& j);
  // Canonical serialization; re-serializing a loaded model is byte-identical.
  std::string Serialize() const;
  static SubwordModel Deserialize(std::string_view contents);

 private:
  void BuildIndex();
  Segmentation EncodeBpe(std::string_view word) const;
  Segmentation EncodeWordPiece(std::string_view word) const;
  Segmentation EncodeUnigram(std::string_view word) const;

  Algorithm algorithm_ = Algorithm::kBpe;
  std::vector<std::string> vocab_;
  std::vector<std::pair<std::string, std::string>> merges_;
  std::vector<double> scores_;
  TrainConfig training_;

  std::unordered_map<std::string, int> index_;
  // (left id, right id) -> (rank, merged id)
  std::unordered_map<uint64_t, std::pair<int, int>> merge_ranks_;
  double unk_score_ = 0.0;
  size_t max_piece_chars_ = 1;
};

void SaveModel(const SubwordModel& model, const std::string& path);
SubwordModel LoadModel(const std::string& path);

SubwordModel TrainBpe(const WordFreqs& word_freqs, const TrainConfig& cfg);
SubwordModel TrainWordPiece(const WordFreqs& word_freqs, const TrainConfig& cfg);

// Per-round corpus log-likelihoods observed at each E-step, for checking
// the EM guarantee.
struct UnigramTrace {
  std::vector<std::vector<double>> round_log_likelihoods;
  std::vector<size_t> round_vocab_sizes;
};

SubwordModel TrainUnigram(const WordFreqs& word_freqs, const TrainConfig& cfg,
                          UnigramTrace* trace = nullptr);

// Dispatches on cfg.algorithm.
SubwordModel Train(const WordFreqs& word_freqs, const TrainConfig& cfg);

}  // namespace toklab::subword

#endif  // TOKLAB_SUBWORD_HPP_
