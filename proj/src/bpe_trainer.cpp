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

// BPE training. Pair frequencies are maintained incrementally: a merge only
// touches the words that contain the merged pair, and an ordered set keyed
// by (frequency desc, left, right) yields the next merge with the
// lexicographic tie-break.

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "toklab/error.hpp"
#include "toklab/parallel.hpp"
#include "toklab/subword.hpp"
#include "toklab/subword_internal.hpp"
#include "toklab/text.hpp"

namespace toklab::subword {
namespace {

struct PairEntry {
  int64_t freq;
  int left;
  int right;
};

class BpeTrainer {
 public:
  BpeTrainer(const WordFreqs& word_freqs, const TrainConfig& cfg)
      : cfg_(cfg), queue_(Compare{&symbols_}) {
    internal::ValidateTrainingInput(word_freqs, cfg);
    std::set<std::string> alphabet;
    for (const auto& [word, freq] : word_freqs) {
      const auto chars = text::Characters(word);
      if (chars.empty()) continue;
      Word w;
      w.freq = freq;
      for (size_t i = 0; i < chars.size(); ++i) {
        alphabet.insert(chars[i]);
        alphabet.insert(chars[i] + std::string(kWordEndMarker));
        std::string s = chars[i];
        if (i + 1 == chars.size()) s += kWordEndMarker;
        w.symbols.push_back(Intern(s));
      }
      words_.push_back(std::move(w));
    }
    if (static_cast<size_t>(cfg.vocab_size) < alphabet.size()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "vocab_size " + std::to_string(cfg.vocab_size) +
                      " is smaller than the alphabet (" +
                      std::to_string(alphabet.size()) + " symbols)");
    }
    vocab_.emplace_back(kUnkToken);
    for (const auto& a : alphabet) AddToVocab(a);
  }

  SubwordModel Run() {
    CountInitialPairs();
    while (static_cast<int64_t>(vocab_.size()) - 1 < cfg_.vocab_size &&
           !queue_.empty()) {
      const PairEntry best = *queue_.begin();
      if (best.freq < cfg_.min_frequency) break;
      ApplyMerge(best.left, best.right);
    }
    return SubwordModel(Algorithm::kBpe, std::move(vocab_), std::move(merges_),
                        {}, cfg_);
  }

 private:
  struct Word {
    std::vector<int> symbols;
    int64_t freq = 0;
  };

  struct Compare {
    const std::vector<std::string>* symbols;
    bool operator()(const PairEntry& a, const PairEntry& b) const {
      if (a.freq != b.freq) return a.freq > b.freq;
      const std::string& al = (*symbols)[static_cast<size_t>(a.left)];
      const std::string& bl = (*symbols)[static_cast<size_t>(b.left)];
      if (al != bl) return al < bl;
      return (*symbols)[static_cast<size_t>(a.right)] <
             (*symbols)[static_cast<size_t>(b.right)];
    }
  };

  static uint64_t Key(int a, int b) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) |
           static_cast<uint32_t>(b);
  }

  int Intern(const std::string& s) {
    auto [it, inserted] = symbol_ids_.emplace(s, static_cast<int>(symbols_.size()));
    if (inserted) symbols_.push_back(s);
    return it->second;
  }

  void AddToVocab(const std::string& token) {
    if (in_vocab_.insert(token).second) vocab_.push_back(token);
  }

  void CountInitialPairs() {
    constexpr size_t kChunk = 1024;
    const size_t chunks = ChunkCount(words_.size(), kChunk);
    std::vector<std::unordered_map<uint64_t, int64_t>> partial(chunks);
    ParallelFor(chunks, cfg_.threads, [&](size_t c) {
      const size_t end = std::min(words_.size(), (c + 1) * kChunk);
      for (size_t w = c * kChunk; w < end; ++w) {
        const auto& syms = words_[w].symbols;
        for (size_t k = 0; k + 1 < syms.size(); ++k) {
          partial[c][Key(syms[k], syms[k + 1])] += words_[w].freq;
        }
      }
    });
    for (size_t c = 0; c < chunks; ++c) {
      for (const auto& [key, f] : partial[c]) pair_freq_[key] += f;
    }
    for (size_t w = 0; w < words_.size(); ++w) {
      const auto& syms = words_[w].symbols;
      for (size_t k = 0; k + 1 < syms.size(); ++k) {
        where_[Key(syms[k], syms[k + 1])].insert(static_cast<int>(w));
      }
    }
    for (const auto& [key, f] : pair_freq_) {
      queue_.insert({f, static_cast<int>(key >> 32),
                     static_cast<int>(key & 0xffffffffu)});
    }
  }

  void ApplyDelta(uint64_t key, int64_t delta) {
    if (delta == 0) return;
    auto it = pair_freq_.find(key);
    const int64_t old = it == pair_freq_.end() ? 0 : it->second;
    const int left = static_cast<int>(key >> 32);
    const int right = static_cast<int>(key & 0xffffffffu);
    if (old > 0) queue_.erase({old, left, right});
    const int64_t now = old + delta;
    if (now > 0) {
      pair_freq_[key] = now;
      queue_.insert({now, left, right});
    } else {
      pair_freq_.erase(key);
    }
  }

  void ApplyMerge(int left, int right) {
    const std::string merged_text = symbols_[static_cast<size_t>(left)] +
                                    symbols_[static_cast<size_t>(right)];
    const int merged = Intern(merged_text);
    merges_.emplace_back(symbols_[static_cast<size_t>(left)],
                         symbols_[static_cast<size_t>(right)]);
    AddToVocab(merged_text);

    const uint64_t merged_key = Key(left, right);
    std::vector<int> word_ids;
    if (auto node = where_.extract(merged_key)) {
      word_ids.assign(node.mapped().begin(), node.mapped().end());
    }
    std::sort(word_ids.begin(), word_ids.end());

    std::unordered_map<uint64_t, int64_t> delta;
    for (int w : word_ids) {
      Word& word = words_[static_cast<size_t>(w)];
      auto& syms = word.symbols;
      bool contains = false;
      for (size_t k = 0; k + 1 < syms.size(); ++k) {
        if (syms[k] == left && syms[k + 1] == right) {
          contains = true;
          break;
        }
      }
      if (!contains) continue;
      for (size_t k = 0; k + 1 < syms.size(); ++k) {
        delta[Key(syms[k], syms[k + 1])] -= word.freq;
      }
      std::vector<int> next;
      next.reserve(syms.size());
      for (size_t k = 0; k < syms.size(); ++k) {
        if (k + 1 < syms.size() && syms[k] == left && syms[k + 1] == right) {
          next.push_back(merged);
          ++k;
        } else {
          next.push_back(syms[k]);
        }
      }
      syms = std::move(next);
      for (size_t k = 0; k + 1 < syms.size(); ++k) {
        const uint64_t key = Key(syms[k], syms[k + 1]);
        delta[key] += word.freq;
        if (key != merged_key) where_[key].insert(w);
      }
    }
    // Apply in key order; the queue ends up the same either way, this just
    // keeps the work reproducible.
    std::vector<std::pair<uint64_t, int64_t>> ordered(delta.begin(), delta.end());
    std::sort(ordered.begin(), ordered.end());
    for (const auto& [key, d] : ordered) ApplyDelta(key, d);
    // Any leftover count for the merged pair is gone with its occurrences.
    if (auto it = pair_freq_.find(merged_key); it != pair_freq_.end()) {
      queue_.erase({it->second, left, right});
      pair_freq_.erase(it);
    }
  }

  TrainConfig cfg_;
  std::vector<Word> words_;
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, int> symbol_ids_;
  std::vector<std::string> vocab_;
  std::unordered_set<std::string> in_vocab_;
  std::vector<std::pair<std::string, std::string>> merges_;
  std::unordered_map<uint64_t, int64_t> pair_freq_;
  std::unordered_map<uint64_t, std::unordered_set<int>> where_;
  std::set<PairEntry, Compare> queue_;
};

}  // namespace

namespace internal {

void ValidateTrainingInput(const WordFreqs& word_freqs, const TrainConfig& cfg) {
  if (cfg.vocab_size < 1) {
    throw Error(ErrorKind::kInvalidArgument, "vocab_size must be positive");
  }
  if (cfg.min_frequency < 1) {
    throw Error(ErrorKind::kInvalidArgument, "min_frequency must be >= 1");
  }
  for (const auto& [word, freq] : word_freqs) {
    if (freq <= 0) {
      throw Error(ErrorKind::kInvalidArgument,
                  "non-positive count for word '" + word + "'");
    }
    if (!text::IsValidUtf8(word)) {
      throw Error(ErrorKind::kInvalidArgument, "word is not valid UTF-8");
    }
  }
}

}  // namespace internal

SubwordModel TrainBpe(const WordFreqs& word_freqs, const TrainConfig& cfg) {
  TrainConfig c = cfg;
  c.algorithm = Algorithm::kBpe;
  return BpeTrainer(word_freqs, c).Run();
}

}  // namespace toklab::subword
