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

// WordPiece training: the BPE merge loop, ranking candidate pairs by
// freq(ab) / (freq(a) * freq(b)). Symbols are tracked without the "##"
// marker, so freq(a) counts every occurrence of `a`; the vocabulary gets
// "a" for word-initial occurrences and "##a" for the rest.
//
// Scores are compared as exact rationals (128-bit cross products), which
// keeps the ordering identical on every platform.

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

struct Candidate {
  int64_t pair_freq;
  int64_t left_freq;
  int64_t right_freq;
  int left;
  int right;
};

class WordPieceTrainer {
 public:
  WordPieceTrainer(const WordFreqs& word_freqs, const TrainConfig& cfg)
      : cfg_(cfg), queue_(Compare{&symbols_}) {
    internal::ValidateTrainingInput(word_freqs, cfg);
    std::set<std::string> alphabet;
    for (const auto& [word, freq] : word_freqs) {
      const auto chars = text::Characters(word);
      if (chars.empty()) continue;
      Word w;
      w.freq = freq;
      for (size_t i = 0; i < chars.size(); ++i) {
        const int id = Intern(chars[i]);
        w.symbols.push_back(id);
        sym_freq_[static_cast<size_t>(id)] += freq;
        alphabet.insert(Form(chars[i], i == 0));
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
      const Candidate best = *queue_.begin();
      if (!ApplyMerge(best.left, best.right)) break;
    }
    return SubwordModel(Algorithm::kWordPiece, std::move(vocab_), {}, {}, cfg_);
  }

 private:
  struct Word {
    std::vector<int> symbols;
    int64_t freq = 0;
  };

  struct Compare {
    const std::vector<std::string>* symbols;
    bool operator()(const Candidate& a, const Candidate& b) const {
      using I128 = __int128;
      const I128 lhs = static_cast<I128>(a.pair_freq) * b.left_freq * b.right_freq;
      const I128 rhs = static_cast<I128>(b.pair_freq) * a.left_freq * a.right_freq;
      if (lhs != rhs) return lhs > rhs;
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
  static int Left(uint64_t key) { return static_cast<int>(key >> 32); }
  static int Right(uint64_t key) { return static_cast<int>(key & 0xffffffffu); }

  static std::string Form(const std::string& symbol, bool initial) {
    return initial ? symbol : std::string(kContinuationMarker) + symbol;
  }

  int Intern(const std::string& s) {
    auto [it, inserted] = symbol_ids_.emplace(s, static_cast<int>(symbols_.size()));
    if (inserted) {
      symbols_.push_back(s);
      sym_freq_.push_back(0);
    }
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
    std::vector<uint64_t> keys;
    keys.reserve(pair_freq_.size());
    for (const auto& [key, f] : pair_freq_) {
      pairs_of_[Left(key)].insert(key);
      pairs_of_[Right(key)].insert(key);
      keys.push_back(key);
    }
    for (uint64_t key : keys) Refresh(key);
  }

  // Re-keys one pair in the queue after any of its counts changed.
  void Refresh(uint64_t key) {
    if (auto it = queued_.find(key); it != queued_.end()) {
      queue_.erase(it->second);
      queued_.erase(it);
    }
    auto pf = pair_freq_.find(key);
    if (pf == pair_freq_.end() || pf->second < cfg_.min_frequency) return;
    const Candidate c{pf->second, sym_freq_[static_cast<size_t>(Left(key))],
                      sym_freq_[static_cast<size_t>(Right(key))], Left(key),
                      Right(key)};
    queue_.insert(c);
    queued_.emplace(key, c);
  }

  void ChangePairFreq(uint64_t key, int64_t delta) {
    if (delta == 0) return;
    int64_t& f = pair_freq_[key];
    const bool was_present = f > 0;
    f += delta;
    if (f <= 0) {
      pair_freq_.erase(key);
      pairs_of_[Left(key)].erase(key);
      pairs_of_[Right(key)].erase(key);
    } else if (!was_present) {
      pairs_of_[Left(key)].insert(key);
      pairs_of_[Right(key)].insert(key);
    }
  }

  // Returns false when the merge would overflow the vocabulary.
  bool ApplyMerge(int left, int right) {
    const uint64_t merged_key = Key(left, right);
    std::vector<int> word_ids;
    if (auto it = where_.find(merged_key); it != where_.end()) {
      word_ids.assign(it->second.begin(), it->second.end());
    }
    std::sort(word_ids.begin(), word_ids.end());

    // Which vocabulary forms the merged symbol will need.
    bool initial = false, non_initial = false;
    for (int w : word_ids) {
      const auto& syms = words_[static_cast<size_t>(w)].symbols;
      for (size_t k = 0; k + 1 < syms.size(); ++k) {
        if (syms[k] == left && syms[k + 1] == right) {
          (k == 0 ? initial : non_initial) = true;
          ++k;
        }
      }
    }
    if (!initial && !non_initial) {
      // Stale bookkeeping; drop the pair rather than loop on it.
      pair_freq_.erase(merged_key);
      Refresh(merged_key);
      return true;
    }
    const std::string merged_text = symbols_[static_cast<size_t>(left)] +
                                    symbols_[static_cast<size_t>(right)];
    size_t needed = 0;
    if (initial && !in_vocab_.contains(Form(merged_text, true))) ++needed;
    if (non_initial && !in_vocab_.contains(Form(merged_text, false))) ++needed;
    if (vocab_.size() - 1 + needed > static_cast<size_t>(cfg_.vocab_size)) {
      return false;
    }
    if (initial) AddToVocab(Form(merged_text, true));
    if (non_initial) AddToVocab(Form(merged_text, false));

    const int merged = Intern(merged_text);
    where_.erase(merged_key);
    std::unordered_map<uint64_t, int64_t> delta;
    std::set<int> touched_symbols = {left, right, merged};
    for (int w : word_ids) {
      Word& word = words_[static_cast<size_t>(w)];
      auto& syms = word.symbols;
      bool contains = false;
      for (size_t k = 0; k + 1 < syms.size() && !contains; ++k) {
        contains = syms[k] == left && syms[k + 1] == right;
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
          sym_freq_[static_cast<size_t>(left)] -= word.freq;
          sym_freq_[static_cast<size_t>(right)] -= word.freq;
          sym_freq_[static_cast<size_t>(merged)] += word.freq;
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
    std::set<uint64_t> affected;
    for (const auto& [key, d] : delta) {
      ChangePairFreq(key, d);
      affected.insert(key);
    }
    affected.insert(merged_key);
    for (int s : touched_symbols) {
      if (auto it = pairs_of_.find(s); it != pairs_of_.end()) {
        affected.insert(it->second.begin(), it->second.end());
      }
    }
    for (uint64_t key : affected) Refresh(key);
    return true;
  }

  TrainConfig cfg_;
  std::vector<Word> words_;
  std::vector<std::string> symbols_;
  std::vector<int64_t> sym_freq_;
  std::unordered_map<std::string, int> symbol_ids_;
  std::vector<std::string> vocab_;
  std::unordered_set<std::string> in_vocab_;
  std::unordered_map<uint64_t, int64_t> pair_freq_;
  std::unordered_map<uint64_t, std::unordered_set<int>> where_;
  std::unordered_map<int, std::unordered_set<uint64_t>> pairs_of_;
  std::set<Candidate, Compare> queue_;
  std::unordered_map<uint64_t, Candidate> queued_;
};

}  // namespace

SubwordModel TrainWordPiece(const WordFreqs& word_freqs, const TrainConfig& cfg) {
  TrainConfig c = cfg;
  c.algorithm = Algorithm::kWordPiece;
  return WordPieceTrainer(word_freqs, c).Run();
}

}  // namespace toklab::subword
