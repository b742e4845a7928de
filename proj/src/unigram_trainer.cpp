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

// Unigram LM training.
//
//   1. Seed: every substring of at most max_piece_len characters seen at
//      least min_frequency times, ranked by count * length and capped at
//      multiplier * vocab_size, plus every single character.
//   2. EM rounds: the E-step runs forward-backward over each word's
//      segmentation lattice to get expected piece counts, the M-step
//      renormalizes them into log-probabilities.
//   3. After each round, drop the prunable (multi-character) pieces whose
//      removal costs the least likelihood. The cost of each piece is the
//      exact likelihood drop with every other parameter held fixed.
//   4. Stop once the vocabulary fits, then run one more EM round.
//
// Work is split into a fixed number of word chunks whose partial sums are
// combined in chunk order, so results do not depend on the thread count.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string_view>
#include <unordered_map>

#include "toklab/error.hpp"
#include "toklab/parallel.hpp"
#include "toklab/subword.hpp"
#include "toklab/subword_internal.hpp"
#include "toklab/text.hpp"

namespace toklab::subword {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr size_t kReductionChunks = 16;
// Characters whose probability underflowed are floored this far below the
// worst surviving piece.
constexpr double kFloorGap = 10.0;

struct StringHash {
  using is_transparent = void;
  size_t operator()(std::string_view s) const {
    return std::hash<std::string_view>{}(s);
  }
};
using PieceIndex =
    std::unordered_map<std::string, int, StringHash, std::equal_to<>>;

double LogSumExp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(-std::fabs(a - b)));
}

struct Edge {
  uint32_t begin;
  uint32_t end;
  int piece;
};

struct TrainingWord {
  std::string text;
  std::vector<uint32_t> char_offsets;  // byte offset of each char, plus end
  int64_t freq;
  std::vector<Edge> edges;             // sorted by end, then begin
};

struct Piece {
  std::string text;
  bool single_char;
  double score;
};

class UnigramTrainer {
 public:
  UnigramTrainer(const WordFreqs& word_freqs, const TrainConfig& cfg,
                 UnigramTrace* trace)
      : cfg_(cfg), trace_(trace) {
    internal::ValidateTrainingInput(word_freqs, cfg);
    if (cfg.max_piece_len < 1 || cfg.unigram_seed_multiplier < 1 ||
        cfg.unigram_em_iters_per_round < 1 ||
        !(cfg.unigram_prune_fraction > 0.0 && cfg.unigram_prune_fraction < 1.0)) {
      throw Error(ErrorKind::kInvalidArgument, "invalid unigram parameters");
    }
    for (const auto& [word, freq] : word_freqs) {
      if (word.empty()) continue;
      TrainingWord w;
      w.text = word;
      w.freq = freq;
      size_t offset = 0;
      for (const auto& ch : text::Characters(word)) {
        w.char_offsets.push_back(static_cast<uint32_t>(offset));
        offset += ch.size();
      }
      w.char_offsets.push_back(static_cast<uint32_t>(offset));
      words_.push_back(std::move(w));
    }
  }

  SubwordModel Run() {
    Seed();
    while (true) {
      EmRound();
      if (pieces_.size() <= static_cast<size_t>(cfg_.vocab_size)) break;
      Prune();
    }
    EmRound();
    return Finish();
  }

 private:
  size_t Chars(const TrainingWord& w) const { return w.char_offsets.size() - 1; }

  std::string_view Sub(const TrainingWord& w, size_t b, size_t e) const {
    return std::string_view(w.text).substr(w.char_offsets[b],
                                           w.char_offsets[e] - w.char_offsets[b]);
  }

  void Seed() {
    const size_t max_len = static_cast<size_t>(cfg_.max_piece_len);
    const size_t chunks = std::min(kReductionChunks, words_.size());
    std::vector<std::unordered_map<std::string, int64_t, StringHash, std::equal_to<>>>
        partial(std::max<size_t>(chunks, 1));
    ParallelFor(chunks, cfg_.threads, [&](size_t c) {
      const auto [lo, hi] = ChunkRange(c, chunks);
      auto& counts = partial[c];
      for (size_t wi = lo; wi < hi; ++wi) {
        const TrainingWord& w = words_[wi];
        const size_t n = Chars(w);
        for (size_t b = 0; b < n; ++b) {
          for (size_t e = b + 1; e <= std::min(n, b + max_len); ++e) {
            auto sub = Sub(w, b, e);
            auto it = counts.find(sub);
            if (it == counts.end()) {
              counts.emplace(std::string(sub), w.freq);
            } else {
              it->second += w.freq;
            }
          }
        }
      }
    });
    auto& counts = partial[0];
    for (size_t c = 1; c < partial.size(); ++c) {
      for (auto& [s, n] : partial[c]) counts[s] += n;
      partial[c].clear();
    }

    struct Candidate {
      std::string text;
      int64_t count;
      size_t length;
    };
    std::vector<Candidate> singles, multis;
    for (auto& [s, n] : counts) {
      const size_t len = text::CharacterCount(s);
      if (len == 1) {
        singles.push_back({s, n, 1});
      } else if (n >= cfg_.min_frequency) {
        multis.push_back({s, n, len});
      }
    }
    if (singles.size() > static_cast<size_t>(cfg_.vocab_size)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "vocab_size " + std::to_string(cfg_.vocab_size) +
                      " is smaller than the character count (" +
                      std::to_string(singles.size()) + ")");
    }
    std::sort(multis.begin(), multis.end(),
              [](const Candidate& a, const Candidate& b) {
                const int64_t ra = a.count * static_cast<int64_t>(a.length);
                const int64_t rb = b.count * static_cast<int64_t>(b.length);
                if (ra != rb) return ra > rb;
                return a.text < b.text;
              });
    const size_t cap = static_cast<size_t>(cfg_.unigram_seed_multiplier) *
                       static_cast<size_t>(cfg_.vocab_size);
    if (multis.size() > cap) multis.resize(cap);
    std::sort(singles.begin(), singles.end(),
              [](const Candidate& a, const Candidate& b) { return a.text < b.text; });

    double total = 0.0;
    for (const auto& c : singles) total += static_cast<double>(c.count);
    for (const auto& c : multis) total += static_cast<double>(c.count);
    const double log_total = std::log(total);
    for (const auto& c : singles) {
      pieces_.push_back({c.text, true, std::log(static_cast<double>(c.count)) - log_total});
    }
    for (const auto& c : multis) {
      pieces_.push_back({c.text, false, std::log(static_cast<double>(c.count)) - log_total});
    }
  }

  std::pair<size_t, size_t> ChunkRange(size_t c, size_t chunks) const {
    const size_t n = words_.size();
    return {n * c / chunks, n * (c + 1) / chunks};
  }

  void BuildLattices() {
    PieceIndex index;
    index.reserve(pieces_.size());
    for (size_t i = 0; i < pieces_.size(); ++i) {
      index.emplace(pieces_[i].text, static_cast<int>(i));
    }
    const size_t max_len = static_cast<size_t>(cfg_.max_piece_len);
    const size_t chunks = std::min(kReductionChunks, words_.size());
    ParallelFor(chunks, cfg_.threads, [&](size_t c) {
      const auto [lo, hi] = ChunkRange(c, chunks);
      for (size_t wi = lo; wi < hi; ++wi) {
        TrainingWord& w = words_[wi];
        w.edges.clear();
        const size_t n = Chars(w);
        for (size_t e = 1; e <= n; ++e) {
          const size_t first = e > max_len ? e - max_len : 0;
          for (size_t b = first; b < e; ++b) {
            auto it = index.find(Sub(w, b, e));
            if (it != index.end()) {
              w.edges.push_back({static_cast<uint32_t>(b),
                                 static_cast<uint32_t>(e), it->second});
            }
          }
        }
      }
    });
  }

  // One E-step. Adds expected counts into `counts`; returns the corpus
  // log-likelihood sum_w freq(w) * log P(w).
  double ExpectedCounts(std::vector<double>* counts) const {
    const size_t chunks = std::min(kReductionChunks, words_.size());
    std::vector<std::vector<double>> partial(chunks);
    std::vector<double> partial_ll(chunks, 0.0);
    ParallelFor(chunks, cfg_.threads, [&](size_t c) {
      partial[c].assign(pieces_.size(), 0.0);
      std::vector<double> alpha, beta;
      const auto [lo, hi] = ChunkRange(c, chunks);
      for (size_t wi = lo; wi < hi; ++wi) {
        const TrainingWord& w = words_[wi];
        const size_t n = Chars(w);
        alpha.assign(n + 1, kNegInf);
        beta.assign(n + 1, kNegInf);
        alpha[0] = 0.0;
        for (const Edge& e : w.edges) {
          const double s = pieces_[static_cast<size_t>(e.piece)].score;
          alpha[e.end] = LogSumExp(alpha[e.end], alpha[e.begin] + s);
        }
        beta[n] = 0.0;
        for (auto it = w.edges.rbegin(); it != w.edges.rend(); ++it) {
          const double s = pieces_[static_cast<size_t>(it->piece)].score;
          beta[it->begin] = LogSumExp(beta[it->begin], s + beta[it->end]);
        }
        const double z = alpha[n];
        if (z == kNegInf) {
          throw Error(ErrorKind::kInvalidArgument,
                      "word '" + w.text + "' cannot be segmented");
        }
        const double f = static_cast<double>(w.freq);
        partial_ll[c] += f * z;
        for (const Edge& e : w.edges) {
          const double s = pieces_[static_cast<size_t>(e.piece)].score;
          const double lp = alpha[e.begin] + s + beta[e.end] - z;
          if (lp > kNegInf) partial[c][static_cast<size_t>(e.piece)] += f * std::exp(lp);
        }
      }
    });
    counts->assign(pieces_.size(), 0.0);
    double ll = 0.0;
    for (size_t c = 0; c < chunks; ++c) {
      for (size_t i = 0; i < pieces_.size(); ++i) (*counts)[i] += partial[c][i];
      ll += partial_ll[c];
    }
    return ll;
  }

  double LogLikelihood() const {
    const size_t chunks = std::min(kReductionChunks, words_.size());
    std::vector<double> partial_ll(chunks, 0.0);
    ParallelFor(chunks, cfg_.threads, [&](size_t c) {
      std::vector<double> alpha;
      const auto [lo, hi] = ChunkRange(c, chunks);
      for (size_t wi = lo; wi < hi; ++wi) {
        const TrainingWord& w = words_[wi];
        alpha.assign(Chars(w) + 1, kNegInf);
        alpha[0] = 0.0;
        for (const Edge& e : w.edges) {
          const double s = pieces_[static_cast<size_t>(e.piece)].score;
          alpha[e.end] = LogSumExp(alpha[e.end], alpha[e.begin] + s);
        }
        partial_ll[c] += static_cast<double>(w.freq) * alpha.back();
      }
    });
    return std::accumulate(partial_ll.begin(), partial_ll.end(), 0.0);
  }

  // Removes multi-character pieces that lost all probability mass; they
  // carry no likelihood, so this does not change the EM objective.
  void DropDeadPieces() {
    std::vector<Piece> kept;
    kept.reserve(pieces_.size());
    for (auto& p : pieces_) {
      if (p.single_char || p.score > kNegInf) kept.push_back(std::move(p));
    }
    pieces_ = std::move(kept);
  }

  void FloorCharacters() {
    double worst = 0.0;
    bool any_dead = false;
    for (const auto& p : pieces_) {
      if (p.score > kNegInf) {
        worst = std::min(worst, p.score);
      } else {
        any_dead = true;
      }
    }
    if (!any_dead) return;
    for (auto& p : pieces_) {
      if (p.score == kNegInf) p.score = worst - kFloorGap;
    }
    Renormalize();
  }

  void Renormalize() {
    double z = kNegInf;
    for (const auto& p : pieces_) z = LogSumExp(z, p.score);
    for (auto& p : pieces_) p.score -= z;
  }

  void EmRound() {
    FloorCharacters();
    BuildLattices();
    std::vector<double> lls;
    std::vector<double> counts;
    for (int iter = 0; iter < cfg_.unigram_em_iters_per_round; ++iter) {
      lls.push_back(ExpectedCounts(&counts));
      double total = 0.0;
      for (double c : counts) total += c;
      const double log_total = std::log(total);
      for (size_t i = 0; i < pieces_.size(); ++i) {
        pieces_[i].score = counts[i] > 0.0 ? std::log(counts[i]) - log_total : kNegInf;
      }
    }
    lls.push_back(LogLikelihood());
    DropDeadPieces();
    if (trace_) {
      trace_->round_log_likelihoods.push_back(std::move(lls));
      trace_->round_vocab_sizes.push_back(pieces_.size());
    }
  }

  // For every multi-character piece, the drop in corpus log-likelihood if
  // it were removed and the remaining probabilities renormalized, holding
  // all other parameters fixed. Only words whose lattice uses the piece
  // change, so each word is revisited once per distinct piece it contains.
  std::vector<double> RemovalLosses() const {
    std::vector<std::vector<uint32_t>> users(pieces_.size());
    for (size_t wi = 0; wi < words_.size(); ++wi) {
      int last = -1;
      std::vector<int> seen;
      for (const Edge& e : words_[wi].edges) {
        if (pieces_[static_cast<size_t>(e.piece)].single_char) continue;
        seen.push_back(e.piece);
      }
      std::sort(seen.begin(), seen.end());
      for (int p : seen) {
        if (p == last) continue;
        users[static_cast<size_t>(p)].push_back(static_cast<uint32_t>(wi));
        last = p;
      }
    }
    auto forward = [&](const TrainingWord& w, int skip, double shift) {
      std::vector<double> alpha(Chars(w) + 1, kNegInf);
      alpha[0] = 0.0;
      for (const Edge& e : w.edges) {
        if (e.piece == skip) continue;
        const double s = pieces_[static_cast<size_t>(e.piece)].score + shift;
        alpha[e.end] = LogSumExp(alpha[e.end], alpha[e.begin] + s);
      }
      return alpha.back();
    };
    std::vector<double> full(words_.size());
    for (size_t wi = 0; wi < words_.size(); ++wi) full[wi] = forward(words_[wi], -1, 0.0);
    std::vector<double> loss(pieces_.size(), 0.0);
    ParallelFor(pieces_.size(), cfg_.threads, [&](size_t i) {
      if (pieces_[i].single_char || users[i].empty()) return;
      const double p = std::exp(pieces_[i].score);
      const double shift = p < 1.0 ? -std::log1p(-p) : 0.0;
      double total = 0.0;
      for (uint32_t wi : users[i]) {
        const TrainingWord& w = words_[wi];
        const double without = forward(w, static_cast<int>(i), shift);
        if (without == kNegInf) {
          total = std::numeric_limits<double>::infinity();
          break;
        }
        total += static_cast<double>(w.freq) * (full[wi] - without);
      }
      loss[i] = total;
    });
    return loss;
  }

  void Prune() {
    BuildLattices();
    const std::vector<double> removal = RemovalLosses();
    struct Loss {
      double loss;
      size_t piece;
    };
    std::vector<Loss> losses;
    for (size_t i = 0; i < pieces_.size(); ++i) {
      if (!pieces_[i].single_char) losses.push_back({removal[i], i});
    }
    std::sort(losses.begin(), losses.end(), [&](const Loss& a, const Loss& b) {
      if (a.loss != b.loss) return a.loss < b.loss;
      return pieces_[a.piece].text < pieces_[b.piece].text;
    });
    const size_t excess = pieces_.size() - static_cast<size_t>(cfg_.vocab_size);
    const size_t step = static_cast<size_t>(
        std::ceil(cfg_.unigram_prune_fraction * static_cast<double>(losses.size())));
    const size_t remove = std::min({excess, std::max<size_t>(step, 1), losses.size()});
    std::vector<bool> drop(pieces_.size(), false);
    for (size_t k = 0; k < remove; ++k) drop[losses[k].piece] = true;
    std::vector<Piece> kept;
    kept.reserve(pieces_.size() - remove);
    for (size_t i = 0; i < pieces_.size(); ++i) {
      if (!drop[i]) kept.push_back(std::move(pieces_[i]));
    }
    pieces_ = std::move(kept);
    Renormalize();
  }

  SubwordModel Finish() {
    FloorCharacters();
    Renormalize();
    std::vector<size_t> order(pieces_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      if (pieces_[a].score != pieces_[b].score) {
        return pieces_[a].score > pieces_[b].score;
      }
      return pieces_[a].text < pieces_[b].text;
    });
    std::vector<std::string> vocab = {std::string(kUnkToken)};
    std::vector<double> scores = {0.0};
    for (size_t i : order) {
      vocab.push_back(pieces_[i].text);
      scores.push_back(pieces_[i].score);
    }
    return SubwordModel(Algorithm::kUnigram, std::move(vocab), {},
                        std::move(scores), cfg_);
  }

  TrainConfig cfg_;
  UnigramTrace* trace_;
  std::vector<TrainingWord> words_;
  std::vector<Piece> pieces_;
};

}  // namespace

SubwordModel TrainUnigram(const WordFreqs& word_freqs, const TrainConfig& cfg,
                          UnigramTrace* trace) {
  TrainConfig c = cfg;
  c.algorithm = Algorithm::kUnigram;
  return UnigramTrainer(word_freqs, c, trace).Run();
}

}  // namespace toklab::subword
