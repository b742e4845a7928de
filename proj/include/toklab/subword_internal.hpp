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

// Helpers shared by the subword trainers. Not part of the public API.

#ifndef TOKLAB_SUBWORD_INTERNAL_HPP_
#define TOKLAB_SUBWORD_INTERNAL_HPP_

#include "toklab/subword.hpp"

namespace toklab::subword::internal {

// Rejects non-positive counts, invalid UTF-8 and nonsensical configs.
void ValidateTrainingInput(const WordFreqs& word_freqs, const TrainConfig& cfg);

}  // namespace toklab::subword::internal

#endif  // TOKLAB_SUBWORD_INTERNAL_HPP_
