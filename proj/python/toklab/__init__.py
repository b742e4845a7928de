# Copyright 2026 The Toklab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""Corpus cleaning, subword training, tokenizer metrics and text corruption."""

from ._toklab import (
    Error,
    Preprocessor,
    SubwordModel,
    builtin_rule_languages,
    clean,
    compare_methods,
    corpus_stats,
    corrupt,
    count_words,
    fit_zipf,
    fragmentation,
    load_corpus,
    nest_compression,
    oov_rate,
    reconstruction_rate,
    split_ids,
    standardize,
)

__all__ = [
    "Error",
    "Preprocessor",
    "SubwordModel",
    "builtin_rule_languages",
    "clean",
    "compare_methods",
    "corpus_stats",
    "corrupt",
    "count_words",
    "fit_zipf",
    "fragmentation",
    "load_corpus",
    "nest_compression",
    "oov_rate",
    "reconstruction_rate",
    "split_ids",
    "standardize",
]
