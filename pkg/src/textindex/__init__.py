"""String indexes for exact and approximate search.

The package provides two full-text index variants that extend the FM index
with q-gram occurrence lists, a piece-keyed dictionary index answering
Hamming-distance queries with up to k mismatches, fixed-width string
sketches for constant-time comparison screening, brute-force oracles, and a
CLI workbench for building, querying, verifying and benchmarking all of it.
"""

from .errors import MalformedInputError, UnsupportedPatternError
from .textcore import (Corpus, FrequencyTable, MinimizerSet, PhraseDecomposition,
                       QGramRef, entropy, extract_qgrams, minimizers, phrases,
                       printable)
from .suffixbwt import (FmIndex, RankIndex, build_count_table, build_suffix_array,
                        bwt_forward, bwt_inverse, fm_count, rank)
from .fmgram import (LinearIndex, SuperlinearIndex, build_linear, build_superlinear,
                     count_linear, count_superlinear, list_rank)
from .splitindex import (Dictionary, SplitIndex, SplitIndexConfig, SubstitutionTable,
                         decode_word, encode_word, select_qgrams, split_word)
from .sketches import (PopcountTable, Sketch, SketchConfig, build_sketch,
                       filtered_compare, hamming_lower_bound, sketch_distance)
from .envelope import deserialize_index, load_index, save_index, serialize_index

__version__ = "0.1.0"

__all__ = [
    "Corpus", "Dictionary", "FmIndex", "FrequencyTable", "LinearIndex",
    "MalformedInputError", "MinimizerSet", "PhraseDecomposition", "PopcountTable",
    "QGramRef", "RankIndex", "Sketch", "SketchConfig", "SplitIndex",
    "SplitIndexConfig", "SubstitutionTable", "SuperlinearIndex",
    "UnsupportedPatternError", "build_count_table", "build_linear", "build_sketch",
    "build_suffix_array", "build_superlinear", "bwt_forward", "bwt_inverse",
    "count_linear", "count_superlinear", "decode_word", "deserialize_index",
    "encode_word", "entropy", "extract_qgrams", "filtered_compare", "fm_count",
    "hamming_lower_bound", "list_rank", "load_index", "minimizers", "phrases",
    "printable", "rank", "save_index", "select_qgrams", "serialize_index",
    "sketch_distance", "split_word",
]
