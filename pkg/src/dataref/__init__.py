"""Find dataset references in full texts and link them to a registry.

The pipeline: harvest registry metadata, induce a feature dictionary from
dataset titles, detect feature mentions in papers, rank registry candidates
per mention with tf-idf/cosine plus a year heuristic, and hand the ranked
lists to an expert through two review workflows.  A two-phase harness
evaluates detection and matching against a gold standard.
"""

from .detect import ReferenceMention, detect_references, group_by_feature, mention_key
from .dictionary import (
    ABBREVIATION,
    PHRASE,
    DictionaryEntry,
    apply_blacklist,
    build_dictionary,
    derive_phrases,
    extract_abbreviations,
    is_roman_numeral,
    load_dictionary,
    write_dictionary,
)
from .evaluation import (
    EvalReport,
    GoldReference,
    GoldStandard,
    evaluate_detection,
    evaluate_matching,
    f_measure,
    parse_gold_file,
    select_detection_tps,
)
from .harvest import HarvestError, harvest_oai
from .pipeline import PipelineConfig, load_config, run_pipeline
from .ranking import (
    MentionRanking,
    RankedCandidate,
    TfidfModel,
    build_tfidf,
    candidate_pool,
    cosine_similarity,
    rank_candidates,
    rank_mentions,
    year_adjust,
)
from .records import DatasetRecord, load_records, write_records
from .review import (
    NO_MATCH,
    PER_FEATURE,
    PER_REFERENCE,
    SKIPPED,
    MatchDecision,
    ReviewItem,
    ReviewSession,
    SessionStore,
    build_session,
    export_links,
    per_feature_items,
    per_reference_items,
)
from .textpipe import PaperText, extract_years, split_sentences, subdivide_on_repeat
from .title_patterns import PatternStats, analyze_title_patterns, is_filename_token
from .wordlists import ConfigurationError, WordLists, default_wordlists, load_wordlists

__version__ = "0.1.0"
