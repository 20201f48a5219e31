"""Vertical-text attacks on blackbox classifiers, defenses, and evaluation."""

from .attack import AttackTrace, IterationRecord, attack
from .core import (
    AttackConfig,
    AttackOutcome,
    Document,
    InvalidInputError,
    LabelDistribution,
    Verdict,
    make_pair_document,
    tokenize,
)
from .defense import (
    UnigramTable,
    default_unigram_table,
    load_unigrams,
    make_defense,
    normalize_simple,
    reverse,
    segment,
)
from .gateway import (
    ClassifierHandle,
    GatewayConnectionError,
    GatewayError,
    GatewayTimeoutError,
    LexiconModel,
    MalformedResponseError,
    QueryLedger,
    check_health,
    classify,
    classify_remote,
    lexicon_handle,
    lexicon_score,
    load_lexicon,
    parse_classifier_spec,
    remote_handle,
    save_lexicon,
    with_preprocess,
)
from .harness import (
    CampaignReport,
    DataError,
    Example,
    ExampleRecord,
    evaluate,
    load_dataset,
    load_report,
    perturbation_report,
    run_campaign,
    save_report,
    take_examples,
)
from .render import (
    GlyphFont,
    RasterImage,
    RecognitionError,
    default_font,
    load_font,
    read_pgm,
    render,
    unrender,
    write_pgm,
)
from .selection import SelectionResult, importance_profile, removal_text, select_word
from .transform import (
    CharGrid,
    Cell,
    chunk_grid,
    eligible_chaff_positions,
    inject_chaff,
    transform,
    transform_chunk,
    transform_text,
)

__version__ = "0.1.0"
