from .embedding import EMBED_DIM, EmptyText, cosine_similarity, embed
from .sampler import StratumExhausted, sample_profiles
from .corpus import EvalInstance, load_fixture_corpus, synthesize_corpus, validate_instances
from .runner import EvalRecord, EmptySelection, run_conditions, score_distribution, write_reports
from .bench import TimingRecord, bench_attestation, write_bench_report

__all__ = [
    "EMBED_DIM",
    "EmptyText",
    "cosine_similarity",
    "embed",
    "StratumExhausted",
    "sample_profiles",
    "EvalInstance",
    "load_fixture_corpus",
    "synthesize_corpus",
    "validate_instances",
    "EvalRecord",
    "EmptySelection",
    "run_conditions",
    "score_distribution",
    "write_reports",
    "TimingRecord",
    "bench_attestation",
    "write_bench_report",
]
