import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).parent
FIXTURES = TESTS_DIR / "fixtures"

sys.path.insert(0, str(TESTS_DIR))


@pytest.fixture(scope="session")
def lexicon():
    from ballotwire.sentiment import load_lexicon

    return load_lexicon()


@pytest.fixture(scope="session")
def scorer(lexicon):
    from ballotwire.sentiment import SentimentScorer

    return SentimentScorer(lexicon)


@pytest.fixture(scope="session")
def synth_corpus():
    """The seed-7 default synthetic corpus (20 days, two candidates)."""
    from ballotwire.synth import SynthSpec, gen_corpus

    return gen_corpus(SynthSpec(seed=7))


@pytest.fixture(scope="session")
def synth_frames(synth_corpus):
    from ballotwire.pipeline import PipelineConfig, build_frames

    return build_frames(synth_corpus, PipelineConfig())
