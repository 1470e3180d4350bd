import numpy as np
import pytest

from genmetrics.fixtures import summary_features, synth_fixture
from genmetrics.tensor_io import LatentSet


@pytest.fixture(scope="session")
def fixture_sets():
    """A labelled real set and a noisier generated set from the synthetic generator."""
    real_seqs, real_labels = synth_fixture(12, 3, 20, 3, seed=0)
    gen_seqs, gen_labels = synth_fixture(10, 3, 20, 3, seed=1, noise=0.08, warp=0.5)
    return {
        "real": LatentSet(summary_features(real_seqs), real_labels),
        "gen": LatentSet(summary_features(gen_seqs), gen_labels),
        "real_seqs": real_seqs,
        "gen_seqs": gen_seqs,
    }


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    lines = [test_acceptance.RESULTS[n] for n in sorted(test_acceptance.RESULTS)]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
