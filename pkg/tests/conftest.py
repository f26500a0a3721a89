import pytest

from pehfault.dataset import (
    DEFAULT_SURROGATE_SPEC,
    ClassSignalSpec,
    MachineState,
    SurrogateSpec,
    synth_surrogate_corpus,
)

# Down-scaled corpus for cheap pipeline tests: same two-narrowband-tones vs
# broadband contrast as the default recipe, but short recordings at a low rate.
SMALL_SPEC = SurrogateSpec(
    classes={
        MachineState.HEALTHY: ClassSignalSpec(tones=((120.0, 0.8), (200.0, 1.0)), noise_sigma=0.05),
        MachineState.BALL_CRACK: ClassSignalSpec(
            tones=((60.0, 0.6), (95.0, 0.6), (130.0, 0.6), (165.0, 0.6), (235.0, 0.6), (270.0, 0.6)),
            noise_sigma=0.3,
        ),
    },
    count_per_class=3,
    fs=8192.0,
    duration_s=2.0,
)

SMALL_SEGMENT_S = 0.5
SMALL_SEGMENTS = 3


@pytest.fixture(scope="session")
def small_corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("small_corpus")
    return synth_surrogate_corpus(SMALL_SPEC, seed=7, out_dir=out)


@pytest.fixture(scope="session")
def default_corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("default_corpus")
    return synth_surrogate_corpus(DEFAULT_SURROGATE_SPEC, seed=0, out_dir=out)
