import numpy as np
import pytest
from pydantic import ValidationError

from app.data.store import load_dataset
from app.schemas.synthetic import SyntheticSpec
from app.services.oracle_service import fit_centroid_classifier, predict_winner
from app.services.synthetic_service import generate_synthetic, load_ground_truth, write_benchmark


def quiet_spec(**overrides):
    base = dict(
        T=10, V=3, C=2,
        planted=[
            {"signal": 0, "start": 1, "end": 3, "amplitude": 0.5},
            {"signal": 2, "start": 5, "end": 8, "amplitude": 0.5},
        ],
        noise_sigma=0.0, n_train=6, n_test=2, seed=1,
    )
    base.update(overrides)
    return SyntheticSpec(**base)


def test_noise_free_instances_differ_only_on_the_planted_cells():
    benchmark = generate_synthetic(quiet_spec())
    spec = benchmark.ground_truth.spec
    for example in benchmark.dataset.train + benchmark.dataset.test:
        p = spec.planted[example.label]
        expected = np.full((10, 3), spec.baseline_level)
        expected[p.start:p.end + 1, p.signal] += p.amplitude
        np.testing.assert_allclose(example.instance.values, expected)


def test_zero_amplitude_and_noise_gives_identical_instances():
    spec = quiet_spec(planted=[
        {"signal": 0, "start": 1, "end": 3, "amplitude": 0.0},
        {"signal": 1, "start": 1, "end": 3, "amplitude": 0.0},
    ])
    examples = generate_synthetic(spec).dataset.train
    for example in examples[1:]:
        np.testing.assert_array_equal(example.instance.values, examples[0].instance.values)


def test_labels_are_balanced():
    dataset = generate_synthetic(quiet_spec(n_train=10)).dataset
    assert sorted(e.label for e in dataset.train) == [0] * 5 + [1] * 5


def test_ground_truth_covers_every_instance():
    benchmark = generate_synthetic(quiet_spec())
    ids = [e.instance.id for e in benchmark.dataset.train + benchmark.dataset.test]
    assert sorted(benchmark.ground_truth.instances) == sorted(ids)
    entry = benchmark.ground_truth.instances[benchmark.dataset.test[0].instance.id]
    assert entry.signal == quiet_spec().planted[entry.label].signal


def test_same_seed_same_dataset():
    a = generate_synthetic(quiet_spec(noise_sigma=0.05, seed=4)).dataset
    b = generate_synthetic(quiet_spec(noise_sigma=0.05, seed=4)).dataset
    c = generate_synthetic(quiet_spec(noise_sigma=0.05, seed=5)).dataset
    for x, y in zip(a.train, b.train):
        np.testing.assert_array_equal(x.instance.values, y.instance.values)
    assert any(not np.array_equal(x.instance.values, z.instance.values) for x, z in zip(a.train, c.train))


def test_values_stay_in_range():
    dataset = generate_synthetic(quiet_spec(noise_sigma=0.5, baseline_level=0.5)).dataset
    for example in dataset.train:
        assert example.instance.values.min() >= 0.0
        assert example.instance.values.max() <= 1.0


@pytest.mark.parametrize("overrides", [
    {"planted": [{"signal": 0, "start": 4, "end": 2, "amplitude": 0.5},
                 {"signal": 1, "start": 1, "end": 3, "amplitude": 0.5}]},
    {"planted": [{"signal": 0, "start": 1, "end": 3, "amplitude": 0.5},
                 {"signal": 0, "start": 1, "end": 3, "amplitude": 0.2}]},
    {"planted": [{"signal": 5, "start": 1, "end": 3, "amplitude": 0.5},
                 {"signal": 1, "start": 1, "end": 3, "amplitude": 0.5}]},
    {"planted": [{"signal": 0, "start": 1, "end": 3, "amplitude": 0.9},
                 {"signal": 1, "start": 1, "end": 3, "amplitude": 0.5}]},
    {"noise_sigma": -0.1},
])
def test_invalid_specs(overrides):
    with pytest.raises(ValidationError):
        quiet_spec(**overrides)


def test_write_and_reload(tmp_path):
    benchmark = generate_synthetic(quiet_spec(noise_sigma=0.05))
    directory = write_benchmark(benchmark, tmp_path / "bench")
    dataset = load_dataset(directory)
    assert dataset.meta == benchmark.dataset.meta
    np.testing.assert_array_equal(dataset.train[0].instance.values, benchmark.dataset.train[0].instance.values)
    assert load_ground_truth(directory) == benchmark.ground_truth


def test_centroid_classifier_learns_the_default_benchmark(planted_benchmark):
    dataset = planted_benchmark.dataset
    model = fit_centroid_classifier(dataset.train, 5.0, dataset.meta.C)
    correct = sum(predict_winner(model, e.instance)[0] == e.label for e in dataset.test)
    assert correct / len(dataset.test) >= 0.95
