import math

import numpy as np
import pytest

from vslab.datasets import (
    DatasetFormatError,
    DatasetSpec,
    RejectionBudgetError,
    cone_dataset,
    load_dataset,
    make_dataset,
    mohri_hard_dataset,
    mohri_margin_bound,
    padded_separable_dataset,
    random_separable_dataset,
    save_dataset,
)
from vslab.geometry import in_version_space, max_margin, misclassified_mask


def test_mohri_d2_rows():
    data = mohri_hard_dataset(2)
    s = 1 / math.sqrt(2)
    assert np.allclose(data.features, [[1, 0], [s, -s]])
    assert data.labels.tolist() == [1, -1]
    assert max_margin(data).margin == pytest.approx(math.sin(math.pi / 8), abs=1e-12)


@pytest.mark.parametrize("dim", range(2, 13))
def test_mohri_margin_below_bound(dim):
    cert = max_margin(mohri_hard_dataset(dim))
    assert cert.violations(mohri_hard_dataset(dim)) == []
    assert cert.margin <= mohri_margin_bound(dim) + 1e-9


def test_random_dataset_has_target_margin():
    data = random_separable_dataset(5, 40, 0.1, seed=3)
    assert data.size == 40 and data.dim == 5
    assert max_margin(data).margin >= 0.1 - 1e-9


def test_random_dataset_is_seeded():
    a = random_separable_dataset(3, 10, 0.2, seed=5)
    b = random_separable_dataset(3, 10, 0.2, seed=5)
    assert np.array_equal(a.features, b.features)


def test_random_dataset_rejection_budget():
    with pytest.raises(RejectionBudgetError):
        random_separable_dataset(40, 5, 0.9, seed=0, max_draws=2000)


@pytest.mark.parametrize("dim,g", [(2, 0.1), (4, 0.3), (6, 0.05)])
def test_cone_margin_is_exact(dim, g):
    data = cone_dataset(dim, g)
    assert data.size == 2 * (dim - 1)
    assert max_margin(data).margin == pytest.approx(g, abs=1e-9)


def test_padded_dataset_structure():
    data = padded_separable_dataset(4, 256, 0.2, seed=11)
    assert data.size == 256
    assert max_margin(data).margin >= 0.2 - 1e-9
    # a step towards the padding cluster leaves only the core misclassified
    pad_dir = np.median(data.signed, axis=0)
    bad = misclassified_mask(pad_dir, data).sum()
    assert 1 <= bad <= 8


def test_spec_validation_and_factory():
    with pytest.raises(ValueError):
        DatasetSpec("nope")
    with pytest.raises(ValueError):
        DatasetSpec("random-margin", dim=3, size=5)
    data = make_dataset(DatasetSpec("random-margin", dim=3, size=5, target_margin=0.2, seed=1))
    assert data.size == 5
    assert make_dataset(DatasetSpec("mohri", dim=4)).size == 4


def test_save_load_round_trip(tmp_path):
    data = random_separable_dataset(3, 12, 0.1, seed=9)
    path = tmp_path / "d.csv"
    save_dataset(data, path)
    back = load_dataset(path)
    assert np.array_equal(back.features, data.features)
    assert np.array_equal(back.labels, data.labels)


def test_load_skips_comments_and_normalizes(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("# comment\nx1,x2,label\n3,4,1\n0,2,-1\n")
    with pytest.raises(DatasetFormatError, match="norm"):
        load_dataset(path)
    data = load_dataset(path, normalize=True)
    assert np.allclose(data.features, [[0.6, 0.8], [0, 1]])
    assert in_version_space(np.array([1.0, -0.1]), data)


@pytest.mark.parametrize("text,match", [
    ("1,0,2\n", "label"),
    ("1,0,1\n1,0\n", "columns"),
    ("1,0,1\n1,abc,1\n", "non-numeric"),
    ("", "no examples"),
    ("1,nan,1\n", "non-finite"),
])
def test_load_rejects_malformed(tmp_path, text, match):
    path = tmp_path / "bad.csv"
    path.write_text(text)
    with pytest.raises(DatasetFormatError, match=match):
        load_dataset(path)
