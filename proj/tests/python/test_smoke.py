import math

import numpy as np
import pytest

try:
    import platebench as pb
except ImportError:
    import _platebench as pb


def test_generate_and_recognize_round_trip():
    img, text = pb.generate_plate("mercosul", seed=7)
    assert img.dtype == np.uint8
    assert img.ndim == 3 and img.shape[2] == 3
    result = pb.builtin_recognize(img)
    assert result["text"] == text
    assert result["confidence"] == 1.0


def test_grayscale_weights():
    img = np.zeros((1, 1, 3), dtype=np.uint8)
    img[0, 0] = (255, 0, 0)
    gray = pb.to_grayscale(img)
    assert gray.shape == (1, 1)
    assert gray[0, 0] == 76  # round(0.299 * 255)


def test_pipeline_and_codec(tmp_path):
    img, _ = pb.generate_plate("oldbrazil", seed=3)
    out, timings = pb.apply_pipeline(img, "clahe_rgb(tiles=4x4)|grayscale")
    assert out.ndim == 2
    assert [name for name, _ in timings] == ["clahe_rgb", "grayscale"]

    path = str(tmp_path / "plate.ppm")
    pb.save_image(img, path)
    assert np.array_equal(pb.load_image(path), img)


def test_kernels_are_pure():
    img, _ = pb.generate_plate("mercosul", seed=11)
    a = pb.bilateral_filter(img, radius=1, sigma_space=2.0, sigma_range=40.0)
    b = pb.bilateral_filter(img, radius=1, sigma_space=2.0, sigma_range=40.0)
    assert np.array_equal(a, b)
    const = np.full((8, 8, 3), 77, dtype=np.uint8)
    assert np.array_equal(pb.bilateral_filter(const, radius=2), const)


def test_perturb_determinism():
    img, _ = pb.generate_plate("mercosul", seed=1)
    a = pb.perturb(img, noise_sigma=30.0, seed=5)
    b = pb.perturb(img, noise_sigma=30.0, seed=5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, img)


def test_exact_match_metric_identity():
    rows = [("ABC1234", "ABC1234", 0.9)] * 717 + [("ABC1234", "XYZ0000", 0.4)] * 283
    result = pb.evaluate(rows)
    summary = result["summary"]
    assert summary["accuracy"] == summary["precision"] == summary["recall"] == summary["f1"]
    assert summary["accuracy"] == 717 / 1000
    assert result["counts"] == {"tp": 717, "tn": 0, "fp": 283, "fn": 283}


def test_anova_worked_example():
    r = pb.anova_oneway([[1, 2, 3], [2, 3, 4]])
    assert r["f_value"] == 1.5
    assert r["ss_between"] == 1.5
    assert r["ss_within"] == 4.0
    assert math.isclose(r["p_value"], 0.2878641347266907, rel_tol=1e-9)


def test_roc_perfect_separation():
    r = pb.roc_curve([(0.9, True), (0.8, True), (0.2, False)])
    assert r["auc"] == 1.0
    assert r["points"][0] == (0.0, 0.0)
    assert r["points"][-1] == (1.0, 1.0)


def test_runtime_summary():
    r = pb.runtime_summary([6.59, 7.26, 9.18, 8.01, 7.13], bins=5)
    assert r["median"] == 7.26
    assert math.isclose(r["mean"], 7.634, rel_tol=1e-12)
    assert sum(r["bin_counts"]) == 5


def test_mock_recognizer():
    p = pb.mock_recognize("ABC1D23", 0.0, seed=1, index=0)
    assert p["text"] == "ABC1D23"
    assert p["confidence"] == 1.0
    corrupted = pb.mock_recognize("ABC1D23", 1.0, seed=1, index=0)
    assert corrupted["text"] != "ABC1D23"


def test_normalization_and_formats():
    assert pb.normalize_plate("abc-1234") == "ABC1234"
    assert pb.classify_format("ABC1234") == "oldbrazil"
    assert pb.classify_format("ABC1D23") == "mercosul"
    with pytest.raises(Exception):
        pb.normalize_plate("---")


def test_dataset_generation(tmp_path):
    manifest = pb.generate_dataset(3, "mercosul", noise_sigma=10.0, seed=4, out_dir=str(tmp_path))
    lines = open(manifest, encoding="utf-8").read().splitlines()
    assert lines[0] == "image,plate"
    assert len(lines) == 4
    img = pb.load_image(str(tmp_path / lines[1].split(",")[0]))
    assert img.dtype == np.uint8
