import pytest

from matdisc.suite import run_suite


def test_quick_suite_passes():
    report = run_suite(quick=True, max_p=13, max_k=8, samples=300)
    assert report["pass"]
    assert set(report["checks"]) == {
        "tightness_family", "certificates", "quantization", "compression",
        "residue_graphs", "block_matrices", "block_spectral_gap",
        "small_graph_bound", "sparse_family",
    }
    for name, check in report["checks"].items():
        assert check["pass"], name
    params = report["parameters"]
    assert params["quick"] and params["max_k"] == 8
    assert params["trials"] == 40 and params["samples"] == 300


def test_suite_rejects_empty_prime_range():
    with pytest.raises(ValueError):
        run_suite(max_p=11)
