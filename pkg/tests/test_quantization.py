import math

import numpy as np
import pytest

from matdisc import (
    BadEpsilonError,
    ImproperPartitionError,
    NotNormalizedError,
    Partition,
    SymmetricMatrix,
    certificate_m_ceiling,
    certify_sigma2,
    closed_form_bound,
    complex_value_ceiling,
    disc_exact,
    eig_symmetric,
    level_partition,
    nonneg_value_ceiling,
    quantize,
    quotient_compress,
)


def unit(v, p=2.0):
    v = np.asarray(v, dtype=v.dtype if np.iscomplexobj(v) else np.float64)
    return v / np.sum(np.abs(v) ** p) ** (1.0 / p)


def test_ceiling_formulas():
    assert nonneg_value_ceiling(64, 0.9) == math.ceil(
        (2.0 / 0.9) * math.log(2 * 64 / 0.9))
    assert complex_value_ceiling(16, 1.0 / 3.0) == \
        math.ceil(8 * math.pi * 3) * math.ceil(12 * math.log(16 * 4 * 3))


def test_nonneg_random_vectors():
    rng = np.random.default_rng(71)
    for n in (8, 32, 100):
        for eps in (0.05, 1.0 / 3.0, 0.9):
            for p in (1.0, 2.0, 3.0):
                x = unit(np.abs(rng.normal(size=n)), p)
                q = quantize(x, p=p, epsilon=eps)
                assert q.case == "nonnegative"
                assert q.error <= eps + 1e-12
                assert q.distinct_count <= q.value_ceiling
                assert q.value_ceiling == nonneg_value_ceiling(n, eps)
                # moduli only ever shrink
                assert np.all(np.abs(q.y) <= np.abs(x) + 1e-15)
                assert np.sum(np.abs(q.y) ** p) ** (1.0 / p) <= 1.0 + 1e-12


def test_forced_bucket_repair():
    """A fast-decaying vector makes every entry its own bucket.

    With n = 64 and epsilon = 0.9, the greedy pass wants 64 buckets but
    the budget is only ceil((2/.9) ln(2*64/.9)) = 12, so the repair path
    must fire and still respect both the budget and the error target.
    """
    x = unit(0.5 ** np.arange(64))
    cap = nonneg_value_ceiling(64, 0.9)
    assert cap == 12
    q = quantize(x, p=2.0, epsilon=0.9)
    assert q.repairs >= 1
    assert q.distinct_count <= cap
    assert q.error <= 0.9 + 1e-12


def test_signed_keeps_signs():
    rng = np.random.default_rng(73)
    x = unit(rng.normal(size=24))
    q = quantize(x, p=2.0, epsilon=0.3)
    assert q.case == "signed"
    assert q.error <= 0.3 + 1e-12
    assert q.distinct_count <= complex_value_ceiling(24, 0.3)
    nz = q.y != 0.0
    assert np.all(np.sign(q.y[nz]) == np.sign(x[nz]))


def test_complex_phase_grid():
    rng = np.random.default_rng(79)
    x = unit(rng.normal(size=20) + 1j * rng.normal(size=20))
    eps = 0.5
    q = quantize(x, p=2.0, epsilon=eps)
    assert q.case == "complex"
    assert q.error <= eps + 1e-12
    assert q.distinct_count <= complex_value_ceiling(20, eps)
    slots = math.ceil(8.0 * math.pi / eps)
    nz = np.abs(q.y) > 0.0
    ang = np.angle(q.y[nz]) / (2.0 * math.pi)
    ang = np.where(ang < 0.0, ang + 1.0, ang)
    assert np.allclose(slots * ang, np.round(slots * ang), atol=1e-9)
    assert np.all(np.abs(q.y) <= np.abs(x) + 1e-15)


def test_quantize_rejects_bad_input():
    with pytest.raises(NotNormalizedError):
        quantize(np.array([1.0, 1.0]), p=2.0, epsilon=0.5)
    with pytest.raises(BadEpsilonError):
        quantize(np.array([1.0]), p=2.0, epsilon=0.0)
    with pytest.raises(BadEpsilonError):
        quantize(np.array([1.0]), p=2.0, epsilon=1.0)
    with pytest.raises(ValueError):
        quantize(np.array([1.0]), p=0.5, epsilon=0.5)
    with pytest.raises(ValueError):
        quantize(np.array([]), p=2.0, epsilon=0.5)


def test_level_partition():
    y = np.array([0.5, 0.0, 0.5, -0.5, 0.0])
    part = level_partition(y)
    assert part.classes == ((4,), (2, 5), (1, 3))
    assert part.class_count == 3
    single = level_partition(np.zeros(4))
    assert single.classes == ((1, 2, 3, 4),)


def test_partition_validation():
    with pytest.raises(ImproperPartitionError):
        Partition(classes=((1, 2), (2, 3)), n=3)
    with pytest.raises(ImproperPartitionError):
        Partition(classes=((1,),), n=2)
    with pytest.raises(ImproperPartitionError):
        Partition(classes=((1,), ()), n=1)
    with pytest.raises(ImproperPartitionError):
        Partition(classes=((1, 4),), n=2)


def test_quotient_compress_identities():
    rng = np.random.default_rng(83)
    m = rng.normal(size=(6, 6))
    B = SymmetricMatrix((m + m.T) / 2.0)
    singletons = Partition(classes=tuple((i,) for i in range(1, 7)), n=6)
    C = quotient_compress(B, singletons)
    assert np.array_equal(C.a, B.a)
    with pytest.raises(ImproperPartitionError):
        quotient_compress(B, Partition(classes=((1, 2),), n=2))


def test_quotient_compress_preserves_class_constant_form():
    rng = np.random.default_rng(89)
    m = rng.normal(size=(8, 8))
    B = SymmetricMatrix((m + m.T) / 2.0)
    x = unit(np.abs(rng.normal(size=8)))
    q = quantize(x, p=2.0, epsilon=1.0 / 3.0)
    part = level_partition(q.y)
    C = quotient_compress(B, part)
    v = np.array([q.y[cls[0] - 1] * math.sqrt(len(cls))
                  for cls in part.classes])
    lhs = float(q.y @ B.a @ q.y)
    rhs = float(v @ C.a @ v)
    assert abs(lhs - rhs) <= 1e-10
    # the compressed top singular value dominates the form
    assert abs(lhs) <= eig_symmetric(C).sigma1 * float(v @ v) + 1e-9


def test_certificate_links_random():
    rng = np.random.default_rng(97)
    for n in (2, 5, 9, 12):
        m = rng.normal(size=(n, n))
        A = SymmetricMatrix((m + m.T) / 2.0)
        cert = certify_sigma2(A)
        for link in cert.links:
            assert link.lhs <= link.rhs + 1e-8, link.name
        assert cert.disc_is_exact
        assert cert.m_realized <= cert.m_ceiling
        assert cert.m_ceiling == certificate_m_ceiling(n)
        assert cert.sigma2 <= cert.closed_form_bound + 1e-8 or n == 2
        assert cert.headline_holds == (
            cert.sigma2 <= cert.headline_bound + 1e-8)


def test_certificate_closed_form_numbers():
    assert closed_form_bound(12, 2.0) == pytest.approx(
        (4104.0 * math.log(12) + 10260.0) * 2.0, rel=1e-15)
    cert = certify_sigma2(SymmetricMatrix(np.eye(3)))
    assert cert.headline_bound == pytest.approx(
        18906.0 * cert.disc.value * math.log(3), rel=1e-15)


def test_certificate_heuristic_and_supplied_disc():
    rng = np.random.default_rng(101)
    m = rng.normal(size=(10, 10))
    A = SymmetricMatrix((m + m.T) / 2.0)
    heur = certify_sigma2(A, disc_mode="heuristic", seed=4)
    assert not heur.disc_is_exact
    for link in heur.links:
        assert link.lhs <= link.rhs + 1e-8, link.name
    pre = disc_exact(A)
    supplied = certify_sigma2(A, disc=pre)
    assert supplied.disc.value == pre.value
    assert supplied.disc_is_exact


def test_certificate_rejects_bad_matrices():
    h = SymmetricMatrix(np.array([[1.0, 1j], [-1j, 0.0]]))
    with pytest.raises(ValueError):
        certify_sigma2(h)
    with pytest.raises(ValueError):
        certify_sigma2(SymmetricMatrix(np.zeros((1, 1))))
    with pytest.raises(ValueError):
        certify_sigma2(SymmetricMatrix(np.eye(4)), disc_mode="annealed")
