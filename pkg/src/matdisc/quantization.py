"""Vector quantization, quotient compression, and the sigma2 certificate.

The certificate pipeline bounds the second singular value of a symmetric
matrix by a multiple of its discrepancy, constructively: center the
matrix, grab the top singular direction, quantize it to few values,
compress over the level sets, and read the bound off the small matrix.
Every inequality used on the way is recorded with its numeric slack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .discrepancy import DiscResult, disc_exact, disc_heuristic, disc_value_at
from .errors import (
    BadEpsilonError,
    CertificateLinkViolatedError,
    ImproperPartitionError,
    NotNormalizedError,
)
from .linalg import SymmetricMatrix, eig_symmetric, rho_prime

CERT_EPSILON = 1.0 / 3.0
LINK_TOL = 1e-8
#: closed-form constant from the certificate chain: (4104 ln n + 10260)
CLOSED_FORM_SLOPE = 4104.0
CLOSED_FORM_OFFSET = 10260.0
HEADLINE_CONSTANT = 18906.0


def nonneg_value_ceiling(n: int, epsilon: float) -> int:
    """Distinct-value budget for a nonnegative real unit vector."""
    return math.ceil((2.0 / epsilon) * math.log(2.0 * n / epsilon))


def complex_value_ceiling(n: int, epsilon: float) -> int:
    """Distinct-value budget for an arbitrary complex unit vector."""
    phases = math.ceil(8.0 * math.pi / epsilon)
    moduli = math.ceil((4.0 / epsilon) * math.log(4.0 * n / epsilon))
    return phases * moduli


@dataclass(frozen=True, eq=False)
class QuantizedVector:
    """Few-valued approximation y of a unit vector x.

    case is one of 'nonnegative', 'signed', 'complex'; value_ceiling is
    the budget the distinct count is guaranteed not to exceed; error is
    the measured ||x - y||_p; repairs counts bottom-bucket adjustments
    that were needed to stay within the budget.
    """

    y: np.ndarray
    distinct_values: tuple
    epsilon: float
    p_norm: float
    case: str
    value_ceiling: int
    error: float
    repairs: int

    @property
    def distinct_count(self) -> int:
        return len(self.distinct_values)

    def to_json_dict(self) -> dict:
        if np.iscomplexobj(self.y):
            y = {"real": self.y.real.tolist(), "imag": self.y.imag.tolist()}
            values = [[v.real, v.imag] for v in self.distinct_values]
        else:
            y = self.y.tolist()
            values = list(self.distinct_values)
        return {
            "y": y,
            "distinct_values": values,
            "epsilon": self.epsilon,
            "p_norm": self.p_norm,
            "case": self.case,
            "value_ceiling": self.value_ceiling,
            "error": self.error,
            "repairs": self.repairs,
        }


def _p_norm(v: np.ndarray, p: float) -> float:
    return float(np.sum(np.abs(v) ** p) ** (1.0 / p))


def _bucket_spans(sorted_desc: np.ndarray, ratio: float, cap: int):
    """Greedy geometric buckets over a descending array.

    Each bucket keeps every entry >= ratio times its largest entry; at
    most cap buckets are formed, the rest is left for the zero tail.
    Returns a list of (start, stop) half-open index spans.
    """
    n = sorted_desc.shape[0]
    spans = []
    i = 0
    while i < n and len(spans) < cap:
        threshold = ratio * sorted_desc[i]
        count = int(np.searchsorted(-sorted_desc[i:], -threshold, side="right"))
        spans.append((i, i + count))
        i += count
    return spans


def _values_from_spans(sorted_desc: np.ndarray, spans, drop_from: int) -> np.ndarray:
    """Per-position quantized values: bucket minima, zero tail.

    drop_from gives the number of leading buckets kept; later buckets
    are zeroed along with the tail.
    """
    out = np.zeros_like(sorted_desc)
    for start, stop in spans[:drop_from]:
        out[start:stop] = sorted_desc[stop - 1]
    return out


def _merge_bottom(values: np.ndarray, spans, pair_at: int) -> np.ndarray:
    """Copy of values with buckets pair_at and pair_at+1 sharing one value.

    Both spans get the smaller bucket's minimum, so moduli still never
    increase.
    """
    out = values.copy()
    lo_start, _ = spans[pair_at]
    _, hi_stop = spans[pair_at + 1]
    out[lo_start:hi_stop] = values[hi_stop - 1]
    return out


def _quantize_nonneg(v: np.ndarray, stage_epsilon: float, cap: int, p: float):
    """Quantize a nonnegative array; returns (values array, repairs used).

    The distinct count (zero included when it appears) must stay within
    cap. The greedy bucketing can land exactly one value over budget
    when it truncates; in that case the bottom bucket is zeroed, or two
    bottom buckets merged, whichever first keeps the measured p-norm
    error within stage_epsilon.
    """
    order = np.argsort(-v, kind="stable")
    sorted_desc = v[order]
    spans = _bucket_spans(sorted_desc, 1.0 - stage_epsilon / 2.0, cap)
    quantized = _values_from_spans(sorted_desc, spans, len(spans))

    repairs = 0
    if len(np.unique(quantized)) > cap:
        candidates = [_values_from_spans(sorted_desc, spans, len(spans) - 1)]
        for pair_at in range(len(spans) - 2, -1, -1):
            candidates.append(_merge_bottom(quantized, spans, pair_at))
        chosen = None
        for cand in candidates:
            if len(np.unique(cand)) <= cap and (
                _p_norm(sorted_desc - cand, p) <= stage_epsilon
            ):
                chosen = cand
                break
        if chosen is None:
            raise RuntimeError("bucket repair failed to reach the value budget")
        quantized = chosen
        repairs = 1
    out = np.zeros_like(v)
    out[order] = quantized
    return out, repairs


def quantize(x, p: float, epsilon: float) -> QuantizedVector:
    """Replace a unit vector by one taking few distinct values.

    Nonnegative real input stays within ceil((2/eps) ln(2n/eps)) values;
    signed real and complex input within ceil(8 pi/eps) times
    ceil((4/eps) ln(4n/eps)). Moduli never increase, so ||y|| <= ||x||.
    """
    if not 0.0 < epsilon < 1.0:
        raise BadEpsilonError(f"epsilon must lie in (0, 1), got {epsilon}")
    if p < 1.0:
        raise ValueError(f"norm order must be >= 1, got {p}")
    xv = np.asarray(x)
    if np.iscomplexobj(xv):
        xv = xv.astype(np.complex128).reshape(-1)
    else:
        xv = xv.astype(np.float64).reshape(-1)
    n = xv.shape[0]
    if n < 1:
        raise ValueError("vector must be nonempty")
    norm = _p_norm(xv, p)
    if abs(norm - 1.0) > 1e-12:
        raise NotNormalizedError(f"input must be a unit vector in p-norm, got {norm}")

    if not np.iscomplexobj(xv) and bool(np.all(xv >= 0.0)):
        case = "nonnegative"
        ceiling = nonneg_value_ceiling(n, epsilon)
        y, repairs = _quantize_nonneg(xv, epsilon, ceiling, p)
    elif not np.iscomplexobj(xv):
        case = "signed"
        ceiling = complex_value_ceiling(n, epsilon)
        moduli_cap = math.ceil((4.0 / epsilon) * math.log(4.0 * n / epsilon))
        q, repairs = _quantize_nonneg(np.abs(xv), epsilon / 2.0, moduli_cap, p)
        y = np.where(xv < 0.0, -q, q)
    else:
        case = "complex"
        ceiling = complex_value_ceiling(n, epsilon)
        moduli_cap = math.ceil((4.0 / epsilon) * math.log(4.0 * n / epsilon))
        phase_slots = math.ceil(8.0 * math.pi / epsilon)
        q, repairs = _quantize_nonneg(np.abs(xv), epsilon / 2.0, moduli_cap, p)
        theta = np.angle(xv) / (2.0 * math.pi)
        theta = np.where(theta < 0.0, theta + 1.0, theta)
        theta[np.abs(xv) == 0.0] = 0.0
        grid = np.floor(phase_slots * theta) / phase_slots
        y = q * np.exp(2.0j * math.pi * grid)

    distinct = tuple(np.unique(y).tolist())
    if len(distinct) > ceiling:
        raise RuntimeError(
            f"quantizer exceeded its value budget: {len(distinct)} > {ceiling}"
        )
    error = _p_norm(xv - y, p)
    y = y.copy()
    y.setflags(write=False)
    return QuantizedVector(
        y=y,
        distinct_values=distinct,
        epsilon=epsilon,
        p_norm=p,
        case=case,
        value_ceiling=ceiling,
        error=error,
        repairs=repairs,
    )


@dataclass(frozen=True, eq=False)
class Partition:
    """Proper partition of [n]: disjoint nonempty 1-based classes covering it."""

    classes: tuple
    n: int

    def __post_init__(self):
        seen = set()
        normalized = []
        for cls in self.classes:
            cls = tuple(sorted(int(v) for v in cls))
            if not cls:
                raise ImproperPartitionError("partition classes must be nonempty")
            for v in cls:
                if not 1 <= v <= self.n:
                    raise ImproperPartitionError(
                        f"index {v} outside 1..{self.n}"
                    )
                if v in seen:
                    raise ImproperPartitionError(f"index {v} appears twice")
                seen.add(v)
            normalized.append(cls)
        if len(seen) != self.n:
            raise ImproperPartitionError("classes do not cover the index range")
        object.__setattr__(self, "classes", tuple(normalized))

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def to_json_dict(self) -> dict:
        return {"classes": [list(c) for c in self.classes], "n": self.n}


def level_partition(y) -> Partition:
    """Level sets of a vector, one class per distinct value, values ascending."""
    yv = np.asarray(y).reshape(-1)
    values = np.unique(yv)
    classes = []
    for val in values:
        members = tuple(int(i) + 1 for i in np.nonzero(yv == val)[0])
        classes.append(members)
    return Partition(classes=tuple(classes), n=yv.shape[0])


def quotient_compress(B: SymmetricMatrix, partition: Partition) -> SymmetricMatrix:
    """Compress B over a partition: scaled class-pair block sums."""
    if partition.n != B.n:
        raise ImproperPartitionError(
            f"partition covers {partition.n} indices, matrix has {B.n}"
        )
    m = partition.class_count
    sel = np.zeros((m, B.n), dtype=B.a.dtype)
    for i, cls in enumerate(partition.classes):
        idx = np.array(cls, dtype=np.int64) - 1
        sel[i, idx] = 1.0 / math.sqrt(len(cls))
    C = sel @ B.a @ sel.conj().T
    C = (C + C.conj().T) / 2.0
    return SymmetricMatrix(C)


@dataclass(frozen=True, eq=False)
class CertificateLink:
    """One verified inequality of the chain; slack = rhs - lhs."""

    name: str
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
        }


@dataclass(frozen=True, eq=False)
class Sigma2Certificate:
    """Constructive witness chain bounding sigma2 by the discrepancy.

    Links, in order: sigma2(A) <= sigma1(B); sigma1(B) <= (9/2)|<By,y>|;
    |<By,y>| <= sigma1(C); sigma1(C) <= m max|c_ij|; max|c_ij| <= disc.
    m is the realized class count; the ceiling that the chain's closed
    form uses is recorded separately.
    """

    n: int
    sigma2: float
    sigma1_b: float
    byy: float
    sigma1_c: float
    max_c: float
    m_realized: int
    m_ceiling: int
    x: np.ndarray
    y: QuantizedVector
    partition: Partition
    C: SymmetricMatrix
    disc: DiscResult
    links: tuple
    closed_form_bound: float
    headline_bound: float
    headline_holds: bool
    disc_is_exact: bool

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "sigma2": self.sigma2,
            "sigma1_B": self.sigma1_b,
            "byy": self.byy,
            "sigma1_C": self.sigma1_c,
            "max_c": self.max_c,
            "m_realized": self.m_realized,
            "m_ceiling": self.m_ceiling,
            "x": self.x.tolist(),
            "y": self.y.to_json_dict(),
            "partition": self.partition.to_json_dict(),
            "C": [list(row) for row in self.C.a.tolist()],
            "disc": self.disc.to_json_dict(),
            "links": [link.to_json_dict() for link in self.links],
            "closed_form_bound": self.closed_form_bound,
            "headline_bound": self.headline_bound,
            "headline_holds": self.headline_holds,
            "disc_is_exact": self.disc_is_exact,
        }


def certificate_m_ceiling(n: int) -> int:
    """Distinct-value budget the chain's closed form is stated with."""
    return complex_value_ceiling(n, CERT_EPSILON)


def closed_form_bound(n: int, disc_value: float) -> float:
    """(4104 ln n + 10260) times the discrepancy."""
    return (CLOSED_FORM_SLOPE * math.log(n) + CLOSED_FORM_OFFSET) * disc_value


def certify_sigma2(
    A: SymmetricMatrix,
    disc: DiscResult | None = None,
    disc_mode: str = "exact",
    cap: int = 24,
    threads: int = 1,
    iterations: int = 64,
    seed: int = 0,
    link_tol: float = LINK_TOL,
) -> Sigma2Certificate:
    """Run the constructive sigma2 <= const * disc * ln n pipeline.

    Every link is checked numerically; a violation beyond link_tol
    raises CertificateLinkViolatedError, which signals a bug rather
    than a property of the input. When disc is supplied or computed
    heuristically, the class-pair values join the witness pool so the
    final link stays sound.
    """
    if A.is_complex:
        raise ValueError("the certificate pipeline supports real matrices only")
    n = A.n
    if n < 2:
        raise ValueError("certificate needs n >= 2")

    spectrum_a = eig_symmetric(A)
    sigma2 = spectrum_a.sigma2
    B = SymmetricMatrix(A.a - rho_prime(A))
    spectrum_b = eig_symmetric(B)
    sigma1_b = spectrum_b.sigma1
    w = spectrum_b.eigenvalues
    if abs(w[0]) >= abs(w[-1]):
        x = spectrum_b.eigenvectors[:, 0].copy()
    else:
        x = spectrum_b.eigenvectors[:, -1].copy()
    x /= float(np.linalg.norm(x))

    qy = quantize(x, p=2.0, epsilon=CERT_EPSILON)
    partition = level_partition(qy.y)
    C = quotient_compress(B, partition)
    sigma1_c = eig_symmetric(C).sigma1
    byy = float(qy.y @ B.a @ qy.y)
    max_c = float(np.max(np.abs(C.a)))
    m_realized = partition.class_count
    m_ceiling = certificate_m_ceiling(n)

    if disc is None:
        if disc_mode == "exact":
            disc = disc_exact(A, cap=cap, threads=threads)
        elif disc_mode == "heuristic":
            disc = disc_heuristic(A, iterations=iterations, seed=seed)
        else:
            raise ValueError(f"unknown disc_mode {disc_mode!r}")
    if disc.mode != "exact":
        best_pair = None
        best_val = disc.value
        for i, ci in enumerate(partition.classes):
            for j, cj in enumerate(partition.classes):
                val = disc_value_at(A, ci, cj)
                if val > best_val:
                    best_val = val
                    best_pair = (ci, cj)
        if best_pair is not None:
            disc = DiscResult(
                value=best_val,
                witness_X=best_pair[0],
                witness_Y=best_pair[1],
                mode=disc.mode,
                evaluations=disc.evaluations + m_realized * m_realized,
            )

    links = (
        CertificateLink("sigma2_le_sigma1_B", sigma2, sigma1_b),
        CertificateLink("sigma1_B_le_4.5_byy", sigma1_b, 4.5 * abs(byy)),
        CertificateLink("byy_le_sigma1_C", abs(byy), sigma1_c),
        CertificateLink("sigma1_C_le_m_max_c", sigma1_c, m_realized * max_c),
        CertificateLink("max_c_le_disc", max_c, disc.value),
    )
    for link in links:
        if link.lhs > link.rhs + link_tol:
            raise CertificateLinkViolatedError(
                f"certificate link {link.name} violated: "
                f"{link.lhs!r} > {link.rhs!r} + {link_tol}"
            )

    bound = closed_form_bound(n, disc.value)
    headline = HEADLINE_CONSTANT * disc.value * math.log(n)
    return Sigma2Certificate(
        n=n,
        sigma2=sigma2,
        sigma1_b=sigma1_b,
        byy=byy,
        sigma1_c=sigma1_c,
        max_c=max_c,
        m_realized=m_realized,
        m_ceiling=m_ceiling,
        x=x,
        y=qy,
        partition=partition,
        C=C,
        disc=disc,
        links=links,
        closed_form_bound=bound,
        headline_bound=headline,
        headline_holds=bool(sigma2 <= headline + link_tol),
        disc_is_exact=disc.mode == "exact",
    )
