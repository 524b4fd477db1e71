"""Edge-distribution bound checks and normalized Laplacian gaps.

The checks in this module share one report shape, BoundReport, so that
the command line can print any of them uniformly.  Slack is always
lhs - rhs: negative slack means the inequality holds with room, and an
instance only counts as a violation when its slack exceeds a small
positive tolerance.

Two checking modes exist.  Exhaustive mode enumerates every nonempty
pair of vertex subsets (feasible up to 14 vertices, the inner loop is
chunked matrix products).  Sampled mode draws subset pairs with
log-uniform sizes from a seeded generator, which keeps reports
reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyGraphError,
    FamilyTooSmallError,
    NotRegularError,
    TooLargeError,
    ZeroDegreeError,
)
from .graphs import Graph
from .linalg import SymmetricMatrix, eig_symmetric

__all__ = [
    "EXACT_PAIR_CAP",
    "DEFAULT_SAMPLES",
    "BOUND_TOL",
    "LaplacianSpectrum",
    "laplacian_spectrum",
    "lambda_bar_from_adjacency",
    "BoundReport",
    "thomason_hypotheses",
    "thomason_report",
    "thomason_small_graph_sweep",
    "chung_alpha_check",
    "family_properties",
]

EXACT_PAIR_CAP = 14
DEFAULT_SAMPLES = 10_000
BOUND_TOL = 1e-8

_Y_CHUNK = 2048
_MAX_RECORDED_VIOLATIONS = 100


# ---------------------------------------------------------------------------
# Normalized Laplacian for regular graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LaplacianSpectrum:
    """Eigenvalues of I - A/d for a d-regular graph, sorted ascending.

    lambda_bar is the largest |1 - lambda_i| after discarding one copy
    of the smallest eigenvalue (which is 0 up to roundoff).
    """

    n: int
    degree: int
    lambdas: tuple[float, ...]
    lambda_bar: float

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "degree": self.degree,
            "lambdas": list(self.lambdas),
            "lambda_bar": self.lambda_bar,
        }


def laplacian_spectrum(graph: Graph) -> LaplacianSpectrum:
    if not graph.is_regular():
        raise NotRegularError(
            "normalized Laplacian here is defined for regular graphs only"
        )
    d = int(graph.degrees[0])
    if d == 0:
        raise ZeroDegreeError("cannot normalize by degree 0")
    lap = np.eye(graph.n) - graph.adjacency.a / d
    spec = eig_symmetric(SymmetricMatrix(lap))
    ascending = spec.eigenvalues[::-1]
    lam_bar = float(np.max(np.abs(1.0 - ascending[1:])))
    return LaplacianSpectrum(
        n=graph.n,
        degree=d,
        lambdas=tuple(float(v) for v in ascending),
        lambda_bar=lam_bar,
    )


def lambda_bar_from_adjacency(graph: Graph) -> float:
    """Same gap via adjacency eigenvalues: max |mu_i| / d over i >= 2."""
    if not graph.is_regular():
        raise NotRegularError("adjacency route also needs a regular graph")
    d = int(graph.degrees[0])
    if d == 0:
        raise ZeroDegreeError("cannot normalize by degree 0")
    mu = eig_symmetric(graph.adjacency).eigenvalues  # descending, mu[0] = d
    return float(np.max(np.abs(mu[1:])) / d)


# ---------------------------------------------------------------------------
# Report container
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    """Outcome of checking one inequality over many subset pairs.

    max_slack is the largest lhs - rhs seen (None when nothing was
    comparable); violations hold at most a fixed number of offending
    pairs, with the true count kept in params["violation_count"].
    """

    bound_name: str
    passed: bool
    instances: int
    violations: tuple[dict, ...]
    max_slack: float | None
    params: dict

    def to_json_dict(self) -> dict:
        return {
            "bound_name": self.bound_name,
            "pass": self.passed,
            "instances": self.instances,
            "violations": list(self.violations),
            "max_slack": self.max_slack,
            "params": self.params,
        }


def _mask_to_set(mask: int) -> list[int]:
    out = []
    v = 1
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def _indicator_matrix(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Indicator rows for every nonempty subset of [n], mask order."""
    masks = np.arange(1, 1 << n, dtype=np.uint32)
    ind = ((masks[:, None] >> np.arange(n, dtype=np.uint32)) & 1).astype(float)
    return ind, masks


def _draw_subsets(rng: np.random.Generator, n: int, count: int) -> list[np.ndarray]:
    """Subsets with log-uniform sizes; returns 0-based index arrays."""
    hi = math.log(n + 1)
    sets = []
    for _ in range(count):
        size = int(math.exp(rng.uniform(0.0, hi)))
        size = min(max(size, 1), n)
        sets.append(rng.choice(n, size=size, replace=False))
    return sets


def _indicator_rows(subsets: list[np.ndarray], n: int) -> np.ndarray:
    rows = np.zeros((len(subsets), n))
    for r, idx in enumerate(subsets):
        rows[r, idx] = 1.0
    return rows


# ---------------------------------------------------------------------------
# Degree/codegree edge-distribution bound
# ---------------------------------------------------------------------------


def thomason_hypotheses(graph: Graph, p: float, mu: float) -> dict:
    """Check min degree >= p*n and pairwise codegree <= p^2*n + mu.

    Comparisons are direct, with no tolerance: a borderline graph that
    misses the threshold by float rounding is skipped rather than
    tested against a conclusion it is not entitled to.
    """
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie strictly between 0 and 1")
    if mu < 0.0:
        raise ValueError("mu must be nonnegative")
    n = graph.n
    min_degree = int(graph.degrees.min()) if n else 0
    if n >= 2:
        a = graph.adjacency.a
        prod = a @ a
        np.fill_diagonal(prod, -1.0)
        max_codegree = int(prod.max())
    else:
        max_codegree = 0
    degrees_ok = bool(min_degree >= p * n)
    codegrees_ok = bool(max_codegree <= p * p * n + mu)
    return {
        "min_degree": min_degree,
        "degree_threshold": p * n,
        "degrees_ok": degrees_ok,
        "max_codegree": max_codegree,
        "codegree_threshold": p * p * n + mu,
        "codegrees_ok": codegrees_ok,
        "hold": degrees_ok and codegrees_ok,
    }


def _thomason_rhs(sx: np.ndarray, sy: np.ndarray, p: float, n: int,
                  mu: float) -> np.ndarray:
    """rhs over the (X, Y) grid: eps(X)*|Y| + sqrt(|X||Y|(pn + mu|X|))."""
    eps = (p * sx < 1.0).astype(float)
    inner = np.outer(sx * (p * n + mu * sx), sy)
    return eps[:, None] * sy[None, :] + np.sqrt(inner)


def _scan_pair_grid(lhs: np.ndarray, rhs: np.ndarray, tol: float,
                    record, budget: int) -> tuple[int, float]:
    """Count violations in one lhs/rhs grid, recording up to `budget`."""
    slack = lhs - rhs
    worst = float(slack.max())
    bad = np.argwhere(slack > tol)
    for i, j in bad[:max(0, budget)]:
        record(int(i), int(j), float(lhs[i, j]), float(rhs[i, j]))
    return int(bad.shape[0]), worst


def thomason_report(graph: Graph, p: float, mu: float, *,
                    mode: str = "auto", samples: int = DEFAULT_SAMPLES,
                    seed: int = 1, tol: float = BOUND_TOL) -> BoundReport:
    """Check |e(X,Y) - p|X||Y|| <= eps|Y| + sqrt(|X||Y|(pn + mu|X|)).

    eps is 1 when p|X| < 1 and 0 otherwise.  When the degree or
    codegree hypotheses fail the report comes back with zero instances
    and params["hypotheses_hold"] = False; that is not a violation.
    """
    hyp = thomason_hypotheses(graph, p, mu)
    n = graph.n
    params: dict = {"p": p, "mu": mu, "n": n, "hypotheses": hyp,
                    "hypotheses_hold": hyp["hold"], "tol": tol}
    name = "thomason_edge_distribution"
    if not hyp["hold"]:
        return BoundReport(name, True, 0, (), None, params)
    if mode == "auto":
        mode = "exhaustive" if n <= EXACT_PAIR_CAP else "sampled"
    a = graph.adjacency.a
    violations: list[dict] = []

    if mode == "exhaustive":
        if n > EXACT_PAIR_CAP:
            raise TooLargeError(
                f"exhaustive pair check capped at n = {EXACT_PAIR_CAP}"
            )
        ind, masks = _indicator_matrix(n)
        sizes = ind.sum(axis=1)
        ax = ind @ a
        worst = -math.inf
        count = 0
        for lo in range(0, ind.shape[0], _Y_CHUNK):
            hi = min(lo + _Y_CHUNK, ind.shape[0])
            e = ax @ ind[lo:hi].T
            lhs = np.abs(e - p * np.outer(sizes, sizes[lo:hi]))
            rhs = _thomason_rhs(sizes, sizes[lo:hi], p, n, mu)

            def record(i, j, l, r, _lo=lo):
                violations.append({
                    "X": _mask_to_set(int(masks[i])),
                    "Y": _mask_to_set(int(masks[_lo + j])),
                    "lhs": l, "rhs": r,
                })
            c, w = _scan_pair_grid(
                lhs, rhs, tol, record,
                _MAX_RECORDED_VIOLATIONS - len(violations))
            count += c
            worst = max(worst, w)
        instances = ind.shape[0] ** 2
        params["mode"] = "exhaustive"
    else:
        rng = np.random.default_rng(seed)
        xs = _draw_subsets(rng, n, samples)
        ys = _draw_subsets(rng, n, samples)
        worst = -math.inf
        count = 0
        for lo in range(0, samples, _Y_CHUNK):
            hi = min(lo + _Y_CHUNK, samples)
            bx = _indicator_rows(xs[lo:hi], n)
            by = _indicator_rows(ys[lo:hi], n)
            e = ((bx @ a) * by).sum(axis=1)
            sx = bx.sum(axis=1)
            sy = by.sum(axis=1)
            lhs = np.abs(e - p * sx * sy)
            eps = (p * sx < 1.0).astype(float)
            rhs = eps * sy + np.sqrt(sx * sy * (p * n + mu * sx))
            slack = lhs - rhs
            worst = max(worst, float(slack.max()))
            for i in np.nonzero(slack > tol)[0]:
                count += 1
                if len(violations) < _MAX_RECORDED_VIOLATIONS:
                    violations.append({
                        "X": sorted(int(v) + 1 for v in xs[lo + i]),
                        "Y": sorted(int(v) + 1 for v in ys[lo + i]),
                        "lhs": float(lhs[i]), "rhs": float(rhs[i]),
                    })
        instances = samples
        params["mode"] = "sampled"
        params["samples"] = samples
        params["seed"] = seed
    params["violation_count"] = count
    return BoundReport(name, count == 0, instances, tuple(violations),
                       worst if instances else None, params)


def thomason_small_graph_sweep(*, max_n: int = 7,
                               ps: tuple[float, ...] = (0.1, 0.2, 0.3, 0.4, 0.5,
                                                        0.6, 0.7, 0.8, 0.9),
                               mus: tuple = (0.0, 1.0, "n"),
                               tol: float = BOUND_TOL) -> BoundReport:
    """Run the edge-distribution check on every graph with <= max_n vertices.

    Graphs come from the connected-and-disconnected isomorphism-class
    atlas (max_n <= 7), so checking one representative per class covers
    all small graphs: both sides of the inequality are invariant under
    relabeling.  A mu entry equal to the string "n" means mu = n for
    each graph.  Combinations whose hypotheses fail are counted but not
    tested.
    """
    if not 1 <= max_n <= 7:
        raise ValueError("the graph atlas covers n from 1 to 7")
    from networkx.generators.atlas import graph_atlas_g

    grids: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}
    for n in range(1, max_n + 1):
        ind, masks = _indicator_matrix(n)
        grids[n] = (ind, masks, ind.sum(axis=1))

    graphs_seen = 0
    combos_held = 0
    pairs_checked = 0
    count = 0
    worst = -math.inf
    violations: list[dict] = []

    for index, g in enumerate(graph_atlas_g()):
        n = g.number_of_nodes()
        if n == 0 or n > max_n:
            continue
        graphs_seen += 1
        ind, masks, sizes = grids[n]
        a = np.zeros((n, n))
        for u, v in g.edges():
            a[u, v] = 1.0
            a[v, u] = 1.0
        min_degree = a.sum(axis=1).min() if n else 0.0
        if n >= 2:
            prod = a @ a
            np.fill_diagonal(prod, -1.0)
            max_codegree = prod.max()
        else:
            max_codegree = 0.0
        e_grid = None
        for p in ps:
            if min_degree < p * n:
                continue
            for mu_spec in mus:
                mu = float(n) if mu_spec == "n" else float(mu_spec)
                if max_codegree > p * p * n + mu:
                    continue
                combos_held += 1
                if e_grid is None:
                    e_grid = (ind @ a) @ ind.T
                lhs = np.abs(e_grid - p * np.outer(sizes, sizes))
                rhs = _thomason_rhs(sizes, sizes, p, n, mu)

                def record(i, j, l, r, _idx=index, _p=p, _mu=mu,
                           _masks=masks):
                    violations.append({
                        "atlas_index": _idx, "p": _p, "mu": _mu,
                        "X": _mask_to_set(int(_masks[i])),
                        "Y": _mask_to_set(int(_masks[j])),
                        "lhs": l, "rhs": r,
                    })
                c, w = _scan_pair_grid(
                    lhs, rhs, tol, record,
                    _MAX_RECORDED_VIOLATIONS - len(violations))
                count += c
                worst = max(worst, w)
                pairs_checked += ind.shape[0] ** 2
    params = {
        "max_n": max_n,
        "ps": list(ps),
        "mus": [str(m) if m == "n" else float(m) for m in mus],
        "graphs_seen": graphs_seen,
        "combinations_with_hypotheses": combos_held,
        "pairs_checked": pairs_checked,
        "violation_count": count,
        "tol": tol,
    }
    return BoundReport("thomason_small_graphs", count == 0, pairs_checked,
                       tuple(violations), worst if pairs_checked else None,
                       params)


# ---------------------------------------------------------------------------
# Volume-normalized edge distribution
# ---------------------------------------------------------------------------


def chung_alpha_check(graph: Graph, alpha: float | None = None, *,
                      mode: str = "auto", samples: int = DEFAULT_SAMPLES,
                      seed: int = 1, tol: float = BOUND_TOL) -> BoundReport:
    """Check |e(X,Y) - volX volY / volV| against its volume bound.

    The bound is alpha * sqrt(volX volY vol(V-X) vol(V-Y)) / volV.  With
    alpha = None no inequality is asserted; instead the report carries
    params["alpha_min"], the smallest alpha that would make every
    scanned pair satisfy the bound.  Pairs where the right side
    vanishes (X or Y is all of V, or a set of isolated vertices) are
    identity checks: the left side must be 0 there, and for X = V it is
    exactly 0 because e(V, Y) counts vol Y directly.

    For a regular input the report also carries the normalized
    Laplacian gap and its ratio to alpha_min.
    """
    if graph.m == 0:
        raise EmptyGraphError("volume bound needs at least one edge")
    n = graph.n
    a = graph.adjacency.a
    degs = graph.degrees.astype(float)
    vol_v = float(degs.sum())
    if mode == "auto":
        mode = "exhaustive" if n <= EXACT_PAIR_CAP else "sampled"

    violations: list[dict] = []
    alpha_min = 0.0
    identity_pairs = 0
    worst = -math.inf if alpha is not None else None
    count = 0

    def scan(e, vx, vy, sets_x, sets_y):
        nonlocal alpha_min, identity_pairs, worst, count
        lhs = np.abs(e - np.outer(vx, vy) / vol_v)
        denom = np.sqrt(np.outer(vx * (vol_v - vx), vy * (vol_v - vy))) / vol_v
        zero = denom == 0.0
        identity_pairs += int(zero.sum())
        bad_identity = zero & (lhs > tol)
        count += int(bad_identity.sum())
        for i, j in np.argwhere(bad_identity)[:_MAX_RECORDED_VIOLATIONS]:
            if len(violations) < _MAX_RECORDED_VIOLATIONS:
                violations.append({
                    "X": sets_x(int(i)), "Y": sets_y(int(j)),
                    "lhs": float(lhs[i, j]), "rhs": 0.0,
                    "identity": True,
                })
        live = ~zero
        if live.any():
            ratio_max = float((lhs[live] / denom[live]).max())
            alpha_min = max(alpha_min, ratio_max)
        if alpha is not None:
            rhs = alpha * denom
            slack = np.where(zero, lhs, lhs - rhs)
            worst = max(worst, float(slack.max()))
            bad = np.argwhere((slack > tol) & live)
            for i, j in bad:
                count += 1
                if len(violations) < _MAX_RECORDED_VIOLATIONS:
                    violations.append({
                        "X": sets_x(int(i)), "Y": sets_y(int(j)),
                        "lhs": float(lhs[i, j]), "rhs": float(rhs[i, j]),
                    })

    if mode == "exhaustive":
        if n > EXACT_PAIR_CAP:
            raise TooLargeError(
                f"exhaustive pair check capped at n = {EXACT_PAIR_CAP}; "
                "use sampled mode"
            )
        ind, masks = _indicator_matrix(n)
        vols = ind @ degs
        ax = ind @ a
        for lo in range(0, ind.shape[0], _Y_CHUNK):
            hi = min(lo + _Y_CHUNK, ind.shape[0])
            e = ax @ ind[lo:hi].T
            scan(e, vols, vols[lo:hi],
                 lambda i: _mask_to_set(int(masks[i])),
                 lambda j, _lo=lo: _mask_to_set(int(masks[_lo + j])))
        instances = ind.shape[0] ** 2
        mode_params = {"mode": "exhaustive"}
    else:
        rng = np.random.default_rng(seed)
        xs = _draw_subsets(rng, n, samples)
        ys = _draw_subsets(rng, n, samples)
        xs.append(np.arange(n))  # one deterministic identity pair: X = Y = V
        ys.append(np.arange(n))
        for lo in range(0, len(xs), _Y_CHUNK):
            hi = min(lo + _Y_CHUNK, len(xs))
            bx = _indicator_rows(xs[lo:hi], n)
            by = _indicator_rows(ys[lo:hi], n)
            e_flat = ((bx @ a) * by).sum(axis=1)
            vx = bx @ degs
            vy = by @ degs
            # reuse the grid scanner on a diagonal-only view
            for r in range(hi - lo):
                scan(e_flat[r:r + 1, None], vx[r:r + 1], vy[r:r + 1],
                     lambda _i, _r=r, _lo=lo: sorted(
                         int(v) + 1 for v in xs[_lo + _r]),
                     lambda _j, _r=r, _lo=lo: sorted(
                         int(v) + 1 for v in ys[_lo + _r]))
        instances = len(xs)
        mode_params = {"mode": "sampled", "samples": samples, "seed": seed}

    params = {
        "alpha": alpha,
        "alpha_min": alpha_min,
        "identity_pairs": identity_pairs,
        "violation_count": count,
        "vol_V": vol_v,
        "tol": tol,
        **mode_params,
    }
    if graph.is_regular() and int(graph.degrees[0]) > 0:
        lam_bar = laplacian_spectrum(graph).lambda_bar
        params["lambda_bar"] = lam_bar
        params["lambda_bar_over_alpha_min"] = (
            lam_bar / alpha_min if alpha_min > 0 else None
        )
    return BoundReport("chung_volume_bound", count == 0, instances,
                       tuple(violations), worst, params)


# ---------------------------------------------------------------------------
# Scaling behavior across a graph family
# ---------------------------------------------------------------------------


def family_properties(members: list[Graph], *, samples: int = DEFAULT_SAMPLES,
                      seed: int = 1,
                      window: tuple[float, float] = (0.8, 1.2)) -> BoundReport:
    """Per-member spectral and discrepancy ratios for a growing family.

    For each member with empirical density p = 2m/n^2, reports
    sigma2/(pn), mu1/(pn) and the sampled discrepancy ratio
    max |e(X,Y) - p|X||Y|| / (p n^2).  The report passes when every
    sigma2 ratio falls inside `window` and the discrepancy ratios
    strictly decrease along the family.
    """
    if len(members) < 3:
        raise FamilyTooSmallError(
            f"need at least 3 members, got {len(members)}"
        )
    ordered = sorted(members, key=lambda g: g.n)
    ns = [g.n for g in ordered]
    if len(set(ns)) != len(ns):
        raise ValueError("family members must have distinct sizes")

    rows = []
    lo, hi = window
    window_ok = True
    for idx, g in enumerate(ordered):
        if g.m == 0:
            raise EmptyGraphError("family members must have edges")
        n = g.n
        p = 2.0 * g.m / (n * n)
        pn = p * n
        spec = eig_symmetric(g.adjacency)
        mu1 = float(spec.eigenvalues[0])
        sigma2 = spec.sigma2
        rng = np.random.default_rng([seed, idx])
        xs = _draw_subsets(rng, n, samples)
        ys = _draw_subsets(rng, n, samples)
        a = g.adjacency.a
        disc_ratio = 0.0
        for s in range(0, samples, _Y_CHUNK):
            t = min(s + _Y_CHUNK, samples)
            bx = _indicator_rows(xs[s:t], n)
            by = _indicator_rows(ys[s:t], n)
            e = ((bx @ a) * by).sum(axis=1)
            sx = bx.sum(axis=1)
            sy = by.sum(axis=1)
            dev = np.abs(e - p * sx * sy) / (p * n * n)
            disc_ratio = max(disc_ratio, float(dev.max()))
        sigma2_ratio = sigma2 / pn
        window_ok = window_ok and lo <= sigma2_ratio <= hi
        rows.append({
            "n": n,
            "m": g.m,
            "p": p,
            "pn": pn,
            "mu1": mu1,
            "sigma2": sigma2,
            "mu1_over_pn": mu1 / pn,
            "sigma2_over_pn": sigma2_ratio,
            "disc_ratio": disc_ratio,
        })
    ratios = [r["disc_ratio"] for r in rows]
    decreasing = all(b < a for a, b in zip(ratios, ratios[1:]))
    params = {
        "members": rows,
        "window": [lo, hi],
        "sigma2_window_ok": window_ok,
        "disc_ratio_decreasing": decreasing,
        "samples": samples,
        "seed": seed,
    }
    return BoundReport("family_scaling", window_ok and decreasing,
                       len(rows), (), None, params)
