"""Shared data builders and independently coded oracles.

The oracle functions here deliberately avoid the package's own numeric
routines (vectorized distances, the SMO solver, the fusion fast path) so
tests compare two separate computational routes.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

import bucket_ensemble as be
from bucket_ensemble.metrics import METRIC_NAMES


# ---------------------------------------------------------------- data


def separable_2d(seed: int, n: int = 30, gap: float = 2.0):
    """Two Gaussian blobs pulled apart far enough to be separable."""
    rng = np.random.default_rng(seed)
    half = n // 2
    pos = rng.normal(size=(half, 2)) * 0.4 + [gap, gap]
    neg = rng.normal(size=(n - half, 2)) * 0.4 + [-gap, -gap]
    X = np.vstack([pos, neg])
    y = np.array([1] * half + [-1] * (n - half))
    perm = rng.permutation(n)
    return X[perm], y[perm]


def two_view_dataset(seed: int, n: int = 60, noise_scale: float = 2.5,
                     signal_dims: int = 10, noise_dims: int = 6) -> be.LabeledDataset:
    """Binary dataset with one informative view and one pure-noise view.

    The informative view hides the class in the rank pattern of each row
    (a ramp added with the label's sign), so rank-distance members can
    learn it as well as the kernel members.
    """
    rng = be.seeded_rng(seed, "synthetic-e2e")
    half = n // 2
    y = np.array([1] * half + [-1] * (n - half))
    pattern = np.linspace(-2.0, 2.0, signal_dims)
    informative = rng.normal(scale=noise_scale, size=(n, signal_dims)) + y[:, None] * pattern
    noise = rng.normal(size=(n, noise_dims))
    return be.LabeledDataset(
        ids=tuple(f"img{i:03d}" for i in range(n)),
        labels=tuple(int(v) for v in y),
        views=(be.FeatureMatrix("signal", informative),
               be.FeatureMatrix("static", noise)),
        name="synthetic",
    )


def random_image(seed: int, width: int = 8, height: int = 6) -> be.PixelImage:
    rng = np.random.default_rng(seed)
    pixels = rng.integers(0, 256, size=(width * height, 3), dtype=np.uint8)
    return be.PixelImage(width=width, height=height, pixels=pixels)


# ---------------------------------------------------------- svm oracle


def qp_dual(K: np.ndarray, y: np.ndarray, C: float) -> np.ndarray:
    """Soft-margin SVM dual solved as a generic box-constrained QP."""
    import cvxopt

    n = len(y)
    yf = y.astype(np.float64)
    P = cvxopt.matrix(np.outer(yf, yf) * K)
    q = cvxopt.matrix(-np.ones(n))
    G = cvxopt.matrix(np.vstack([-np.eye(n), np.eye(n)]))
    h = cvxopt.matrix(np.hstack([np.zeros(n), np.full(n, C)]))
    A = cvxopt.matrix(yf, (1, n))
    b = cvxopt.matrix(0.0)
    cvxopt.solvers.options["show_progress"] = False
    cvxopt.solvers.options["abstol"] = 1e-10
    cvxopt.solvers.options["reltol"] = 1e-10
    sol = cvxopt.solvers.qp(P, q, G, h, A, b)
    assert sol["status"] == "optimal"
    return np.asarray(sol["x"]).ravel()


# ---------------------------------------------------------- knn oracle


def _oracle_ranks(v) -> list:
    """Average-tie ranks, computed by explicit run grouping."""
    n = len(v)
    order = sorted(range(n), key=lambda i: (v[i], i))
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j + 1 < n and v[order[j + 1]] == v[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1.0
        for t in range(i, j + 1):
            ranks[order[t]] = avg
        i = j + 1
    return ranks


def _rho_key(u, v, kind):
    """Exact rational statistics (num, du, dv) with rho = num/sqrt(du*dv)."""
    if kind == "spearman":
        u = _oracle_ranks(list(u))
        v = _oracle_ranks(list(v))
    uf = [Fraction(float(x)) for x in u]
    vf = [Fraction(float(x)) for x in v]
    n = len(uf)
    su, sv = sum(uf), sum(vf)
    num = n * sum(a * b for a, b in zip(uf, vf)) - su * sv
    du = n * sum(x * x for x in uf) - su * su
    dv = n * sum(x * x for x in vf) - sv * sv
    return num, du, dv


def _rho_greater(a, b) -> bool:
    """Exact comparison rho(a) > rho(b); zero-variance sides mean rho 0."""
    na, dua, dva = a
    nb, dub, dvb = b
    za = dua == 0 or dva == 0 or na == 0
    zb = dub == 0 or dvb == 0 or nb == 0
    if za and zb:
        return False
    if za:
        return nb < 0
    if zb:
        return na > 0
    if (na > 0) != (nb > 0):
        return na > nb
    lhs = na * na * dub * dvb
    rhs = nb * nb * dua * dva
    return lhs > rhs if na > 0 else lhs < rhs


def oracle_knn(train_X, train_y, queries, k: int, kind: str):
    """Brute-force KNN in exact arithmetic; ties break to lowest index."""
    import functools

    decisions, scores = [], []
    for q in np.asarray(queries, dtype=np.float64):
        keys = [_rho_key(q, row, kind) for row in np.asarray(train_X, dtype=np.float64)]

        def cmp(i, j):
            if _rho_greater(keys[i], keys[j]):
                return -1
            if _rho_greater(keys[j], keys[i]):
                return 1
            return i - j

        order = sorted(range(len(keys)), key=functools.cmp_to_key(cmp))
        votes = sum(1 for t in order[:k] if train_y[t] == 1)
        if 2 * votes > k:
            dec = 1
        elif 2 * votes < k:
            dec = -1
        else:
            dec = int(train_y[order[0]])
        decisions.append(dec)
        scores.append((votes if dec == 1 else k - votes) / k)
    return np.array(decisions), np.array(scores)


# ------------------------------------------------------- fusion oracle


def oracle_fuse(decisions, scores, tie_break: str = "prefer_positive"):
    """Literal per-column transcription of the fusion rule."""
    D = [list(row) for row in decisions]
    S = [list(row) for row in scores]
    n, m = len(D), len(D[0])
    dm, ds = [], []
    for j in range(m):
        col = [D[i][j] for i in range(n)]
        pos = [i for i in range(n) if col[i] == 1]
        neg = [i for i in range(n) if col[i] == -1]
        if len(pos) > len(neg):
            mode = 1
        elif len(neg) > len(pos):
            mode = -1
        else:
            mode = 1 if tie_break == "prefer_positive" else col[0]
        agree = pos if mode == 1 else neg
        dm.append(mode)
        ds.append(sum(S[i][j] for i in agree) / len(agree))
    best = 0
    for j in range(1, m):
        if ds[j] > ds[best]:
            best = j
    return dm[best], ds[best], best, dm, ds


# ------------------------------------------------------ metrics oracle


def oracle_metrics(tp: int, fp: int, tn: int, fn: int) -> dict:
    """The eight metrics from their definitions, in exact rationals.

    MCC alone needs a square root and comes back as a float; everything
    else is a Fraction or None when the denominator vanishes.
    """

    def ratio(num, den):
        return None if den == 0 else Fraction(num, den)

    tpr = ratio(tp, tp + fn)
    tnr = ratio(tn, tn + fp)
    ppv = ratio(tp, tp + fp)
    npv = ratio(tn, tn + fn)
    total = tp + fp + tn + fn
    acc = ratio(tp + tn, total)

    def f1(precision, recall):
        if precision is None or recall is None:
            return None
        s = precision + recall
        return None if s == 0 else 2 * precision * recall / s

    den2 = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)
    mcc = None if den2 == 0 else (tp * tn - fp * fn) / math.sqrt(den2)
    return {
        "tpr": tpr, "tnr": tnr, "ppv": ppv, "npv": npv, "acc": acc,
        "f1_pos": f1(ppv, tpr), "f1_neg": f1(npv, tnr), "mcc": mcc,
        "positive_prevalence": ratio(tp + fn, total),
    }


def assert_metrics_match(mset: be.MetricSet, want: dict, tol: float = 1e-12):
    for name in (*METRIC_NAMES, "positive_prevalence"):
        got = getattr(mset, name)
        expected = want[name]
        if expected is None:
            assert got is None, f"{name}: expected undefined, got {got}"
        else:
            assert got is not None, f"{name}: expected {float(expected)}, got None"
            assert abs(got - float(expected)) <= tol, (
                f"{name}: |{got} - {float(expected)}| > {tol}"
            )
