"""Random forest regression built from scratch on CART variance-reduction trees.

Trees are grown by recursive binary splitting with the squared-error
criterion.  At a node holding targets y with node mean m, a candidate
split into (L, R) is scored with the one-pass sum-of-squares form over the
centred targets t = y - m:

    cost(L, R) = [sum(t^2 in L) - (sum(t in L))^2 / |L|]
               + [sum(t^2 in R) - (sum(t in R))^2 / |R|]

and the candidate with minimal cost wins; ties break on the lowest feature
index, then the lowest threshold.  Candidate thresholds are midpoints of
consecutive distinct sorted values.  Leaves predict the mean of their
samples, and the forest prediction is the plain mean over trees.

The per-node feature subsets are drawn with an internal splitmix64
generator so tree construction is reproducible across platforms and
independent of how trees are scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .errors import DegenerateInputError, DimensionMismatchError

_SM64_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_SM64_M1 = np.uint64(0xBF58476D1CE4E5B9)
_SM64_M2 = np.uint64(0x94D049BB133111EB)


@njit(cache=True)
def _splitmix64(state):
    state = state + _SM64_GAMMA
    z = state
    z = (z ^ (z >> np.uint64(30))) * _SM64_M1
    z = (z ^ (z >> np.uint64(27))) * _SM64_M2
    z = z ^ (z >> np.uint64(31))
    return state, z


@njit(cache=True)
def _build_tree(X, y, max_depth, min_leaf, m_features, rng_state):
    n, p = X.shape
    max_nodes = 2 * n + 1
    feat = np.full(max_nodes, -1, np.int64)
    thr = np.zeros(max_nodes, np.float64)
    left = np.full(max_nodes, -1, np.int64)
    right = np.full(max_nodes, -1, np.int64)
    value = np.zeros(max_nodes, np.float64)
    count = np.zeros(max_nodes, np.int64)

    idx = np.arange(n)
    tmp = np.empty(n, np.int64)
    feat_pool = np.arange(p)
    vals = np.empty(n, np.float64)
    ps = np.empty(n + 1, np.float64)
    ps2 = np.empty(n + 1, np.float64)

    stack = np.empty((max_nodes, 4), np.int64)
    stack[0, 0] = 0
    stack[0, 1] = 0
    stack[0, 2] = n
    stack[0, 3] = 0
    sp = 1
    n_nodes = 1
    state = rng_state

    while sp > 0:
        sp -= 1
        node = stack[sp, 0]
        lo = stack[sp, 1]
        hi = stack[sp, 2]
        depth = stack[sp, 3]
        k = hi - lo

        s = 0.0
        for i in range(lo, hi):
            s += y[idx[i]]
        mean = s / k
        value[node] = mean
        count[node] = k

        if k < 2 * min_leaf:
            continue
        if max_depth >= 0 and depth >= max_depth:
            continue
        homogeneous = True
        first = y[idx[lo]]
        for i in range(lo + 1, hi):
            if y[idx[i]] != first:
                homogeneous = False
                break
        if homogeneous:
            continue

        # Partial Fisher-Yates over the persistent feature pool, then sort
        # the chosen subset ascending so ties break on lowest feature index.
        for j in range(m_features):
            state, z = _splitmix64(state)
            r = j + int(z % np.uint64(p - j))
            t = feat_pool[j]
            feat_pool[j] = feat_pool[r]
            feat_pool[r] = t
        chosen = np.sort(feat_pool[:m_features].copy())

        best_cost = np.inf
        best_f = -1
        best_thr = 0.0

        for fi in range(m_features):
            f = chosen[fi]
            for i in range(k):
                vals[i] = X[idx[lo + i], f]
            order = np.argsort(vals[:k], kind="mergesort")
            ps[0] = 0.0
            ps2[0] = 0.0
            for i in range(k):
                t = y[idx[lo + order[i]]] - mean
                ps[i + 1] = ps[i] + t
                ps2[i + 1] = ps2[i] + t * t
            total1 = ps[k]
            total2 = ps2[k]
            for i in range(min_leaf, k - min_leaf + 1):
                vl = vals[order[i - 1]]
                vr = vals[order[i]]
                if vl == vr:
                    continue
                sl = ps[i]
                s2l = ps2[i]
                sr = total1 - sl
                s2r = total2 - s2l
                cost = (s2l - sl * sl / i) + (s2r - sr * sr / (k - i))
                if cost < best_cost:
                    best_cost = cost
                    best_f = f
                    best_thr = 0.5 * (vl + vr)

        if best_f < 0:
            continue

        nl = 0
        for i in range(lo, hi):
            if X[idx[i], best_f] <= best_thr:
                tmp[lo + nl] = idx[i]
                nl += 1
        nr = 0
        for i in range(lo, hi):
            if X[idx[i], best_f] > best_thr:
                tmp[lo + nl + nr] = idx[i]
                nr += 1
        for i in range(lo, hi):
            idx[i] = tmp[i]

        lchild = n_nodes
        rchild = n_nodes + 1
        n_nodes += 2
        feat[node] = best_f
        thr[node] = best_thr
        left[node] = lchild
        right[node] = rchild
        stack[sp, 0] = rchild
        stack[sp, 1] = lo + nl
        stack[sp, 2] = hi
        stack[sp, 3] = depth + 1
        sp += 1
        stack[sp, 0] = lchild
        stack[sp, 1] = lo
        stack[sp, 2] = lo + nl
        stack[sp, 3] = depth + 1
        sp += 1

    return (
        feat[:n_nodes].copy(),
        thr[:n_nodes].copy(),
        left[:n_nodes].copy(),
        right[:n_nodes].copy(),
        value[:n_nodes].copy(),
        count[:n_nodes].copy(),
    )


@njit(cache=True)
def _accumulate_tree_predictions(Xq, feat, thr, left, right, value, out):
    for r in range(Xq.shape[0]):
        node = 0
        while feat[node] >= 0:
            if Xq[r, feat[node]] <= thr[node]:
                node = left[node]
            else:
                node = right[node]
        out[r] += value[node]


@dataclass(frozen=True)
class ForestHyperparams:
    """Forest configuration; `features_per_split=None` means ceil(p / 3)."""

    tree_count: int = 100
    max_depth: int | None = None
    min_samples_leaf: int = 2
    features_per_split: int | None = None
    bootstrap: bool = True

    def __post_init__(self):
        if self.tree_count < 1:
            raise ValueError("tree_count must be >= 1")
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max_depth must be >= 0 or None")
        if self.min_samples_leaf < 1:
            raise ValueError("min_samples_leaf must be >= 1")
        if self.features_per_split is not None and self.features_per_split < 1:
            raise ValueError("features_per_split must be >= 1 or None")

    def resolve_features_per_split(self, p: int) -> int:
        m = self.features_per_split if self.features_per_split is not None else math.ceil(p / 3)
        return max(1, min(m, p))

    def to_obj(self) -> dict:
        return {
            "tree_count": self.tree_count,
            "max_depth": self.max_depth,
            "min_samples_leaf": self.min_samples_leaf,
            "features_per_split": self.features_per_split,
            "bootstrap": self.bootstrap,
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "ForestHyperparams":
        return cls(
            tree_count=obj["tree_count"],
            max_depth=obj["max_depth"],
            min_samples_leaf=obj["min_samples_leaf"],
            features_per_split=obj["features_per_split"],
            bootstrap=obj["bootstrap"],
        )


@dataclass(frozen=True, eq=False)
class Tree:
    """Flat array encoding of one fitted regression tree.

    Internal nodes carry `feature >= 0` with a threshold and child links;
    leaves carry `feature == -1` with the mean target and sample count.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    count: np.ndarray

    def predict_into(self, X: np.ndarray, out: np.ndarray) -> None:
        _accumulate_tree_predictions(
            X, self.feature, self.threshold, self.left, self.right, self.value, out
        )


@dataclass(frozen=True, eq=False)
class ForestModel:
    """A fitted random forest regressor."""

    trees: tuple[Tree, ...]
    hyperparams: ForestHyperparams
    seed: int
    n_features: int

    def predict_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.ascontiguousarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise DimensionMismatchError(
                f"expected {self.n_features} features, got shape {X.shape}"
            )
        out = np.zeros(X.shape[0], dtype=np.float64)
        for tree in self.trees:
            tree.predict_into(X, out)
        return out / len(self.trees)


def _tree_seed_material(seed: int, tree_index: int) -> tuple[np.random.Generator, np.uint64]:
    root = np.random.SeedSequence([int(seed) % 2**64, tree_index])
    boot_ss, feat_ss = root.spawn(2)
    rng = np.random.default_rng(boot_ss)
    feat_state = np.uint64(feat_ss.generate_state(1, dtype=np.uint64)[0])
    return rng, feat_state


def fit_rfr(
    X: np.ndarray,
    y: np.ndarray,
    hyperparams: ForestHyperparams | None = None,
    seed: int = 0,
) -> ForestModel:
    """Fit a random forest with per-tree seeds derived from (seed, tree index)."""
    hp = hyperparams if hyperparams is not None else ForestHyperparams()
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise DegenerateInputError(f"incompatible shapes X{X.shape}, y{y.shape}")
    n, p = X.shape
    if n < 2:
        raise DegenerateInputError(f"need at least 2 samples, got {n}")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise DegenerateInputError("X and y must be finite")

    m = hp.resolve_features_per_split(p)
    depth = -1 if hp.max_depth is None else hp.max_depth

    trees = []
    for t in range(hp.tree_count):
        rng, feat_state = _tree_seed_material(seed, t)
        if hp.bootstrap:
            bidx = rng.integers(0, n, size=n)
            Xb = np.ascontiguousarray(X[bidx])
            yb = y[bidx]
        else:
            Xb, yb = X, y
        arrays = _build_tree(Xb, yb, depth, hp.min_samples_leaf, m, feat_state)
        trees.append(Tree(*arrays))
    return ForestModel(trees=tuple(trees), hyperparams=hp, seed=int(seed), n_features=p)


def forest_to_obj(model: ForestModel) -> dict:
    return {
        "hyperparams": model.hyperparams.to_obj(),
        "seed": model.seed,
        "n_features": model.n_features,
        "trees": [
            {
                "feature": tree.feature.tolist(),
                "threshold": tree.threshold.tolist(),
                "left": tree.left.tolist(),
                "right": tree.right.tolist(),
                "value": tree.value.tolist(),
                "count": tree.count.tolist(),
            }
            for tree in model.trees
        ],
    }


def forest_from_obj(obj: dict) -> ForestModel:
    trees = tuple(
        Tree(
            feature=np.asarray(t["feature"], dtype=np.int64),
            threshold=np.asarray(t["threshold"], dtype=np.float64),
            left=np.asarray(t["left"], dtype=np.int64),
            right=np.asarray(t["right"], dtype=np.int64),
            value=np.asarray(t["value"], dtype=np.float64),
            count=np.asarray(t["count"], dtype=np.int64),
        )
        for t in obj["trees"]
    )
    return ForestModel(
        trees=trees,
        hyperparams=ForestHyperparams.from_obj(obj["hyperparams"]),
        seed=obj["seed"],
        n_features=obj["n_features"],
    )
