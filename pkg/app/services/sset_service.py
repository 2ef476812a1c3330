"""
SSET Service - swapping-sliding explanation of a time-series classifier.

Swapping finds the signals whose replacement by a training neighbor of
another class pushes the winner-class score to thr_c or below. Sliding then
localizes that influence in time with the smallest window that still does.
"""
import logging
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from app.core.distance import ShapeMismatchError, distances_to
from app.core.random import RandomSource
from app.data.models import ImportanceMatrix, LabeledDataset, LabeledExample, TimeSeriesInstance, stack_values
from app.schemas.config import SsetConfig
from app.schemas.explanation import (
    Explanation,
    ExplanationStatus,
    NeighborRef,
    SalientSubsequence,
    SwapSource,
)
from app.services.oracle_service import PredictionOracle, predict_winner, winner_scores

logger = logging.getLogger(__name__)

Signals = Tuple[int, ...]


class SsetError(Exception):
    """Base exception for explainer errors."""
    pass


class DualSwapImpossibleError(SsetError):
    """Raised when no pair of signals can be swapped jointly."""
    pass


@dataclass(frozen=True)
class Neighbor:
    instance: TimeSeriesInstance
    label: int
    distance: float

    def ref(self) -> NeighborRef:
        return NeighborRef(id=self.instance.id, distance=self.distance)


@dataclass(frozen=True)
class SwappedInstance:
    neighbor: Neighbor
    instance: TimeSeriesInstance
    score: float


@dataclass(frozen=True)
class SwapResult:
    signals: Signals
    swapped: Tuple[SwappedInstance, ...]
    best: int

    @property
    def best_swap(self) -> SwappedInstance:
        return self.swapped[self.best]

    @property
    def min_score(self) -> float:
        return self.best_swap.score


class NeighborhoodIndex:
    """Training instances of the target classes with their distances to x_i."""

    def __init__(self, x_i: TimeSeriesInstance, train: Sequence[LabeledExample], target_classes: Iterable[int]):
        targets = set(target_classes)
        self.candidates = [example for example in train if example.label in targets]
        if self.candidates:
            self.distances = distances_to(x_i, stack_values(e.instance for e in self.candidates))
        else:
            self.distances = np.zeros(0)

    def sample(self, scope: Tuple[float, float], n: int, rng: RandomSource) -> List[Neighbor]:
        """Up to n distinct candidates with lo <= distance <= hi, uniformly without replacement."""
        lo, hi = scope
        eligible = [i for i, d in enumerate(self.distances) if lo <= d <= hi]
        picks = rng.sample_indices(len(eligible), n)
        return [
            Neighbor(
                instance=self.candidates[eligible[p]].instance,
                label=self.candidates[eligible[p]].label,
                distance=float(self.distances[eligible[p]]),
            )
            for p in picks
        ]


def sample_neighbors(
    x_i: TimeSeriesInstance,
    train: Sequence[LabeledExample],
    target_classes: Set[int],
    scope: Tuple[float, float],
    n: int,
    rng: RandomSource,
) -> List[Neighbor]:
    """
    Sample neighbors of x_i from the target classes inside a distance annulus.

    Args:
        x_i: Instance to explain.
        train: Labeled training instances.
        target_classes: Classes other than the winner.
        scope: (lo, hi) distance bounds, both inclusive.
        n: Maximum number of neighbors.
        rng: Random source consumed by the draw.

    Returns:
        Up to n neighbors; an empty list when the annulus is sparse.
    """
    if not target_classes:
        raise SsetError("target_classes must not be empty")
    if not scope[0] < scope[1]:
        raise SsetError(f"invalid scope {scope}: expected lo < hi")
    return NeighborhoodIndex(x_i, train, target_classes).sample(scope, n, rng)


def _swap_id(x_i: TimeSeriesInstance, signals: Signals, neighbor: Neighbor) -> str:
    return f"{x_i.id}|swap{list(signals)}<-{neighbor.instance.id}"


def swap_signals(
    x_i: TimeSeriesInstance,
    neighbors: Sequence[Neighbor],
    signals: Signals,
    oracle: PredictionOracle,
    c: int,
) -> SwapResult:
    """Replace the given signal columns by each neighbor's and score the results at class c."""
    if not neighbors:
        raise SsetError("swapping needs at least one neighbor")
    for s in signals:
        if not 0 <= s < x_i.V:
            raise SsetError(f"signal {s} out of range 0..{x_i.V - 1}")
    manipulated = [x_i.with_cells(_swap_id(x_i, signals, nb), nb.instance, signals) for nb in neighbors]
    scores = winner_scores(oracle, manipulated, c)
    swapped = tuple(
        SwappedInstance(neighbor=nb, instance=inst, score=float(score))
        for nb, inst, score in zip(neighbors, manipulated, scores)
    )
    # argmin keeps the first minimum, i.e. the lowest neighbor index
    return SwapResult(signals=tuple(signals), swapped=swapped, best=int(np.argmin(scores)))


def swap_signal(
    x_i: TimeSeriesInstance,
    neighbors: Sequence[Neighbor],
    s: int,
    oracle: PredictionOracle,
    c: int,
) -> SwapResult:
    return swap_signals(x_i, neighbors, (s,), oracle, c)


def detect_salient_signals(
    x_i: TimeSeriesInstance,
    neighbors: Sequence[Neighbor],
    oracle: PredictionOracle,
    c: int,
    thr_c: float,
) -> Tuple[List[int], Dict[int, SwapResult]]:
    """
    Swap every signal with every neighbor.

    Returns:
        (S_imp, results): signals whose lowest swapped score is <= thr_c, and
        the SwapResult of every signal.
    """
    results = {s: swap_signal(x_i, neighbors, s, oracle, c) for s in range(x_i.V)}
    salient = [s for s, result in results.items() if result.min_score <= thr_c]
    return salient, results


def candidate_pairs(V: int, signal_groups: Sequence[Sequence[int]]) -> List[List[Tuple[int, int]]]:
    """
    Pair tiers for dual swapping: pairs inside each declared group (in group
    order, lexicographic within a group), then pairs of the non-correlated rest.
    """
    grouped = {s for group in signal_groups for s in group}
    correlated = [pair for group in signal_groups for pair in combinations(sorted(group), 2)]
    rest = [s for s in range(V) if s not in grouped]
    return [tier for tier in (correlated, list(combinations(rest, 2))) if tier]


def dual_signals(
    x_i: TimeSeriesInstance,
    neighbors: Sequence[Neighbor],
    oracle: PredictionOracle,
    c: int,
    thr_c: float,
    signal_groups: Sequence[Sequence[int]],
) -> Tuple[List[Tuple[int, int]], Dict[Tuple[int, int], SwapResult]]:
    """
    Swap pairs of signals jointly from the same neighbor.

    Correlated pairs are tried first; the non-correlated pairs only when no
    correlated pair is salient.

    Raises:
        DualSwapImpossibleError: If no pair can be formed.
    """
    tiers = candidate_pairs(x_i.V, signal_groups)
    if not tiers:
        raise DualSwapImpossibleError("dual swap impossible: no pair of signals can be formed")
    results: Dict[Tuple[int, int], SwapResult] = {}
    for tier in tiers:
        for pair in tier:
            results[pair] = swap_signals(x_i, neighbors, pair, oracle, c)
        salient = [pair for pair in tier if results[pair].min_score <= thr_c]
        if salient:
            return salient, results
    return [], results


def window_bounds(t_prime: int, ctx: int, T: int) -> Tuple[int, int]:
    """Symmetric window t' ± ctx clipped to the series."""
    return max(0, t_prime - ctx), min(T - 1, t_prime + ctx)


def slide(
    x_i: TimeSeriesInstance,
    swap_result: SwapResult,
    oracle: PredictionOracle,
    c: int,
    thr_c: float,
    ctx0: int,
    ctx_max: int,
    y_i_c: Optional[float] = None,
) -> List[SalientSubsequence]:
    """
    Slide a window over the salient signal(s), taking windowed cells from the
    best swapped neighbor. The first context size at which at least one window
    scores <= thr_c wins; every qualifying t' at that size is returned.
    """
    if y_i_c is None:
        y_i_c = float(winner_scores(oracle, [x_i], c)[0])
    source = swap_result.best_swap.neighbor
    signals = swap_result.signals
    T = x_i.T

    for ctx in range(ctx0, ctx_max + 1):
        windows = [window_bounds(t_prime, ctx, T) for t_prime in range(T)]
        unique = sorted(set(windows))
        manipulated = [
            x_i.with_cells(f"{x_i.id}|slide{list(signals)}[{lo}:{hi}]", source.instance, signals, lo, hi)
            for lo, hi in unique
        ]
        scored = dict(zip(unique, (float(v) for v in winner_scores(oracle, manipulated, c))))

        found = []
        for t_prime, (lo, hi) in enumerate(windows):
            y_m_c = scored[(lo, hi)]
            if y_m_c <= thr_c:
                found.append(SalientSubsequence(
                    signals=list(signals),
                    t_prime=t_prime,
                    t_lo=lo,
                    t_hi=hi,
                    window_size=hi - lo + 1,
                    ctx=ctx,
                    y_m_c=y_m_c,
                    drop=y_i_c - y_m_c,
                    neighbor_id=source.instance.id,
                ))
        if found:
            logger.debug("sliding succeeded instance=%s signals=%s ctx=%d windows=%d",
                         x_i.id, list(signals), ctx, len(found))
            return found
    return []


def importance_scores(
    y_i_c: float,
    subsequences: Sequence[SalientSubsequence],
    T: int,
    lam: float,
    alpha: float,
    V: Optional[int] = None,
) -> ImportanceMatrix:
    """
    Score salient sub-sequences into a T×V importance matrix.

    The current step t' of a window gets min(|y_i_c - y_m_c| + lam·exp(-|w|/T), 1),
    the other steps of the window alpha times that. Overlapping windows keep
    the highest score per cell; everything else is 0.
    """
    if V is None:
        V = max((s for sub in subsequences for s in sub.signals), default=-1) + 1
    scores = np.zeros((T, V))
    for sub in subsequences:
        current = min(abs(y_i_c - sub.y_m_c) + lam * math.exp(-sub.window_size / T), 1.0)
        neighbor = alpha * current
        for s in sub.signals:
            for t in range(sub.t_lo, sub.t_hi + 1):
                value = current if t == sub.t_prime else neighbor
                if value > scores[t, s]:
                    scores[t, s] = value
    return ImportanceMatrix(scores)


@dataclass
class _SearchOutcome:
    keys: list
    results: dict
    scope: Optional[Tuple[float, float]]
    attempts: int
    scopes_visited: int


Detector = Callable[[List[Neighbor]], Tuple[list, dict]]


class SsetExplainer:
    """Runs the scope/attempt search, sliding and scoring for one dataset and oracle."""

    def __init__(self, dataset: LabeledDataset, oracle: PredictionOracle, config: SsetConfig):
        self.dataset = dataset
        self.oracle = oracle
        self.config = config

    def _scopes(self):
        cfg = self.config
        for k in range(cfg.scope_count()):
            yield k * cfg.delta, k * cfg.delta + cfg.l

    def _search(self, x_i: TimeSeriesInstance, index: NeighborhoodIndex, rng: RandomSource,
                detector: Detector) -> _SearchOutcome:
        cfg = self.config
        attempts = 0
        visited = 0
        for scope in self._scopes():
            visited += 1
            for _ in range(cfg.thr_a):
                attempts += 1
                neighbors = index.sample(scope, cfg.n_neighbors, rng)
                if not neighbors:
                    continue
                keys, results = detector(neighbors)
                if keys:
                    logger.debug("salient found instance=%s scope=[%.3f, %.3f] attempts=%d keys=%s",
                                 x_i.id, scope[0], scope[1], attempts, keys)
                    return _SearchOutcome(keys, results, scope, attempts, visited)
            logger.debug("scope exhausted instance=%s scope=[%.3f, %.3f]", x_i.id, scope[0], scope[1])
        return _SearchOutcome([], {}, None, attempts, visited)

    def explain(self, x_i: TimeSeriesInstance, rng: RandomSource) -> Explanation:
        """
        Explain the winner class of x_i.

        Raises:
            ShapeMismatchError: If x_i does not match the dataset shape.
            OracleError: Propagated from the oracle.
        """
        meta = self.dataset.meta
        cfg = self.config
        if x_i.values.shape != (meta.T, meta.V):
            raise ShapeMismatchError(f"instance {x_i.id} has shape {x_i.values.shape}, dataset is ({meta.T}, {meta.V})")
        if self.oracle.n_classes != meta.C:
            raise SsetError(f"oracle reports {self.oracle.n_classes} classes, dataset has {meta.C}")

        T, V = meta.T, meta.V
        c, y_i_c = predict_winner(self.oracle, x_i)
        ctx_max = cfg.resolved_ctx_max(T)
        base = dict(instance_id=x_i.id, winner_class=c, y_i_c=y_i_c, signal_names=list(meta.signal_names))

        targets = set(range(meta.C)) - {c}
        if not targets:
            return Explanation(status=ExplanationStatus.NO_SALIENT_SIGNAL,
                               importance=ImportanceMatrix.zeros(T, V).to_rows(), **base)

        index = NeighborhoodIndex(x_i, self.dataset.train, targets)
        single = self._search(
            x_i, index, rng,
            lambda nb: detect_salient_signals(x_i, nb, self.oracle, c, cfg.thr_c),
        )
        outcome, dual, dual_attempts = single, False, 0
        if not single.keys and candidate_pairs(V, meta.signal_groups):
            logger.debug("no single salient signal, trying pairs instance=%s", x_i.id)
            paired = self._search(
                x_i, index, rng,
                lambda nb: dual_signals(x_i, nb, self.oracle, c, cfg.thr_c, meta.signal_groups),
            )
            dual_attempts = paired.attempts
            if paired.keys:
                outcome, dual = paired, True

        base.update(attempts_used=single.attempts, dual_attempts_used=dual_attempts,
                    scopes_visited=outcome.scopes_visited)
        if not outcome.keys:
            return Explanation(status=ExplanationStatus.NO_SALIENT_SIGNAL,
                               importance=ImportanceMatrix.zeros(T, V).to_rows(), **base)

        subsequences: List[SalientSubsequence] = []
        ctx_used = ctx0 = cfg.ctx0
        for key in outcome.keys:
            found = slide(x_i, outcome.results[key], self.oracle, c, cfg.thr_c, ctx0, ctx_max, y_i_c=y_i_c)
            subsequences.extend(found)
            ctx_used = max(ctx_used, found[0].ctx if found else ctx_max)

        importance = importance_scores(y_i_c, subsequences, T, cfg.lambda_, cfg.alpha, V)
        sources = [
            SwapSource(signals=list(outcome.results[key].signals),
                       neighbor=outcome.results[key].best_swap.neighbor.ref(),
                       swap_score=outcome.results[key].min_score)
            for key in outcome.keys
        ]
        chosen = self._chosen_neighbor(subsequences, outcome)
        status = (ExplanationStatus.NO_SALIENT_SUBSEQUENCE if importance.is_zero()
                  else ExplanationStatus.EXPLAINED)

        return Explanation(
            status=status,
            salient_signals=[] if dual else sorted(outcome.keys),
            salient_pairs=sorted(outcome.keys) if dual else [],
            dual_signals=dual,
            subsequences=subsequences,
            swap_sources=sources,
            chosen_neighbor=chosen,
            ctx_used=ctx_used,
            scope_used=outcome.scope,
            importance=importance.to_rows(),
            **base,
        )

    @staticmethod
    def _chosen_neighbor(subsequences: List[SalientSubsequence], outcome: _SearchOutcome) -> NeighborRef:
        best_sub = None
        for sub in subsequences:
            if best_sub is None or sub.y_m_c < best_sub.y_m_c:
                best_sub = sub
        by_key = [outcome.results[key] for key in outcome.keys]
        if best_sub is not None:
            for result in by_key:
                if result.best_swap.neighbor.instance.id == best_sub.neighbor_id:
                    return result.best_swap.neighbor.ref()
        best_swap = min(by_key, key=lambda r: r.min_score)
        return best_swap.best_swap.neighbor.ref()


def explain(
    x_i: TimeSeriesInstance,
    dataset: LabeledDataset,
    oracle: PredictionOracle,
    config: SsetConfig,
    rng: RandomSource,
) -> Explanation:
    return SsetExplainer(dataset, oracle, config).explain(x_i, rng)


def reconstruct_manipulated(explanation: Explanation, dataset: LabeledDataset) -> Optional[TimeSeriesInstance]:
    """Rebuild the best manipulated instance of an explanation from the dataset."""
    best = explanation.best_subsequence()
    if best is None:
        return None
    x_i = dataset.get(explanation.instance_id).instance
    source = dataset.get(best.neighbor_id).instance
    return x_i.with_cells(f"{x_i.id}|best", source, best.signals, best.t_lo, best.t_hi)
