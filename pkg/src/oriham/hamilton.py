"""Hamilton-cycle solvers.

Two exact solvers (factorial-time search for tiny graphs, bitmask dynamic
programming up to a configurable cap) and a heuristic pipeline that builds
an absorbing path, a connector reservoir and a greedy path cover, stitches
everything into one cycle and absorbs the leftovers.  Exact solvers decide;
the heuristic only ever answers "cycle found" (with a verified certificate)
or "not found" (with the first failing stage), never "none exists".
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        def wrap(fn):
            return fn
        return wrap

from .absorption import (AbsorbingPath, AbsorbParams, CapacityExhaustedError,
                         NoConnectorAvailableError, Reservoir, ReservoirParams,
                         StitchFailureError, VertexNotAbsorbableError,
                         absorb_vertices, build_absorbing_path, build_reservoir,
                         connect_through_reservoir, default_reservoir_size,
                         default_strong_target)
from .graph import (DiCycle, DiPath, OrientedGraph, iter_bits, mask_of,
                    verify_hamilton_cycle)
from .seeds import derive_seed, rng_for


class TooLargeError(ValueError):
    """The instance exceeds the solver's configured size cap."""


@dataclass(frozen=True)
class StageRecord:
    stage: str
    ok: bool
    detail: dict

    def to_json_dict(self) -> dict:
        return {"stage": self.stage, "ok": self.ok, "detail": self.detail}


@dataclass(frozen=True)
class HamiltonResult:
    verdict: str  # "cycle_found" | "none_exists" | "not_found"
    certificate: DiCycle | None = None
    trace: tuple[StageRecord, ...] = ()

    @property
    def found(self) -> bool:
        return self.verdict == "cycle_found"

    def first_failure(self) -> str | None:
        for rec in self.trace:
            if not rec.ok:
                return rec.stage
        return None

    def to_json_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "certificate": (None if self.certificate is None
                            else list(self.certificate.vertices)),
            "trace": [rec.to_json_dict() for rec in self.trace],
        }


# -- exact solvers ----------------------------------------------------------------


def exact_brute(g: OrientedGraph, max_n: int = 10) -> HamiltonResult:
    """Depth-first search over all cycles anchored at vertex 0, visiting
    out-neighbours in ascending order; returns the lexicographically first
    Hamilton cycle or decides none exists."""
    if g.n > max_n:
        raise TooLargeError(f"n = {g.n} exceeds brute-force cap {max_n}")
    n = g.n
    if n == 0:
        return HamiltonResult("none_exists")
    order = [0]

    def dfs(v: int, visited: int) -> bool:
        if len(order) == n:
            return g.has_arc(v, 0)
        for w in iter_bits(g.out_bits(v) & ~visited):
            order.append(w)
            if dfs(w, visited | (1 << w)):
                return True
            order.pop()
        return False

    if dfs(0, 1):
        cycle = DiCycle(tuple(order))
        assert verify_hamilton_cycle(g, cycle)
        return HamiltonResult("cycle_found", cycle)
    return HamiltonResult("none_exists")


@njit(cache=True)
def _dp_kernel(out_masks: np.ndarray, n: int) -> np.ndarray:  # pragma: no cover
    size = 1 << n
    dp = np.zeros(size, dtype=np.int64)
    dp[1] = 1
    for mask in range(1, size, 2):  # masks containing vertex 0
        ends = dp[mask]
        if ends == 0:
            continue
        for v in range(n):
            if ends & (1 << v):
                fresh = out_masks[v] & ~mask
                for w in range(n):
                    if fresh & (1 << w):
                        dp[mask | (1 << w)] |= 1 << w
    return dp


def _dp_kernel_py(out_masks, n: int):
    size = 1 << n
    dp = [0] * size
    dp[1] = 1
    for mask in range(1, size, 2):
        ends = dp[mask]
        if not ends:
            continue
        for v in iter_bits(ends):
            fresh = out_masks[v] & ~mask
            for w in iter_bits(fresh):
                dp[mask | (1 << w)] |= 1 << w
    return dp


def exact_dp(g: OrientedGraph, max_n: int = 24) -> HamiltonResult:
    """Held-Karp reachability over (visited set, endpoint) states anchored
    at vertex 0, with certificate reconstruction on success."""
    if g.n > max_n:
        raise TooLargeError(f"n = {g.n} exceeds subset-DP cap {max_n}")
    n = g.n
    if n == 0:
        return HamiltonResult("none_exists")
    out_masks = np.array([g.out_bits(v) for v in range(n)], dtype=np.int64)
    try:
        dp = _dp_kernel(out_masks, n)
    except Exception:  # jit unavailable at runtime
        dp = _dp_kernel_py([g.out_bits(v) for v in range(n)], n)

    full = (1 << n) - 1
    closing = int(dp[full]) & g.in_bits(0)
    if n == 1 or not closing:
        return HamiltonResult("none_exists")
    v = next(iter_bits(closing))
    order = [0] * n
    mask = full
    for pos in range(n - 1, 0, -1):
        order[pos] = v
        mask ^= 1 << v
        v = next(iter_bits(int(dp[mask]) & g.in_bits(v)))
    assert v == 0
    cycle = DiCycle(tuple(order))
    assert verify_hamilton_cycle(g, cycle)
    return HamiltonResult("cycle_found", cycle)


# -- greedy path cover --------------------------------------------------------------


@dataclass(frozen=True)
class CoverResult:
    paths: tuple[DiPath, ...]
    uncovered: frozenset[int]
    pool_size: int
    truncated: bool

    def covered_fraction(self) -> Fraction:
        if self.pool_size == 0:
            return Fraction(1)
        return Fraction(self.pool_size - len(self.uncovered), self.pool_size)


def greedy_path_cover(g: OrientedGraph, avoid: frozenset[int] | set[int],
                      max_paths: int, seed: int = 0,
                      restarts: int = 8) -> CoverResult:
    """Cover V(G) minus ``avoid`` by few vertex-disjoint directed paths.

    Each seeded restart grows paths by tail/head extension plus insertion
    between consecutive path vertices; the cover with fewest paths wins.
    Covers needing more than ``max_paths`` paths are truncated to the
    longest ones and flagged.
    """
    pool = [v for v in range(g.n) if v not in avoid]
    if not pool:
        return CoverResult((), frozenset(), 0, False)

    def attempt(rng) -> list[list[int]]:
        remaining = set(pool)
        paths: list[list[int]] = []
        while remaining:
            start = rng.choice(sorted(remaining))
            remaining.remove(start)
            path = [start]
            while True:
                opts = g.out_bits(path[-1]) & mask_of(remaining)
                if opts:
                    w = _pick_bit(opts, rng)
                    path.append(w)
                    remaining.remove(w)
                    continue
                opts = g.in_bits(path[0]) & mask_of(remaining)
                if opts:
                    w = _pick_bit(opts, rng)
                    path.insert(0, w)
                    remaining.remove(w)
                    continue
                inserted = False
                for v in sorted(remaining):
                    spots = [i for i in range(len(path) - 1)
                             if g.has_arc(path[i], v) and g.has_arc(v, path[i + 1])]
                    if spots:
                        path.insert(spots[0] + 1, v)
                        remaining.remove(v)
                        inserted = True
                        break
                if not inserted:
                    break
            paths.append(path)
        return paths

    best: list[list[int]] | None = None
    for r in range(max(1, restarts)):
        paths = attempt(rng_for(seed, "cover", r))
        if best is None or len(paths) < len(best):
            best = paths
    assert best is not None

    truncated = len(best) > max_paths
    if truncated:
        keep = set(map(tuple, sorted(best, key=len, reverse=True)[:max_paths]))
        kept = [p for p in best if tuple(p) in keep]
    else:
        kept = best
    covered = {v for p in kept for v in p}
    return CoverResult(tuple(DiPath(tuple(p)) for p in kept),
                       frozenset(pool) - covered, len(pool), truncated)


def _pick_bit(mask: int, rng) -> int:
    return rng.choice(list(iter_bits(mask)))


# -- absorption pipeline ---------------------------------------------------------------


@dataclass
class PipelineParams:
    absorb: AbsorbParams = field(default_factory=AbsorbParams)
    reservoir: ReservoirParams = field(default_factory=ReservoirParams)
    max_paths: int = 12
    cover_restarts: int = 8
    stitch_attempts: int = 12
    leftover_ratio: Fraction = Fraction(1, 4)
    max_n: int = 512

    @classmethod
    def tuned(cls, n: int) -> "PipelineParams":
        return cls(
            absorb=AbsorbParams(strong_target=default_strong_target(n), p=1.0),
            reservoir=ReservoirParams(target_size=default_reservoir_size(n), p=1.0),
        )


def find_hamilton_absorption(g: OrientedGraph,
                             params: PipelineParams | None = None,
                             seed: int = 0) -> HamiltonResult:
    """Heuristic Hamilton-cycle search by absorption.

    Stages: build an absorbing path, reserve connectors, cover the rest
    with few paths, stitch everything cyclically through the reservoir,
    absorb unused reservoir vertices and uncovered vertices into the
    absorbing path, then verify.  A failure reports the first failing
    stage in the trace; the verdict is never "none_exists".
    """
    params = params or PipelineParams.tuned(g.n)
    if g.n > params.max_n:
        raise TooLargeError(f"n = {g.n} exceeds pipeline cap {params.max_n}")
    trace: list[StageRecord] = []

    def fail(stage: str, detail: dict) -> HamiltonResult:
        trace.append(StageRecord(stage, False, detail))
        return HamiltonResult("not_found", None, tuple(trace))

    if g.n == 0:
        return fail("cover", {"reason": "empty graph"})

    # absorbing path
    try:
        p_abs = build_absorbing_path(g, params.absorb, derive_seed(seed, "absorb"))
        note = {}
    except StitchFailureError as exc:
        p_abs = AbsorbingPath(())
        note = {"stitch_degraded": str(exc)}
    trace.append(StageRecord("absorbing_path", True, {
        "vertices": len(p_abs.path),
        "strong_gadgets": len(p_abs.strong),
        "weak_gadgets": len(p_abs.weak),
        "classification_gaps": len(p_abs.gaps),
        "dropped_gadgets": p_abs.dropped,
        **note,
    }))

    # reservoir, preferring vertices the registry can absorb later
    servable = frozenset(
        v for v in range(g.n)
        if v not in p_abs.vertex_set()
        and any(p_abs.strong[i].serves(g, v, v) for i in p_abs.free_strong()))
    res_params = replace(params.reservoir, prefer=servable)
    res = build_reservoir(g, p_abs.vertex_set(), res_params,
                          derive_seed(seed, "reservoir"))
    trace.append(StageRecord("reservoir", True, {
        "vertices": len(res.vertices),
        "servable_share": len(res.vertices & servable),
    }))

    # path cover and cyclic stitching, retried jointly: each retry rerolls
    # the cover (fresh path endpoints) and odd attempts drain leftover
    # reservoir vertices into junction links to shrink the absorb load
    excluded = p_abs.vertex_set() | res.vertices
    cover = greedy_path_cover(g, excluded, params.max_paths,
                              derive_seed(seed, "cover", 0),
                              params.cover_restarts)
    best = None
    for attempt in range(max(1, params.stitch_attempts)):
        if attempt:
            cover = greedy_path_cover(g, excluded, params.max_paths,
                                      derive_seed(seed, "cover", attempt), 1)
        rng = None if attempt == 0 else rng_for(seed, "stitch", attempt)
        stitched = _attempt_stitch(g, p_abs, cover.paths, res, rng,
                                   drain=attempt % 2 == 1)
        if stitched is None:
            continue
        seq, used = stitched
        left = sorted((res.vertices - used) | cover.uncovered)
        if best is None or len(left) < len(best[0]):
            best = (left, seq, used, cover)
        if not left:
            break
    if best is None:
        trace.append(StageRecord("cover", True, {
            "paths": len(cover.paths),
            "uncovered": len(cover.uncovered),
            "truncated": cover.truncated,
        }))
        return fail("stitch", {
            "attempts": params.stitch_attempts,
            "units": len(cover.paths) + (1 if p_abs.path else 0),
        })
    leftovers, cycle_seq, used_reservoir, cover = best
    trace.append(StageRecord("cover", True, {
        "paths": len(cover.paths),
        "uncovered": len(cover.uncovered),
        "truncated": cover.truncated,
    }))
    trace.append(StageRecord("stitch", True, {
        "reservoir_used": len(used_reservoir),
    }))

    # absorb unused reservoir and uncovered vertices
    limit = max(1, int(params.leftover_ratio * len(p_abs.path)))
    if len(leftovers) > limit:
        return fail("absorb", {"leftovers": len(leftovers), "limit": limit})
    if leftovers:
        try:
            grown = absorb_vertices(g, p_abs, leftovers)
        except (CapacityExhaustedError, VertexNotAbsorbableError) as exc:
            return fail("absorb", {"leftovers": len(leftovers), "reason": str(exc)})
        assert tuple(cycle_seq[:len(p_abs.path)]) == p_abs.path
        cycle_seq = list(grown.path) + cycle_seq[len(p_abs.path):]
        trace.append(StageRecord("absorb", True, {"absorbed": len(leftovers)}))
    else:
        trace.append(StageRecord("absorb", True, {"absorbed": 0}))

    cycle = DiCycle(tuple(cycle_seq))
    if not verify_hamilton_cycle(g, cycle):
        return fail("close", {"reason": "assembled sequence failed verification"})
    trace.append(StageRecord("close", True, {"length": len(cycle_seq)}))
    return HamiltonResult("cycle_found", cycle, tuple(trace))


def _attempt_stitch(g: OrientedGraph, p_abs: AbsorbingPath,
                    paths: Sequence[DiPath], res: Reservoir,
                    rng, drain: bool = False) -> tuple[list[int], frozenset[int]] | None:
    """One stitching attempt: order the cover paths (direct-arc greedy,
    randomized on retries), then join consecutive units and close the
    cycle through a fresh reservoir ledger.  ``drain`` routes junctions
    through the reservoir even where direct arcs exist."""
    units: list[list[int]] = []
    if p_abs.path:
        units.append(list(p_abs.path))
    pool = [list(p.vertices) for p in paths]
    if not units:
        if not pool:
            return None
        units.append(pool.pop(0))
    while pool:
        tail = units[-1][-1]
        direct = [p for p in pool if g.has_arc(tail, p[0])]
        bucket = direct or pool
        choice = bucket[0] if rng is None else rng.choice(bucket)
        pool.remove(choice)
        units.append(choice)

    scratch = Reservoir(res.vertices, res.families, res.coverage, set())
    seq: list[int] = []
    try:
        for i, unit in enumerate(units):
            seq.extend(unit)
            nxt = units[(i + 1) % len(units)]
            if unit[-1] == nxt[0]:  # single one-vertex unit cannot close
                return None
            link = connect_through_reservoir(g, scratch, unit[-1], nxt[0],
                                             prefer_reservoir=drain)
            seq.extend(link.vertices[1:-1])
    except NoConnectorAvailableError:
        return None
    assert len(seq) == len(set(seq))
    return seq, frozenset(scratch.ledger)
