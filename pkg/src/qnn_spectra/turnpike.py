"""Exact solver for the relaxed turnpike problem.

For a size d, find integer mark sets S (|S| = d, first mark 0) that
maximise the contiguous radius K(S): the largest K such that every
integer in {-K..K} appears in the difference set of S.  It suffices to
enumerate the candidate space C of sets whose successive gaps lie in
[1, C(d,2)] — a set with a larger gap can always be compacted without
lowering K — so a full sweep of C yields the true optimum, and in
exhaustive mode the complete list of optimal candidates in C.

The sweep is a depth-first search over gap vectors in lexicographic
order, with a sound prune: from a prefix, at most
``placed*remaining + C(remaining,2)`` new differences can still appear,
so once the already-missing small integers outnumber that budget the
branch cannot reach the current best and is cut.  Pruning never changes
results (only branches strictly below the running best are dropped in
exhaustive mode).

Long exhaustive runs (d >= 7) can checkpoint progress to a JSON state
file and resume; the search can also be partitioned by first gap across
worker processes that share only a monotone best-K hint.
"""
from __future__ import annotations

import json
import multiprocessing
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

from .spectrum import GeneratorGrid, RationalLike, as_rational

MAX_EXHAUSTIVE_D = 8
STATE_VERSION = 1

# Published optimal rows for d = 1..8: (best K, number of optimal
# candidates in C, lexicographically smallest optimal set).  The
# exhaustive solver reproduces these; verify_reference() cross-checks.
KNOWN_OPTIMA: dict[int, tuple[int, int, tuple[int, ...]]] = {
    1: (0, 1, (0,)),
    2: (1, 1, (0, 1)),
    3: (3, 2, (0, 1, 3)),
    4: (6, 2, (0, 1, 4, 6)),
    5: (9, 8, (0, 1, 2, 6, 9)),
    6: (13, 14, (0, 1, 2, 6, 10, 13)),
    7: (18, 8, (0, 2, 7, 13, 16, 17, 25)),
    8: (24, 2, (0, 8, 15, 17, 20, 21, 31, 39)),
}

__all__ = [
    "MAX_EXHAUSTIVE_D",
    "KNOWN_OPTIMA",
    "TurnpikeSolution",
    "TableMismatchError",
    "k_of",
    "solve",
    "verify_reference",
    "extended_construction",
]


class TableMismatchError(Exception):
    """A solver result disagrees with the published reference rows."""


@dataclass(frozen=True)
class TurnpikeSolution:
    d: int
    best_k: int
    solutions: tuple[tuple[int, ...], ...]
    candidate_space_size: int
    exhaustive: bool

    @property
    def example(self) -> tuple[int, ...]:
        """Lexicographically smallest optimal set found."""
        return self.solutions[0]

    @property
    def solution_count(self) -> int:
        return len(self.solutions)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "best_k": self.best_k,
            "example": list(self.example),
            "solutions": [list(s) for s in self.solutions],
            "solution_count": self.solution_count,
            "candidate_space_size": self.candidate_space_size,
            "exhaustive": self.exhaustive,
        }


def _as_int_marks(s: Iterable[RationalLike]) -> list[int]:
    marks = []
    for v in s:
        r = as_rational(v)
        if r.denominator != 1:
            raise ValueError("marks must be integers")
        marks.append(int(r))
    if not marks:
        raise ValueError("empty mark set")
    if len(set(marks)) != len(marks):
        raise ValueError("duplicate marks")
    return sorted(marks)


def _diff_mask(marks: Sequence[int]) -> int:
    mask = 0
    for i, a in enumerate(marks):
        for b in marks[i + 1 :]:
            mask |= 1 << (b - a)
    return mask


def _k_from_mask(mask: int) -> int:
    # bit i of mask <=> positive difference i present; K = longest run 1..K
    y = mask >> 1
    return (y ^ (y + 1)).bit_length() - 1


def k_of(s: Iterable[RationalLike]) -> int:
    """Contiguous radius of the difference set of a distinct integer set."""
    return _k_from_mask(_diff_mask(_as_int_marks(s)))


class _Search:
    """DFS over gap vectors with the missing-integer prune.

    In exhaustive mode every candidate achieving the final best K is
    recorded; otherwise only the first (lexicographically smallest)
    witness is kept and ties are pruned.
    """

    def __init__(self, d: int, exhaustive: bool, best: int = -1,
                 solutions: Iterable[Sequence[int]] = (), shared_best=None):
        self.d = d
        self.exhaustive = exhaustive
        self.gap_max = comb(d, 2)
        self.best = best
        self.solutions: list[tuple[int, ...]] = [tuple(s) for s in solutions]
        self.shared_best = shared_best

    def consider(self, k: int, marks: Sequence[int]):
        if k > self.best:
            self.best = k
            self.solutions = [tuple(marks)]
            if self.shared_best is not None and k > self.shared_best.value:
                self.shared_best.value = k
        elif k == self.best and self.exhaustive:
            self.solutions.append(tuple(marks))

    def poll_shared(self):
        if self.shared_best is None:
            return
        v = self.shared_best.value
        if v > self.best:
            # another worker raised the bar; our collected sets are obsolete
            self.best = v
            self.solutions = []

    def _upper_bound(self, mask: int, placed: int, remaining: int) -> int:
        budget = placed * remaining + remaining * (remaining - 1) // 2
        missing = 0
        for v in range(1, self.gap_max + 1):
            if not (mask >> v) & 1:
                missing += 1
                if missing > budget:
                    return v - 1
        return self.gap_max

    def subtree(self, marks: list[int], mask: int, remaining: int):
        ub = self._upper_bound(mask, len(marks), remaining)
        if ub < self.best or (not self.exhaustive and ub <= self.best):
            return
        last = marks[-1]
        if remaining == 1:
            for g in range(1, self.gap_max + 1):
                t = last + g
                m = mask
                for s in marks:
                    m |= 1 << (t - s)
                self.consider(_k_from_mask(m), marks + [t])
            return
        for g in range(1, self.gap_max + 1):
            t = last + g
            m = mask
            for s in marks:
                m |= 1 << (t - s)
            marks.append(t)
            self.subtree(marks, m, remaining - 1)
            marks.pop()

    # -- prefix-unit driving (checkpoints, workers) -----------------------

    def prefix_depth(self) -> int:
        return min(2, self.d - 1)

    def prefix_count(self) -> int:
        return self.gap_max ** self.prefix_depth()

    def decode_prefix(self, index: int) -> tuple[int, ...]:
        digits = []
        for _ in range(self.prefix_depth()):
            index, r = divmod(index, self.gap_max)
            digits.append(r + 1)
        return tuple(reversed(digits))

    def run_prefix(self, index: int):
        gaps = self.decode_prefix(index)
        marks = [0]
        mask = 0
        for g in gaps:
            t = marks[-1] + g
            for s in marks:
                mask |= 1 << (t - s)
            marks.append(t)
        self.poll_shared()
        if len(marks) == self.d:
            self.consider(_k_from_mask(mask), marks)
        else:
            self.subtree(marks, mask, self.d - len(marks))

    def state_dict(self, next_prefix_index: int, candidates_done: int) -> dict:
        return {
            "version": STATE_VERSION,
            "d": self.d,
            "exhaustive": self.exhaustive,
            "next_prefix_index": next_prefix_index,
            "best_k": self.best,
            "solutions": [list(s) for s in self.solutions],
            "candidates_done": candidates_done,
        }


def _load_state(path: str | os.PathLike, d: int, exhaustive: bool) -> dict:
    with open(path, encoding="utf-8") as fh:
        state = json.load(fh)
    if state.get("version") != STATE_VERSION:
        raise ValueError(f"unsupported state file version {state.get('version')!r}")
    if state.get("d") != d or state.get("exhaustive") != exhaustive:
        raise ValueError(
            "state file was written for a different run "
            f"(d={state.get('d')}, exhaustive={state.get('exhaustive')})"
        )
    return state


def _save_state(path: str | os.PathLike, state: dict):
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(state, fh)
    os.replace(tmp, path)


def _solve_sequential(d: int, exhaustive: bool, checkpoint_path, checkpoint_every: int):
    search = _Search(d, exhaustive)
    start = 0
    done = 0
    if checkpoint_path and os.path.exists(checkpoint_path):
        state = _load_state(checkpoint_path, d, exhaustive)
        start = state["next_prefix_index"]
        done = state["candidates_done"]
        search.best = state["best_k"]
        search.solutions = [tuple(s) for s in state["solutions"]]
    per_prefix = search.gap_max ** (d - 1 - search.prefix_depth())
    since_save = 0
    total = search.prefix_count()
    for index in range(start, total):
        search.run_prefix(index)
        done += per_prefix
        since_save += per_prefix
        if checkpoint_path and since_save >= checkpoint_every and index + 1 < total:
            _save_state(checkpoint_path, search.state_dict(index + 1, done))
            since_save = 0
    if checkpoint_path:
        Path(checkpoint_path).unlink(missing_ok=True)
    return search.best, search.solutions


_WORKER_SHARED = None


def _init_worker(shared):
    global _WORKER_SHARED
    _WORKER_SHARED = shared


def _run_first_gap(args: tuple[int, bool, int]):
    d, exhaustive, g1 = args
    shared = _WORKER_SHARED
    best = shared.value if shared is not None else -1
    search = _Search(d, exhaustive, best=best, shared_best=shared)
    marks = [0, g1]
    mask = 1 << g1
    if d == 2:
        search.consider(_k_from_mask(mask), marks)
    else:
        search.subtree(marks, mask, d - 2)
    return search.best, search.solutions


def _solve_parallel(d: int, exhaustive: bool, workers: int):
    gap_max = comb(d, 2)
    try:
        ctx = multiprocessing.get_context("fork")
    except ValueError:  # no fork on this platform; stay sequential
        return _solve_sequential(d, exhaustive, None, 0)
    shared = ctx.Value("q", -1, lock=False)
    tasks = [(d, exhaustive, g1) for g1 in range(1, gap_max + 1)]
    with ProcessPoolExecutor(
        max_workers=workers, mp_context=ctx, initializer=_init_worker, initargs=(shared,)
    ) as pool:
        results = list(pool.map(_run_first_gap, tasks))
    best = max(r[0] for r in results)
    solutions = [s for r in results if r[0] == best for s in r[1]]
    return best, solutions


def solve(
    d: int,
    exhaustive: bool = False,
    workers: int = 1,
    checkpoint_path: str | os.PathLike | None = None,
    checkpoint_every: int = 10**8,
) -> TurnpikeSolution:
    """Maximise K(S) over integer sets of size d.

    ``exhaustive=True`` additionally returns every optimal candidate in
    the gap-bounded candidate space (mirrors included, matching the raw
    candidate count); it is guarded to d <= 8.  Without it only the
    lexicographically smallest optimal set is returned — the reported
    best K is the true maximum either way, since the prune is sound.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if exhaustive and d > MAX_EXHAUSTIVE_D:
        raise ValueError(
            f"exhaustive mode is desk-scale only (d <= {MAX_EXHAUSTIVE_D}); "
            "rerun with exhaustive=False for a single optimal witness"
        )
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if workers > 1 and checkpoint_path is not None:
        raise ValueError("checkpointing requires workers=1")
    space = comb(d, 2) ** (d - 1)
    if d == 1:
        return TurnpikeSolution(1, 0, ((0,),), space, exhaustive)
    if workers > 1:
        best, solutions = _solve_parallel(d, exhaustive, workers)
    else:
        best, solutions = _solve_sequential(d, exhaustive, checkpoint_path, checkpoint_every)
    ordered = tuple(sorted(tuple(s) for s in solutions))
    if not exhaustive:
        ordered = ordered[:1]
    return TurnpikeSolution(d, best, ordered, space, exhaustive)


def verify_reference(max_d: int, workers: int = 1) -> list[tuple[int, int, int]]:
    """Re-solve d = 1..max_d exhaustively and check against KNOWN_OPTIMA.

    Returns (d, best_k, solution_count) rows; raises TableMismatchError
    naming the first row that disagrees.
    """
    if not 1 <= max_d <= MAX_EXHAUSTIVE_D:
        raise ValueError(f"max_d must be in 1..{MAX_EXHAUSTIVE_D}")
    rows = []
    for d in range(1, max_d + 1):
        sol = solve(d, exhaustive=True, workers=workers)
        want_k, want_count, want_example = KNOWN_OPTIMA[d]
        if (sol.best_k, sol.solution_count, sol.example) != (want_k, want_count, want_example):
            raise TableMismatchError(
                f"row d={d}: got K={sol.best_k}, count={sol.solution_count}, "
                f"example={sol.example}; expected K={want_k}, count={want_count}, "
                f"example={want_example}"
            )
        rows.append((d, sol.best_k, sol.solution_count))
    return rows


def extended_construction(
    q: int, R: int, L: int, s: Iterable[RationalLike]
) -> tuple[GeneratorGrid, int]:
    """Scale a base set into a grid certified to contain a contiguous range.

    The base set s (size 2**q, K := K(s) >= 1) is placed in every cell,
    scaled by (K+1)**(l-1 + L*(r-1)); the spectrum of the resulting grid
    contains the full integer range of radius (K+1)**(R*L/q) - 1.  The
    radius is returned alongside the grid; it is a containment guarantee,
    not a maximality claim.
    """
    marks = _as_int_marks(s)
    if q < 1 or len(marks) != 2**q:
        raise ValueError(f"base set must have exactly 2**q elements, got {len(marks)}")
    if R % q != 0:
        raise ValueError("q must divide R")
    if L < 1:
        raise ValueError("L must be >= 1")
    k = k_of(marks)
    if k == 0:
        raise ValueError("base set has no unit step")
    rows = R // q
    base = k + 1
    cells = [
        [[(base ** ((l - 1) + L * (r - 1))) * m for m in marks] for l in range(1, L + 1)]
        for r in range(1, rows + 1)
    ]
    grid = GeneratorGrid.from_cells(cells, q=q)
    radius = base ** (rows * L) - 1
    return grid, radius
