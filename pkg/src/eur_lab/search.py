"""Search for maximal-norm submatrices and the derived coefficient profiles.

Three levels of machinery:

* exact enumeration over all (rows, cols) index pairs, with a Hilbert-Schmidt
  pruning shortcut (a block whose HS norm does not exceed the incumbent can
  never beat it, since the operator norm is bounded by the HS norm);
* a heuristic for budgets the enumeration cannot cover: monotone alternating
  ascent on the row/column supports guided by the top singular pair, refined by
  steepest-ascent single-index interchanges while the neighborhood stays
  small.  Heuristic values are always honest lower bounds and carry a
  certified=False flag;
* closed forms for single-row and single-column blocks, where the optimum is
  just the largest partial Euclidean norm.

Profiles: s_k maximizes over all splits n+m = k+1, R_k = ((1+s_k)/2)^2, and
S_k maximizes squared norms over column subsets of a horizontal concatenation
of several unitaries.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .matrices import as_matrix, operator_norm, require_unitary
from .sampling import RngStream

_ENUM_CHUNK = 2048
_NEIGHBOR_CAP = 4096
_SCREEN_IN = 2
_SCREEN_OUT = 3
_SCREEN_FULL = 64
_TIE_EPS = 1e-15


@dataclass(frozen=True)
class SearchBudget:
    """Resource limits for one submatrix search."""

    max_enumerations: int = 2_000_000
    restarts: int = 64
    max_swaps: int = 500
    rng: RngStream = field(default_factory=lambda: RngStream(0))

    def __post_init__(self):
        if self.max_enumerations < 1 or self.restarts < 1:
            raise ValueError("budget needs max_enumerations >= 1 and restarts >= 1")


@dataclass(frozen=True)
class SearchResult:
    """Best block found: value, witness index sets, and an exactness flag."""

    value: float
    witness_rows: tuple
    witness_cols: tuple
    certified: bool


@dataclass
class NormProfile:
    """A coefficient profile (kind 's', 'R', or 'S') with per-entry provenance.

    values[i] corresponds to k = start_k + i, where start_k is 1 for s/R
    profiles and 0 for S profiles. cert[i] is True when every search that
    contributed to the entry was exact. splits[i] holds the winning (n, m)
    block shape and witnesses[i] the winning index sets.
    """

    kind: str
    values: np.ndarray
    cert: np.ndarray
    N: int
    L: int = 1
    splits: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)

    @property
    def start_k(self) -> int:
        return 0 if self.kind == "S" else 1

    def k_values(self) -> np.ndarray:
        return np.arange(self.start_k, self.start_k + len(self.values))


def _batch_sigma_max(blocks: np.ndarray) -> np.ndarray:
    """Largest singular value of every block in a (B, n, m) stack."""
    _, n, m = blocks.shape
    if n == 1:
        return np.linalg.norm(blocks[:, 0, :], axis=1)
    if m == 1:
        return np.linalg.norm(blocks[:, :, 0], axis=1)
    if n <= m:
        gram = blocks @ blocks.conj().transpose(0, 2, 1)
        side = n
    else:
        gram = blocks.conj().transpose(0, 2, 1) @ blocks
        side = m
    if side == 2:
        a = gram[:, 0, 0].real
        d = gram[:, 1, 1].real
        b = gram[:, 0, 1]
        half = 0.5 * (a + d)
        rad = np.sqrt(np.maximum(0.25 * (a - d) ** 2 + b.real**2 + b.imag**2, 0.0))
        top = half + rad
    else:
        top = np.linalg.eigvalsh(gram)[:, -1]
    return np.sqrt(np.maximum(top, 0.0))


def _lex_better(rows_a, cols_a, rows_b, cols_b) -> bool:
    """True when witness a orders lexicographically before witness b."""
    return (tuple(rows_a), tuple(cols_a)) < (tuple(rows_b), tuple(cols_b))


def max_column_subvector_norm(u, n: int) -> SearchResult:
    """Exact max norm over all n x 1 blocks: best n entries of the best column."""
    a = as_matrix(u)
    if not 1 <= n <= a.shape[0]:
        raise ValueError(f"subvector length {n} out of range for {a.shape[0]} rows")
    sq = np.abs(a) ** 2
    # Sort each column's squared moduli descending and take partial sums.
    top = -np.sort(-sq, axis=0)[:n]
    per_col = top.sum(axis=0)
    j = int(np.argmin(-per_col))  # first maximum
    order = np.argsort(-sq[:, j], kind="stable")
    rows = tuple(sorted(int(i) for i in order[:n]))
    return SearchResult(float(np.sqrt(per_col[j])), rows, (j,), True)


def max_row_subvector_norm(u, m: int) -> SearchResult:
    """Exact max norm over all 1 x m blocks (transpose of the column case)."""
    res = max_column_subvector_norm(as_matrix(u).T, m)
    return SearchResult(res.value, res.witness_cols, res.witness_rows, True)


def _exhaustive_max(a: np.ndarray, n: int, m: int) -> SearchResult:
    rows_n, cols_n = a.shape
    sq = np.abs(a) ** 2
    col_combos = np.array(
        list(itertools.combinations(range(cols_n), m)), dtype=np.intp
    )
    # best starts at 0, not -1: the Hilbert-Schmidt prune below compares
    # against best^2, and a negative sentinel would prune every block whose
    # squared mass is under 1 before any candidate has been scored. The
    # leading combination seeds the witness so even an all-zero input
    # returns a valid (if arbitrary) index pair.
    best = 0.0
    best_rows: tuple = tuple(range(n))
    best_cols: tuple = tuple(range(m))
    for rows in itertools.combinations(range(rows_n), n):
        ridx = np.asarray(rows, dtype=np.intp)
        strip = a[ridx]
        col_mass = sq[ridx].sum(axis=0)
        for lo in range(0, len(col_combos), _ENUM_CHUNK):
            combos = col_combos[lo : lo + _ENUM_CHUNK]
            hs_sq = col_mass[combos].sum(axis=1)
            live = hs_sq > best * best
            if not np.any(live):
                continue
            combos = combos[live]
            blocks = np.ascontiguousarray(strip[:, combos].transpose(1, 0, 2))
            sigma = _batch_sigma_max(blocks)
            pick = int(np.argmax(sigma))
            if sigma[pick] > best:
                best = float(sigma[pick])
                best_rows = rows
                best_cols = tuple(int(c) for c in combos[pick])
    return SearchResult(best, best_rows, best_cols, True)


def _greedy_start(a: np.ndarray, n: int, m: int):
    """Supports of the largest-modulus entries, n distinct rows and m cols."""
    order = np.argsort(-np.abs(a).ravel(), kind="stable")
    rows: list = []
    cols: list = []
    for flat in order:
        i, j = divmod(int(flat), a.shape[1])
        if len(rows) < n and i not in rows:
            rows.append(i)
        if len(cols) < m and j not in cols:
            cols.append(j)
        if len(rows) == n and len(cols) == m:
            break
    return np.sort(np.array(rows, dtype=np.intp)), np.sort(np.array(cols, dtype=np.intp))


def _top_support(scores: np.ndarray, count: int) -> np.ndarray:
    if count >= scores.size:
        return np.arange(scores.size, dtype=np.intp)
    part = np.argpartition(scores, scores.size - count)[scores.size - count :]
    return np.sort(part)


def _power_right(block: np.ndarray) -> np.ndarray:
    """Approximate top right singular vector by a short power iteration.

    Deterministic cold start (the largest-norm column); two rounds are plenty
    for support selection, and every exact value is recomputed downstream.
    """
    sq = (np.abs(block) ** 2).sum(axis=0)
    v = np.zeros(block.shape[1], dtype=block.dtype)
    v[int(np.argmax(sq))] = 1.0
    for _ in range(2):
        u = block @ v
        nu = np.linalg.norm(u)
        if nu == 0.0:
            return v
        z = (u / nu).conj() @ block
        nz = np.linalg.norm(z)
        if nz == 0.0:
            return v
        v = z.conj() / nz
    return v


def _ascent(a: np.ndarray, n: int, m: int, rows, cols, max_sweeps: int = 60):
    """Alternating support ascent guided by a power-iterated singular pair.

    Each sweep re-selects the n rows maximizing the image norm of the current
    right vector and the m columns maximizing the preimage of the left one;
    support sizes adjust on the first sweep, so warm seeds of neighboring
    shapes are valid starting points.
    """
    v = _power_right(a[np.ix_(rows, cols)])
    prev = None
    for _ in range(max_sweeps):
        rows = _top_support(np.abs(a[:, cols] @ v), n)
        block = a[np.ix_(rows, cols)]
        u = block @ v
        nu = np.linalg.norm(u)
        if nu == 0.0:
            break
        z = (u / nu).conj() @ a[rows, :]
        cols = _top_support(np.abs(z), m)
        zc = z[cols]
        nz = np.linalg.norm(zc)
        if nz > 0.0:
            v = zc.conj() / nz
        key = (tuple(rows), tuple(cols))
        if key == prev:
            break
        prev = key
    return rows, cols


def _screened_candidates(scores_in: np.ndarray, scores_out: np.ndarray, out_idx: np.ndarray):
    """Index pairs (position, replacement) ranked by the first-order swap gain.

    Swapping support position p for outside index r changes the norm lower
    bound to sigma^2 - scores_in[p] + scores_out[r], so the most promising
    swaps pair the smallest in-scores with the largest out-scores. Small
    neighborhoods are enumerated outright; only large ones are screened down
    to the top few of each factor.
    """
    if scores_in.size * scores_out.size <= _SCREEN_FULL:
        return [
            (int(p), int(out_idx[r]))
            for p in range(scores_in.size)
            for r in range(scores_out.size)
        ]
    pos = np.argsort(scores_in, kind="stable")[:_SCREEN_IN]
    rep = np.argsort(-scores_out, kind="stable")[:_SCREEN_OUT]
    return [(int(p), int(out_idx[r])) for p in pos for r in rep]


def _interchange_polish(a: np.ndarray, rows, cols, value: float, max_swaps: int):
    """Single-index interchange ascent guided by the top singular pair.

    A full steepest-ascent scan would cost one spectrum per neighbor; instead
    the current singular pair scores every swap in closed form (a valid lower
    bound on the swapped norm, for any unit vector) and only the screened
    best few are evaluated exactly, in one batched spectrum call. Accepted
    swaps strictly increase the exact norm, so the polish is monotone and
    terminates.
    """
    rows_n, cols_n = a.shape
    n, m = len(rows), len(cols)
    neighborhood = n * (rows_n - n) + m * (cols_n - m)
    if neighborhood == 0 or neighborhood > _NEIGHBOR_CAP:
        return rows, cols, value
    block = a[np.ix_(rows, cols)]
    v = _power_right(block)
    row_idx = np.arange(rows_n, dtype=np.intp)
    col_idx = np.arange(cols_n, dtype=np.intp)
    swaps = 0
    while swaps < max_swaps:
        u = block @ v
        nu = np.linalg.norm(u)
        if nu == 0.0:
            break
        u = u / nu
        z = u.conj() @ block
        nz = np.linalg.norm(z)
        if nz == 0.0:
            break
        v = z.conj() / nz
        in_rows = np.zeros(rows_n, dtype=bool)
        in_rows[rows] = True
        row_out = row_idx[~in_rows]
        in_cols = np.zeros(cols_n, dtype=bool)
        in_cols[cols] = True
        col_out = col_idx[~in_cols]
        plans = []
        best_bound = -np.inf
        screened = False
        if row_out.size:
            w_all = np.abs(a[:, cols] @ v) ** 2
            w_in = w_all[rows]
            w_out = w_all[row_out]
            best_bound = max(best_bound, w_in.sum() - w_in.min() + w_out.max())
            screened = screened or w_in.size * w_out.size > _SCREEN_FULL
            for pos, rep in _screened_candidates(w_in, w_out, row_out):
                plans.append(("row", pos, rep))
        if col_out.size:
            z_all = np.abs(u.conj() @ a[rows, :]) ** 2
            z_in = z_all[cols]
            z_out = z_all[col_out]
            best_bound = max(best_bound, z_in.sum() - z_in.min() + z_out.max())
            screened = screened or z_in.size * z_out.size > _SCREEN_FULL
            for pos, rep in _screened_candidates(z_in, z_out, col_out):
                plans.append(("col", pos, rep))
        if not plans:
            break
        # In the screened regime the first-order score caps what any single
        # swap can reach under the current singular pair; when even that
        # cannot beat the incumbent, skip the exact evaluations and stop.
        # Fully enumerated neighborhoods keep the exact termination check.
        if screened and best_bound <= value * value + _TIE_EPS:
            break
        stack = np.repeat(block[None, :, :], len(plans), axis=0)
        for idx, (side, pos, rep) in enumerate(plans):
            if side == "row":
                stack[idx, pos, :] = a[rep, cols]
            else:
                stack[idx, :, pos] = a[rows, rep]
        sigma = _batch_sigma_max(stack)
        t = int(np.argmax(sigma))
        if sigma[t] <= value + _TIE_EPS:
            break
        value = float(sigma[t])
        side, pos, rep = plans[t]
        if side == "row":
            rows = rows.copy()
            rows[pos] = rep
            rows = np.sort(rows)
        else:
            cols = cols.copy()
            cols[pos] = rep
            cols = np.sort(cols)
        block = a[np.ix_(rows, cols)]
        swaps += 1
    return rows, cols, value


def _heuristic_max(
    a: np.ndarray, n: int, m: int, budget: SearchBudget, seeds=()
) -> SearchResult:
    rows_n, cols_n = a.shape
    gen = budget.rng.generator()
    # Warm seeds (witnesses of neighboring block shapes) replace the greedy
    # start when present: the first ascent sweep resizes them to (n, m).
    if seeds:
        starts = [
            (np.asarray(r, dtype=np.intp), np.asarray(c, dtype=np.intp))
            for r, c in seeds
        ]
    else:
        starts = [_greedy_start(a, n, m)]
    for _ in range(budget.restarts - 1):
        starts.append(
            (
                np.sort(gen.choice(rows_n, size=n, replace=False).astype(np.intp)),
                np.sort(gen.choice(cols_n, size=m, replace=False).astype(np.intp)),
            )
        )
    best = -1.0
    best_rows: tuple = ()
    best_cols: tuple = ()
    seen: set = set()
    for rows0, cols0 in starts:
        rows, cols = _ascent(a, n, m, rows0, cols0)
        key = (tuple(int(i) for i in rows), tuple(int(j) for j in cols))
        if key in seen:
            continue
        seen.add(key)
        value = float(_batch_sigma_max(a[np.ix_(rows, cols)][None, :, :])[0])
        rows, cols, value = _interchange_polish(a, rows, cols, value, budget.max_swaps)
        wit_r = tuple(int(i) for i in rows)
        wit_c = tuple(int(j) for j in cols)
        if value > best + _TIE_EPS or (
            abs(value - best) <= _TIE_EPS
            and best_rows
            and _lex_better(wit_r, wit_c, best_rows, best_cols)
        ):
            best, best_rows, best_cols = value, wit_r, wit_c
    value = operator_norm(a[np.ix_(best_rows, best_cols)])
    return SearchResult(float(value), best_rows, best_cols, False)


def _pair_count(rows_n: int, cols_n: int, n: int, m: int) -> float:
    import math

    return math.comb(rows_n, n) * math.comb(cols_n, m)


def max_submatrix_norm(
    u, n: int, m: int, budget: SearchBudget | None = None, seeds=()
) -> SearchResult:
    """Maximal operator norm over all n x m submatrices of u.

    Exact (certified) when the pair count fits the enumeration budget or when
    one side is a single index (closed form); otherwise a heuristic lower
    bound with a witness that reproduces the reported value. seeds is an
    optional sequence of (rows, cols) index sets used as warm starts by the
    heuristic; profile sweeps pass the witnesses of neighboring shapes.
    """
    a = as_matrix(u)
    if budget is None:
        budget = SearchBudget()
    if not (1 <= n <= a.shape[0] and 1 <= m <= a.shape[1]):
        raise ValueError(f"block shape {(n, m)} out of range for {a.shape}")
    if m == 1:
        return max_column_subvector_norm(a, n)
    if n == 1:
        return max_row_subvector_norm(a, m)
    if _pair_count(a.shape[0], a.shape[1], n, m) <= budget.max_enumerations:
        res = _exhaustive_max(a, n, m)
    else:
        res = _heuristic_max(a, n, m, budget, seeds)
    # The witness must reproduce the value through the public norm path.
    value = operator_norm(a[np.ix_(res.witness_rows, res.witness_cols)])
    return SearchResult(float(value), res.witness_rows, res.witness_cols, res.certified)


def s_profile(u, budget: SearchBudget | None = None) -> NormProfile:
    """Coefficients s_k = max over splits n+m = k+1 of the max n x m block norm.

    k runs from 1 to N. The k = 1 entry is the largest entry modulus. Entries
    are certified only when every contributing split was exact; heuristic
    entries are lower bounds, so the profile is re-monotonized (the true
    profile is nondecreasing).
    """
    a = as_matrix(u)
    if a.shape[0] != a.shape[1]:
        raise ValueError("s profile needs a square matrix")
    if budget is None:
        budget = SearchBudget()
    side = a.shape[0]
    values = np.empty(side)
    cert = np.empty(side, dtype=bool)
    splits: list = []
    witnesses: list = []

    mods = np.abs(a)
    flat = int(np.argmax(mods))
    i0, j0 = divmod(flat, side)
    values[0] = mods[i0, j0]
    cert[0] = True
    splits.append((1, 1))
    witnesses.append(((i0,), (j0,)))

    # Winning index sets per block shape, reused as warm starts for the two
    # neighboring shapes one k later. This keeps the heuristic sweep cheap:
    # each search starts from an already-good support instead of from scratch.
    winners: dict = {}
    for k in range(2, side + 1):
        best: SearchResult | None = None
        best_split = None
        for n_rows in range(max(1, k + 1 - side), min(k, side) + 1):
            m_cols = k + 1 - n_rows
            seeds = [
                winners[shape]
                for shape in ((n_rows - 1, m_cols), (n_rows, m_cols - 1))
                if shape in winners
            ]
            res = max_submatrix_norm(a, n_rows, m_cols, budget, seeds=seeds)
            winners[(n_rows, m_cols)] = (res.witness_rows, res.witness_cols)
            if (
                best is None
                or res.value > best.value + _TIE_EPS
                or (
                    abs(res.value - best.value) <= _TIE_EPS
                    and _lex_better(
                        res.witness_rows, res.witness_cols, best.witness_rows, best.witness_cols
                    )
                )
            ):
                best = res
                best_split = (n_rows, m_cols)
        assert best is not None
        values[k - 1] = best.value
        cert[k - 1] = all(
            _certifiable(a.shape, n_rows, k + 1 - n_rows, budget)
            for n_rows in range(max(1, k + 1 - side), min(k, side) + 1)
        )
        splits.append(best_split)
        witnesses.append((best.witness_rows, best.witness_cols))

    # Heuristic entries are lower bounds; restore monotonicity where float
    # noise or a weak search dips below the previous coefficient.
    values = np.maximum.accumulate(values)
    return NormProfile("s", values, cert, side, 1, splits, witnesses)


def _certifiable(shape, n: int, m: int, budget: SearchBudget) -> bool:
    if n == 1 or m == 1:
        return True
    return _pair_count(shape[0], shape[1], n, m) <= budget.max_enumerations


def r_profile(s: NormProfile) -> NormProfile:
    """R_k = ((1 + s_k)/2)^2, inheriting certification from the s profile."""
    if s.kind != "s":
        raise ValueError("r_profile expects an s profile")
    values = ((1.0 + s.values) / 2.0) ** 2
    return NormProfile("R", values, s.cert.copy(), s.N, 1, list(s.splits), list(s.witnesses))


def _exhaustive_column_subsets(w: np.ndarray, count: int) -> SearchResult:
    total = w.shape[1]
    best = -1.0
    best_cols: tuple = ()
    combos = np.array(list(itertools.combinations(range(total), count)), dtype=np.intp)
    for lo in range(0, len(combos), _ENUM_CHUNK):
        chunk = combos[lo : lo + _ENUM_CHUNK]
        blocks = np.ascontiguousarray(w[:, chunk].transpose(1, 0, 2))
        sigma = _batch_sigma_max(blocks)
        pick = int(np.argmax(sigma))
        if sigma[pick] > best:
            best = float(sigma[pick])
            best_cols = tuple(int(c) for c in chunk[pick])
    return SearchResult(best, tuple(range(w.shape[0])), best_cols, True)


def _heuristic_column_subsets(
    w: np.ndarray, count: int, budget: SearchBudget, seeds=()
) -> SearchResult:
    total = w.shape[1]
    gen = budget.rng.generator()
    if seeds:
        starts = [np.asarray(s, dtype=np.intp) for s in seeds]
    else:
        col_norm_sq = (np.abs(w) ** 2).sum(axis=0)
        starts = [np.sort(np.argsort(-col_norm_sq, kind="stable")[:count])]
    for _ in range(budget.restarts - 1):
        starts.append(np.sort(gen.choice(total, size=count, replace=False).astype(np.intp)))
    best = -1.0
    best_cols: tuple = ()
    for cols in starts:
        prev = None
        for _ in range(60):
            left, _, _ = np.linalg.svd(w[:, cols])
            scores = np.abs(left[:, 0].conj() @ w)
            cols = _top_support(scores, count)
            key = tuple(cols)
            if key == prev:
                break
            prev = key
        value = operator_norm(w[:, cols])
        wit = tuple(int(c) for c in cols)
        if value > best + _TIE_EPS or (
            abs(value - best) <= _TIE_EPS and best_cols and wit < best_cols
        ):
            best, best_cols = float(value), wit
    return SearchResult(best, tuple(range(w.shape[0])), best_cols, False)


def multi_measurement_profile(us, budget: SearchBudget | None = None) -> NormProfile:
    """S_k = max squared norm over (k+1)-column subsets of the concatenation.

    us is a list of L >= 2 same-size unitaries; k runs from 0 to L*N - 1 and
    S_0 = 1 exactly (every column is a unit vector).
    """
    if budget is None:
        budget = SearchBudget()
    mats = [require_unitary(u) for u in us]
    if len(mats) < 2:
        raise ValueError("need at least two measurements")
    dim = mats[0].shape[0]
    if any(m.shape != (dim, dim) for m in mats):
        raise ValueError("all measurement matrices must share one dimension")
    w = np.hstack(mats)
    total = w.shape[1]
    values = np.empty(total)
    cert = np.empty(total, dtype=bool)
    splits: list = []
    witnesses: list = []
    values[0] = 1.0
    cert[0] = True
    splits.append((dim, 1))
    witnesses.append((tuple(range(dim)), (0,)))
    import math

    prev_cols = None
    for k in range(1, total):
        count = k + 1
        if math.comb(total, count) <= budget.max_enumerations:
            res = _exhaustive_column_subsets(w, count)
        else:
            seeds = [prev_cols] if prev_cols is not None else ()
            res = _heuristic_column_subsets(w, count, budget, seeds)
        prev_cols = res.witness_cols
        values[k] = res.value**2
        cert[k] = res.certified
        splits.append((dim, count))
        witnesses.append((res.witness_rows, res.witness_cols))
    values = np.maximum.accumulate(values)
    return NormProfile("S", values, cert, dim, len(mats), splits, witnesses)


def profile_to_csv(profile: NormProfile, path) -> None:
    """Dump a profile: k, value, certified, winning split, witness index sets."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("k,value,certified,split_n,split_m,witness_rows,witness_cols\n")
        for i, k in enumerate(profile.k_values()):
            split = profile.splits[i] if i < len(profile.splits) else ("", "")
            wit_r, wit_c = (
                profile.witnesses[i] if i < len(profile.witnesses) else ((), ())
            )
            fh.write(
                f"{k},{float(profile.values[i])!r},{str(bool(profile.cert[i])).lower()},"
                f"{split[0]},{split[1]},"
                f"{';'.join(str(r) for r in wit_r)},{';'.join(str(c) for c in wit_c)}\n"
            )
