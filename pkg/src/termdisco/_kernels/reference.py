"""Pure-Python dynamic-programming kernels.

These are the fallback implementations used when the compiled extension
(:mod:`termdisco._kernels._core`) is unavailable.  Both backends must produce
bit-identical results: every float operation happens in the same order with
the same operands, and every tie is broken the same way (ties prefer the
earliest candidate in the documented order).
"""

import numpy as np


def lev_weighted(x, y, wx, wy):
    """Weighted edit distance between unit sequences ``x`` and ``y``.

    Deleting/inserting a unit costs its weight; substituting ``x[i]`` by
    ``y[j]`` costs ``wx[i] * wy[j]`` (zero when the units are equal).  With
    all-ones weights this is the classic Levenshtein distance.
    """
    n = len(x)
    m = len(y)
    xs = [int(v) for v in x]
    ys = [int(v) for v in y]
    wxs = [float(v) for v in wx]
    wys = [float(v) for v in wy]
    prev = [0.0] * (m + 1)
    for j in range(1, m + 1):
        prev[j] = prev[j - 1] + wys[j - 1]
    cur = [0.0] * (m + 1)
    for i in range(1, n + 1):
        cur[0] = prev[0] + wxs[i - 1]
        xi = xs[i - 1]
        wi = wxs[i - 1]
        for j in range(1, m + 1):
            sub = prev[j - 1]
            if xi != ys[j - 1]:
                sub = sub + wi * wys[j - 1]
            dele = prev[j] + wi
            ins = cur[j - 1] + wys[j - 1]
            best = sub
            if dele < best:
                best = dele
            if ins < best:
                best = ins
            cur[j] = best
        prev, cur = cur, prev
    return prev[m]


def align_matrix(score):
    """Fill the local-alignment score matrix for a (n, m) cell-score grid.

    Returns the (n+1, m+1) matrix ``P`` with ``P[0, :] = P[:, 0] = 0`` and
    ``P[i, j] = max(P[i-1, j-1] + score[i-1, j-1], P[i-1, j], P[i, j-1], 0)``.
    """
    score = np.asarray(score, dtype=np.float64)
    n, m = score.shape
    p = np.zeros((n + 1, m + 1), dtype=np.float64)
    srows = score.tolist()
    prows = p.tolist()
    for i in range(1, n + 1):
        prev = prows[i - 1]
        cur = prows[i]
        srow = srows[i - 1]
        for j in range(1, m + 1):
            best = prev[j - 1] + srow[j - 1]
            if prev[j] > best:
                best = prev[j]
            if cur[j - 1] > best:
                best = cur[j - 1]
            if best < 0.0:
                best = 0.0
            cur[j] = best
    return np.array(prows, dtype=np.float64)


def viterbi_chain(loglik, ln_stay, ln_step, ln_exit, is_entry, ln_prior):
    """Best state path through a bank of left-to-right chains with a free loop.

    Parameters
    ----------
    loglik : (T, J) float64
        Per-frame emission log-likelihood of each chain position.
    ln_stay : (J,) float64
        Log self-loop probability of each position.
    ln_step : (J,) float64
        Log probability of advancing from position ``j`` to ``j + 1`` within
        the same chain (ignored on chain-final positions).
    ln_exit : (J,) float64
        Log probability of leaving the chain from position ``j``; ``-inf``
        everywhere except chain-final positions.
    is_entry : (J,) uint8
        1 on chain-initial positions.
    ln_prior : float
        Log probability of entering any given chain (uniform loop).

    Returns
    -------
    (T,) int32 array of chain-position indices.

    Ties prefer staying, then stepping, then entering; among chains the
    lowest position index wins.
    """
    loglik = np.asarray(loglik, dtype=np.float64)
    T, J = loglik.shape
    ninf = float("-inf")
    stay = [float(v) for v in ln_stay]
    step = [float(v) for v in ln_step]
    exit_ = [float(v) for v in ln_exit]
    entry = [bool(v) for v in is_entry]
    ll = loglik.tolist()
    lp = float(ln_prior)

    delta = [ninf] * J
    for j in range(J):
        if entry[j]:
            delta[j] = lp + ll[0][j]
    bp = [[0] * J for _ in range(T)]
    src_exit = [0] * T

    for t in range(1, T):
        best_exit = ninf
        best_exit_j = 0
        for j in range(J):
            if exit_[j] == ninf:
                continue
            v = delta[j] + exit_[j]
            if v > best_exit:
                best_exit = v
                best_exit_j = j
        src_exit[t] = best_exit_j
        nxt = [ninf] * J
        row = ll[t]
        bpt = bp[t]
        for j in range(J):
            best = delta[j] + stay[j]
            choice = 0
            if not entry[j]:
                v = delta[j - 1] + step[j - 1]
                if v > best:
                    best = v
                    choice = 1
            else:
                v = best_exit + lp
                if v > best:
                    best = v
                    choice = 2
            nxt[j] = best + row[j]
            bpt[j] = choice
        delta = nxt

    best = ninf
    best_j = 0
    for j in range(J):
        if exit_[j] == ninf:
            continue
        if delta[j] > best:
            best = delta[j]
            best_j = j
    path = np.empty(T, dtype=np.int32)
    j = best_j
    path[T - 1] = j
    for t in range(T - 1, 0, -1):
        c = bp[t][j]
        if c == 1:
            j = j - 1
        elif c == 2:
            j = src_exit[t]
        path[t - 1] = j
    return path


def dtw_path(cost):
    """Min-cost monotone path through a (n, m) cost grid.

    Steps are diagonal, up, or left; ties prefer diagonal, then up, then
    left.  Returns ``(total_cost, path_length)`` for the chosen path from
    cell (0, 0) to cell (n-1, m-1), both endpoints included.
    """
    cost = np.asarray(cost, dtype=np.float64)
    n, m = cost.shape
    crows = cost.tolist()
    acc = [[0.0] * m for _ in range(n)]
    ln = [[0] * m for _ in range(n)]
    acc[0][0] = crows[0][0]
    ln[0][0] = 1
    for j in range(1, m):
        acc[0][j] = acc[0][j - 1] + crows[0][j]
        ln[0][j] = j + 1
    for i in range(1, n):
        acc[i][0] = acc[i - 1][0] + crows[i][0]
        ln[i][0] = i + 1
        arow = acc[i]
        prow = acc[i - 1]
        lrow = ln[i]
        lprev = ln[i - 1]
        crow = crows[i]
        for j in range(1, m):
            best = prow[j - 1]
            steps = lprev[j - 1]
            if prow[j] < best:
                best = prow[j]
                steps = lprev[j]
            if arow[j - 1] < best:
                best = arow[j - 1]
                steps = lrow[j - 1]
            arow[j] = best + crow[j]
            lrow[j] = steps + 1
    return acc[n - 1][m - 1], ln[n - 1][m - 1]
