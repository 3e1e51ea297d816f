"""Diagonal-covariance Gaussian mixtures: EM and mean-field variational.

``gmm_em`` fits a fixed-size mixture by expectation-maximisation; its trace
(total log-likelihood per iteration) is non-decreasing up to the variance
floor.  ``bgmm_variational`` places a Dirichlet prior on the weights and
normal-gamma priors on the component parameters; unneeded components lose
their responsibility mass during inference and are pruned, so the effective
cluster count is learned rather than fixed.
"""

import numpy as np
from scipy.special import digamma, gammaln, logsumexp

VAR_FLOOR = 1e-6


def _diag_log_prob(x, means, variances):
    # (n, k) log N(x | mean_k, diag(var_k))
    n, d = x.shape
    log_det = np.log(variances).sum(axis=1)
    diff2 = (x[:, None, :] - means[None, :, :]) ** 2
    maha = (diff2 / variances[None, :, :]).sum(axis=2)
    return -0.5 * (d * np.log(2 * np.pi) + log_det[None, :] + maha)


def _init_resp(segments, k, seed):
    from termdisco.cluster import as_matrix
    from termdisco.cluster.kmeans import kmeans

    x = as_matrix(segments)
    n = x.shape[0]
    k_init = min(k, np.unique(x, axis=0).shape[0])
    _, labeling = kmeans(segments, k_init, seed)
    resp = np.zeros((n, k))
    resp[np.arange(n), np.array(labeling.labels)] = 1.0
    return x, resp


def gmm_em(segments, k, seed, max_iter=200, tol=1e-8):
    """Fit a k-component diagonal GMM; labels are argmax responsibilities."""
    from termdisco.cluster import ClusterModel, Labeling

    if k < 1:
        raise ValueError("k must be >= 1")
    x, resp = _init_resp(segments, k, seed)
    n, d = x.shape
    if n < k:
        raise ValueError(f"need at least k={k} points, got {n}")

    weights, means, variances = _m_step(x, resp)
    trace = []
    for _ in range(max_iter):
        log_w = np.log(np.maximum(weights, 1e-300))
        log_prob = _diag_log_prob(x, means, variances) + log_w[None, :]
        norm = logsumexp(log_prob, axis=1)
        ll = float(norm.sum())
        resp = np.exp(log_prob - norm[:, None])
        trace.append(ll)
        if len(trace) > 1 and abs(trace[-1] - trace[-2]) < tol * (1 + abs(ll)):
            break
        weights, means, variances = _m_step(x, resp)

    labels = tuple(int(v) for v in np.argmax(resp, axis=1))
    model = ClusterModel(
        method="gmm",
        n_clusters=k,
        params={"weights": [float(w) for w in weights],
                "means": [[float(v) for v in m] for m in means],
                "variances": [[float(v) for v in s] for s in variances]},
        trace=trace,
    )
    return model, Labeling(labels, k).with_recordings(segments)


def _m_step(x, resp):
    nk = resp.sum(axis=0)
    safe = np.maximum(nk, 1e-12)
    weights = nk / nk.sum()
    means = (resp.T @ x) / safe[:, None]
    sq = (resp.T @ (x ** 2)) / safe[:, None]
    variances = np.maximum(sq - means ** 2, VAR_FLOOR)
    return weights, means, variances


def bgmm_variational(segments, k_max, seed, weight_prior=None,
                     max_iter=500, tol=1e-9, prune_eps=1e-3):
    """Variational diagonal GMM with a sparsifying Dirichlet weight prior.

    ``weight_prior`` is the Dirichlet concentration (default ``1 / k_max``);
    components whose posterior responsibility mass falls below ``prune_eps``
    are dropped after convergence.  The trace holds the evidence lower
    bound, non-decreasing per iteration.
    """
    from termdisco.cluster import ClusterModel, Labeling

    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    alpha0 = weight_prior if weight_prior is not None else 1.0 / k_max
    if alpha0 <= 0:
        raise ValueError("weight_prior must be > 0")
    x, resp = _init_resp(segments, k_max, seed)
    n, d = x.shape

    m0 = x.mean(axis=0)
    beta0 = 1.0
    a0 = 1.0
    b0 = np.maximum(x.var(axis=0), VAR_FLOOR) * a0

    trace = []
    alpha = beta = m = a = b = None
    for _ in range(max_iter):
        alpha, beta, m, a, b = _vb_m_step(x, resp, alpha0, beta0, m0, a0, b0)
        resp, e_ln_pi, e_ln_tau, e_tau = _vb_e_step(x, alpha, beta, m, a, b)
        bound = _elbo(x, resp, alpha, beta, m, a, b,
                      alpha0, beta0, m0, a0, b0,
                      e_ln_pi, e_ln_tau, e_tau)
        trace.append(bound)
        if len(trace) > 1 and abs(trace[-1] - trace[-2]) < tol * (1 + abs(bound)):
            break

    nk = resp.sum(axis=0)
    mass = nk / n
    keep = np.flatnonzero(mass >= prune_eps)
    if keep.size == 0:
        keep = np.array([int(np.argmax(mass))])
    raw = np.argmax(resp[:, keep], axis=1)
    labels = tuple(int(v) for v in raw)
    k_eff = keep.size
    kept_w = nk[keep] / nk[keep].sum()

    model = ClusterModel(
        method="bgmm",
        n_clusters=k_eff,
        params={"weights": [float(w) for w in kept_w],
                "means": [[float(v) for v in m[i]] for i in keep],
                "variances": [[float(v) for v in (b[i] / a[i])] for i in keep],
                "weight_prior": float(alpha0)},
        trace=trace,
    )
    return model, Labeling(labels, k_eff).with_recordings(segments)


def _vb_m_step(x, resp, alpha0, beta0, m0, a0, b0):
    nk = resp.sum(axis=0)
    safe = np.maximum(nk, 1e-12)
    xbar = (resp.T @ x) / safe[:, None]
    sq = (resp.T @ (x ** 2)) / safe[:, None]
    s = np.maximum(sq - xbar ** 2, 0.0)

    alpha = alpha0 + nk
    beta = beta0 + nk
    m = (beta0 * m0[None, :] + nk[:, None] * xbar) / beta[:, None]
    a = a0 + nk / 2.0
    b = b0[None, :] + 0.5 * (nk[:, None] * s
                             + (beta0 * nk / beta)[:, None] * (xbar - m0) ** 2)
    return alpha, beta, m, a, b


def _vb_e_step(x, alpha, beta, m, a, b):
    d = x.shape[1]
    e_ln_pi = digamma(alpha) - digamma(alpha.sum())
    e_ln_tau = digamma(a)[:, None] - np.log(b)
    e_tau = a[:, None] / b
    diff2 = (x[:, None, :] - m[None, :, :]) ** 2
    quad = (diff2 * e_tau[None, :, :]).sum(axis=2)
    ln_rho = (e_ln_pi[None, :] + 0.5 * e_ln_tau.sum(axis=1)[None, :]
              - 0.5 * d * np.log(2 * np.pi)
              - 0.5 * d / beta[None, :]
              - 0.5 * quad)
    resp = np.exp(ln_rho - logsumexp(ln_rho, axis=1)[:, None])
    return resp, e_ln_pi, e_ln_tau, e_tau


def _elbo(x, resp, alpha, beta, m, a, b, alpha0, beta0, m0, a0, b0,
          e_ln_pi, e_ln_tau, e_tau):
    n, d = x.shape
    k = alpha.shape[0]
    nk = resp.sum(axis=0)
    safe = np.maximum(nk, 1e-12)
    xbar = (resp.T @ x) / safe[:, None]
    sq = (resp.T @ (x ** 2)) / safe[:, None]
    s = np.maximum(sq - xbar ** 2, 0.0)

    t_lik = float(np.sum(
        nk * (-0.5 * d * np.log(2 * np.pi) + 0.5 * e_ln_tau.sum(axis=1))
        - 0.5 * nk * d / beta
        - 0.5 * (e_tau * (nk[:, None] * s
                          + nk[:, None] * (xbar - m) ** 2)).sum(axis=1)))
    t_z = float((nk * e_ln_pi).sum())
    t_pi = float(gammaln(k * alpha0) - k * gammaln(alpha0)
                 + (alpha0 - 1) * e_ln_pi.sum())
    t_mt = float(np.sum(
        0.5 * (np.log(beta0) - np.log(2 * np.pi)) + 0.5 * e_ln_tau
        - 0.5 * beta0 * (1.0 / beta[:, None] + e_tau * (m - m0) ** 2)
        + a0 * np.log(b0)[None, :] - gammaln(a0)
        + (a0 - 1) * e_ln_tau - b0[None, :] * e_tau))
    with np.errstate(divide="ignore", invalid="ignore"):
        q_z = float(np.sum(np.where(resp > 0, resp * np.log(resp), 0.0)))
    q_pi = float(gammaln(alpha.sum()) - gammaln(alpha).sum()
                 + ((alpha - 1) * e_ln_pi).sum())
    q_mt = float(np.sum(
        0.5 * (np.log(beta)[:, None] - np.log(2 * np.pi)) + 0.5 * e_ln_tau - 0.5
        + np.log(b) + ((a - 1) * digamma(a) - gammaln(a) - a)[:, None]))
    return t_lik + t_z + t_pi + t_mt - q_z - q_pi - q_mt
