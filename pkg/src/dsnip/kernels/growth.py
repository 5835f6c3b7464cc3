"""Greedy connected growth for illustrative snippets.

Starting from a seed triple, repeatedly add the incident triple whose
inclusion maximizes the snippet score, until the size budget is spent or
no candidate remains. Zero-gain additions are allowed; ties go to the
smaller triple id. Coverage sums are maintained incrementally, so each
step costs O(frontier).

Both backends run the identical sequence of float operations; the final
score is recomputed canonically by the caller either way.
"""
from __future__ import annotations

import numpy as np

from . import HAS_NUMBA, resolve_backend

if HAS_NUMBA:
    from numba import njit


def _score(cc, pc, ce, tot_class, tot_prop, top_pr, alpha, beta, gamma):
    s = 0.0
    if tot_class > 0.0:
        s += alpha * (cc / tot_class)
    if tot_prop > 0.0:
        s += beta * (pc / tot_prop)
    if top_pr > 0.0:
        c = ce / top_pr
        if c > 1.0:
            c = 1.0
        s += gamma * c
    return s


def _grow_python(indptr, adj_triple, subj, obj, class_of, pred_of,
                 class_freq, prop_freq, pr, tot_class, tot_prop, top_pr,
                 alpha, beta, gamma, k, seed):
    n_triples = subj.shape[0]
    in_snip = np.zeros(n_triples, np.bool_)
    in_cand = np.zeros(n_triples, np.bool_)
    in_node = np.zeros(pr.shape[0], np.bool_)
    cov_class = np.zeros(class_freq.shape[0], np.bool_)
    cov_pred = np.zeros(prop_freq.shape[0], np.bool_)
    out = np.empty(k, np.int64)
    count = 0
    cand: list[int] = []
    cc = pc = ce = 0.0

    def add(t: int):
        nonlocal cc, pc, ce, count
        in_snip[t] = True
        out[count] = t
        count += 1
        ci = class_of[t]
        if ci >= 0 and not cov_class[ci]:
            cov_class[ci] = True
            cc += class_freq[ci]
        pi = pred_of[t]
        if not cov_pred[pi]:
            cov_pred[pi] = True
            pc += prop_freq[pi]
        for v in (int(subj[t]), int(obj[t])):
            if not in_node[v]:
                in_node[v] = True
                ce += pr[v]
                for e in range(int(indptr[v]), int(indptr[v + 1])):
                    t2 = int(adj_triple[e])
                    if not in_cand[t2] and not in_snip[t2]:
                        in_cand[t2] = True
                        cand.append(t2)

    add(int(seed))
    while count < k:
        best_t = -1
        best_s = -1.0
        for t in cand:
            if in_snip[t]:
                continue
            cc2 = cc
            ci = class_of[t]
            if ci >= 0 and not cov_class[ci]:
                cc2 += class_freq[ci]
            pc2 = pc
            pi = pred_of[t]
            if not cov_pred[pi]:
                pc2 += prop_freq[pi]
            ce2 = ce
            s = int(subj[t])
            o = int(obj[t])
            if not in_node[s]:
                ce2 += pr[s]
            if o != s and not in_node[o]:
                ce2 += pr[o]
            ns = _score(cc2, pc2, ce2, tot_class, tot_prop, top_pr,
                        alpha, beta, gamma)
            if ns > best_s or (ns == best_s and (best_t < 0 or t < best_t)):
                best_s = ns
                best_t = t
        if best_t < 0:
            break
        add(best_t)
    return out[:count].copy()


if HAS_NUMBA:

    @njit(cache=True)
    def _grow_numba(indptr, adj_triple, subj, obj, class_of, pred_of,
                    class_freq, prop_freq, pr, tot_class, tot_prop, top_pr,
                    alpha, beta, gamma, k, seed):  # pragma: no cover - numba
        n_triples = subj.shape[0]
        in_snip = np.zeros(n_triples, np.bool_)
        in_cand = np.zeros(n_triples, np.bool_)
        in_node = np.zeros(pr.shape[0], np.bool_)
        cov_class = np.zeros(class_freq.shape[0], np.bool_)
        cov_pred = np.zeros(prop_freq.shape[0], np.bool_)
        out = np.empty(k, np.int64)
        count = 0
        cand = np.empty(64, np.int64)
        clen = 0
        cc = 0.0
        pc = 0.0
        ce = 0.0

        nxt = seed
        while True:
            t = nxt
            in_snip[t] = True
            out[count] = t
            count += 1
            ci = class_of[t]
            if ci >= 0 and not cov_class[ci]:
                cov_class[ci] = True
                cc += class_freq[ci]
            pi = pred_of[t]
            if not cov_pred[pi]:
                cov_pred[pi] = True
                pc += prop_freq[pi]
            for idx in range(2):
                v = subj[t] if idx == 0 else obj[t]
                if not in_node[v]:
                    in_node[v] = True
                    ce += pr[v]
                    for e in range(indptr[v], indptr[v + 1]):
                        t2 = adj_triple[e]
                        if not in_cand[t2] and not in_snip[t2]:
                            in_cand[t2] = True
                            if clen == cand.shape[0]:
                                nc = np.empty(cand.shape[0] * 2, np.int64)
                                nc[:clen] = cand
                                cand = nc
                            cand[clen] = t2
                            clen += 1
            if count >= k:
                break
            best_t = np.int64(-1)
            best_s = -1.0
            for j in range(clen):
                t2 = cand[j]
                if in_snip[t2]:
                    continue
                cc2 = cc
                ci = class_of[t2]
                if ci >= 0 and not cov_class[ci]:
                    cc2 += class_freq[ci]
                pc2 = pc
                pi = pred_of[t2]
                if not cov_pred[pi]:
                    pc2 += prop_freq[pi]
                ce2 = ce
                s = subj[t2]
                o = obj[t2]
                if not in_node[s]:
                    ce2 += pr[s]
                if o != s and not in_node[o]:
                    ce2 += pr[o]
                ns = 0.0
                if tot_class > 0.0:
                    ns += alpha * (cc2 / tot_class)
                if tot_prop > 0.0:
                    ns += beta * (pc2 / tot_prop)
                if top_pr > 0.0:
                    c = ce2 / top_pr
                    if c > 1.0:
                        c = 1.0
                    ns += gamma * c
                if ns > best_s or (ns == best_s and (best_t < 0 or t2 < best_t)):
                    best_s = ns
                    best_t = t2
            if best_t < 0:
                break
            nxt = best_t
        return out[:count].copy()


def grow(indptr, adj_triple, subj, obj, class_of, pred_of,
         class_freq, prop_freq, pr, tot_class, tot_prop, top_pr,
         alpha, beta, gamma, k, seed, backend: str | None = None):
    """Grow one snippet from a seed triple; returns triple ids in pick order."""
    if resolve_backend(backend) == "numpy":
        return _grow_python(indptr, adj_triple, subj, obj, class_of, pred_of,
                            class_freq, prop_freq, pr, tot_class, tot_prop,
                            top_pr, alpha, beta, gamma, k, seed)
    return _grow_numba(indptr, adj_triple, subj, obj, class_of, pred_of,
                       class_freq, prop_freq, pr,
                       float(tot_class), float(tot_prop), float(top_pr),
                       float(alpha), float(beta), float(gamma),
                       np.int64(k), np.int64(seed))
