"""Best-first dynamic program for minimum-weight group-covering trees.

State (v, X): the cheapest known tree rooted at node v touching the group
set X. Seeds are (v, {g}) at weight 0 for every v in group g. A popped
state expands by growing one incident edge and by merging with already
settled states at the same root over disjoint group sets. States pop in
nondecreasing (weight, root id, bitset) order from a lazy-deletion heap,
so the first popped full-cover state is optimal. Node and triple ids are
lexicographic ranks, which makes the tie order the term order.

Both backends implement the identical sequence of float operations, so
they return identical trees.
"""
from __future__ import annotations

import heapq

import numpy as np

from . import HAS_NUMBA, resolve_backend

if HAS_NUMBA:
    from numba import njit, types
    from numba.typed import Dict

INF = float("inf")
_SEED, _GROW, _MERGE = 0, 1, 2
_BASE = 1 << 50  # parent packing: kind * _BASE + payload


def _solve_python(indptr, adj_node, adj_triple, weights, subj, obj,
                  group_offsets, group_nodes, k, trace=None):
    full = (1 << k) - 1
    best: dict[int, float] = {}
    parent: dict[int, int] = {}
    settled: set[int] = set()
    heap: list[tuple[float, int, int]] = []
    for g in range(k):
        bit = 1 << g
        for j in range(int(group_offsets[g]), int(group_offsets[g + 1])):
            v = int(group_nodes[j])
            kk = (v << k) | bit
            if kk not in best:
                best[kk] = 0.0
                parent[kk] = _SEED * _BASE
                heapq.heappush(heap, (0.0, v, bit))

    final_key = -1
    while heap:
        w, v, mask = heapq.heappop(heap)
        kk = (v << k) | mask
        if kk in settled or w > best[kk]:
            continue
        settled.add(kk)
        if trace is not None:
            trace(w, v, mask)
        if mask == full:
            final_key = kk
            break
        for e in range(int(indptr[v]), int(indptr[v + 1])):
            u = int(adj_node[e])
            t = int(adj_triple[e])
            nw = w + float(weights[t])
            uk = (u << k) | mask
            if nw < best.get(uk, INF):
                best[uk] = nw
                parent[uk] = _GROW * _BASE + t
                heapq.heappush(heap, (nw, u, mask))
        comp = full ^ mask
        sub = comp
        while sub:
            ok = (v << k) | sub
            if ok in settled:
                nw = w + best[ok]
                mk = (v << k) | (mask | sub)
                if nw < best.get(mk, INF):
                    best[mk] = nw
                    parent[mk] = _MERGE * _BASE + sub
                    heapq.heappush(heap, (nw, v, mask | sub))
            sub = (sub - 1) & comp

    if final_key < 0:
        return False, 0.0, np.empty(0, np.int64), np.full(k, -1, np.int64)
    tree: list[int] = []
    witness = np.full(k, -1, np.int64)
    stack = [final_key]
    while stack:
        cur = stack.pop()
        v = cur >> k
        mask = cur & full
        packed = parent[cur]
        kind, payload = divmod(packed, _BASE)
        if kind == _SEED:
            g = mask.bit_length() - 1
            witness[g] = v
        elif kind == _GROW:
            tree.append(payload)
            u = int(subj[payload]) + int(obj[payload]) - v
            stack.append((u << k) | mask)
        else:
            stack.append((v << k) | payload)
            stack.append((v << k) | (mask ^ payload))
    return True, best[final_key], np.array(sorted(tree), np.int64), witness


if HAS_NUMBA:

    @njit(cache=True)
    def _heap_push(hw, hv, hm, size, w, v, m):  # pragma: no cover - numba
        i = size
        hw[i] = w
        hv[i] = v
        hm[i] = m
        while i > 0:
            p = (i - 1) >> 1
            if hw[i] < hw[p] or (hw[i] == hw[p] and
                                 (hv[i] < hv[p] or (hv[i] == hv[p] and hm[i] < hm[p]))):
                hw[i], hw[p] = hw[p], hw[i]
                hv[i], hv[p] = hv[p], hv[i]
                hm[i], hm[p] = hm[p], hm[i]
                i = p
            else:
                break
        return size + 1

    @njit(cache=True)
    def _heap_pop(hw, hv, hm, size):  # pragma: no cover - numba
        w = hw[0]
        v = hv[0]
        m = hm[0]
        size -= 1
        if size > 0:
            hw[0] = hw[size]
            hv[0] = hv[size]
            hm[0] = hm[size]
            i = 0
            while True:
                l = 2 * i + 1
                r = l + 1
                s = i
                if l < size and (hw[l] < hw[s] or (hw[l] == hw[s] and
                                 (hv[l] < hv[s] or (hv[l] == hv[s] and hm[l] < hm[s])))):
                    s = l
                if r < size and (hw[r] < hw[s] or (hw[r] == hw[s] and
                                 (hv[r] < hv[s] or (hv[r] == hv[s] and hm[r] < hm[s])))):
                    s = r
                if s == i:
                    break
                hw[i], hw[s] = hw[s], hw[i]
                hv[i], hv[s] = hv[s], hv[i]
                hm[i], hm[s] = hm[s], hm[i]
                i = s
        return w, v, m, size

    @njit(cache=True)
    def _solve_numba(indptr, adj_node, adj_triple, weights, subj, obj,
                     group_offsets, group_nodes, k):  # pragma: no cover - numba
        one = np.int64(1)
        full = (one << k) - 1
        base = np.int64(_BASE)
        best = Dict.empty(key_type=types.int64, value_type=types.float64)
        parent = Dict.empty(key_type=types.int64, value_type=types.int64)
        settled = Dict.empty(key_type=types.int64, value_type=types.int64)
        cap = 1024
        hw = np.empty(cap, np.float64)
        hv = np.empty(cap, np.int64)
        hm = np.empty(cap, np.int64)
        size = 0
        for g in range(k):
            bit = one << g
            for j in range(group_offsets[g], group_offsets[g + 1]):
                v = group_nodes[j]
                kk = (v << k) | bit
                if kk not in best:
                    best[kk] = 0.0
                    parent[kk] = np.int64(0)
                    if size == hw.shape[0]:
                        cap = hw.shape[0] * 2
                        nhw = np.empty(cap, np.float64)
                        nhw[:size] = hw
                        hw = nhw
                        nhv = np.empty(cap, np.int64)
                        nhv[:size] = hv
                        hv = nhv
                        nhm = np.empty(cap, np.int64)
                        nhm[:size] = hm
                        hm = nhm
                    size = _heap_push(hw, hv, hm, size, 0.0, v, bit)

        found = False
        final_key = np.int64(-1)
        final_w = 0.0
        while size > 0:
            w, v, mask, size = _heap_pop(hw, hv, hm, size)
            kk = (v << k) | mask
            if kk in settled:
                continue
            if w > best[kk]:
                continue
            settled[kk] = 1
            if mask == full:
                found = True
                final_key = kk
                final_w = w
                break
            for e in range(indptr[v], indptr[v + 1]):
                u = adj_node[e]
                t = adj_triple[e]
                nw = w + weights[t]
                uk = (u << k) | mask
                old = best[uk] if uk in best else np.inf
                if nw < old:
                    best[uk] = nw
                    parent[uk] = base + t
                    if size == hw.shape[0]:
                        cap = hw.shape[0] * 2
                        nhw = np.empty(cap, np.float64)
                        nhw[:size] = hw
                        hw = nhw
                        nhv = np.empty(cap, np.int64)
                        nhv[:size] = hv
                        hv = nhv
                        nhm = np.empty(cap, np.int64)
                        nhm[:size] = hm
                        hm = nhm
                    size = _heap_push(hw, hv, hm, size, nw, u, mask)
            comp = full ^ mask
            sub = comp
            while sub > 0:
                ok = (v << k) | sub
                if ok in settled:
                    nw = w + best[ok]
                    mk = (v << k) | (mask | sub)
                    old = best[mk] if mk in best else np.inf
                    if nw < old:
                        best[mk] = nw
                        parent[mk] = 2 * base + sub
                        if size == hw.shape[0]:
                            cap = hw.shape[0] * 2
                            nhw = np.empty(cap, np.float64)
                            nhw[:size] = hw
                            hw = nhw
                            nhv = np.empty(cap, np.int64)
                            nhv[:size] = hv
                            hv = nhv
                            nhm = np.empty(cap, np.int64)
                            nhm[:size] = hm
                            hm = nhm
                        size = _heap_push(hw, hv, hm, size, nw, v, mask | sub)
                sub = (sub - 1) & comp

        tree = np.empty(weights.shape[0], np.int64)
        tcount = 0
        witness = np.full(k, -1, np.int64)
        if not found:
            return False, 0.0, tree[:0].copy(), witness
        stack = np.empty(256, np.int64)
        stack[0] = final_key
        sp = 1
        while sp > 0:
            sp -= 1
            cur = stack[sp]
            v = cur >> k
            mask = cur & full
            packed = parent[cur]
            kind = packed // base
            payload = packed % base
            if sp + 2 > stack.shape[0]:
                ns = np.empty(stack.shape[0] * 2, np.int64)
                ns[:sp] = stack[:sp]
                stack = ns
            if kind == 0:
                g = 0
                while (mask >> g) & 1 == 0:
                    g += 1
                witness[g] = v
            elif kind == 1:
                tree[tcount] = payload
                tcount += 1
                u = subj[payload] + obj[payload] - v
                stack[sp] = (u << k) | mask
                sp += 1
            else:
                stack[sp] = (v << k) | payload
                sp += 1
                stack[sp] = (v << k) | (mask ^ payload)
                sp += 1
        out = np.sort(tree[:tcount])
        return True, final_w, out, witness


def solve_states(indptr, adj_node, adj_triple, weights, subj, obj,
                 group_offsets, group_nodes, k,
                 backend: str | None = None, trace=None):
    """Run the DP; returns (found, popped weight, sorted tree triple ids, witness ids).

    A trace callback receives every settled pop as ``(weight, node_id, bitset)``
    and forces the Python path, which emits events; the numba kernel does not.
    """
    if trace is not None or resolve_backend(backend) == "numpy":
        return _solve_python(indptr, adj_node, adj_triple, weights, subj, obj,
                             group_offsets, group_nodes, k, trace=trace)
    return _solve_numba(indptr, adj_node, adj_triple, weights, subj, obj,
                        group_offsets, group_nodes, np.int64(k))
