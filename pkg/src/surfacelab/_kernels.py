"""Compiled inner loops for the homomorphism sampler.

The kernels never draw random numbers themselves: they consume a buffer of
uniforms produced by the caller's Philox generator, so results depend only
on the seed.  Each kernel returns how many uniforms it used, or -1 if the
buffer ran out before a proposal was accepted.
"""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _shuffle_into(p, U, pos):
    n = p.shape[0]
    for i in range(n):
        p[i] = i
    for i in range(n - 1, 0, -1):
        j = int(U[pos] * (i + 1))
        if j > i:
            j = i
        pos += 1
        t = p[i]
        p[i] = p[j]
        p[j] = t
    return pos


@njit(cache=True)
def _hist_matches(p, target, seen, hist):
    n = p.shape[0]
    for i in range(n):
        seen[i] = False
    for k in range(n + 1):
        hist[k] = 0
    for i in range(n):
        if not seen[i]:
            L = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = p[j]
                L += 1
            hist[L] += L
            if hist[L] > target[L]:
                return False
    for k in range(n + 1):
        if hist[k] != target[k]:
            return False
    return True


@njit(cache=True)
def pair_route(U, n, target, c, d):
    """Uniform pairs (c, d) until [c, d] has the target cycle histogram."""
    need = 2 * (n - 1)
    ci = np.empty(n, np.int64)
    di = np.empty(n, np.int64)
    comm = np.empty(n, np.int64)
    seen = np.empty(n, np.bool_)
    hist = np.empty(n + 1, np.int64)
    pos = 0
    tries = 0
    while pos + need <= U.shape[0]:
        pos = _shuffle_into(c, U, pos)
        pos = _shuffle_into(d, U, pos)
        tries += 1
        for i in range(n):
            ci[c[i]] = i
            di[d[i]] = i
        # left to right: c, then d, then c^-1, then d^-1
        for i in range(n):
            comm[i] = di[ci[d[c[i]]]]
        if _hist_matches(comm, target, seen, hist):
            return pos, tries
    return -1, tries


@njit(cache=True)
def class_route(U, rep, tau, target, x, y):
    """x uniform in the class of rep until x*tau lies in the same class."""
    n = rep.shape[0]
    need = n - 1
    h = np.empty(n, np.int64)
    hi = np.empty(n, np.int64)
    seen = np.empty(n, np.bool_)
    hist = np.empty(n + 1, np.int64)
    pos = 0
    tries = 0
    while pos + need <= U.shape[0]:
        pos = _shuffle_into(h, U, pos)
        tries += 1
        for i in range(n):
            hi[h[i]] = i
        # x = h rep h^-1: apply h, then rep, then h^-1
        for i in range(n):
            x[i] = hi[rep[h[i]]]
        for i in range(n):
            y[i] = tau[x[i]]
        if _hist_matches(y, target, seen, hist):
            return pos, tries
    return -1, tries


@njit(cache=True)
def commutator_type_keys(A, B):
    """Cycle-type key of [a, b] for every a in A, b in B.

    The key is sum over k of (number of k-cycles) * (n+1)^(k-1).
    """
    na, n = A.shape
    nb = B.shape[0]
    out = np.empty(na * nb, np.int64)
    ai = np.empty(n, np.int64)
    bi = np.empty(n, np.int64)
    comm = np.empty(n, np.int64)
    seen = np.empty(n, np.bool_)
    base = np.empty(n + 1, np.int64)
    base[1] = 1
    for k in range(2, n + 1):
        base[k] = base[k - 1] * (n + 1)
    for x in range(na):
        for i in range(n):
            ai[A[x, i]] = i
        for y in range(nb):
            for i in range(n):
                bi[B[y, i]] = i
            for i in range(n):
                comm[i] = bi[ai[B[y, A[x, i]]]]
                seen[i] = False
            key = 0
            for i in range(n):
                if not seen[i]:
                    L = 0
                    j = i
                    while not seen[j]:
                        seen[j] = True
                        j = comm[j]
                        L += 1
                    key += base[L]
            out[x * nb + y] = key
    return out
