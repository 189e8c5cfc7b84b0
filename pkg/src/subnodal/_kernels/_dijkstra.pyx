# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled multi-source Dijkstra over CSR graphs (hot kernel).

Binary heap with lazy deletion; relaxes an existing distance array in place so
repeated calls implement incremental coverings cheaply.
"""

import numpy as np

cimport numpy as cnp
from libc.stdlib cimport free, malloc

cnp.import_array()


cdef struct Heap:
    double* keys
    long* nodes
    Py_ssize_t size
    Py_ssize_t cap


cdef inline int heap_push(Heap* h, double key, long node) except -1:
    cdef Py_ssize_t i, parent
    cdef double* nk
    cdef long* nn
    if h.size == h.cap:
        h.cap *= 2
        nk = <double*> malloc(h.cap * sizeof(double))
        nn = <long*> malloc(h.cap * sizeof(long))
        if nk == NULL or nn == NULL:
            raise MemoryError()
        for i in range(h.size):
            nk[i] = h.keys[i]
            nn[i] = h.nodes[i]
        free(h.keys)
        free(h.nodes)
        h.keys = nk
        h.nodes = nn
    i = h.size
    h.size += 1
    h.keys[i] = key
    h.nodes[i] = node
    while i > 0:
        parent = (i - 1) >> 1
        if h.keys[parent] <= h.keys[i]:
            break
        h.keys[parent], h.keys[i] = h.keys[i], h.keys[parent]
        h.nodes[parent], h.nodes[i] = h.nodes[i], h.nodes[parent]
        i = parent
    return 0


cdef inline void heap_pop(Heap* h, double* key, long* node):
    cdef Py_ssize_t i = 0, child
    key[0] = h.keys[0]
    node[0] = h.nodes[0]
    h.size -= 1
    h.keys[0] = h.keys[h.size]
    h.nodes[0] = h.nodes[h.size]
    while True:
        child = 2 * i + 1
        if child >= h.size:
            break
        if child + 1 < h.size and h.keys[child + 1] < h.keys[child]:
            child += 1
        if h.keys[i] <= h.keys[child]:
            break
        h.keys[i], h.keys[child] = h.keys[child], h.keys[i]
        h.nodes[i], h.nodes[child] = h.nodes[child], h.nodes[i]
        i = child


def dijkstra_update(
    cnp.int64_t[::1] indptr,
    cnp.int32_t[::1] indices,
    cnp.float64_t[::1] costs,
    cnp.float64_t[::1] dist,
    cnp.int64_t[::1] seed_nodes,
    cnp.float64_t[::1] seed_costs,
    double trunc=np.inf,
):
    """Relax ``dist`` in place from the seeds; returns the number of pops."""
    cdef Heap h
    h.cap = 1024
    h.size = 0
    h.keys = <double*> malloc(h.cap * sizeof(double))
    h.nodes = <long*> malloc(h.cap * sizeof(long))
    if h.keys == NULL or h.nodes == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, e
    cdef long u, v
    cdef double d, nd
    cdef long pops = 0
    try:
        for i in range(seed_nodes.shape[0]):
            u = seed_nodes[i]
            d = seed_costs[i]
            if d < dist[u]:
                dist[u] = d
                heap_push(&h, d, u)
        while h.size > 0:
            heap_pop(&h, &d, &u)
            if d > dist[u]:
                continue
            if d > trunc:
                break
            pops += 1
            for e in range(indptr[u], indptr[u + 1]):
                v = indices[e]
                nd = d + costs[e]
                if nd < dist[v]:
                    dist[v] = nd
                    heap_push(&h, nd, v)
    finally:
        free(h.keys)
        free(h.nodes)
    return pops
