# cython: boundscheck=False, wraparound=False
"""Compiled minimum-weight B-path label pass.

Mirror of _bpath_py.solve; see that module for the contract.  States are
labelled with the lexicographic minimum (cost, node count); the heap is
a manual binary heap over packed (cost, nodes, state) triples.
"""

from libc.stdlib cimport free, malloc

cdef long long INF = <long long>1 << 62


cdef struct HeapItem:
    long long cost
    long long nodes
    int state


cdef inline bint _less(HeapItem a, HeapItem b) noexcept:
    if a.cost != b.cost:
        return a.cost < b.cost
    return a.nodes < b.nodes


cdef void _push(HeapItem* heap, int* size, HeapItem item) noexcept:
    cdef int i = size[0]
    cdef int parent
    heap[i] = item
    size[0] += 1
    while i > 0:
        parent = (i - 1) >> 1
        if _less(heap[i], heap[parent]):
            heap[i], heap[parent] = heap[parent], heap[i]
            i = parent
        else:
            break


cdef HeapItem _pop(HeapItem* heap, int* size) noexcept:
    cdef HeapItem top = heap[0]
    cdef int i = 0, child
    size[0] -= 1
    heap[0] = heap[size[0]]
    while True:
        child = 2 * i + 1
        if child >= size[0]:
            break
        if child + 1 < size[0] and _less(heap[child + 1], heap[child]):
            child += 1
        if _less(heap[child], heap[i]):
            heap[i], heap[child] = heap[child], heap[i]
            i = child
        else:
            break
    return top


def solve(int n_states, seed_states, seed_costs,
          t_weight, t_head, t_tail_start, t_tails,
          occ_start, occ_trans):
    cdef int n_trans = len(t_weight)
    cdef int n_occ = len(occ_trans)
    cdef int i, s, t, h, oi
    cdef long long c, k, nc, nk

    cdef long long* cost = <long long*>malloc(n_states * sizeof(long long))
    cdef long long* nodes = <long long*>malloc(n_states * sizeof(long long))
    cdef char* done = <char*>malloc(n_states if n_states else 1)
    cdef long long* w = <long long*>malloc((n_trans or 1) * sizeof(long long))
    cdef int* head = <int*>malloc((n_trans or 1) * sizeof(int))
    cdef int* remaining = <int*>malloc((n_trans or 1) * sizeof(int))
    cdef long long* acc_cost = <long long*>malloc((n_trans or 1) * sizeof(long long))
    cdef long long* acc_nodes = <long long*>malloc((n_trans or 1) * sizeof(long long))
    cdef int* ostart = <int*>malloc((n_states + 1) * sizeof(int))
    cdef int* otrans = <int*>malloc((n_occ or 1) * sizeof(int))
    # every push is guarded by a strict improvement and each transition
    # relaxes at most once, bounding the total number of pushes
    cdef int cap = n_states + n_occ + n_trans + 2
    cdef HeapItem* heap = <HeapItem*>malloc(cap * sizeof(HeapItem))
    cdef int heap_size = 0
    cdef HeapItem item

    try:
        for i in range(n_states):
            cost[i] = INF
            nodes[i] = INF
            done[i] = 0
        for i in range(n_trans):
            w[i] = t_weight[i]
            head[i] = t_head[i]
            remaining[i] = t_tail_start[i + 1] - t_tail_start[i]
            acc_cost[i] = 0
            acc_nodes[i] = 0
        for i in range(n_states + 1):
            ostart[i] = occ_start[i]
        for i in range(n_occ):
            otrans[i] = occ_trans[i]

        # nullary transitions need no tails and relax immediately
        for t in range(n_trans):
            if remaining[t] == 0:
                h = head[t]
                if w[t] < cost[h] or (w[t] == cost[h] and 1 < nodes[h]):
                    cost[h] = w[t]
                    nodes[h] = 1
                    item.cost = w[t]
                    item.nodes = 1
                    item.state = h
                    _push(heap, &heap_size, item)

        for i in range(len(seed_states)):
            s = seed_states[i]
            c = seed_costs[i]
            if c < cost[s] or (c == cost[s] and 1 < nodes[s]):
                cost[s] = c
                nodes[s] = 1
                item.cost = c
                item.nodes = 1
                item.state = s
                _push(heap, &heap_size, item)

        while heap_size > 0:
            item = _pop(heap, &heap_size)
            s = item.state
            if done[s] or item.cost != cost[s] or item.nodes != nodes[s]:
                continue
            done[s] = 1
            c = item.cost
            k = item.nodes
            for oi in range(ostart[s], ostart[s + 1]):
                t = otrans[oi]
                acc_cost[t] += c
                acc_nodes[t] += k
                remaining[t] -= 1
                if remaining[t] == 0:
                    h = head[t]
                    nc = acc_cost[t] + w[t]
                    nk = acc_nodes[t] + 1
                    if nc < cost[h] or (nc == cost[h] and nk < nodes[h]):
                        cost[h] = nc
                        nodes[h] = nk
                        item.cost = nc
                        item.nodes = nk
                        item.state = h
                        _push(heap, &heap_size, item)

        out_cost = [cost[i] for i in range(n_states)]
        out_nodes = [nodes[i] for i in range(n_states)]
        return out_cost, out_nodes
    finally:
        free(cost); free(nodes); free(done); free(w); free(head)
        free(remaining); free(acc_cost); free(acc_nodes)
        free(ostart); free(otrans); free(heap)
