"""Pure Python minimum-weight B-path label pass.

Same contract as the compiled kernel in _bpath.pyx: given the automaton
as a flat hypergraph, compute for every state the lexicographic minimum
(cost, node count) over derivations rooted at that state.  A transition
relaxes its head once all tail occurrences are finalized.
"""

import heapq

INF = 1 << 62


def solve(n_states, seed_states, seed_costs,
          t_weight, t_head, t_tail_start, t_tails,
          occ_start, occ_trans):
    cost = [INF] * n_states
    nodes = [INF] * n_states
    n_trans = len(t_weight)
    remaining = [
        t_tail_start[i + 1] - t_tail_start[i] for i in range(n_trans)
    ]
    acc_cost = [0] * n_trans
    acc_nodes = [0] * n_trans
    done = [False] * n_states

    heap = []
    # nullary transitions need no tails and relax immediately
    for t in range(n_trans):
        if remaining[t] == 0:
            h = t_head[t]
            nc, nk = t_weight[t], 1
            if (nc, nk) < (cost[h], nodes[h]):
                cost[h], nodes[h] = nc, nk
                heapq.heappush(heap, (nc, nk, h))
    for s, c in zip(seed_states, seed_costs):
        if (c, 1) < (cost[s], nodes[s]):
            cost[s], nodes[s] = c, 1
            heapq.heappush(heap, (c, 1, s))

    while heap:
        c, k, s = heapq.heappop(heap)
        if done[s] or (c, k) != (cost[s], nodes[s]):
            continue
        done[s] = True
        for oi in range(occ_start[s], occ_start[s + 1]):
            t = occ_trans[oi]
            acc_cost[t] += c
            acc_nodes[t] += k
            remaining[t] -= 1
            if remaining[t] == 0:
                h = t_head[t]
                nc = acc_cost[t] + t_weight[t]
                nk = acc_nodes[t] + 1
                if (nc, nk) < (cost[h], nodes[h]):
                    cost[h], nodes[h] = nc, nk
                    heapq.heappush(heap, (nc, nk, h))
    return cost, nodes
