"""Small digraph routines on adjacency lists (nodes are 0..n-1)."""

from __future__ import annotations

from collections import deque
from math import gcd
from typing import Sequence

Adjacency = Sequence[Sequence[int]]


def reachable(adj: Adjacency, start: int) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def reverse(adj: Adjacency) -> list[list[int]]:
    rev: list[list[int]] = [[] for _ in adj]
    for u, succ in enumerate(adj):
        for v in succ:
            rev[v].append(u)
    return rev


def is_strongly_connected(adj: Adjacency) -> bool:
    n = len(adj)
    if n == 0:
        return False
    return len(reachable(adj, 0)) == n and len(reachable(reverse(adj), 0)) == n


def component_of(adj: Adjacency, x: int) -> set[int]:
    return reachable(adj, x) & reachable(reverse(adj), x)


def period(adj: Adjacency, x: int) -> int | None:
    """gcd of closed-walk lengths through ``x``; None if no cycle passes through x.

    Uses BFS depths inside the strongly connected component of ``x``: the period
    is the gcd of ``depth(u) + 1 - depth(v)`` over the component's edges.
    """
    comp = component_of(adj, x)
    depth = {x: 0}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v in comp and v not in depth:
                depth[v] = depth[u] + 1
                queue.append(v)
    g = 0
    for u in comp:
        for v in adj[u]:
            if v in comp:
                g = gcd(g, abs(depth[u] + 1 - depth[v]))
    return g or None
