"""Integer maximum flow (Dinic) and bipartite b-matching helpers."""

from __future__ import annotations

from collections import deque

INF = None  # marker for uncapacitated arcs


class FlowNetwork:
    def __init__(self, size: int):
        self.size = size
        self.head: list[list[int]] = [[] for _ in range(size)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_arc(self, u: int, v: int, cap: int | None) -> int:
        """Arc u->v; ``None`` means infinite.  Returns the arc index."""
        if cap is None:
            cap = -1
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(cap)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)
        return len(self.to) - 2

    def _finalize(self) -> None:
        big = sum(c for c in self.cap if c > 0) + 1
        self.cap = [big if c < 0 else c for c in self.cap]

    def max_flow(self, s: int, t: int) -> int:
        self._finalize()
        self.original = list(self.cap)
        total = 0
        while True:
            level = [-1] * self.size
            level[s] = 0
            q = deque([s])
            while q:
                u = q.popleft()
                for a in self.head[u]:
                    if self.cap[a] > 0 and level[self.to[a]] < 0:
                        level[self.to[a]] = level[u] + 1
                        q.append(self.to[a])
            if level[t] < 0:
                return total
            it = [0] * self.size

            def push(u: int, f: int) -> int:
                if u == t:
                    return f
                arcs = self.head[u]
                while it[u] < len(arcs):
                    a = arcs[it[u]]
                    v = self.to[a]
                    if self.cap[a] > 0 and level[v] == level[u] + 1:
                        d = push(v, min(f, self.cap[a]))
                        if d:
                            self.cap[a] -= d
                            self.cap[a ^ 1] += d
                            return d
                    it[u] += 1
                return 0

            while True:
                f = push(s, 1 << 62)
                if not f:
                    break
                total += f

    def source_side(self, s: int) -> set[int]:
        """Nodes reachable from ``s`` in the residual graph after max_flow."""
        seen = {s}
        q = deque([s])
        while q:
            u = q.popleft()
            for a in self.head[u]:
                v = self.to[a]
                if self.cap[a] > 0 and v not in seen:
                    seen.add(v)
                    q.append(v)
        return seen

    def flow_on(self, arc: int) -> int:
        return self.original[arc] - self.cap[arc]


def hopcroft_karp(left: int, adjacency: list[list[int]]) -> list[int | None]:
    """Maximum bipartite matching; returns the partner of every left node.

    ``adjacency[i]`` lists right nodes of left node ``i`` in the order they
    should be tried, which makes the result deterministic.
    """
    match_left: list[int | None] = [None] * left
    match_right: dict[int, int] = {}
    while True:
        # BFS layering from free left nodes
        dist: list[int | None] = [None] * left
        q = deque(i for i in range(left) if match_left[i] is None)
        for i in q:
            dist[i] = 0
        found = False
        while q:
            i = q.popleft()
            for r in adjacency[i]:
                j = match_right.get(r)
                if j is None:
                    found = True
                elif dist[j] is None:
                    dist[j] = dist[i] + 1
                    q.append(j)
        if not found:
            return match_left

        def augment(i: int) -> bool:
            for r in adjacency[i]:
                j = match_right.get(r)
                if j is None or (dist[j] == dist[i] + 1 and augment(j)):
                    match_left[i] = r
                    match_right[r] = i
                    return True
            dist[i] = None
            return False

        for i in range(left):
            if match_left[i] is None:
                augment(i)
