"""Integral min-cost max-flow on small directed networks."""

from __future__ import annotations

from dataclasses import dataclass, field

from cpbribe import kernels


class MalformedNetwork(ValueError):
    pass


@dataclass
class FlowNetwork:
    """Directed network built incrementally; arcs keep insertion order."""

    source: int = 0
    sink: int = 1
    labels: list = field(default_factory=lambda: ["s", "t"])
    tails: list = field(default_factory=list)
    heads: list = field(default_factory=list)
    caps: list = field(default_factory=list)
    costs: list = field(default_factory=list)
    arc_labels: list = field(default_factory=list)

    @property
    def n_nodes(self) -> int:
        return len(self.labels)

    @property
    def n_arcs(self) -> int:
        return len(self.tails)

    def add_node(self, label) -> int:
        self.labels.append(label)
        return len(self.labels) - 1

    def add_arc(self, u, v, cap=1, cost=0, label=None) -> int:
        self.tails.append(u)
        self.heads.append(v)
        self.caps.append(cap)
        self.costs.append(cost)
        self.arc_labels.append(label)
        return len(self.tails) - 1

    def arcs(self):
        return list(zip(self.tails, self.heads, self.caps, self.costs))

    def check(self):
        n = self.n_nodes
        if not (0 <= self.source < n and 0 <= self.sink < n) or self.source == self.sink:
            raise MalformedNetwork("bad source/sink")
        for e, (u, v, cap, cost) in enumerate(self.arcs()):
            if not (0 <= u < n and 0 <= v < n):
                raise MalformedNetwork(f"arc {e} references a missing node")
            if int(cap) != cap or cap < 0:
                raise MalformedNetwork(f"arc {e} has capacity {cap}")
            if int(cost) != cost:
                raise MalformedNetwork(f"arc {e} has non-integral cost {cost}")
            if u == self.sink:
                raise MalformedNetwork(f"arc {e} leaves the sink")
            if v == self.source:
                raise MalformedNetwork(f"arc {e} enters the source")


@dataclass(frozen=True)
class FlowResult:
    value: int
    cost: int
    flows: tuple

    def on(self, arc: int) -> int:
        return self.flows[arc]


def check_result(net: FlowNetwork, result: FlowResult):
    """Assert capacity, conservation and integrality of a solved flow."""
    balance = [0] * net.n_nodes
    total_cost = 0
    for e, (u, v, cap, cost) in enumerate(net.arcs()):
        f = result.flows[e]
        if int(f) != f or not 0 <= f <= cap:
            raise AssertionError(f"arc {e}: flow {f} outside [0, {cap}]")
        balance[u] -= f
        balance[v] += f
        total_cost += f * cost
    for node, b in enumerate(balance):
        if node in (net.source, net.sink):
            continue
        if b:
            raise AssertionError(f"conservation violated at node {net.labels[node]}")
    if balance[net.sink] != result.value or -balance[net.source] != result.value:
        raise AssertionError("flow value mismatch")
    if total_cost != result.cost:
        raise AssertionError("cost mismatch")


def solve_min_cost_max_flow(net: FlowNetwork, *, verify: bool = True) -> FlowResult:
    """Maximum flow of minimum cost among maximum flows.

    Negative arc costs are allowed provided no negative cycle is reachable
    from the source; a :class:`MalformedNetwork` is raised otherwise.
    """
    net.check()
    try:
        value, cost, flows = kernels.min_cost_flow(
            net.n_nodes, net.tails, net.heads, net.caps, net.costs, net.source, net.sink
        )
    except kernels.NegativeCycleError as exc:
        raise MalformedNetwork(str(exc)) from exc
    result = FlowResult(int(value), int(cost), tuple(int(f) for f in flows))
    if verify:
        check_result(net, result)
    return result
