"""Seeded random layouts used by the tests."""
from pathlib import Path

import numpy as np

FIXTURE_DIR = Path(__file__).resolve().parent


def karate_dot():
    return (FIXTURE_DIR / "karate.gv").read_text()


def random_edges(rng, n_nodes, n_edges):
    """``n_edges`` distinct node pairs without self-loops, in draw order."""
    n_edges = min(n_edges, n_nodes * (n_nodes - 1) // 2)
    seen, edges = set(), []
    while len(edges) < n_edges:
        u, v = (int(x) for x in rng.integers(0, n_nodes, size=2))
        key = (min(u, v), max(u, v))
        if u == v or key in seen:
            continue
        seen.add(key)
        edges.append((u, v))
    return edges


def random_positions(rng, n_nodes, size):
    # distinct positions on a 0.01 grid
    positions = {}
    taken = set()
    while len(positions) < n_nodes:
        x, y = (round(float(v), 2) for v in rng.uniform(0, size, size=2))
        if (x, y) not in taken:
            taken.add((x, y))
            positions[len(positions)] = (x, y)
    return positions


def random_layout_dot(n_nodes, n_edges, seed, size=1000.0):
    """DOT text of a random straight-line layout."""
    rng = np.random.default_rng(seed)
    positions = random_positions(rng, n_nodes, size)
    lines = ["graph random {"]
    for node, (x, y) in positions.items():
        lines.append(f'  n{node} [pos="{x:.2f},{y:.2f}"];')
    for u, v in random_edges(rng, n_nodes, n_edges):
        lines.append(f"  n{u} -- n{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def random_map(n_regions, n_borders, seed):
    """Region adjacency text with ``n_borders`` random borders."""
    rng = np.random.default_rng(seed)
    neighbours = {r: [] for r in range(n_regions)}
    for u, v in random_edges(rng, n_regions, n_borders):
        neighbours[u].append(v)
    return "".join(
        f"r{r}: " + " ".join(f"r{v}" for v in others) + "\n"
        for r, others in neighbours.items()
    )
