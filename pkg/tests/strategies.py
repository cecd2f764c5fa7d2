from fractions import Fraction

from hypothesis import strategies as st

from arbor.model import Node


@st.composite
def nodes(draw, max_depth: int = 6, max_turns: int = 3) -> Node:
    """ Nodes with depths in thirds and turns in quarters, so both parity classes are exercised """
    depth = Fraction(draw(st.integers(1, 3 * max_depth)), 3)
    candidates = [Fraction(k, 4) for k in range(1, 4 * max_depth) if (k % 4) and (Fraction(k, 4) < depth)]
    turns = draw(st.lists(st.sampled_from(candidates), max_size=max_turns, unique=True))
    return Node(turns, depth)


def distinct_nodes(count: int) -> st.SearchStrategy[list[Node]]:
    return st.lists(nodes(), min_size=count, max_size=count, unique=True)
