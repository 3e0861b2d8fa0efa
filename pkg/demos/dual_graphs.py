"""Small poc sets and their dual median graphs.

Three shapes from the same machinery:

- threshold sensors along a path nest completely, so the dual is a path;
- pairwise disjoint beacons yield a starfish: one all-negative center
  with a leaf per beacon;
- realizing the beacons over an actual position set and keeping only
  the witnessed vertices (the punctured dual) shows how the center is
  retained exactly when some position lies outside every beacon.

Run: python3 demos/dual_graphs.py
"""

from snapmem.cubing import Cubing, Realization
from snapmem.pocset import Sensorium, WeakPocSet


def show(title: str, cubing: Cubing) -> None:
    print(f"{title}: {len(cubing.vertices)} vertices")
    for i, vertex in enumerate(cubing.vertices):
        neighbors = sorted(cubing.adjacency[i])
        print(f"  {cubing.vertex_label(vertex):<24} -> {neighbors}")
    print()


# nested thresholds: a1 <= a2 <= a3
chain = WeakPocSet.from_generators(
    Sensorium(("a1", "a2", "a3")), [(0, 2), (2, 4)]
)
show("chain", Cubing(chain))

# pairwise disjoint beacons: b_i <= b_j* for i != j
beacons = WeakPocSet.from_generators(
    Sensorium(("b1", "b2", "b3")),
    [(2 * i, 2 * j + 1) for i in range(3) for j in range(3) if i != j],
)
starfish = Cubing(beacons)
show("starfish", starfish)

# medians: the center mediates any two leaves
leaf1, leaf2 = frozenset({0, 3, 5}), frozenset({1, 2, 5})
center = frozenset({1, 3, 5})
print("median(leaf1, leaf2, center) =",
      starfish.vertex_label(starfish.median(leaf1, leaf2, center)))

# realize the beacons over positions 0..3, beacon i sitting at i+1;
# position 0 lies in no beacon and witnesses the center
realization = Realization(
    (0, 1, 2, 3), {2 * i: frozenset({i + 1}) for i in range(3)}
)
witnessed = starfish.punctured_dual(realization)
print("\npunctured dual keeps", len(witnessed), "of",
      len(starfish.vertices), "vertices, including the center:",
      center in witnessed)
