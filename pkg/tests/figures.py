"""Node order and edge lists of H(2, 1) transcribed from the published drawing."""

FIG3_NODES = [(1, 2), (0, 2), (-1, 2), (0, 1), (-1, 1), (-1, 0)]
FIG3_EDGES = {
    (1, 2): {(1, 2), (0, 2), (-1, 2), (0, 1), (-1, 1), (-1, 0)},
    (0, 2): {(1, 2), (0, 2), (0, 1)},
    (-1, 2): {(1, 2), (0, 2), (0, 1)},
    (0, 1): {(1, 2), (-1, 2), (-1, 1)},
    (-1, 1): {(1, 2), (-1, 2), (-1, 1)},
    (-1, 0): {(1, 2)},
}
