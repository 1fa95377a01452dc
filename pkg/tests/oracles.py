"""Reference computations that share no code with the package's counting paths."""

def next_permutation(a):
    """Advance list a to its next lexicographic arrangement in place; False at the end."""
    i = len(a) - 2
    while i >= 0 and a[i] >= a[i + 1]:
        i -= 1
    if i < 0:
        return False
    j = len(a) - 1
    while a[j] <= a[i]:
        j -= 1
    a[i], a[j] = a[j], a[i]
    a[i + 1:] = reversed(a[i + 1:])
    return True


def all_frequency_permutations(lam, m):
    a = [s for s in range(1, m + 1) for _ in range(lam)]
    while True:
        yield tuple(a)
        if not next_permutation(a):
            return


def brute_force_ball(lam, m, d, center=None):
    """List of all frequency permutations within Chebyshev distance d of center."""
    n = lam * m
    if center is None:
        center = tuple((i + lam) // lam for i in range(n))
    return [p for p in all_frequency_permutations(lam, m)
            if all(abs(a - b) <= d for a, b in zip(p, center))]


def naive_out_edges(lam, d, members):
    """Destinations of H(lam, d) by trying every lam-subset X of P u [dl+1, dl+lam]."""
    from itertools import combinations

    dl = d * lam
    q = set(members) | set(range(dl + 1, dl + lam + 1))
    out = []
    for x in combinations(sorted(q), lam):
        rest = q - set(x)
        if any(v <= -dl + lam for v in rest):
            continue
        out.append(frozenset(v - lam for v in rest))
    return out
