"""Independent reference computations used to freeze expected values."""

import itertools
import math
from collections import Counter


def entropy_counts(values) -> float:
    n = len(values)
    return -sum(c / n * math.log(c / n) for c in Counter(values).values())


def mi_by_entropies(a, b) -> float:
    """MI = H(a) + H(b) - H(a, b) from raw joint counts."""
    return entropy_counts(list(a)) + entropy_counts(list(b)) - entropy_counts(list(zip(a, b)))


def mi_by_histogram(a, b) -> float:
    """Direct sum over the joint histogram, written without numpy."""
    n = len(a)
    joint = Counter(zip(a, b))
    ca, cb = Counter(a), Counter(b)
    return sum(c / n * math.log(c * n / (ca[x] * cb[y])) for (x, y), c in joint.items())


def all_label_vectors(max_len, alphabet=(0, 1, 2)):
    for n in range(1, max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


def f1_reference(y_true, y_pred):
    labels = sorted(set(y_true) | set(y_pred))

    def f1(c):
        tp = sum(1 for t, p in zip(y_true, y_pred) if t == c and p == c)
        fp = sum(1 for t, p in zip(y_true, y_pred) if t != c and p == c)
        fn = sum(1 for t, p in zip(y_true, y_pred) if t == c and p != c)
        prec = tp / (tp + fp) if tp + fp else 0.0
        rec = tp / (tp + fn) if tp + fn else 0.0
        return 2 * prec * rec / (prec + rec) if prec + rec else 0.0

    if set(labels) <= {0, 1}:
        return f1(1)
    return sum(f1(c) for c in labels) / len(labels)


def rae_reference(y_true, y_pred):
    mean = sum(y_true) / len(y_true)
    return 1 - sum(abs(t - p) for t, p in zip(y_true, y_pred)) / sum(abs(t - mean) for t in y_true)


def finite_difference_grads(net, x, upstream, h=1e-5):
    grads = {}
    for k, p in net.params.items():
        g = p.copy()
        it = iter(range(p.size))
        flat = p.reshape(-1)
        for i in it:
            old = flat[i]
            flat[i] = old + h
            up = float((net.forward(x) * upstream).sum())
            flat[i] = old - h
            down = float((net.forward(x) * upstream).sum())
            flat[i] = old
            g.reshape(-1)[i] = (up - down) / (2 * h)
        grads[k] = g
    return grads
