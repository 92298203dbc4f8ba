import random
from collections import defaultdict

import pytest

from foldaut.free_group import EndoMap, K, Permutation, S, rho


def random_generator(n: int, rng: random.Random) -> EndoMap:
    """One of rho_ij^{+-1}, K_ij^{+-1}, S_i or a random signed permutation."""
    kind = rng.randrange(4) if n > 1 else rng.choice((2, 3))
    if kind in (0, 1):
        i, j = rng.sample(range(1, n + 1), 2)
        g = rho(i, j, n) if kind == 0 else K(i, j, n)
        if rng.random() < 0.5:
            images = list(g.images)
            images[i - 1] = (i, -j) if kind == 0 else (-j, i, j)
            g = EndoMap(tuple(images))
        return g
    if kind == 2:
        return S(rng.randint(1, n), n)
    sigma = list(range(1, n + 1))
    rng.shuffle(sigma)
    return Permutation(tuple(sigma), tuple(rng.choice((1, -1)) for _ in sigma)).to_map()


def random_automorphism(n: int, length: int, rng: random.Random) -> EndoMap:
    f = EndoMap.identity(n)
    for _ in range(length):
        f = f * random_generator(n, rng)
    return f


def acceptance_cases(seed: int = 1, count: int = 1000):
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(2, 6)
        yield random_automorphism(n, rng.randint(0, 30), rng)


class SubgroupGraph:
    """Stallings graph of <w_1, ..., w_k> built with union-find.

    Written independently of the folding engine so it can serve as an oracle.
    """

    def __init__(self, words):
        self.parent = {0: 0}
        edges = []
        nxt = 1
        for w in words:
            v = 0
            for k, x in enumerate(w):
                if k == len(w) - 1:
                    u = 0
                else:
                    u, nxt = nxt, nxt + 1
                    self.parent[u] = u
                edges.append((v, x, u))
                v = u
        self.edges = self._fold(edges)

    def find(self, v):
        while self.parent[v] != v:
            self.parent[v] = self.parent[self.parent[v]]
            v = self.parent[v]
        return v

    def _fold(self, edges):
        changed = True
        while changed:
            changed = False
            out = {}
            for a, x, b in edges:
                for s, y, t in ((a, x, b), (b, -x, a)):
                    s, t = self.find(s), self.find(t)
                    other = out.get((s, y))
                    if other is None:
                        out[(s, y)] = t
                    elif self.find(other) != t:
                        self.parent[max(self.find(other), t)] = min(self.find(other), t)
                        changed = True
        return {(self.find(s), y): self.find(t) for (s, y), t in out.items()}

    @property
    def vertices(self):
        return {self.find(v) for v in self.parent}

    @property
    def rank(self):
        return len(self.edges) // 2 - len(self.vertices) + 1

    def contains(self, w):
        v = 0
        for x in w:
            v = self.edges.get((v, x))
            if v is None:
                return False
        return v == 0


def image_is_injective(f: EndoMap) -> bool:
    if any(not w for w in f.images):
        return False
    return SubgroupGraph(f.images).rank == f.rank


def image_is_everything(f: EndoMap) -> bool:
    H = SubgroupGraph(f.images)
    return all(H.contains((i,)) for i in range(1, f.rank + 1))


# --- one summary line per acceptance criterion -------------------------------

_criteria = defaultdict(list)


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            item.user_properties.append(("criterion", mark.args[0]))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark and (rep.when == "call" or rep.failed):
        _criteria[mark.args[0]].append((item.name, rep.passed))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_criteria):
        results = _criteria[k]
        ok = all(passed for _, passed in results)
        names = ", ".join(name for name, _ in results)
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'} ({names})")
