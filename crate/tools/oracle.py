"""Reference computations for values frozen into the Rust tests.

Run with `python3 tools/oracle.py`. Uses only the standard library.
"""

import math
import re

DIM = 256


def fnv1a32(data: bytes) -> int:
    h = 0x811C9DC5
    for b in data:
        h ^= b
        h = (h * 0x01000193) & 0xFFFFFFFF
    return h


def trigram_vector(text: str, dim: int = DIM):
    norm = " ".join(text.lower().split())
    v = [0.0] * dim
    if not norm:
        return v
    padded = " " + norm + " "
    for i in range(len(padded) - 2):
        v[fnv1a32(padded[i : i + 3].encode("utf-8")) % dim] += 1.0
    n = math.sqrt(sum(x * x for x in v))
    return [x / n for x in v]


def cosine(a, b):
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(x * x for x in b))
    if na == 0 or nb == 0:
        return 0.0
    return sum(x * y for x, y in zip(a, b)) / (na * nb)


def rank(query, nodes):
    q = trigram_vector(query)
    scored = [(cosine(q, trigram_vector(t)), i, nid) for i, (nid, t) in enumerate(nodes)]
    scored.sort(key=lambda s: (-s[0], s[1]))
    return [(nid, s) for s, _, nid in scored]


def first_sentence(text):
    m = re.search(r"[.?!](?=\s|$)", text)
    return text[: m.end()] if m else text


def main():
    rows = [
        ("4k", "4K On Demand Video | 30 Mbps | RTT < 100 ms | 10^-3 | 4K | -113 dBm | -2 dB"),
        ("vr", "3K Cloud VR (Game) | 100 Mbps | RTT < 25 ms | 10^-3 (TCP) 10^-2 (UDP) | 3K | -107 dBm | 2 dB"),
        ("air", "Airplanes connectivity | 15 Mbps | RTT < 100 ms | 10^-2 | - | -110 dBm | 0 dB"),
    ]
    print("rows, query '4K On Demand Video':", rank("4K On Demand Video", rows))

    # kpi_table.md, as the mock ingests it: the text node is searched by its
    # first sentence, the table by its first-column names.
    doc = open("crates/core/tests/fixtures/kpi_table.md").read()
    prose, table = doc.split("\n\n", 1)
    names = [l.split("|")[1].strip() for l in table.strip().splitlines()[2:]]
    nodes = [
        ("kpi_table.md#c0#n0", " ".join(first_sentence(" ".join(prose.split())).split()[:32])),
        ("kpi_table.md#c1", ", ".join(names)),
    ]
    for q in ["4K On Demand Video", "3K Cloud VR (Game)"]:
        print(f"kpi_table.md, query {q!r}:", rank(q, nodes))

    a, b = "abc abc", "xyz xyz"
    va, vb = trigram_vector(a), trigram_vector(b)
    shared = [i for i in range(DIM) if va[i] and vb[i]]
    print(f"disjoint buckets {a!r} vs {b!r}: shared={shared} cosine={cosine(va, vb)}")


if __name__ == "__main__":
    main()
