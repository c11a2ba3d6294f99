"""Regenerates tests/fixtures/corpus/*.json (fixed seed)."""
import json
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "corpus"


def random_graph(rng, with_cycle):
    n_seg = rng.randint(2, 4)
    n_half = rng.randint(1, 2)
    vertices = [f"v{i}" for i in range(n_seg + 1)]
    edges = []
    for i in range(1, n_seg + 1):
        parent = rng.randrange(i)
        a, b = (vertices[parent], vertices[i]) if rng.random() < 0.5 else (vertices[i], vertices[parent])
        edges.append({"id": f"s{i}", "kind": "segment", "length": round(rng.uniform(0.5, 2.0), 3), "from": a, "to": b})
    if with_cycle:
        a, b = rng.sample(vertices, 2)
        edges.append({"id": "c1", "kind": "segment", "length": round(rng.uniform(0.5, 2.0), 3), "from": a, "to": b})
    for j in range(n_half):
        if len(edges) >= 6:
            break
        edges.append({"id": f"h{j + 1}", "kind": "halfline", "from": rng.choice(vertices)})
    return {"mass": 0.5, "c": 1.0, "vertices": vertices, "edges": edges}


def main():
    rng = random.Random(20240607)
    OUT.mkdir(parents=True, exist_ok=True)
    for k in range(5):
        g = random_graph(rng, with_cycle=(k == 3))
        (OUT / f"random_{k}.json").write_text(json.dumps(g, indent=2) + "\n")


if __name__ == "__main__":
    main()
