import math

import numpy as np
import pytest

from cqarank.embeddings import (
    VectorStore,
    centroid_similarity,
    cwasa_similarity,
    load_vectors,
)
from cqarank.errors import DataError

from helpers import make_store, view
from oracles import cwasa_oracle


def write_vectors(path, lines):
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def test_load_vectors_normalizes(tmp_path):
    path = tmp_path / "vec.txt"
    write_vectors(path, ["2 3", "a 1 0 0", "b 0 2 0"])
    store = load_vectors(path)
    assert store.dim == 3 and len(store) == 2
    for vec in store.vectors.values():
        assert np.linalg.norm(vec) == pytest.approx(1.0, abs=1e-12)
    assert store.vectors["b"][1] == pytest.approx(1.0)


def test_load_vectors_arity_error(tmp_path):
    path = tmp_path / "vec.txt"
    write_vectors(path, ["2 3", "a 1 0", "b 0 2 0"])
    with pytest.raises(DataError, match="line 2: expected 3 components"):
        load_vectors(path)


def test_load_vectors_non_numeric(tmp_path):
    path = tmp_path / "vec.txt"
    write_vectors(path, ["1 3", "a 1 x 0"])
    with pytest.raises(DataError, match="line 2: non-numeric"):
        load_vectors(path)


def test_load_vectors_zero_vector(tmp_path):
    path = tmp_path / "vec.txt"
    write_vectors(path, ["1 2", "bad 0 0"])
    with pytest.raises(DataError, match="zero vector for word 'bad'"):
        load_vectors(path)


def test_load_vectors_duplicates_last_wins(tmp_path):
    path = tmp_path / "vec.txt"
    write_vectors(path, ["2 2", "a 1 0", "a 0 5"])
    store = load_vectors(path)
    assert store.duplicates == 1
    assert store.vectors["a"][1] == pytest.approx(1.0)


def test_load_vectors_header_count_mismatch(tmp_path):
    path = tmp_path / "vec.txt"
    write_vectors(path, ["3 2", "a 1 0", "b 0 1"])
    with pytest.raises(DataError, match="declares 3"):
        load_vectors(path)


def test_load_vectors_bad_header(tmp_path):
    path = tmp_path / "vec.txt"
    write_vectors(path, ["2", "a 1 0"])
    with pytest.raises(DataError, match="line 1"):
        load_vectors(path)


STORE = make_store(
    {
        "u": [1.0, 0.0, 0.0],
        "v": [0.5, math.sqrt(0.75), 0.0],
        "anti": [-1.0, 0.0, 0.0],
        "w": [0.0, 0.0, 1.0],
    }
)


def test_centroid_identity():
    v = view(["u", "v"], stemmed=False)
    assert centroid_similarity(v, v, STORE) == pytest.approx(1.0)


def test_centroid_no_vocabulary_side():
    a = view(["u"], stemmed=False)
    b = view(["unknown"], stemmed=False)
    assert centroid_similarity(a, b, STORE) == 0.0
    assert centroid_similarity(b, a, STORE) == 0.0


def test_centroid_constructed_dot():
    a = view(["u"], stemmed=False)
    b = view(["v"], stemmed=False)
    assert centroid_similarity(a, b, STORE) == pytest.approx(0.5, abs=1e-12)


def test_centroid_negative_and_mapped():
    a = view(["u"], stemmed=False)
    b = view(["anti"], stemmed=False)
    assert centroid_similarity(a, b, STORE) == pytest.approx(-1.0)
    assert centroid_similarity(a, b, STORE, map_to_unit=True) == pytest.approx(0.0)
    assert centroid_similarity(a, a, STORE, map_to_unit=True) == pytest.approx(1.0)


def test_centroid_multiplicity_counts():
    # two copies of u pull the centroid toward u
    a = view(["u", "u", "v"], stemmed=False)
    b = view(["u", "v"], stemmed=False)
    ca = (2 * STORE.vectors["u"] + STORE.vectors["v"]) / 3
    cb = (STORE.vectors["u"] + STORE.vectors["v"]) / 2
    expected = float(
        np.dot(ca, cb) / (np.linalg.norm(ca) * np.linalg.norm(cb))
    )
    assert centroid_similarity(a, b, STORE) == pytest.approx(expected, abs=1e-12)


def test_cwasa_identity():
    v = view(["u", "v", "w"], stemmed=False)
    assert cwasa_similarity(v, v, STORE) == pytest.approx(1.0)


def test_cwasa_empty_side():
    a = view(["u"], stemmed=False)
    assert cwasa_similarity(a, view([], stemmed=False), STORE) == 0.0
    assert cwasa_similarity(a, view(["unknown"], stemmed=False), STORE) == 0.0


def test_cwasa_spec_example():
    store = make_store(
        {
            "u": [1.0, 0.0, 0.0],
            "v": [0.9, math.sqrt(1 - 0.81), 0.0],
            "w": [0.1, math.sqrt(1 - 0.01), 0.0],
        }
    )
    # v, w were built with cos(u,v)=0.9 and cos(u,w)=0.1, but v.w is large
    # too; alignment picks the best per token
    a = view(["u"], stemmed=False)
    b = view(["v", "w"], stemmed=False)
    vecs = store.vectors
    expected = cwasa_oracle([list(vecs["u"])], [list(vecs["v"]), list(vecs["w"])])
    assert expected == pytest.approx((0.9 + 0.9 + 0.1) / 3, abs=1e-12)
    assert cwasa_similarity(a, b, store) == pytest.approx(expected, abs=1e-12)


def test_cwasa_negative_clipped():
    a = view(["u"], stemmed=False)
    b = view(["anti"], stemmed=False)
    assert cwasa_similarity(a, b, STORE) == 0.0


def test_cwasa_denominator_all():
    a = view(["u", "oov1"], stemmed=False)
    b = view(["u"], stemmed=False)
    assert cwasa_similarity(a, b, STORE) == pytest.approx(1.0)
    assert cwasa_similarity(a, b, STORE, denominator="all") == pytest.approx(2 / 3)
    with pytest.raises(ValueError):
        cwasa_similarity(a, b, STORE, denominator="bogus")


def test_centroid_token_order_invariant(rng):
    words = list(STORE.vectors)
    for _ in range(20):
        ta = [words[i] for i in rng.integers(0, len(words), size=5)]
        tb = [words[i] for i in rng.integers(0, len(words), size=4)]
        base = centroid_similarity(view(ta, stemmed=False), view(tb, stemmed=False), STORE)
        shuffled = centroid_similarity(
            view(ta[::-1], stemmed=False), view(tb[::-1], stemmed=False), STORE
        )
        assert base == pytest.approx(shuffled, abs=1e-12)


def test_cwasa_token_order_invariant(rng):
    words = list(STORE.vectors)
    for _ in range(20):
        ta = [words[i] for i in rng.integers(0, len(words), size=4)]
        tb = [words[i] for i in rng.integers(0, len(words), size=3)]
        base = cwasa_similarity(view(ta, stemmed=False), view(tb, stemmed=False), STORE)
        shuffled = cwasa_similarity(
            view(ta[::-1], stemmed=False), view(tb[::-1], stemmed=False), STORE
        )
        assert base == pytest.approx(shuffled, abs=1e-12)


def test_cwasa_dispatch_consistent_across_crossover(rng):
    # texts big enough to cross the matmul dispatch threshold agree with the
    # scalar-kernel result on the same vectors
    dim = 64
    mat = rng.normal(size=(40, dim))
    mat /= np.linalg.norm(mat, axis=1, keepdims=True)
    store = VectorStore(dim=dim, vectors={f"w{i}": mat[i] for i in range(40)})
    big_a = view([f"w{i % 40}" for i in range(30)], stemmed=False)
    big_b = view([f"w{(i * 7) % 40}" for i in range(30)], stemmed=False)
    small_pairs = [
        (view([f"w{i}"], stemmed=False), view([f"w{(i + 3) % 40}"], stemmed=False))
        for i in range(5)
    ]
    assert 30 * 30 * dim > 20_000 and 1 * 1 * dim < 20_000
    expected = cwasa_oracle(
        [list(mat[i % 40]) for i in range(30)],
        [list(mat[(i * 7) % 40]) for i in range(30)],
    )
    assert cwasa_similarity(big_a, big_b, store) == pytest.approx(expected, abs=1e-12)
    for a, b in small_pairs:
        ex = cwasa_oracle(
            [list(store.vectors[a.lemmas[0]])], [list(store.vectors[b.lemmas[0]])]
        )
        assert cwasa_similarity(a, b, store) == pytest.approx(ex, abs=1e-12)


def test_cwasa_matches_oracle_on_random_stores(rng):
    for _ in range(200):
        n, m = int(rng.integers(1, 6)), int(rng.integers(1, 6))
        mat_a = rng.normal(size=(n, 5))
        mat_b = rng.normal(size=(m, 5))
        mat_a /= np.linalg.norm(mat_a, axis=1, keepdims=True)
        mat_b /= np.linalg.norm(mat_b, axis=1, keepdims=True)
        store = VectorStore(
            dim=5,
            vectors={f"a{i}": mat_a[i] for i in range(n)}
            | {f"b{j}": mat_b[j] for j in range(m)},
        )
        a = view([f"a{i}" for i in range(n)], stemmed=False)
        b = view([f"b{j}" for j in range(m)], stemmed=False)
        expected = cwasa_oracle(mat_a.tolist(), mat_b.tolist())
        assert cwasa_similarity(a, b, store) == pytest.approx(expected, abs=1e-12)
