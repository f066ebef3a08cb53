import numpy as np

from meanlab.rng import Lcg64


def _numpy_reference(seed: int, n: int) -> list[float]:
    # same recurrence in wrapping uint64 arithmetic
    s = np.uint64(seed)
    out = []
    with np.errstate(over="ignore"):
        for _ in range(n):
            s = s * np.uint64(6364136223846793005) + np.uint64(1442695040888963407)
            out.append(int(s >> np.uint64(11)) / 2.0 ** 53)
    return out


def test_first_draws_for_seed_42():
    r = Lcg64(42)
    assert [r.random() for _ in range(3)] == [0.5682303266439076, 0.2254634289477513,
                                              0.41283831882951183]


def test_matches_uint64_reference():
    for seed in (0, 1, 42, 2 ** 63 + 5):
        r = Lcg64(seed)
        assert [r.random() for _ in range(200)] == _numpy_reference(seed, 200)


def test_range_and_uniform():
    r = Lcg64(7)
    xs = [r.random() for _ in range(10_000)]
    assert 0.0 <= min(xs) and max(xs) < 1.0
    assert abs(np.mean(xs) - 0.5) < 0.02
    u = Lcg64(7).uniform(2.0, 3.0)
    assert u == 2.0 + Lcg64(7).random()


def test_seed_reduced_mod_2_64():
    assert Lcg64(-1).state == 2 ** 64 - 1
    assert Lcg64(2 ** 64 + 3).random() == Lcg64(3).random()
