"""Smoke test for the tropcount Python bindings."""

import tropcount_py as tc

RECT_BETA = {"bottom": [0, 0, 1], "right": [0, 0, 0, 0, 1], "top": [3], "left": [0, 1, 1]}


def main():
    rect = tc.Polygon.rectangle(3, 5)
    path = tc.Path([(0, 5), (0, 3), (0, 0), (1, 2), (2, 5), (3, 5), (3, 0)])
    assert tc.multiplicity(rect, RECT_BETA, path) == 1440
    assert tc.count_paths(rect, RECT_BETA) == 19170
    found = tc.nonzero_paths(rect, RECT_BETA)
    assert len(found) == 16
    assert sum(m for _, m in found) == 19170
    assert dict(found)[path] == 1440

    pentagon = tc.Polygon([(0, 0), (4, 0), (3, 2), (2, 3), (1, 2)])
    beta = {i: [1] for i in range(5)}
    beta[0] = [0, 0, 0, 1]
    delta = tc.Path([(0, 0), (1, 2), (2, 3), (3, 2), (4, 0)])
    for sigma in ([1, 2, 3], [3, 1, 2], [2, 3, 1]):
        assert tc.multiplicity(pentagon, beta, delta, side="negative", sigma=sigma) == 100

    profile = tc.Profile([2], [2, 1], [3], mu2=[1, 1])
    assert tc.n_trop(profile) == 180
    assert tc.n_floor(profile) == 180
    assert tc.n_trop(tc.Profile([2], [1], [1])) == 2
    assert tc.n_trop(tc.Profile([2], [2], [2]), genus=1) == 8
    assert tc.block_multiplicity([1, -1]) == 2
    assert tc.block_multiplicity([2, 1, -1, -2]) == 100
    assert tc.fork_multiplicity([3, -2, -1]) == tc.fork_multiplicity([3, -2, -1], positions=[0, 7, 49])

    template = '{"mu1": [2], "mu2": ["1^2"], "nu1": ["x"], "nu2": ["x"], "ranges": {"x": [1, 7]}}'
    report = tc.polyscan(template)
    assert report["global"] is not None, report

    try:
        tc.count_paths(rect, {"bottom": [1], "right": [0, 0, 0, 0, 1], "top": [3], "left": [0, 1, 1]})
    except ValueError:
        pass
    else:
        raise AssertionError("invalid beta accepted")
    print("smoke test passed")


if __name__ == "__main__":
    main()
