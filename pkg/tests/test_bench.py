import pytest

from anchormvc.bench import loglog_slope, time_solver


def test_slope_helper():
    assert loglog_slope([10], [1.0]) is None
    assert loglog_slope([10, 10], [1.0, 2.0]) is None
    assert loglog_slope([1, 2, 4], [3.0, 6.0, 12.0]) == pytest.approx(1.0)
    assert loglog_slope([1, 2, 4], [1.0, 4.0, 16.0]) == pytest.approx(2.0)


def test_fixed_iteration_count():
    per_iter, total = time_solver(200, anchors=20, iters=3)
    assert 0 < per_iter * 3 <= total


@pytest.mark.slow
def test_anchor_count_is_superlinear():
    # the N * M^2 term dominates once M is a sizeable fraction of N
    sizes = [200, 400, 800]
    times = [min(time_solver(2000, anchors=m, iters=3)[0] for _ in range(2)) for m in sizes]
    assert loglog_slope(sizes, times) > 1.0
