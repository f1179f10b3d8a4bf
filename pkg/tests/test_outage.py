import numpy as np
import pytest

from mixedadc.channel import Rng
from mixedadc.outage import lower_tail_quantile, outage_gmi


def test_quantile_by_order_statistic():
    values = np.arange(100, 0, -1, dtype=float)  # 100 .. 1, unsorted on purpose
    assert lower_tail_quantile(values, 0.05) == 5.0
    assert lower_tail_quantile(values, 0.051) == 6.0
    assert lower_tail_quantile(values, 0.999) == 100.0
    assert lower_tail_quantile(np.array([7.0]), 0.5) == 7.0


def test_quantile_monotone_in_p_out():
    gen = Rng(120).generator()
    values = gen.standard_normal(500)
    qs = [lower_tail_quantile(values, p) for p in (0.01, 0.05, 0.2, 0.5, 0.9)]
    assert qs == sorted(qs)


def test_quantile_validation():
    with pytest.raises(ValueError):
        lower_tail_quantile(np.array([]), 0.1)
    for p in (0.0, 1.0, -0.2):
        with pytest.raises(ValueError):
            lower_tail_quantile(np.array([1.0]), p)


def test_outage_architecture_ordering():
    # per draw: conventional >= mixed > selection, so the same holds for
    # every lower-tail quantile
    point = outage_gmi(8, 3, 1.0, 0.1, 200, Rng(121))
    assert point.conventional_nats >= point.mixed_nats >= point.selection_nats
    assert point.mixed_nats > 0.0
    assert point.p_out == 0.1 and point.draws == 200


def test_outage_monotone_in_p_out():
    rates = [
        outage_gmi(6, 2, 1.0, p, 300, Rng(122)).mixed_nats for p in (0.02, 0.1, 0.5)
    ]
    assert rates == sorted(rates)


def test_outage_worker_determinism():
    a = outage_gmi(6, 2, 1.0, 0.05, 150, Rng(123), workers=1)
    b = outage_gmi(6, 2, 1.0, 0.05, 150, Rng(123), workers=3)
    assert a == b


def test_outage_validation():
    with pytest.raises(ValueError):
        outage_gmi(4, 5, 1.0, 0.1, 100, Rng(1))
    with pytest.raises(ValueError):
        outage_gmi(4, 2, 1.0, 1.5, 100, Rng(1))
    with pytest.raises(ValueError):
        outage_gmi(4, 2, 1.0, 0.1, 0, Rng(1))
