import math

import pytest

import infomarket


def test_shapley_direct():
    s = infomarket.shapley("direct", expl=3.0, impl=1.5)
    assert s["user"] == pytest.approx(0.5)
    assert s["aggregator"] == pytest.approx(2.5)
    assert "market" not in s


def test_shapley_mediated_shares_sum_to_surplus():
    s = infomarket.shapley("mediated", expl=4.0, impl=2.0)
    assert s["user"] == pytest.approx(s["market"])
    assert s["user"] + s["market"] + s["aggregator_surplus"] == pytest.approx(3.0 - 2.0 + 2.0 - 1.0)


def test_bad_intents_raise():
    with pytest.raises(ValueError):
        infomarket.shapley("direct", expl=1.0, impl=2.0)
    with pytest.raises(ValueError):
        infomarket.shapley("free", expl=2.0, impl=1.0)


def test_consent_lift_and_user_gains():
    assert infomarket.consent_lift(3.0, 1.5) == pytest.approx(4.0)
    assert math.isinf(infomarket.consent_lift(2.0, 1.0))
    assert math.isnan(infomarket.consent_lift(1.0, 1.0))
    assert infomarket.user_gains("direct", 3.0, 1.5)
    assert not infomarket.user_gains("direct", 3.0, 2.0)


def test_auction():
    price, revenue, winners = infomarket.optimal_price({"a": 1.0, "b": 3.0, "c": 2.0})
    assert (price, revenue, winners) == (2.0, 4.0, 2)
    er = infomarket.expected_revenue([1.0, 3.0, 2.0], 1.0)
    assert infomarket.revenue_lower_bound(4.0, 1.0, 2) <= er <= 4.0
    o = infomarket.run_auction("alice", {"B.com": 1.0, "C.com": 0.0}, 1.0, seed=3)
    assert o["winners"] == ["B.com"]
    assert 0 < o["clearing_price"] <= 1.0
    assert o == infomarket.run_auction("alice", {"B.com": 1.0, "C.com": 0.0}, 1.0, seed=3)


def test_root_domain():
    assert infomarket.root_domain("ads.B.com") == "b.com"
    assert infomarket.root_domain("www.bar.co.uk") == "bar.co.uk"


def test_run_adoption():
    r = infomarket.run_adoption({"u": (3.0, {"a1": 1.5, "a2": 1.2})}, market="direct")
    assert r["converged"]
    assert r["joined_users"] == ["u"]
    assert r["joined_aggregators"] == ["a1", "a2"]
    assert float(r["intent_sum_final"]) == pytest.approx(6.0)
