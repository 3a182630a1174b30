"""Python bindings for the infomarket core library."""

import json as _json

from infomarket._core import (
    consent_lift,
    expected_revenue,
    optimal_price,
    revenue_lower_bound,
    root_domain,
    run_auction,
    shapley,
    user_gains,
)
from infomarket import _core


def run_adoption(intents, market="direct", **options):
    """Runs the adoption dynamics and returns the result snapshot as a dict.

    `intents` maps user -> (expl, {aggregator: impl}). Options: alpha, ron,
    tqm, impressions_per_period, round_cap, transactions_per_pair, seed.
    """
    return _json.loads(_core.run_adoption_json(intents, market, **options))


__all__ = [
    "consent_lift",
    "expected_revenue",
    "optimal_price",
    "revenue_lower_bound",
    "root_domain",
    "run_adoption",
    "run_auction",
    "shapley",
    "user_gains",
]
