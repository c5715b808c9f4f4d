"""Shared test configuration.

Hypothesis runs derandomized so the suite is bit-for-bit repeatable; the
determinism tests elsewhere compare exact CSV bytes and a flaky shrink
order would make failures impossible to reproduce.
"""

from hypothesis import HealthCheck, settings

settings.register_profile(
    "deterministic",
    derandomize=True,
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("deterministic")
