"""Shared pytest configuration: a moderate hypothesis profile so the
property suite stays inside the overall runtime budget."""

from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    max_examples=50,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")
