from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    deadline=None,  # first numba-jit call can blow a per-example deadline
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")
