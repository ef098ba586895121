from hypothesis import HealthCheck, settings

# derandomized so repeated runs see the same examples
settings.register_profile("repo", deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")
