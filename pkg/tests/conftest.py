from hypothesis import HealthCheck, settings

settings.register_profile("weilhecke", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("weilhecke")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number].line())
