import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "seeded",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("seeded")


@pytest.fixture(scope="session")
def square2():
    from tropconf.chow import configuration_fan
    from tropconf.scaffolds import lambda_square

    return configuration_fan(lambda_square(2), certify=False)


@pytest.fixture(scope="session")
def lambda0_3():
    from tropconf.chow import configuration_fan
    from tropconf.scaffolds import lambda0

    return configuration_fan(lambda0(3), certify=False)


@pytest.fixture(scope="session")
def sqrt_stack():
    from tropconf.chow import configuration_fan
    from tropconf.scaffolds import sqrt_stack_scaffold

    return configuration_fan(sqrt_stack_scaffold())


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
