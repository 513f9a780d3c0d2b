import os

from hypothesis import HealthCheck, settings, strategies as st

from motzeta.grothring import GrothClass, StratumSymbol
from motzeta.laurent import LaurentPoly

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


laurent_polys = st.dictionaries(st.integers(-4, 4), st.integers(-5, 5), max_size=4).map(LaurentPoly)

# A small pool of duality-eligible symbols and one that is not.
ELIGIBLE = [StratumSymbol(f"g{i}", base="B", dim=i, proper_smooth=True) for i in range(4)]
OPEN_SYM = StratumSymbol("u", base="B", dim=1)


def classes(symbols=ELIGIBLE):
    return st.lists(st.tuples(st.sampled_from(symbols), laurent_polys), max_size=4).map(GrothClass)


eligible_classes = classes()

# Lines printed at the end of the run by the acceptance suite.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
