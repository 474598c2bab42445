import sys
from fractions import Fraction
from pathlib import Path

from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def rationals(max_den: int = 12):
    return st.builds(lambda q, p: Fraction(p % (q + 1), q),
                     st.integers(1, max_den), st.integers(0, 10 ** 6))


@st.composite
def weighted_complexes(draw, max_vertices: int = 6, max_weight: int = 9):
    from stellar.complexes import WeightedComplex
    n = draw(st.integers(1, max_vertices))
    labels = [chr(ord("a") + i) for i in range(n)]
    faces = draw(st.lists(st.sets(st.sampled_from(labels), min_size=1, max_size=min(n, 4)),
                          min_size=1, max_size=6))
    covered = sorted(set().union(*faces))
    weights = [(v, draw(st.integers(1, max_weight))) for v in covered]
    return WeightedComplex.from_faces(weights, faces)


# one summary line per acceptance criterion, shown even when output is captured
_criteria: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::test_criterion_" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        _criteria.append((name, "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if _criteria:
        terminalreporter.section("acceptance criteria")
        for name, outcome in sorted(_criteria, key=lambda c: int(c[0].split("_")[2])):
            terminalreporter.write_line(f"{outcome}  {name}")
