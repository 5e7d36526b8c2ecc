import math
import sys

from hypothesis import strategies as st

from siegelren import rotnum


@st.composite
def rationals(draw, q_max=10_000):
    q = draw(st.integers(1, q_max))
    p = draw(st.integers(0, q - 1))
    return rotnum.RotationNumber.rational(p, q)


@st.composite
def quadratics(draw, n_max=5, pre_len=3, per_len=3):
    coeff = st.integers(1, n_max)
    pre = draw(st.lists(coeff, max_size=pre_len))
    per = draw(st.lists(coeff, min_size=1, max_size=per_len))
    side = draw(st.sampled_from([rotnum.DIRECT, rotnum.COMPLEMENT]))
    return rotnum.RotationNumber.quadratic(pre, per, side)


@st.composite
def coprime_pairs(draw, q_min=3, q_max=200):
    q = draw(st.integers(q_min, q_max))
    p = draw(st.integers(1, q - 1).filter(lambda p: math.gcd(p, q) == 1))
    return p, q


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS, key=lambda l: int(l.split()[2])):
            terminalreporter.write_line(line)
