from fractions import Fraction as F

import pytest

from lextypes.model import Game, Lps, Measure, TypeStructure

SA, SBAR, SHAT = "s_a", "sbar_b", "shat_b"
TA, TBAR, THAT = "t_a", "tbar_b", "that_b"


def example_game():
    # sbar_b strictly dominant for Bob, Ann indifferent
    return Game(("a", "b"), {"a": (SA,), "b": (SBAR, SHAT)},
                {"a": {(SA, SBAR): F(0), (SA, SHAT): F(0)},
                 "b": {(SA, SBAR): F(1), (SA, SHAT): F(0)}})


def pt(s, t):
    return ((s,), (t,))


def lps(*levels):
    return Lps(tuple(Measure(m) for m in levels))


BOB_BELIEF = lps({pt(SA, TA): 1})

ANN_T = lps({pt(SBAR, TBAR): 1},
            {pt(SHAT, TBAR): 1},
            {pt(SBAR, TBAR): F(1, 2), pt(SHAT, TBAR): F(1, 2)})

ANN_TCIRC = lps({pt(SBAR, TBAR): F(1, 2), pt(SBAR, THAT): F(1, 2)},
                {pt(SHAT, TBAR): F(1, 2), pt(SHAT, THAT): F(1, 2)},
                {pt(SBAR, THAT): F(1, 2), pt(SHAT, TBAR): F(1, 2)})


def make_T(ann=ANN_T):
    return TypeStructure(example_game(), {"a": (TA,), "b": (TBAR,)},
                         {"a": {TA: ann}, "b": {TBAR: BOB_BELIEF}}, name="T")


def make_Tcirc():
    return TypeStructure(example_game(), {"a": (TA,), "b": (TBAR, THAT)},
                         {"a": {TA: ANN_TCIRC}, "b": {TBAR: BOB_BELIEF, THAT: BOB_BELIEF}},
                         name="T_circ")


@pytest.fixture
def T():
    return make_T()


@pytest.fixture
def Tc():
    return make_Tcirc()


@pytest.fixture
def T_noncautious():
    """Ann believes only (sbar_b, tbar_b), so hat s_b is never supported."""
    return make_T(lps({pt(SBAR, TBAR): 1}))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
