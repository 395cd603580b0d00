import random
from fractions import Fraction

import pytest

from oracles import convergents, sympy_det
from toricres.errors import ComputationError, InputError
from toricres.ordered_groups import CFReal
from toricres.perron import floor_ratio, perron_run, presentation_stream, weight_vector

TAU = CFReal((1, 2, 3), "arithmetic", start=4, step=1)
GOLDEN = CFReal((1,), "periodic", (1,))


def test_vectors_on_tau_first():
    run = perron_run([TAU, 1], 5)
    assert run.vectors[2:] == ((1, 0), (1, 1), (3, 2), (10, 7), (43, 30))


def test_vectors_on_tau_second():
    run = perron_run([1, TAU], 4)
    assert run.vectors[2:] == ((1, 1), (2, 3), (7, 10), (30, 43))


def test_golden_ratio_gives_fibonacci_pairs():
    run = perron_run([GOLDEN, 1], 10)
    fib = [1, 1]
    while len(fib) < 12:
        fib.append(fib[-1] + fib[-2])
    assert run.vectors[3:] == tuple((fib[k + 1], fib[k]) for k in range(len(run.vectors) - 3))
    assert [s.determinant for s in run.steps] == [(-1) ** h for h in range(10)]


def test_steps_match_sympy_determinants():
    tau3 = [GOLDEN, CFReal((2,), "periodic", (1, 2)), 1]
    run = perron_run(tau3, 8)
    for step in run.steps:
        assert sympy_det([list(v) for v in step.window]) == (-1) ** (step.h * 2)
        assert all(x >= 0 for row in step.inclusion for x in row)


def test_vectors_are_convergents():
    rng = random.Random(2)
    for _ in range(10):
        prefix = [rng.randint(1, 9) for _ in range(6)]
        x = CFReal(tuple(prefix), "periodic", (1,))
        run = perron_run([x, 1], 8)
        assert list(run.vectors[3:9]) == convergents(prefix)


def test_rational_input_is_rejected():
    with pytest.raises(ComputationError) as err:
        perron_run([1, 1], 3)
    assert err.value.code == "rational-dependence"
    with pytest.raises(InputError):
        perron_run([TAU, 1], -1)
    with pytest.raises(InputError):
        perron_run([TAU], 2)
    with pytest.raises(InputError):
        perron_run([TAU, -1], 2)


def test_zero_steps():
    run = perron_run([TAU, 1], 0)
    assert run.vectors == ((1, 0), (0, 1)) and run.steps == ()


def test_floor_ratio():
    w = weight_vector([TAU, 1])
    assert floor_ratio(w[0], w[1]) == 1
    assert floor_ratio(w[1], w[0]) == 0
    assert floor_ratio(w[0] * 7, w[1]) == 10
    r = weight_vector([Fraction(7, 2), 1])
    assert floor_ratio(r[0], r[1]) == 3


def test_json_reports_determinant_check():
    data = perron_run([TAU, 1], 3).to_json()
    assert all(s["determinant_ok"] for s in data["steps"])
    assert data["vectors"][-1] == [3, 2]


def test_presentation_stream_examples():
    lex = presentation_stream("lex_Zd", 2)
    assert lex.lines() == ["V0 - V1*W", "V1 - W*V2"]
    cf = presentation_stream("cf_tau", 1, s=(2, 3))
    assert cf.lines() == ["V1 - V2^2*V3"]
    z = presentation_stream("zariski_Q", 2, s=(2, 2), c=(1, 1))
    assert [d[0] for d in z.degrees] == [1, Fraction(1, 2), Fraction(1, 4)]
    assert z.lines() == ["V1 - V2^2", "V2 - V3^2"]


@pytest.mark.parametrize("kind,kwargs", [("lex_Zd", {"d": 3}), ("lex_Zd", {"d": 2}),
                                         ("cf_tau", {"s": (2, 3, 1, 4, 2, 5)}),
                                         ("zariski_Q", {"s": (2, 3, 2, 2, 5, 2),
                                                        "c": (1, 2, 3, 1, 1, 7)})])
def test_streams_are_homogeneous(kind, kwargs):
    stream = presentation_stream(kind, 6, **kwargs)
    assert len(stream.relations) == 6 and stream.is_homogeneous()


def test_stream_errors():
    with pytest.raises(InputError):
        presentation_stream("lex_Zd", 0)
    with pytest.raises(InputError):
        presentation_stream("cf_tau", 3, s=(2,))
    with pytest.raises(InputError):
        presentation_stream("nope", 1)
