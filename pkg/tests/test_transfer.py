import pytest

from fcorr.liepair import CORPUS
from fcorr.transfer import transfer_of, transfer_suite


def value(T, labels):
    return T.lambda_gen(labels)


def test_contact3_values(scenes):
    T = transfer_of(scenes["contact3"])
    assert value(T, ["Z1", "Z2"]).is_zero()
    assert value(T, ["Z2", "x"]).is_zero()
    assert value(T, ["Z1", "x"]) == T.of_form(1)
    assert value(T, ["Z1", "Z2", "xi1"]) == T.of_form(1)
    assert value(T, ["Z2", "Z1", "xi1"]) == T.of_form(-1)
    assert value(T, ["Z1", "Z2", "Z1", "Z2"]).is_zero()


def test_tilt3_lambda3(scenes):
    T = transfer_of(scenes["tilt3"])
    assert value(T, ["Z1", "Z2", "xi1"]).is_zero()


def test_forms_commute(scenes):
    for s in scenes.values():
        T = transfer_of(s)
        for a in T.generators():
            for b in T.generators():
                if not a.startswith("Z") and not b.startswith("Z"):
                    assert value(T, [a, b]).is_zero()


@pytest.mark.parametrize("name", CORPUS)
def test_transfer_suite(name, scenes):
    for r in transfer_suite(scenes[name], k_max=6, rand_count=10, seed=0):
        assert r.ok, (r.name, r.failures)


def test_multilinear(scenes):
    T = transfer_of(scenes["quad4"])
    a, b, c = (T.generator(g) for g in ("Z1", "Z2", "xi1"))
    lhs = T.lambda2(a + b.scale(3), c)
    assert lhs == T.lambda2(a, c) + T.lambda2(b, c).scale(3)
