import pytest

from geopart.generate import KINDS, Instance, gen_instance, gen_points
from geopart.semialg import dumps


def test_empty_instance():
    inst = gen_instance("points", 0, 5)
    assert inst.sets == [] and inst.metadata["n"] == 0


@pytest.mark.parametrize("kind", KINDS)
def test_reproducible_bytes(kind):
    a = dumps(gen_instance(kind, 25, 9).to_json())
    b = dumps(gen_instance(kind, 25, 9).to_json())
    assert a == b
    assert a != dumps(gen_instance(kind, 25, 10).to_json())


@pytest.mark.parametrize("kind", KINDS)
def test_json_round_trip(kind):
    inst = gen_instance(kind, 12, 3)
    back = Instance.from_json(inst.to_json())
    assert dumps(back.to_json()) == dumps(inst.to_json())
    assert [s.id for s in back.sets] == list(range(12))


def test_disks_are_one_quadratic_atom():
    for s in gen_instance("disks", 100, 2).sets:
        assert len(s.polys) == 1 and s.polys[0].total_degree() == 2


def test_rational_grid():
    for x, y in gen_points(200, 1):
        assert (x * 1024).denominator == 1 and abs(x) <= 64 and abs(y) <= 64


def test_box_scales_coordinates():
    assert all(abs(x) <= 8 for x, _ in gen_points(100, 1, box=8))


def test_errors():
    with pytest.raises(ValueError):
        gen_instance("triangles", 3)
    with pytest.raises(ValueError):
        gen_instance("disks", -1)
