from gmpy2 import mpq

from geopart.bench import run_bench
from geopart.generate import gen_instance
from geopart.locate import LocateConfig
from geopart.partition import PartitionTuple
from geopart.render import render_svg
from geopart.semialg import X, Y


def test_svg_one_path_per_set(tmp_path):
    sets = gen_instance("disks", 12, 1).sets
    out = tmp_path / "a.svg"
    text = render_svg(sets, out_path=out)
    assert text.startswith("<svg") and out.read_text() == text
    assert text.count("<path") == 12


def test_svg_tuple_curves():
    sets = gen_instance("segments", 7, 2).sets
    tup = PartitionTuple((X - mpq(1, 2), Y + X))
    assert render_svg(sets, tup).count("<path") == 7 + 2


def test_svg_empty_canvas():
    text = render_svg([])
    assert text.startswith("<svg") and text.rstrip().endswith("</svg>")
    assert "<path" not in text


def test_bench_single_query():
    (rec,) = run_bench("disks", [20], 1, 0, LocateConfig(n0=8))
    assert rec.n == 20 and rec.visits_min >= 1 and rec.storage >= 20


def test_bench_is_deterministic():
    a = run_bench("disks", [24, 48], 10, 3, LocateConfig(n0=8, seed=3))
    b = run_bench("disks", [24, 48], 10, 3, LocateConfig(n0=8, seed=3))
    assert [r.to_json(False) for r in a] == [r.to_json(False) for r in b]
    assert all(min(r.visits_min, r.storage, r.depth, r.retries) >= 0 for r in a)
