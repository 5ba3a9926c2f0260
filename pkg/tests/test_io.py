import json

import pytest

from chordcut.errors import ParseError
from chordcut.geometry import Chord, Point, make_polygon
from chordcut.instances import gen_random_holed
from chordcut.io import (
    dumps_polygon,
    dumps_solution,
    loads_polygon,
    read_polygon,
    read_solution_lasers,
    render_svg,
    solution_dict,
    write_polygon,
    write_solution,
)
from chordcut.solution import evaluate


def test_canonical_round_trip_is_byte_identical(tmp_path, holed_square):
    for P in (holed_square, gen_random_holed(14, holes=2, seed=5)):
        text = dumps_polygon(P)
        f = tmp_path / "p.json"
        f.write_text(text)
        write_polygon(read_polygon(f), tmp_path / "q.json")
        assert (tmp_path / "q.json").read_text() == text


def test_metadata_field_round_trips(holed_square):
    text = dumps_polygon(holed_square, {"k": 3, "rooms": {"a": 1}})
    data = json.loads(text)
    assert data["metadata"] == {"k": 3, "rooms": {"a": 1}}
    assert dumps_polygon(loads_polygon(text), {"k": 3, "rooms": {"a": 1}}) == text


def test_orientation_normalized_on_read():
    text = json.dumps({"format_version": 1, "outer": [[0, 0], [0, 1], [1, 1], [1, 0]], "holes": []})
    P = loads_polygon(text)
    assert P.area == pytest.approx(1.0)
    ring = json.loads(dumps_polygon(P))["outer"]
    signed = sum(x0 * y1 - x1 * y0 for (x0, y0), (x1, y1) in zip(ring, ring[1:] + ring[:1])) / 2
    assert signed == pytest.approx(1.0)


@pytest.mark.parametrize(
    "text,field",
    [
        ('{"format_version": 2, "outer": []}', "format_version"),
        ('{"format_version": 1}', "outer"),
        ('{"format_version": 1,\n "outer": [[0, 0], [1, "x"], [0, 1]]}', "outer[1]"),
        ('{"format_version": 1, "outer": [[0, 0], [1, 0], [0, 1]], "holes": 3}', "holes"),
        ('{"format_version": 1, "outer": [[0, 0], [1, 0], [2, 0]]}', "outer"),
    ],
)
def test_parse_errors_name_the_field(text, field):
    with pytest.raises(ParseError) as e:
        loads_polygon(text)
    assert repr(field) in str(e.value)


def test_parse_error_reports_line():
    text = '{"format_version": 1,\n "outer": [[0, 0], [1, "x"], [0, 1]]}'
    with pytest.raises(ParseError) as e:
        loads_polygon(text)
    assert "line 2" in str(e.value)
    with pytest.raises(ParseError) as e:
        loads_polygon('{"format_version": 1,\n\n "outer": [}')
    assert "line 3" in str(e.value)


def test_solution_schema(tmp_path):
    P = make_polygon([(0, 0), (3, 0), (3, 1), (0, 1)])
    lasers = [Chord(Point(1, 0), Point(1, 1)), Chord(Point(2, 0), Point(2, 1))]
    sol = evaluate(P, lasers, "area", algorithm="test", threshold=1.0)
    d = solution_dict(sol)
    assert d["format_version"] == 1 and d["measure"] == "area" and d["threshold"] == 1.0
    assert len(d["cells"]) == 3 and set(d["cells"][0]) == {"area", "diameter", "inradius"}
    assert 0 <= d["worst_cell"] < 3
    assert d["lasers"][0] == [[1.0, 0.0], [1.0, 1.0]]
    write_solution(sol, tmp_path / "s.json")
    assert json.loads((tmp_path / "s.json").read_text()) == json.loads(dumps_solution(sol))
    back = read_solution_lasers(tmp_path / "s.json")
    assert [c.canonical().as_tuple() for c in back] == [c.canonical().as_tuple() for c in lasers]


def test_bad_solution_file(tmp_path):
    f = tmp_path / "s.json"
    f.write_text('{"lasers": [[[0, 0]]]}')
    with pytest.raises(ParseError):
        read_solution_lasers(f)


def test_svg_layers_and_determinism(holed_square):
    lasers = [Chord(Point(0.5, 0), Point(0.5, 4)), Chord(Point(0, 3.5), Point(4, 3.5))]
    sol = evaluate(holed_square, lasers, "diameter", algorithm="test", threshold=4.0)
    svg = render_svg(holed_square, solution=sol)
    for layer in ("polygon", "holes", "cells", "lasers"):
        assert f'<g id="{layer}">' in svg
    assert svg.count('class="cell"') == len(sol.cells)
    assert svg.count('class="laser"') == 2
    assert svg.count('class="hole"') == 1
    assert svg.count('data-worst="true"') == 1
    assert "δ = 4" in svg
    assert render_svg(holed_square, solution=sol) == svg
