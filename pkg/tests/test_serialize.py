"""JSON round-trips must be bit exact and reject malformed input loudly."""

import json
from fractions import Fraction

import pytest

from aoulab.cones import Cone
from aoulab.errors import InputError
from aoulab.linalg import Matrix
from aoulab.maps import UnitalMap
from aoulab.serialize import (
    dumps,
    element_from_dict,
    element_to_dict,
    from_dict,
    loads,
    map_from_dict,
    map_to_dict,
    space_from_dict,
    space_to_dict,
)
from aoulab.spaces import AOUSpace, lin_space, linf, sym_space
from aoulab.tensors import TensorElement


def spaces_equal(a: AOUSpace, b: AOUSpace) -> bool:
    return (
        a.dim == b.dim
        and a.unit == b.unit
        and a.label == b.label
        and a.cone.kind == b.cone.kind
        and a.cone.generators == b.cone.generators
        and a.cone.inequalities == b.cone.inequalities
        and a.cone.strict == b.cone.strict
        and a.cone.psd_side == b.cone.psd_side
    )


class TestSpaceRoundTrip:
    def test_named_spaces(self):
        for sp in (linf(3), lin_space(2), sym_space(2)):
            again = space_from_dict(space_to_dict(sp))
            assert spaces_equal(sp, again)

    def test_generator_backed_cone_with_fractions(self):
        cone = Cone.from_generators(
            [(Fraction(1, 3), 0), (Fraction(2, 7), Fraction(5, 2))], 2
        )
        sp = AOUSpace(2, cone, (Fraction(1, 3), 1), label="odd")
        again = space_from_dict(space_to_dict(sp))
        assert spaces_equal(sp, again)

    def test_strict_rows_survive(self):
        cone = Cone.from_inequalities(
            [(1, 0), (0, 1)], strict=[True, False], dim=2
        )
        sp = AOUSpace(2, cone, (1, 1), label="open")
        again = space_from_dict(space_to_dict(sp))
        assert spaces_equal(sp, again)

    def test_canonical_text_form(self):
        text = dumps(linf(2))
        assert text == dumps(loads(text))
        assert json.loads(text)["version"] == 1


class TestMapAndElementRoundTrip:
    def test_map(self):
        m = UnitalMap(
            linf(2),
            linf(1),
            Matrix.from_rows([(Fraction(1, 2), Fraction(1, 2))]),
        )
        again = map_from_dict(map_to_dict(m))
        assert again.matrix.data == m.matrix.data
        assert spaces_equal(again.source, m.source)
        assert spaces_equal(again.target, m.target)

    def test_element(self):
        z = TensorElement.simple(linf(2), lin_space(1), (1, -2), (3, Fraction(1, 5)))
        again = element_from_dict(element_to_dict(z))
        assert again.coeffs.data == z.coeffs.data
        assert spaces_equal(again.left, z.left)

    def test_dispatch(self):
        z = TensorElement.simple(linf(2), linf(2), (1, 0), (0, 1))
        assert isinstance(loads(dumps(z)), TensorElement)
        assert isinstance(loads(dumps(linf(2))), AOUSpace)


class TestRejection:
    def test_version_required(self):
        d = space_to_dict(linf(2))
        d["version"] = 2
        with pytest.raises(InputError):
            space_from_dict(d)
        d.pop("version")
        with pytest.raises(InputError):
            space_from_dict(d)

    def test_bad_rational(self):
        d = space_to_dict(linf(2))
        d["unit"] = ["1/0", "1"]
        with pytest.raises(InputError):
            space_from_dict(d)
        d["unit"] = [1.5, "1"]
        with pytest.raises(InputError):
            space_from_dict(d)

    def test_wrong_type_tag(self):
        with pytest.raises(InputError):
            map_from_dict(space_to_dict(linf(2)))
        with pytest.raises(InputError):
            from_dict({"version": 1, "type": "mystery"})

    def test_malformed_json(self):
        with pytest.raises(InputError):
            loads("{not json")

    def test_unknown_cone_rep(self):
        d = space_to_dict(linf(2))
        d["cone"] = {"rep": "oracle"}
        with pytest.raises(InputError):
            space_from_dict(d)
