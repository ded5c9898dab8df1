"""Index schedules and family descriptors."""

import math

import pytest

from chabauty import mobius as mb
from chabauty.family import FamilyDescriptor, FamilyError, constant_family, parse_schedule


class TestSchedule:
    def test_geometric(self):
        assert parse_schedule("geometric(4, 2, 8)") == [4, 8, 16, 32, 64, 128, 256, 512]

    def test_list_text(self):
        assert parse_schedule("3, 5,9") == [3, 5, 9]

    def test_sequence(self):
        assert parse_schedule((1, 2)) == [1, 2]

    @pytest.mark.parametrize("bad", ["", "4,4", "8,4", "0,1", [], "geometric(1, 1, 3)"])
    def test_rejects(self, bad):
        with pytest.raises(FamilyError):
            parse_schedule(bad)


def shrinking_rotation():
    return FamilyDescriptor("shrink", "2*pi/n", "0", "0", {"theta_limit": 0.0, "theta_exponent": 1})


class TestDescriptor:
    def test_evaluate(self):
        g = shrinking_rotation().evaluate(8)
        assert mb.element_distance(g, mb.rotation(math.pi / 4)) < 1e-14

    def test_bad_expression_raises_at_construction(self):
        with pytest.raises(ValueError):
            FamilyDescriptor("bad", "2*", "0", "0")

    def test_pole_outside_disk_raises(self):
        fam = FamilyDescriptor("escape", "0", "1 + 1/n", "0")
        with pytest.raises(mb.DegenerateElementError):
            fam.evaluate(10)

    def test_conjugated(self):
        h = mb.DiskAutomorphism(0.4, 0.3j)
        fam = shrinking_rotation().conjugated(h)
        assert fam.name == "shrink@conj"
        g = fam.evaluate(6)
        assert mb.element_distance(g, mb.conjugate(h, mb.rotation(math.pi / 3))) < 1e-12

    def test_json_round_trip(self):
        fam = shrinking_rotation().conjugated(mb.DiskAutomorphism(0.1, 0.2))
        back = FamilyDescriptor.from_json(fam.to_json())
        assert back == fam
        assert mb.element_distance(back.evaluate(11), fam.evaluate(11)) < 1e-15

    def test_declared_asymptotics_accepted(self):
        shrinking_rotation().check_declared([64, 128])

    @pytest.mark.parametrize("decl", [
        {"theta_limit": 1.0}, {"theta_exponent": 2}, {"a_limit": [0.5, 0.0]},
    ])
    def test_inconsistent_declaration_names_quantity(self, decl):
        fam = FamilyDescriptor("shrink", "2*pi/n", "0", "0", decl)
        with pytest.raises(FamilyError, match=next(iter(decl))):
            fam.check_declared([64, 128])

    def test_constant_family(self):
        g = mb.DiskAutomorphism(-0.3, -0.25 + 0.5j)
        fam = constant_family("c", g)
        for n in (1, 50):
            assert mb.element_distance(fam.evaluate(n), g) == 0
        fam.check_declared([4, 8])
