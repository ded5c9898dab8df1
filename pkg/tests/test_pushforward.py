"""Local Hausdorff limits of closed sets and their images under converging maps."""

import math

import numpy as np
import pytest

from chabauty import engine as en
from chabauty import mobius as mb
from chabauty import pushforward as pf
from chabauty.corpus import build_keyprop, keyprop_inputs

DISK = pf.Window(0, 1.0, "C1")


def sets_of(points_by_n, window=DISK):
    return [pf.ClosedSetSample(window, pts, n) for n, pts in points_by_n]


class TestWindow:
    def test_center_dimension_checked(self):
        with pytest.raises(pf.PushforwardError):
            pf.Window((0, 0), 1.0, "C1")

    def test_unknown_space(self):
        with pytest.raises(pf.PushforwardError):
            pf.Window(0, 1.0, "C3")

    def test_group_metric_ignores_sign(self):
        w = pf.Window((1, 0), 0.5, "group")
        assert w.contains(np.array([[-1, 0]], dtype=complex))[0]


class TestLocalHausdorffLimit:
    def test_constant_sets(self):
        F = [0.2, -0.5j, 0.3 + 0.3j]
        est, rep = pf.local_hausdorff_limit(sets_of((n, F) for n in range(1, 6)))
        assert all(d == 0 for d in rep.tail_distances)
        assert pf.local_distance("C1", est.points, pf.as_points(F, "C1"), DISK, 1.0) <= 1e-2

    def test_converging_point(self):
        sets = sets_of((n, [1 / n]) for n in (100, 200, 400, 800))
        est, _ = pf.local_hausdorff_limit(sets, resolution=1e-2)
        assert len(est) >= 1
        assert np.abs(est.points[:, 0]).max() <= 1e-2

    def test_escaping_point_leaves_empty_limit(self):
        sets = sets_of((n, [n]) for n in (2, 3, 4, 5))
        est, rep = pf.local_hausdorff_limit(sets)
        assert len(est) == 0 and rep.cauchy

    def test_alternating_sets_have_no_limit(self):
        sets = sets_of((n, [0.5 * (-1) ** n]) for n in range(1, 6))
        with pytest.raises(pf.NoLimitError):
            pf.local_hausdorff_limit(sets)

    def test_needs_three_samples(self):
        with pytest.raises(pf.PushforwardError):
            pf.local_hausdorff_limit(sets_of((n, [0]) for n in (1, 2)))


class TestUniformConvergence:
    SCHEDULE = [10, 20, 40, 80]

    def test_translation(self):
        ok, rep = pf.maps_converge_on_compacts(pf.make_map("translate", {"c": 1.0}), DISK, 0.05, self.SCHEDULE)
        assert ok
        assert rep.values == pytest.approx([1 / n for n in self.SCHEDULE])

    def test_shrink_against_wrong_limit(self):
        seq = pf.make_map("shrink", {"limit": "identity"})
        ok, rep = pf.maps_converge_on_compacts(seq, DISK, 0.05, self.SCHEDULE)
        assert not ok
        # the worst grid point is a corner of the window square at |z| = 1
        assert rep.values[-1] == pytest.approx(1 - 1 / 80, abs=1e-12)

    def test_power_map(self):
        K = pf.Window(0, 0.5, "C1")
        ok, rep = pf.maps_converge_on_compacts(pf.make_map("power"), K, 1e-6, [4, 8, 16, 32])
        assert ok
        assert rep.values == pytest.approx([0.5 ** n for n in (4, 8, 16, 32)], rel=1e-9)

    def test_space_mismatch(self):
        with pytest.raises(pf.PushforwardError):
            pf.maps_converge_on_compacts(pf.make_map("swap"), DISK, 0.1, self.SCHEDULE)


class TestProperness:
    def test_identity_with_bounded_sets(self):
        sets = sets_of((n, [0.1, 0.5j]) for n in (1, 2, 3))
        ok, _ = pf.properness_check(pf.make_map("identity"), sets, DISK, 1.0)
        assert ok

    def test_escaping_mass(self):
        wx = pf.Window(0, 3.0, "C1")
        sets = sets_of(((n, [n]) for n in (4, 8, 16)), wx)
        ok, rep = pf.properness_check(pf.make_map("shrink"), sets, pf.Window(0, 2.0, "C1"), 3.0)
        assert not ok
        assert set(rep.failures) == {4, 8, 16}

    def test_conjugation_on_corpus_case(self):
        case = next(c for c in build_keyprop() if c["name"] == "conjugation-rotations")
        seq, sets, wx, wy, tol, bound = keyprop_inputs(case)
        ok, _ = pf.properness_check(seq, sets, wy, bound)
        assert ok


class TestPushforwardLimit:
    def test_identity_maps(self):
        F = [0.1, -0.4 + 0.2j]
        sets = sets_of((n, F) for n in (1, 2, 3, 4))
        res = pf.pushforward_limit(pf.make_map("identity"), sets, DISK, DISK, 0.05)
        assert res.verdict == "PASS"
        assert res.discrepancy <= 3 * 0.05

    @pytest.mark.parametrize("tol", [0.5, 0.2, 0.05, 0.01])
    def test_escaping_mass_never_passes(self, tol):
        wx, wy = pf.Window(0, 3.0, "C1"), pf.Window(0, 2.0, "C1")
        sets = sets_of(((n, [n]) for n in (4, 8, 16, 32, 64)), wx)
        res = pf.pushforward_limit(pf.make_map("shrink"), sets, wx, wy, tol)
        assert not res.passed
        assert res.verdict.startswith("hypotheses violated:")
        assert "properness" in res.verdict

    def test_bound_beyond_window_is_inconsistent(self):
        sets = sets_of((n, [0]) for n in (1, 2, 3))
        with pytest.raises(pf.InconsistentWindowsError):
            pf.pushforward_limit(pf.make_map("identity"), sets, DISK, DISK, 0.1, bound_X=2.0)

    def test_space_mismatch(self):
        sets = sets_of((n, [0]) for n in (1, 2, 3))
        with pytest.raises(pf.InconsistentWindowsError):
            pf.pushforward_limit(pf.make_map("swap"), sets, DISK, DISK, 0.1)

    def test_group_conjugation_matches_conjugated_limit(self):
        params = {"theta": 0.5, "a": [0.2, -0.1]}
        seq = pf.make_map("conjugation", params)
        R, res = 1.5, 0.01
        schedule = [64, 128, 256, 512]
        sets = [pf.group_sample(en.FiniteElliptic(0j, n), R, res, n) for n in schedule]
        wx = pf.Window((1, 0), R, "group")
        wy = pf.Window((1, 0), 1.0, "group")
        out = pf.pushforward_limit(seq, sets, wx, wy, 0.05)
        assert out.verdict == "PASS", out.verdict
        h = mb.from_su11(pf.conjugator(params, None))
        target = pf.group_sample(en.conjugate_subgroup(h, en.OneParamElliptic(0j)), R, res)
        d = pf.local_distance("group", out.image.points, target.points, wy, wy.radius - 2 * 0.0125)
        assert d <= 0.05

    def test_json(self):
        sets = sets_of((n, [0.2]) for n in (1, 2, 3))
        obj = pf.pushforward_limit(pf.make_map("identity"), sets, DISK, DISK, 0.05).to_json()
        assert obj["verdict"] == "PASS"
        assert set(obj["hypotheses"]) == {"domain-convergence", "uniform-convergence", "properness"}


def test_unknown_map():
    with pytest.raises(pf.PushforwardError):
        pf.make_map("teleport")
