"""Map models: displacement, iteration, lift consistency, validation."""

import math
from fractions import Fraction

import numpy as np
import pytest

from rotlab.errors import DepthError, MonotonicityError
from rotlab.groups import CirclePoint, ProfiniteInt, SolenoidPoint, TorusPoint
from rotlab.maps import (ArnoldFamily, DoublingMap, ParsedLift, RigidRotation,
                         SolenoidLeafMap, TorusLiftMap, TrigCircleMap,
                         TrigTerm2, displacement, iterate, map_from_dict)

TWO_PI = 2.0 * math.pi


class TestDisplacement:
    def test_rigid(self):
        m = RigidRotation(0.3)
        for z in (0.0, 0.1, 0.77):
            assert abs(m.displacement(z) - 0.3) < 1e-15

    def test_solenoid_constant(self):
        m = SolenoidLeafMap(depth=8, c=0.2)
        p = SolenoidPoint.make(0.9, ProfiniteInt.from_int(17, 8))
        assert m.displacement(p) == 0.2
        assert m.constant_displacement == 0.2

    def test_arnold_formula(self):
        m = ArnoldFamily(c=0.3, a=0.1)
        assert abs(m.displacement(0.25) - 0.4) < 1e-15  # 0.3 + 0.1 sin(pi/2)

    def test_representative_independence(self):
        for m in (ArnoldFamily(0.3, 0.1),
                  ParsedLift("x + 0.3 + 0.1*sin(2*pi*x)")):
            for x in np.linspace(0, 1, 17):
                d0 = m.lift(x) - x
                d1 = m.lift(x + 1.0) - (x + 1.0)
                d2 = m.lift(x - 3.0) - (x - 3.0)
                assert abs(d0 - d1) < 1e-12
                assert abs(d0 - d2) < 1e-12


class TestIterate:
    def test_rigid_quarter(self):
        trace = iterate(RigidRotation(Fraction(1, 4)), CirclePoint.make(0.0), 4)
        vals = [p.value for p in trace.points]
        assert np.allclose(vals, [0, 0.25, 0.5, 0.75, 0.0], atol=1e-12)
        assert abs(trace.cumulative - 1.0) < 1e-12

    def test_zero_steps(self):
        trace = iterate(ArnoldFamily(0.3, 0.1), CirclePoint.make(0.2), 0)
        assert len(trace.points) == 1
        assert trace.cumulative == 0.0

    def test_arnold_matches_manual_composition(self):
        m = ArnoldFamily(c=0.3, a=0.1)
        x = 0.0
        for _ in range(10):
            x = x + 0.3 + 0.1 * math.sin(TWO_PI * x)
        trace = iterate(m, CirclePoint.make(0.0), 10)
        assert abs(trace.cumulative - x) < 1e-12

    def test_orbit_matches_lift_projection(self):
        m = ArnoldFamily(0.3, 0.1)
        trace = iterate(m, CirclePoint.make(0.1), 50)
        lifts = m.lift_checkpoints(0.1, np.arange(51))
        for p, lift in zip(trace.points, lifts):
            assert abs(p.value - lift % 1.0) < 1e-9

    def test_cumulative_telescopes(self):
        m = ArnoldFamily(0.3, 0.1)
        trace = iterate(m, CirclePoint.make(0.3), 200)
        assert abs(trace.step_displacements.sum() - trace.cumulative) < 1e-9

    def test_torus_iterate(self):
        m = TorusLiftMap((0.3, 0.5), [TrigTerm2(0, 0.05, 1, 1, 0.0)])
        trace = iterate(m, TorusPoint.make(0.0, 0.0), 25)
        assert abs(trace.step_displacements.sum(axis=0)[0]
                   - trace.cumulative[0]) < 1e-9
        assert abs(trace.step_displacements.sum(axis=0)[1]
                   - trace.cumulative[1]) < 1e-9

    def test_solenoid_iterate(self):
        m = SolenoidLeafMap(depth=8, c=0.2, levels={2: 0.05})
        p = SolenoidPoint.make(0.0, ProfiniteInt.zero(8))
        trace = iterate(m, p, 30)
        assert abs(trace.step_displacements.sum() - trace.cumulative) < 1e-9
        # fiber advances by the accumulated whole turns
        total = trace.points[-1]
        lift = m.lift_checkpoints(p, [30])[0]
        assert total.fiber.residue == math.floor(lift) % math.factorial(8)


class TestValidation:
    def test_arnold_needs_small_amplitude(self):
        with pytest.raises(MonotonicityError):
            ArnoldFamily(c=0.3, a=0.2)  # 2 pi a > 1

    def test_solenoid_level_must_divide(self):
        with pytest.raises(DepthError):
            SolenoidLeafMap(depth=3, c=0.1, levels={4: 0.01})

    def test_solenoid_slope_bound(self):
        with pytest.raises(MonotonicityError):
            SolenoidLeafMap(depth=4, c=0.0, levels={2: 0.4})

    def test_trig_integer_frequency_enforced(self):
        from rotlab.errors import EquivarianceError
        with pytest.raises(EquivarianceError):
            TrigCircleMap(0.1, [(0.05, 0.5, 0.0)])


class TestSolenoidLevels:
    def test_projected_orbit_equals_induced_orbit(self):
        # project_level commutes with the dynamics: the level-b image of the
        # orbit is an orbit of the induced circle map at level b
        m = SolenoidLeafMap(depth=8, c=0.2, levels={2: 0.05})
        b = 2
        induced = m.induced_circle_map(b)
        p = SolenoidPoint.make(0.3, ProfiniteInt.from_int(5, 8))
        w = p.project(b) / b
        pts = induced.orbit_points(w, 40) * b
        cur = p
        for k in range(40):
            assert abs((cur.project(b) - pts[k]) % b) < 1e-9 or \
                abs((cur.project(b) - pts[k]) % b - b) < 1e-9
            cur = m.apply(cur)

    def test_induced_needs_refining_level(self):
        m = SolenoidLeafMap(depth=8, c=0.2, levels={2: 0.02, 6: 0.01})
        with pytest.raises(DepthError):
            m.induced_circle_map(2)  # level 6 does not divide 2
        m.induced_circle_map(6)      # fine: 2 | 6 and 6 | 6

    def test_deck_equivariance_randomized(self):
        m = SolenoidLeafMap(depth=6, c=0.1, levels={2: 0.05, 6: 0.01})
        rng = np.random.default_rng(3)
        for _ in range(100):
            t = float(rng.uniform(-3, 3))
            fiber = ProfiniteInt(6, int(rng.integers(0, math.factorial(6))))
            assert abs(m.phi(t, fiber) - m.phi(t + 1, fiber.shift(-1))) < 1e-9


class TestStepArrays:
    def test_trig_step_array_matches_scalar(self):
        m = ArnoldFamily(0.3, 0.1)
        xs = np.linspace(0, 1, 33, endpoint=False)
        vec = m.step_array(xs)
        for x, v in zip(xs, vec):
            assert abs((m.lift(x) % 1.0) - v) < 1e-12

    def test_doubling(self):
        m = DoublingMap()
        pts = m.orbit_points(1 / 3, 4)
        assert np.allclose(pts, [1 / 3, 2 / 3, 1 / 3, 2 / 3], atol=1e-15)

    def test_torus_step_array(self):
        m = TorusLiftMap((0.3, 0.5), [TrigTerm2(0, 0.05, 1, 0, 0.0),
                                      TrigTerm2(1, 0.02, 0, 1, 0.5)])
        xy = np.array([[0.1, 0.2], [0.7, 0.9]])
        out = m.step_array(xy)
        for row_in, row_out in zip(xy, out):
            X, Y = m.lift(tuple(row_in))
            assert abs(X % 1.0 - row_out[0]) < 1e-12
            assert abs(Y % 1.0 - row_out[1]) < 1e-12


class TestMapSpecs:
    @pytest.mark.parametrize("spec", [
        {"type": "rigid", "alpha": "1/4"},
        {"type": "rigid", "alpha": 0.3},
        {"type": "arnold", "c": 0.3, "a": 0.1},
        {"type": "parsed", "lift": "x + 0.3 + 0.1*sin(2*pi*x)"},
        {"type": "trig", "c": 0.1, "terms": [[0.05, 2.0, 0.0]]},
        {"type": "solenoid", "depth": 8, "c": 0.2, "levels": {"2": 0.05}},
        {"type": "torus", "v": [0.3, 0.5], "perturbation": [
            {"coord": 0, "a": 0.05, "kx": 1, "ky": 0}]},
        {"type": "doubling"},
    ])
    def test_round_trip(self, spec):
        m = map_from_dict(spec)
        again = map_from_dict(m.to_dict())
        assert type(again) is type(m)

    def test_bad_specs(self):
        from rotlab.errors import MapSpecError
        with pytest.raises(MapSpecError):
            map_from_dict({"type": "nope"})
        with pytest.raises(MapSpecError):
            map_from_dict({"type": "arnold", "c": 0.3})
        with pytest.raises(MapSpecError):
            map_from_dict({"no": "type"})

    def test_inverse_lift(self):
        for m in (ArnoldFamily(0.3, 0.1), RigidRotation(0.37),
                  ParsedLift("x + 0.2 + 0.05*cos(2*pi*x)")):
            for y in (0.0, 0.4, 2.7, -1.2):
                x = m.inverse_lift(y)
                assert abs(m.lift(x) - y) < 1e-10
