"""Suspension flow, 1-cocycles, suspension characters, product measures."""

import math
from fractions import Fraction

import numpy as np
import pytest

from rotlab.errors import InverseError
from rotlab.groups import (CircleChar, CircleGroup, CirclePoint,
                           ProfiniteInt, SolenoidChar, SolenoidGroup,
                           SolenoidPoint, TorusChar, TorusPoint,
                           angle_distance)
from rotlab.maps import (ArnoldFamily, ParsedLift, RigidRotation,
                         SolenoidLeafMap, TorusLiftMap, TrigTerm2)
from rotlab.suspension import (SuspensionChar, SuspensionPoint,
                               char_eval_suspension, cocycle, flow,
                               product_measure_sample, property_suite,
                               suspension_distance)


def circle_battery():
    return [RigidRotation(0.3), RigidRotation(Fraction(1, 3)),
            ArnoldFamily(0.3, 0.1), ParsedLift("x + 0.3 + 0.1*sin(2*pi*x)")]


class TestFlow:
    def test_time_zero_identity(self):
        m = ArnoldFamily(0.3, 0.1)
        p = SuspensionPoint(CirclePoint.make(0.2), 0.7)
        q = flow(0.0, p, m)
        assert suspension_distance(p, q) < 1e-15

    def test_time_one_hits_base(self):
        # every orbit of the flow returns to the base copy of the group
        m = ArnoldFamily(0.3, 0.1)
        z = CirclePoint.make(0.2)
        p = SuspensionPoint(z, 0.0)
        q = flow(1.0, p, m)
        assert q.s == 0.0
        assert abs(q.base.value - m.apply(z).value) < 1e-12

    def test_flow_property_random(self):
        rng = np.random.default_rng(17)
        m = ArnoldFamily(0.3, 0.1)
        for _ in range(100):
            p = SuspensionPoint(CirclePoint(float(rng.random())),
                                float(rng.random()))
            t = float(rng.uniform(0, 3))
            u = float(rng.uniform(0, 3))
            a = flow(t + u, p, m)
            b = flow(u, flow(t, p, m), m)
            assert suspension_distance(a, b) < 1e-9

    def test_negative_time_inverts(self):
        m = ArnoldFamily(0.3, 0.1)
        p = SuspensionPoint(CirclePoint.make(0.2), 0.5)
        q = flow(-1.7, flow(1.7, p, m), m)
        assert suspension_distance(p, q) < 1e-9

    def test_torus_backward_unsupported(self):
        m = TorusLiftMap((0.3, 0.5), [TrigTerm2(0, 0.05, 1, 0, 0.0)])
        p = SuspensionPoint(TorusPoint.make(0.0, 0.0), 0.2)
        with pytest.raises(InverseError):
            flow(-1.0, p, m)


class TestCocycle:
    def test_time1_formula(self):
        # base frequency 2, flow frequency 3, one step of displacement 1/4
        m = RigidRotation(0.25)
        chi = SuspensionChar(CircleChar(2), 3)
        p = SuspensionPoint(CirclePoint.make(0.1), 0.0)
        assert abs(cocycle(chi, 1.0, p, m) - 3.5) < 1e-12

    def test_trivial_character(self):
        m = ArnoldFamily(0.3, 0.1)
        chi = SuspensionChar(CircleChar(0), 0)
        rng = np.random.default_rng(0)
        for _ in range(20):
            p = SuspensionPoint(CirclePoint(float(rng.random())),
                                float(rng.random()))
            assert cocycle(chi, float(rng.uniform(-2, 4)), p, m) == 0.0

    def test_cocycle_identity_battery(self):
        rng = np.random.default_rng(23)
        for m in circle_battery():
            for _ in range(100):
                p = SuspensionPoint(CirclePoint(float(rng.random())),
                                    float(rng.random()))
                chi = SuspensionChar(CircleChar(int(rng.integers(-3, 4))),
                                     int(rng.integers(-3, 4)))
                t = float(rng.uniform(0, 3))
                u = float(rng.uniform(0, 3))
                lhs = cocycle(chi, t + u, p, m)
                rhs = cocycle(chi, u, flow(t, p, m), m) + cocycle(chi, t, p, m)
                assert abs(lhs - rhs) < 1e-9

    def test_defining_relation_battery(self):
        rng = np.random.default_rng(29)
        for m in circle_battery():
            for _ in range(100):
                p = SuspensionPoint(CirclePoint(float(rng.random())),
                                    float(rng.random()))
                chi = SuspensionChar(CircleChar(int(rng.integers(-3, 4))),
                                     int(rng.integers(-3, 4)))
                t = float(rng.uniform(0, 3))
                want = (char_eval_suspension(chi, p).angle
                        + cocycle(chi, t, p, m)) % 1.0
                got = char_eval_suspension(chi, flow(t, p, m)).angle
                assert angle_distance(got, want) < 1e-9

    def test_time1_telescoping(self):
        n = 10**4
        m = ArnoldFamily(0.3, 0.1)
        chi = SuspensionChar(CircleChar(2), 1)
        p = SuspensionPoint(CirclePoint.make(0.1), 0.25)
        total = 0.0
        cur = p
        for _ in range(n):
            total += cocycle(chi, 1.0, cur, m)
            cur = flow(1.0, cur, m)
        assert abs(total - cocycle(chi, float(n), p, m)) < 1e-6

    def test_solenoid_cocycle_identity(self):
        m = SolenoidLeafMap(depth=8, c=0.2, levels={2: 0.05})
        chi = SuspensionChar(SolenoidChar(Fraction(1, 2)), 2)
        rng = np.random.default_rng(31)
        for _ in range(100):
            p = SuspensionPoint(
                SolenoidPoint.make(float(rng.random()),
                                   ProfiniteInt(8, int(rng.integers(0, 40320)))),
                float(rng.random()))
            t = float(rng.uniform(0, 3))
            u = float(rng.uniform(0, 3))
            lhs = cocycle(chi, t + u, p, m)
            rhs = cocycle(chi, u, flow(t, p, m), m) + cocycle(chi, t, p, m)
            assert abs(lhs - rhs) < 1e-9

    def test_torus_cocycle_identity(self):
        m = TorusLiftMap((0.3, 0.5), [TrigTerm2(0, 0.05, 1, 1, 0.0)])
        chi = SuspensionChar(TorusChar(1, -2), 1)
        rng = np.random.default_rng(37)
        for _ in range(100):
            p = SuspensionPoint(TorusPoint.make(float(rng.random()),
                                                float(rng.random())),
                                float(rng.random()))
            t = float(rng.uniform(0, 3))
            u = float(rng.uniform(0, 3))
            lhs = cocycle(chi, t + u, p, m)
            rhs = cocycle(chi, u, flow(t, p, m), m) + cocycle(chi, t, p, m)
            assert abs(lhs - rhs) < 1e-9


class TestSuspensionChar:
    def test_pure_fiber_character(self):
        chi = SuspensionChar(CircleChar(0), 1)
        p = SuspensionPoint.make(CirclePoint.make(0.9), Fraction(1, 4))
        assert char_eval_suspension(chi, p).exact == Fraction(1, 4)

    def test_base_character_only(self):
        chi = SuspensionChar(CircleChar(1), 0)
        p = SuspensionPoint.make(CirclePoint.make(Fraction(1, 2)), 0.33)
        assert char_eval_suspension(chi, p).exact == Fraction(1, 2)

    def test_homomorphism_in_chi_exact(self):
        p = SuspensionPoint.make(CirclePoint.make(Fraction(3, 7)),
                                 Fraction(2, 5))
        rng = np.random.default_rng(41)
        for _ in range(100):
            k1, k2 = int(rng.integers(-9, 10)), int(rng.integers(-9, 10))
            n1, n2 = int(rng.integers(-9, 10)), int(rng.integers(-9, 10))
            a = char_eval_suspension(SuspensionChar(CircleChar(k1), n1), p)
            b = char_eval_suspension(SuspensionChar(CircleChar(k2), n2), p)
            c = char_eval_suspension(
                SuspensionChar(CircleChar(k1 + k2), n1 + n2), p)
            assert (a * b).exact == c.exact


class TestProductMeasure:
    def test_seed_determinism(self):
        g = CircleGroup()
        a = [product_measure_sample(g.haar, np.random.default_rng(5))
             for _ in range(4)]
        b = [product_measure_sample(g.haar, np.random.default_rng(5))
             for _ in range(4)]
        assert all(suspension_distance(x, y) == 0 for x, y in zip(a, b))

    def test_fiber_marginal_uniform_ks(self):
        rng = np.random.default_rng(1001)
        n = 10**5
        ss = np.sort([product_measure_sample(CircleGroup().haar, rng).s
                      for _ in range(n)])
        grid = np.arange(1, n + 1) / n
        ks = max(np.max(np.abs(grid - ss)), np.max(np.abs(ss - (grid - 1 / n))))
        assert ks < 0.02

    def test_base_marginal_chi_square(self):
        # level-2 projection of profinite Haar x uniform should be 50/50
        rng = np.random.default_rng(1002)
        g = SolenoidGroup(4)
        n = 2 * 10**4
        counts = [0, 0]
        for _ in range(n):
            p = product_measure_sample(g.haar, rng)
            counts[p.base.fiber.project(2)] += 1
        chi2 = sum((c - n / 2) ** 2 / (n / 2) for c in counts)
        assert chi2 < 6.64  # 99th percentile of chi-square with 1 dof


class TestPropertySuite:
    def test_suite_arnold(self):
        rng = np.random.default_rng(71)
        chars = [SuspensionChar(CircleChar(k), n)
                 for k in (-2, 0, 1, 3) for n in (-1, 0, 2)]
        res = property_suite(ArnoldFamily(0.3, 0.1), chars, rng,
                             CircleGroup().haar, trials=100)
        assert res["flow_property"] < 1e-9
        assert res["cocycle_identity"] < 1e-9
        assert res["defining_relation"] < 1e-9
