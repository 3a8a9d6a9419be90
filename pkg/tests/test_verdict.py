from fractions import Fraction

import numpy as np
import pytest

from cdsp import build_dirichlet, build_trig, extract_C, factorize, rotate_measure
from cdsp.debranges import eval_S
from cdsp.errors import DegenerateAlphas
from cdsp.fejer import FejerRiesz
from cdsp.policy import NumericPolicy
from cdsp.verdict import (INCONCLUSIVE, NOT_SUBNORMAL, SUBNORMAL_NUMERIC,
                          decide, moment_truncation, offdiag_sums,
                          pair_premises, psd_search)


def s_of(pipe):
    return lambda z, u: eval_S(pipe.dd, z, u)


class TestPremises:
    def test_reference_cases_all_hold(self, pipes):
        for pipe in pipes.values():
            assert all(ev.premise_ok for ev in pair_premises(pipe.fr))

    def test_real_product_on_ray_fails(self):
        fr = FejerRiesz(np.array([2.0 + 0j, 3.0 + 0j]), 1.0)
        evs = pair_premises(fr)
        assert all(not ev.premise_ok for ev in evs)
        assert evs[0].product == pytest.approx(6.0)

    def test_negative_real_product_holds(self):
        fr = FejerRiesz(np.array([2.0 + 0j, -3.0 + 0j]), 1.0)
        assert all(ev.premise_ok for ev in pair_premises(fr))

    def test_single_root_has_no_pairs(self):
        fr = FejerRiesz(np.array([2.0 + 0j]), 1.0)
        assert pair_premises(fr) == []


class TestOffdiag:
    def test_three_point_normalized_norm(self, three_point):
        evs = offdiag_sums(three_point.fr, s_of(three_point))
        norms = [abs(ev.S_rt) / ev.S_scale for ev in evs]
        # all six pairs have the same size by symmetry
        assert max(norms) == pytest.approx(min(norms), rel=1e-8)
        assert max(norms) == pytest.approx(0.182, abs=2e-3)

    def test_antipodal_vanishes(self, pipes):
        pipe = pipes["antipodal"]
        evs = offdiag_sums(pipe.fr, s_of(pipe))
        assert max(abs(ev.S_rt) / ev.S_scale for ev in evs) < 1e-9

    def test_scale_is_geometric_mean_of_diagonal(self, three_point):
        fr = three_point.fr
        s = s_of(three_point)
        evs = offdiag_sums(fr, s)
        d0 = s(fr.alphas[0], fr.alphas[0]).real
        d1 = s(fr.alphas[1], fr.alphas[1]).real
        ev = next(e for e in evs if (e.r, e.t) == (0, 1))
        assert ev.S_scale == pytest.approx(np.sqrt(d0 * d1), rel=1e-12)


class TestMomentTruncation:
    def test_hermitian(self, three_point):
        M = moment_truncation(three_point.fr, s_of(three_point), 2, 12)
        assert np.linalg.norm(M - M.conj().T) < 1e-12

    def test_antipodal_truncations_psd(self, pipes):
        pipe = pipes["antipodal"]
        for l in range(1, 6):
            M = moment_truncation(pipe.fr, s_of(pipe), l, 32)
            tr = abs(np.trace(M).real)
            assert np.min(np.linalg.eigvalsh(M)) >= -1e-10 * tr

    def test_three_point_violation_appears(self, three_point):
        probes = psd_search(three_point.fr, s_of(three_point), 16, 64)
        tol = 1e-8
        assert any(p.min_eig < -tol * abs(p.trace) for p in probes)

    def test_degenerate_roots_rejected(self):
        fr = FejerRiesz(np.array([2.0 + 0j, 2.0 + 0j]), 1.0)
        with pytest.raises(DegenerateAlphas):
            moment_truncation(fr, lambda z, u: 1.0, 1, 8)

    def test_exhaustive_collects_all_orders(self, three_point):
        probes = psd_search(three_point.fr, s_of(three_point), 6, 32,
                            exhaustive=True)
        assert [p.l for p in probes] == [1, 2, 3, 4, 5, 6]


class TestDecide:
    def test_reference_decisions(self, pipes):
        expect = {"three_point": NOT_SUBNORMAL, "single": SUBNORMAL_NUMERIC,
                  "antipodal": SUBNORMAL_NUMERIC, "quarter": NOT_SUBNORMAL}
        for name, pipe in pipes.items():
            v = decide(pipe.fr, s_of(pipe))
            assert v.decision == expect[name], name

    def test_three_point_max_norm(self, three_point):
        v = decide(three_point.fr, s_of(three_point))
        assert v.max_offdiag_norm == pytest.approx(0.182, abs=2e-3)

    def test_gray_zone_is_inconclusive(self):
        fr = FejerRiesz(np.array([2.0 + 0j, 3.0j]), 1.0)
        s = lambda z, u: 1.0 if abs(z - u) < 1e-12 else 1e-5
        v = decide(fr, s, run_psd=False)
        assert v.decision == INCONCLUSIVE

    def test_broken_premise_without_violation_is_inconclusive(self):
        fr = FejerRiesz(np.array([2.0 + 0j, 3.0 + 0j]), 1.0)
        s = lambda z, u: 1.0 if abs(z - u) < 1e-12 else 0.0
        v = decide(fr, s, run_psd=False)
        assert v.decision == INCONCLUSIVE

    def test_rotation_invariance(self, three_point):
        m = rotate_measure(three_point.measure, Fraction(1, 7))
        fr = factorize(build_trig(m))
        dd = build_dirichlet(m, fr)
        extract_C(dd)
        v = decide(fr, lambda z, u: eval_S(dd, z, u))
        v0 = decide(three_point.fr, s_of(three_point))
        assert v.decision == v0.decision == NOT_SUBNORMAL
        assert v.max_offdiag_norm == pytest.approx(v0.max_offdiag_norm, rel=1e-7)

    def test_weight_permutation_invariance(self):
        for spec in ("0,1/3,2/3:1,2,0.5", "2/3,0,1/3:0.5,1,2"):
            m = __import__("cdsp").parse_measure(spec)
            fr = factorize(build_trig(m))
            dd = build_dirichlet(m, fr)
            v = decide(fr, lambda z, u, dd=dd: eval_S(dd, z, u))
            if spec.startswith("0"):
                first = v
            else:
                assert v.decision == first.decision
                assert v.max_offdiag_norm == pytest.approx(
                    first.max_offdiag_norm, rel=1e-8)

    def test_policy_thresholds_respected(self, three_point):
        # absurdly loose rejection threshold pushes the reference case into
        # the gray zone
        loose = NumericPolicy(zero_reject=10.0, zero_accept=1e-7)
        v = decide(three_point.fr, s_of(three_point), loose, run_psd=False)
        assert v.decision == INCONCLUSIVE
