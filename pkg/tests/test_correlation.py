import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracle
from golayzacz import (GaussianInt, GolayParams, OffsetSpec, PhaseSeq, QamParams,
                       aperiodic_autocorr, estimate_delay, find_zacz, generate,
                       partition_sums, periodic_autocorr, predicted_zones,
                       profile_to_csv, qam_sequence, verify_theorem)
from golayzacz.correlation import (CorrProfile, PreconditionError, theorem_violations,
                                   zero_intervals, zone_violations)
from golayzacz.gbf import random_instance

from test_gbf import golay_params


def profile_from(values):
    v = np.asarray(values, dtype=complex)
    return CorrProfile("periodic", v.real.copy(), v.imag.copy(), exact=False)


class TestProfiles:
    def test_constant_aperiodic(self):
        prof = aperiodic_autocorr(PhaseSeq(2, [0, 0, 0, 0]))
        assert prof.exact
        assert list(prof.re) == [4, 3, 2, 1] and not prof.im.any()

    def test_m4_h2_against_double_loop(self):
        p = GolayParams(m=4, H=2, pi=(1, 2, 3, 4), c=(0,) * 5)
        a = generate(p)
        z = oracle.phase_to_complex(a.values, 2)
        assert np.allclose(aperiodic_autocorr(a).values, oracle.aperiodic(z))
        assert np.allclose(periodic_autocorr(a).values, oracle.periodic(z))

    def test_m5_h6_against_double_loop(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            pi = tuple(int(v) + 1 for v in rng.permutation(5))
            p = GolayParams(m=5, H=6, pi=pi, c=tuple(int(v) for v in rng.integers(0, 6, 6)))
            a = generate(p)
            ref = oracle.periodic(oracle.phase_to_complex(a.values, 6))
            assert np.abs(periodic_autocorr(a).values - ref).max() <= 1e-10

    def test_complex_input(self):
        rng = np.random.default_rng(2)
        z = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        assert np.allclose(periodic_autocorr(z).values, oracle.periodic(z))
        assert np.allclose(aperiodic_autocorr(z).values, oracle.aperiodic(z))

    def test_qam_against_double_loop(self):
        p = QamParams(3, GolayParams(m=4, H=4, pi=(2, 4, 1, 3), c=(1, 2, 0, 3, 1)),
                      OffsetSpec(2, d=((1, 3), (2, 2))))
        A = qam_sequence(p)
        assert np.allclose(periodic_autocorr(A).values, oracle.periodic(A.values))

    @settings(max_examples=40, deadline=None)
    @given(golay_params(m=st.integers(1, 6)))
    def test_wrap_identity_and_symmetry(self, p):
        a = generate(p)
        R = periodic_autocorr(a).values
        C = aperiodic_autocorr(a).values
        N = p.N
        for t in range(1, N):
            assert abs(R[t] - (C[t] + np.conj(C[N - t]))) <= 1e-10 * N
            assert abs(R[N - t] - np.conj(R[t])) <= 1e-10 * N
        assert R[0] == pytest.approx(N)

    @settings(max_examples=40, deadline=None)
    @given(golay_params(m=st.integers(1, 7)))
    def test_fft_agrees(self, p):
        a = generate(p)
        diff = periodic_autocorr(a, method="fft").values - periodic_autocorr(a).values
        assert np.abs(diff).max() <= 1e-8 * p.N

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            periodic_autocorr(PhaseSeq(2, [0, 1]), method="nope")

    def test_exact_value(self):
        prof = periodic_autocorr(PhaseSeq(4, [0, 1, 2, 3]))
        assert prof.exact_value(0) == GaussianInt(4, 0)
        with pytest.raises(ValueError):
            periodic_autocorr(PhaseSeq(6, [0, 1])).exact_value(0)


class TestZones:
    def test_intervals(self):
        mask = np.array([False, True, True, False, True, False, True, True])
        assert zero_intervals(mask) == ((1, 2), (4, 4), (6, 7))

    def test_degenerate_full_zone(self):
        rep = find_zacz(profile_from([8, 0, 0, 0, 0, 0, 0, 0]))
        assert rep.intervals == ((1, 7),)
        assert rep.lengths() == [7]

    def test_negative_tol(self):
        with pytest.raises(ValueError):
            find_zacz(profile_from([1, 0]), tol=-1)

    def test_aperiodic_rejected(self):
        with pytest.raises(ValueError):
            find_zacz(aperiodic_autocorr(PhaseSeq(2, [0, 0])))

    def test_tolerance_on_float_path(self):
        prof = profile_from([4, 1e-12, 0.5, 1e-12])
        assert find_zacz(prof).intervals == ((1, 1), (3, 3))
        assert find_zacz(prof, tol=1).intervals == ((1, 3),)
        assert find_zacz(prof).tol_used == pytest.approx(4e-9)

    def test_predicted(self):
        assert predicted_zones("A", 5) == [(1, 8), (24, 31)]
        assert predicted_zones("B", 5) == [(8, 24)]
        assert predicted_zones("C", 6) == [(1, 8), (24, 40), (56, 63)]

    def test_a1_m4(self):
        p = GolayParams(m=4, H=4, pi=(1, 2, 3, 4), c=(0, 0, 1, 3, 2))
        mask = periodic_autocorr(generate(p)).zero_mask()
        assert all(mask[t] for t in (1, 2, 3, 4, 12, 13, 14, 15))

    def test_b_m5_exact_zone(self):
        p = GolayParams(m=5, H=4, pi=(2, 1, 3, 4, 5), c=(0,) * 6)
        rep = find_zacz(periodic_autocorr(generate(p)))
        # the zone is maximal; isolated zeros at other even shifts also occur
        assert [iv for iv in rep.intervals if iv[1] - iv[0] > 0] == [(8, 24)]

    def test_example2_qam_has_no_origin_zone(self):
        base = GolayParams.from_dict({"m": 5, "H": 4, "pi": "(143)", "c": [0] * 6})
        p = QamParams(2, base, OffsetSpec(3, d=((1, 1, 1),), w=2))
        rep = find_zacz(periodic_autocorr(qam_sequence(p)))
        assert not rep.covers(1, 8)

    def test_zone_stability_over_tolerances(self):
        rng = np.random.default_rng(5)
        for tag in ("A1", "B", "C3"):
            p = random_instance(tag, 6, 6, rng)
            prof = periodic_autocorr(generate(p))
            N = p.N
            assert find_zacz(prof, 1e-9 * N).intervals == find_zacz(prof, 1e-6 * N).intervals


class TestZoneCheck:
    def test_holds(self):
        p = GolayParams(m=5, H=4, pi=(1, 2, 3, 4, 5), c=(0,) * 6)
        assert verify_theorem(p, "A1")

    def test_precondition(self):
        p = GolayParams(m=5, H=4, pi=(3, 5, 1, 2, 4), c=(0,) * 6)
        with pytest.raises(PreconditionError):
            verify_theorem(p, "A1")

    def test_case3_out_of_scope(self):
        base = GolayParams(m=5, H=4, pi=(1, 2, 3, 4, 5), c=(0,) * 6)
        p = QamParams(2, base, OffsetSpec(3, d=((1, 1, 1),), w=2))
        with pytest.raises(PreconditionError):
            verify_theorem(p, "A1")

    def test_corrupted_zone_detected(self):
        p = GolayParams(m=5, H=4, pi=(1, 2, 3, 4, 5), c=(0,) * 6)
        prof = periodic_autocorr(generate(p))
        assert zone_violations(prof, [(1, 9)]) == [9]

    def test_violations_listed(self):
        p = GolayParams(m=6, H=4, pi=(1, 2, 3, 4, 5, 6), c=(0,) * 7)
        assert theorem_violations(p, "A1") == []


class TestPartition:
    @settings(max_examples=60, deadline=None)
    @given(golay_params(m=st.integers(2, 6)), st.data())
    def test_lemmas(self, p, data):
        tau = data.draw(st.integers(1, p.N - 1))
        s = partition_sums(p, tau)
        R = periodic_autocorr(generate(p))
        tol = 1e-10 * p.N
        assert abs(complex(s.s1)) <= tol
        assert abs(complex(s.s2)) <= tol
        assert abs(complex(s.total) - R[tau]) <= tol

    def test_exact_for_h4(self):
        s = partition_sums(GolayParams(m=4, H=4, pi=(2, 1, 4, 3), c=(1, 2, 3, 0, 1)), 5)
        assert s.s1 == 0 and s.s2 == 0
        assert isinstance(s.s3, GaussianInt)

    def test_range(self):
        p = GolayParams(m=3, H=2, pi=(1, 2, 3), c=(0,) * 4)
        with pytest.raises(ValueError):
            partition_sums(p, 0)
        with pytest.raises(ValueError):
            partition_sums(p, 8)


class TestDelay:
    def test_zero_shift(self):
        a = generate(GolayParams(m=5, H=4, pi=(1, 2, 3, 4, 5), c=(0,) * 6))
        assert estimate_delay(a, a.to_complex(), 8) == 0

    def test_shift_inside_zone(self):
        p = random_instance("A1", 6, 4, np.random.default_rng(1))
        z = generate(p).to_complex()
        assert estimate_delay(generate(p), np.roll(z, 9), 17) == 9

    def test_window_bounds(self):
        z = np.ones(8)
        with pytest.raises(ValueError):
            estimate_delay(z, z, 9)
        with pytest.raises(ValueError):
            estimate_delay(z, np.ones(4))


class TestCsv:
    def test_header_and_rows(self):
        text = profile_to_csv(periodic_autocorr(PhaseSeq(2, [0] * 8)))
        lines = text.splitlines()
        assert lines[0] == "tau,re,im,abs"
        assert len(lines) == 9
        assert all(line.split(",")[3] == "8" for line in lines[1:])

    def test_qam_exact_rendering(self):
        p = QamParams(2, GolayParams(m=4, H=4, pi=(1, 2, 3, 4), c=(0,) * 5), OffsetSpec(1, d=((0, 0),)))
        row0 = profile_to_csv(periodic_autocorr(qam_sequence(p))).splitlines()[1]
        # |A_i|^2 = 9/5 everywhere, so R(0) = 16 * 9 / 5
        assert row0 == "0,28.800000000000001,0,28.800000000000001"

    def test_float_17_digits(self):
        text = profile_to_csv(periodic_autocorr(PhaseSeq(6, [0, 1])))
        re = float(text.splitlines()[2].split(",")[1])
        assert re == pytest.approx(2 * np.cos(np.pi / 3))
