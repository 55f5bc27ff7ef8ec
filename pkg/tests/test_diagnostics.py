import warnings

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import SSH_FIG1, SSH_KSTAR, TFI_FIG1, TFI_KSTAR, momenta, ssh_momenta, ssh_specs, tfi_specs, times
from dqpt.diagnostics import (
    binary_entropy,
    entropy,
    entropy_ssh,
    entropy_tfi,
    loschmidt_amplitude,
    loschmidt_echo,
    loschmidt_echo_tfi,
    otoc,
    otoc_ssh,
    otoc_tfi,
    rate_function,
)
from dqpt.models import Model, ModeGrid, QuenchSpec, TfiParams, mode_angles, tfi_dispersion
from dqpt.oracle import oracle_entropy, oracle_loschmidt
from dqpt.quench import mode_state

LN2 = np.log(2.0)
T_STAR_TFI = np.pi / (2 * tfi_dispersion(TFI_KSTAR, TfiParams(h=1.5)))


class TestEntropy:
    def test_no_quench(self):
        k = ModeGrid(Model.TFI, 40).momenta
        assert np.max(entropy_tfi(k, QuenchSpec.tfi(0.4, 0.4))) == 0.0
        assert np.max(entropy_ssh(ModeGrid(Model.SSH, 40).momenta, QuenchSpec.ssh(1.5, 1.5))) == 0.0

    def test_maximal_at_critical_momentum(self):
        assert entropy_tfi(TFI_KSTAR, TFI_FIG1) == pytest.approx(LN2, abs=1e-12)
        assert entropy_ssh(SSH_KSTAR, SSH_FIG1) == pytest.approx(LN2, abs=1e-12)

    def test_binary_entropy_reference(self):
        # mpmath reference for p = cos^2(0.3)
        assert binary_entropy(np.cos(0.3) ** 2) == pytest.approx(0.2963216472918646, abs=1e-14)
        assert binary_entropy(0.0) == 0.0 and binary_entropy(1.0) == 0.0

    def test_tfi_against_oracle(self):
        for k in (0.4, np.pi / 2, 2.9):
            assert entropy_tfi(k, TFI_FIG1) == pytest.approx(oracle_entropy(k, TFI_FIG1, 1.7), abs=1e-10)

    def test_ssh_reference(self):
        q = np.cos(0.3217505543966422) ** 2
        assert entropy_ssh(np.pi / 2, SSH_FIG1) == pytest.approx(binary_entropy(q), abs=1e-14)
        # the closed form is the band-mode bipartition entropy of the oracle state
        band = oracle_entropy(np.pi / 2, SSH_FIG1, 0.7, bipartition="band")
        assert entropy_ssh(np.pi / 2, SSH_FIG1) == pytest.approx(band, abs=1e-10)

    def test_dispatch(self):
        assert entropy(1.0, TFI_FIG1) == entropy_tfi(1.0, TFI_FIG1)
        with pytest.raises(ValueError):
            entropy_tfi(1.0, SSH_FIG1)


class TestLoschmidt:
    @pytest.mark.parametrize("spec", [TFI_FIG1, SSH_FIG1])
    def test_unity_at_zero_time(self, spec):
        k = ModeGrid(spec.model, 20).momenta
        np.testing.assert_allclose(loschmidt_amplitude(k, spec, 0.0), 1.0, atol=1e-15)
        np.testing.assert_allclose(loschmidt_echo(k, spec, 0.0), 1.0, atol=1e-15)

    def test_no_quench_is_pure_phase(self):
        t = np.linspace(0, 20, 101)
        g = loschmidt_amplitude(1.2, QuenchSpec.tfi(0.3, 0.3), t)
        np.testing.assert_allclose(np.abs(g), 1.0, atol=1e-15)

    def test_tfi_fisher_zero(self):
        assert loschmidt_echo_tfi(TFI_KSTAR, TFI_FIG1, T_STAR_TFI) < 1e-18

    def test_ssh_fisher_zero(self):
        e = np.sqrt(1.8)
        assert abs(loschmidt_amplitude(SSH_KSTAR, SSH_FIG1, np.pi / (2 * e))) ** 2 < 1e-18
        # a full period pi / E later the amplitude is back to modulus one
        assert abs(loschmidt_amplitude(SSH_KSTAR, SSH_FIG1, np.pi / e)) == pytest.approx(1.0, abs=1e-12)

    def test_tfi_reference_against_oracle(self):
        assert loschmidt_echo_tfi(np.pi / 2, TFI_FIG1, 1.0) == pytest.approx(
            oracle_loschmidt(np.pi / 2, TFI_FIG1, 1.0), abs=1e-12
        )

    @given(tfi_specs(), momenta, times)
    @settings(max_examples=1000, deadline=None)
    def test_tfi_echo_is_amplitude_squared(self, spec, k, t):
        g = loschmidt_amplitude(k, spec, t)
        st = mode_state(k, spec, 0.0), mode_state(k, spec, t)
        overlap = np.conj(st[0].amp0) * st[1].amp0 + np.conj(st[0].amp1) * st[1].amp1
        assert abs(g - overlap) < 1e-12
        assert abs(abs(g) ** 2 - loschmidt_echo_tfi(k, spec, t)) < 1e-12
        assert -1e-12 <= loschmidt_echo_tfi(k, spec, t) <= 1 + 1e-12

    @given(ssh_specs(), ssh_momenta, times)
    @settings(max_examples=500, deadline=None)
    def test_ssh_amplitude_bound(self, spec, k, t):
        if mode_angles(k, spec).energy_post < 1e-6:
            return
        assert abs(loschmidt_amplitude(k, spec, t)) <= 1 + 1e-12

    def test_echo_envelope_links_to_entropy(self):
        ks = ModeGrid(Model.TFI, 200).momenta
        for k in ks:
            e = mode_angles(k, TFI_FIG1).energy_post
            t = np.linspace(0, np.pi / e, 2001)
            env = np.min(loschmidt_echo_tfi(k, TFI_FIG1, t))
            assert env == pytest.approx(np.cos(2 * mode_angles(k, TFI_FIG1).delta_theta) ** 2, abs=1e-6)


class TestOtoc:
    @pytest.mark.parametrize("spec", [TFI_FIG1, SSH_FIG1])
    def test_zero_at_zero_time(self, spec):
        k = ModeGrid(spec.model, 30).momenta
        assert np.max(np.abs(otoc(k, spec, 0.0))) == 0.0

    def test_vanishes_at_critical_momentum(self):
        t = np.linspace(0, 20, 4000)
        assert np.max(otoc_tfi(TFI_KSTAR, TFI_FIG1, t)) < 1e-10
        assert np.max(otoc_ssh(SSH_KSTAR, SSH_FIG1, t)) < 1e-10

    def test_tfi_closed_form_value(self):
        ang = mode_angles(np.pi / 2, TFI_FIG1)
        ref = np.sin(2 * 0.29400130177378375) ** 2 * np.sin(np.sqrt(3.25)) ** 2 * np.cos(2 * ang.delta_theta) ** 2
        assert otoc_tfi(np.pi / 2, TFI_FIG1, 1.0) == pytest.approx(ref, abs=1e-14)

    def test_ssh_closed_form_value(self):
        ref = np.sin(1.1071487177940904) ** 2 * np.sin(np.sqrt(5) * 0.9) ** 2 * np.cos(0.6435011087932844) ** 2
        assert otoc_ssh(np.pi / 2, SSH_FIG1, 0.9) == pytest.approx(ref, abs=1e-14)

    @given(tfi_specs(), momenta, times)
    @settings(max_examples=500, deadline=None)
    def test_tfi_period_and_bounds(self, spec, k, t):
        e = mode_angles(k, spec).energy_post
        c = otoc_tfi(k, spec, t)
        assert -1e-12 <= c <= 1 + 1e-12
        assert abs(otoc_tfi(k, spec, t + np.pi / e) - c) < 1e-12

    @given(ssh_specs(), ssh_momenta, times)
    @settings(max_examples=500, deadline=None)
    def test_ssh_period_and_bounds(self, spec, k, t):
        e = mode_angles(k, spec).energy_post
        if e < 1e-6:
            return
        c = otoc_ssh(k, spec, t)
        assert -1e-12 <= c <= 1 + 1e-12
        assert abs(otoc_ssh(k, spec, t + np.pi / e) - c) < 1e-12


class TestRateFunction:
    @pytest.mark.parametrize("spec", [TFI_FIG1, SSH_FIG1])
    def test_zero_at_t0_and_nonnegative(self, spec):
        lam = rate_function(spec, ModeGrid(spec.model, 200), np.linspace(0, 10, 501))
        assert abs(lam[0]) < 1e-12
        assert np.min(lam) >= -1e-12

    def test_no_quench(self):
        lam = rate_function(QuenchSpec.ssh(0.5, 0.5), ModeGrid(Model.SSH, 100), np.linspace(0, 10, 50))
        assert np.max(np.abs(lam)) < 1e-14

    def test_scalar_time(self):
        assert isinstance(rate_function(TFI_FIG1, ModeGrid(Model.TFI, 100), 1.0), float)

    def test_gapless_modes_are_skipped_with_warning(self):
        spec = QuenchSpec.ssh(0.5, 1.0)
        with pytest.warns(RuntimeWarning, match="skipped 1 gapless"):
            lam = rate_function(spec, ModeGrid(Model.SSH, 64), np.linspace(0, 5, 20))
        assert np.all(np.isfinite(lam))

    def test_model_mismatch(self):
        with pytest.raises(ValueError):
            rate_function(TFI_FIG1, ModeGrid(Model.SSH, 10), 1.0)

    def test_floor_keeps_exact_zero_finite(self):
        # grid with a mode exactly at a Fisher zero: echo 0 -> floored log
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            lam = rate_function(SSH_FIG1, ModeGrid(Model.SSH, 100), [np.pi / (2 * np.sqrt(1.8))])
        assert np.isfinite(lam).all()

    def test_peak_converges_to_critical_time(self):
        t = T_STAR_TFI + np.linspace(-0.02, 0.02, 401)
        offsets = []
        for n in (1000, 10000, 100000):
            lam = rate_function(TFI_FIG1, ModeGrid(Model.TFI, n), t)
            assert np.isfinite(lam.max()) and lam.max() < 1.0
            offsets.append(abs(t[np.argmax(lam)] - T_STAR_TFI))
        assert offsets[0] > offsets[1] > offsets[2]
        assert offsets[2] < 2e-4
