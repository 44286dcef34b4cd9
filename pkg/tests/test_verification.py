import math

import pytest

from rejectq.core.harness.verification import (
    DEFAULT_SEED,
    FLIP_P,
    ROTATION_ANGLES,
    CheckResult,
    VerificationReport,
    _enumerated_acceptance,
    check_double_error_residual,
    check_exact_pair_states,
    check_fock_oracle,
    check_phase_error_blindness,
    check_repetition_code,
    check_rotation_quantization,
    check_single_flip_rejection,
    check_teleportation,
    check_two_sided_law,
    two_photon_acceptance,
    verify,
)


class TestOracles:
    def test_enumeration_matches_closed_form(self):
        for p in (0.0, 0.05, 0.1, 0.5):
            assert _enumerated_acceptance(p, 2) == pytest.approx(two_photon_acceptance(p))
            assert _enumerated_acceptance(p, 4) == pytest.approx(two_photon_acceptance(p) ** 2)

    def test_reference_values(self):
        assert two_photon_acceptance(FLIP_P) == pytest.approx(0.82)
        assert two_photon_acceptance(FLIP_P) ** 2 == pytest.approx(0.6724)

    def test_rotation_angles_exclude_pi(self):
        assert len(ROTATION_ANGLES) == 50
        assert ROTATION_ANGLES[0] == 0.0
        assert ROTATION_ANGLES[-1] < math.pi - 1e-3


class TestChecks:
    @pytest.mark.parametrize(
        "check",
        [
            check_exact_pair_states,
            check_single_flip_rejection,
            check_rotation_quantization,
            check_phase_error_blindness,
            check_repetition_code,
        ],
    )
    def test_exact_checks_pass(self, check):
        result = check()
        assert result.passed, result.measured

    def test_teleportation(self):
        assert check_teleportation(DEFAULT_SEED).passed

    def test_corrupted_corrections_are_caught(self, corrupted_corrections):
        result = check_teleportation(DEFAULT_SEED, corrupted_corrections)
        assert not result.passed

    def test_fock_oracle(self):
        assert check_fock_oracle(DEFAULT_SEED).passed

    def test_sampled_checks_with_fewer_trials(self):
        assert check_double_error_residual(20_000, DEFAULT_SEED, workers=2).passed
        assert check_two_sided_law(20_000, DEFAULT_SEED, workers=2).passed


class TestReport:
    def test_failures(self):
        report = VerificationReport(
            checks=[
                CheckResult(name="a", passed=True, measured="1", expected="1"),
                CheckResult(name="b", passed=False, measured="0", expected="1"),
            ]
        )
        assert not report.passed
        assert [check.name for check in report.failures()] == ["b"]

    def test_empty_report_passes(self):
        assert VerificationReport().passed


@pytest.mark.slow
def test_full_suite():
    seen = []
    report = verify(workers=4, on_check=seen.append)
    assert report.passed, [check.name for check in report.failures()]
    assert len(seen) == len(report.checks) == 10
