import json
import math

import numpy as np
import pytest

from gsqr import (
    DiagnosticsReport,
    EPS_BINARY64,
    Rng,
    backward_error,
    cgs_p,
    cgs_s,
    conditioned_matrix,
    diagnose,
    example1_matrix,
    householder_qr,
    normal_residual,
    orthogonality_loss,
    summary_table,
)

EPS = EPS_BINARY64


class TestIdentityInput:
    @pytest.mark.parametrize("factorizer", [cgs_s, cgs_p])
    def test_all_errors_exactly_zero(self, factorizer):
        a = np.eye(4)
        rep = diagnose(a, factorizer(a))
        for row in rep.rows:
            assert row.backward_error == 0.0
            assert row.normal_residual == 0.0
            assert row.mu == 0.0
            assert row.ortho_loss == 0.0
            assert row.q_norm == 1.0
            assert row.backward_pass and row.normal_pass and row.mu_pass
            assert row.ortho_pass and row.q_norm_pass


@pytest.fixture(scope="module")
def reports():
    a = example1_matrix()
    return diagnose(a, cgs_s(a)), diagnose(a, cgs_p(a))


class TestExample1:
    def test_pythagorean_normal_residual_at_machine_level(self, reports):
        _, rep_p = reports
        s = rep_p.summary
        rel = s.normal_residual / (s.norm_a * s.norm_a)
        assert 3e-18 <= rel <= 1e-15  # reference runs report ~3.4e-17

    def test_standard_normal_residual_violates_bound(self, reports):
        rep_s, _ = reports
        s = rep_s.summary
        rel = s.normal_residual / (s.norm_a * s.norm_a)
        assert rel >= 1e-10  # reference runs report ~4.5e-9
        assert s.normal_residual > 100.0 * s.normal_bound
        assert not s.normal_pass

    def test_orthogonality_losses_order_of_magnitude(self, reports):
        rep_s, rep_p = reports
        # ~3.99e-6 and ~5.22e-5 in reference runs; the bound is vacuous here
        # (the conditioning predicate fails), so only magnitudes are pinned
        assert 1e-7 <= rep_s.summary.ortho_loss <= 1e-4
        assert 5e-6 <= rep_p.summary.ortho_loss <= 5e-4
        assert not rep_p.assumption.satisfied

    def test_report_shape(self, reports):
        rep_s, rep_p = reports
        for rep in (rep_s, rep_p):
            assert rep.m == 6 and rep.n == 5
            assert len(rep.rows) == 5
            assert rep.rows[-1] == rep.summary
            assert [row.k for row in rep.rows] == [1, 2, 3, 4, 5]


class TestMeasurementHelpers:
    def test_match_report_summary(self):
        # the helpers run the Jacobi to full pairwise tolerance while the
        # report's sigma_max-only measurements stop at 1e-9; agreement is
        # bounded by (k-1)*1e-9/2
        a = conditioned_matrix(Rng(12), 9, 4, 100.0)
        f = cgs_p(a)
        rep = diagnose(a, f)
        s = rep.summary
        assert backward_error(a, f.q, f.r) == pytest.approx(s.backward_error, rel=1e-8)
        assert normal_residual(a, f.r) == pytest.approx(s.normal_residual, rel=1e-8)
        assert orthogonality_loss(f.q) == pytest.approx(s.ortho_loss, rel=1e-8)


class TestAuditsAgainstBounds:
    def test_householder_passes_with_no_slack(self):
        # the oracle factorization satisfies every bound outright
        for seed, kappa in ((0, 1e2), (1, 1e4), (2, 1e3)):
            rng = Rng(seed)
            m = 30 + rng.integers(0, 71)
            n = 2 + rng.integers(0, 14)
            a = conditioned_matrix(rng, m, n, kappa)
            rep = diagnose(a, householder_qr(a))
            for row in rep.rows:
                assert row.backward_pass
                assert row.normal_pass
                assert row.mu_pass
                assert row.ortho_pass
                assert row.q_norm_pass

    def test_cgs_p_passes_with_slack_10(self):
        for seed, kappa in ((3, 1e2), (4, 1e5), (5, 1e3)):
            rng = Rng(seed)
            m = 30 + rng.integers(0, 71)
            n = 2 + rng.integers(0, 14)
            a = conditioned_matrix(rng, m, n, kappa)
            rep = diagnose(a, cgs_p(a))
            assert rep.assumption.satisfied
            for row in rep.rows:
                assert row.backward_error <= 10.0 * row.backward_bound
                assert row.normal_residual <= 10.0 * row.normal_bound
                assert abs(row.mu) <= 10.0 * row.mu_bound
                assert row.ortho_loss <= 10.0 * row.ortho_bound
                assert row.q_norm <= math.sqrt(2.0) + 1e-10

    def test_bounds_monotone_in_k(self):
        a = conditioned_matrix(Rng(8), 25, 10, 1e3)
        rep = diagnose(a, cgs_p(a))
        for prev, cur in zip(rep.rows, rep.rows[1:]):
            assert cur.backward_bound >= prev.backward_bound
            assert cur.normal_bound >= prev.normal_bound
            assert cur.mu_bound >= prev.mu_bound
            # kappa2 of leading blocks grows by singular-value interlacing,
            # so the orthogonality bound grows too (up to rounding)
            assert cur.ortho_bound >= prev.ortho_bound * (1.0 - 1e-12)
            assert cur.kappa_r >= prev.kappa_r * (1.0 - 1e-12)

    def test_q_norm_at_least_one(self):
        a = conditioned_matrix(Rng(9), 20, 6, 1e2)
        rep = diagnose(a, cgs_p(a))
        for row in rep.rows:
            assert row.q_norm >= 1.0 - 1e-12

    def test_frobenius_cross_checks_dominate(self):
        # ||.||_2 <= ||.||_F always
        a = conditioned_matrix(Rng(14), 15, 6, 1e2)
        rep = diagnose(a, cgs_s(a))
        for row in rep.rows:
            assert row.backward_error <= row.backward_error_fro * (1 + 1e-12)
            assert row.normal_residual <= row.normal_residual_fro * (1 + 1e-12)
            assert row.ortho_loss <= row.ortho_loss_fro * (1 + 1e-12)


class TestDeterminismAndSerialization:
    def test_diagnose_bitwise_deterministic(self):
        a = conditioned_matrix(Rng(31), 12, 5, 1e2)
        f = cgs_p(a)
        rep1 = diagnose(a, f)
        rep2 = diagnose(a, f)
        assert rep1.rows == rep2.rows
        assert rep1.assumption == rep2.assumption

    def test_json_round_trip(self):
        a = conditioned_matrix(Rng(32), 10, 4, 1e2)
        rep = diagnose(a, cgs_p(a))
        rep.seed = 32
        restored = DiagnosticsReport.from_dict(json.loads(json.dumps(rep.to_dict())))
        assert restored == rep

    def test_epsilon_scales_bounds_not_measurements(self):
        a = example1_matrix()
        f = cgs_p(a)
        rep1 = diagnose(a, f, EPS)
        rep2 = diagnose(a, f, 1e-8)
        for r1, r2 in zip(rep1.rows, rep2.rows):
            assert r2.backward_error == r1.backward_error
            assert r2.normal_residual == r1.normal_residual
            scale = 1e-8 / EPS
            assert r2.backward_bound == pytest.approx(r1.backward_bound * scale)
            assert r2.normal_bound == pytest.approx(r1.normal_bound * scale)


class TestSummaryTable:
    def test_identity_report_rows_are_zero(self):
        a = np.eye(3)
        table = summary_table([diagnose(a, cgs_p(a))])
        assert table.rows == [["cgs-p", "0.0000e+00", "0.0000e+00"]]

    def test_example1_pair_shape(self):
        a = example1_matrix()
        table = summary_table([diagnose(a, cgs_s(a)), diagnose(a, cgs_p(a))])
        assert table.columns == ["algorithm", "normal_residual/||A||^2", "ortho_loss"]
        assert [row[0] for row in table.rows] == ["cgs-s", "cgs-p"]
        md = table.to_markdown()
        assert md.count("|") > 0 and "cgs-p" in md
        csv_text = table.to_csv()
        assert csv_text.splitlines()[0].startswith("algorithm,")

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            summary_table([])
