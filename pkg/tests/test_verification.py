from src.simulation.verification import (
    EXTENDED_CASES,
    STANDARD_CASES,
    channel_ml,
    exact_detectors,
    metric_consistent,
    run_verification,
    verify_case,
)


class TestOracle:

    def test_channel_ml_recovers_noiseless_vector(self, rng, qpsk):
        H = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        x = qpsk.points[[3, 0, 2]]
        assert channel_ml(H, H @ x, qpsk.points) == (3, 0, 2)

    def test_metric_tolerance(self):
        assert metric_consistent(1.0, 1.0 + 1e-12)
        assert not metric_consistent(1.0, 1.0 + 1e-6)
        assert metric_consistent(0.0, 1e-13)

    def test_exact_configurations(self):
        labels = [cfg.label for cfg in exact_detectors(2, 16)]
        assert labels == ["ml-bruteforce", "ml-dijkstra", "ml-best-first", "dijkstra-L256", "qrd-mld-M16"]


class TestSuite:

    def test_healthy_build_passes(self):
        report = run_verification(instances=40, seed=5)
        assert report.passed
        lines = report.summary_lines()
        assert any("2x2 QPSK ml-dijkstra: 40/40 exact" in line for line in lines)
        assert any("(heuristic)" in line for line in lines)
        assert len(report.calibration) == 2

    def test_corrupted_metric_fails(self):
        report = run_verification(instances=5, seed=5, corrupt_metric=True, calibration_points=())
        assert not report.passed

    def test_extended_cases(self):
        for index, case in enumerate(EXTENDED_CASES):
            report = verify_case(case, 25, seed=8, case_index=index)
            assert report.passed, case.name
            assert all(count == 25 for count in report.exact.values())

    def test_heuristics_never_fail_the_case(self):
        report = verify_case(STANDARD_CASES[1], 20, seed=2, case_index=1, snr_range=(0.0, 2.0))
        assert report.passed
        assert set(report.heuristic) == {"dijkstra-L1", "qrd-mld-M1"}
        assert all(0 <= count <= 20 for count in report.heuristic.values())
