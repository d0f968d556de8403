import derive_scenarios
import write_cases


def test_scenario_files_current():
    assert derive_scenarios.main(["--check"]) == 0


def test_case_files_current():
    assert write_cases.main(["--check"]) == 0
