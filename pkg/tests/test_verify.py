from expfam import VerificationSuite, categorical, run_verification
from expfam.verify import CHECK_NAMES, DEFAULT_TOLERANCES

from conftest import make_family


def small_suite(seed=0, count=3):
    return VerificationSuite(
        seed=seed, instance_counts={name: count for name in CHECK_NAMES}
    )


def test_all_checks_pass_on_random_family(rng):
    fam = make_family(rng, n_max=30, d_max=5)
    outcomes = run_verification(fam, small_suite())
    failures = [o for o in outcomes if not o.report.passed]
    assert failures == []
    assert {o.check for o in outcomes} == set(CHECK_NAMES)


def test_all_checks_pass_on_categorical():
    # rank-deficient statistic stresses the solver-backed checks
    outcomes = run_verification(categorical(5), small_suite(seed=2))
    assert all(o.report.passed for o in outcomes)


def test_outcomes_sorted_and_deterministic(rng):
    fam = make_family(rng, n_max=15, d_max=3)
    first = run_verification(fam, small_suite(seed=7))
    second = run_verification(fam, small_suite(seed=7))
    keys = [(o.check, o.instance, o.detail) for o in first]
    assert keys == sorted(keys)
    assert keys == [(o.check, o.instance, o.detail) for o in second]
    for a, b in zip(first, second):
        assert a.report == b.report


def test_different_seed_changes_instances(rng):
    fam = make_family(rng, n_max=15, d_max=3)
    first = run_verification(fam, small_suite(seed=1, count=2))
    second = run_verification(fam, small_suite(seed=2, count=2))
    assert any(a.report.lhs != b.report.lhs for a, b in zip(first, second))


def test_absurd_tolerances_fail_loudly(rng):
    fam = make_family(rng, n_max=15, d_max=3)
    suite = VerificationSuite(
        seed=0,
        instance_counts={name: 2 for name in CHECK_NAMES},
        tolerances={"kl_difference": (1e-300, 1e-300)},
    )
    outcomes = run_verification(fam, suite)
    assert any(
        not o.report.passed for o in outcomes if o.check == "kl_difference"
    )
    # other checks keep their defaults and still pass
    assert all(o.report.passed for o in outcomes if o.check == "bregman")


def test_default_tolerances_cover_every_check():
    assert set(DEFAULT_TOLERANCES) == set(CHECK_NAMES)
