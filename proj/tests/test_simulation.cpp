#include <doctest.h>

#include <gicselect/report.hpp>
#include <gicselect/simulation.hpp>

#include <cmath>

using namespace gicselect;

TEST_CASE("dimension schedule")
{
    CHECK(dimension_for(100) == 157);
    CHECK(dimension_for(140) == 357);
    CHECK(dimension_for(180) == 691);
    CHECK(dimension_for(500) == 18376);
    for (int n = 100; n <= 500; n += 40) {
        CHECK(dimension_for(n) == int(std::floor(std::exp(std::pow(n - 20.0, 0.37)))));
    }
}

TEST_CASE("sparsity schedule")
{
    CHECK(sparsity_for(SimModel::Linear, 100) == 3);
    CHECK(sparsity_for(SimModel::Linear, 139) == 3);
    CHECK(sparsity_for(SimModel::Linear, 140) == 4);
    CHECK(sparsity_for(SimModel::Linear, 500) == 13);
    CHECK(sparsity_for(SimModel::Logistic, 179) == 3);
    CHECK(sparsity_for(SimModel::Logistic, 180) == 4);
    CHECK(sparsity_for(SimModel::Logistic, 500) == 8);
}

TEST_CASE("true coefficient anchors")
{
    const Vector lin = beta0_schedule(SimModel::Linear, 260);
    CHECK(lin.size() == dimension_for(260));
    const double expected_lin[] = {3, 1.5, 0, 0, 2, 2.5, 2.5, 2.5, 2.5, 0};
    for (int j = 0; j < 10; ++j) CHECK(lin[j] == expected_lin[j]);
    CHECK((lin.array() != 0.0).count() == 7);

    const Vector lg = beta0_schedule(SimModel::Logistic, 260);
    const double expected_lg[] = {-3, 1.5, 0, 0, -2, 2, -2, 0};
    for (int j = 0; j < 8; ++j) CHECK(lg[j] == expected_lg[j]);
    CHECK((lg.array() != 0.0).count() == 5);

    CHECK((beta0_schedule(SimModel::Linear, 100).array() != 0.0).count() == 3);
    CHECK(beta0_schedule(SimModel::Linear, 140)[5] == 2.5);
    CHECK(beta0_schedule(SimModel::Logistic, 180)[5] == 2.0);
    CHECK(beta0_schedule(SimModel::Logistic, 180)[6] == 0.0);
}

TEST_CASE("support classification and model error")
{
    const Support truth{0, 1, 4};
    CHECK(classify_support({0, 1, 4}, truth) == SupportClass::Exact);
    CHECK(classify_support({0, 1, 4, 7}, truth) == SupportClass::Overfit);
    CHECK(classify_support({0, 1}, truth) == SupportClass::Underfit);
    CHECK(classify_support({0, 1, 7}, truth) == SupportClass::Underfit);
    Vector a(2), b(2);
    a << 1.0, 2.0;
    b << 0.0, 0.0;
    CHECK(model_error(a, b) == doctest::Approx(5.0));
    Matrix s(2, 2);
    s << 2.0, 0.5, 0.5, 1.0;
    CHECK(model_error(a, b, s) == doctest::Approx(2.0 + 2.0 + 4.0));
}

TEST_CASE("generated data are deterministic and standardized")
{
    const SimDesign design = make_design(SimModel::Logistic, 100, 17);
    const SimData a = gen_dataset(design);
    const SimData b = gen_dataset(design);
    CHECK(a.data.x == b.data.x);
    CHECK(a.data.y == b.data.y);
    CHECK(a.data.x.col(3).norm() == doctest::Approx(10.0));
    CHECK(a.ctx.alpha0 == Support({0, 1, 4}));
    CHECK(design_family(design).kind == FamilyKind::Binomial);
    CHECK(design_family(make_design(SimModel::Linear, 100, 1)).scale_phi == 9.0);
    CHECK_FALSE(gen_dataset(make_design(SimModel::Logistic, 100, 18)).data.y == a.data.y);
}

TEST_CASE("oracle and infinite-penalty selectors")
{
    StudyOptions opt;
    opt.n_grid = {100};
    opt.reps = 3;
    opt.base_seed = 4;
    opt.path.grid_count = 30;
    opt.criteria = {StudyCriterion::truth_oracle(), StudyCriterion::fixed("huge", 1e12)};
    const SimReport rep = run_study(opt);
    const SimCell* oracle = rep.find(100, "scad", "oracle");
    const SimCell* huge = rep.find(100, "scad", "huge");
    REQUIRE(oracle);
    REQUIRE(huge);
    CHECK(oracle->percent_correct == 1.0);
    CHECK(oracle->median_relative_model_error == 1.0);
    CHECK(huge->underfit_rate == 1.0);
    CHECK(huge->mean_false_negatives == 3.0);
    CHECK(huge->mean_false_positives == 0.0);
}

TEST_CASE("study output does not depend on the thread count")
{
    StudyOptions opt;
    opt.n_grid = {100, 140};
    opt.reps = 4;
    opt.base_seed = 9;
    opt.path.grid_count = 40;
    opt.criteria = {StudyCriterion::standard(CriterionKind::BIC), StudyCriterion::standard(CriterionKind::GicLLL)};
    opt.threads = 1;
    const std::string one = sim_csv(run_study(opt));
    opt.threads = 3;
    const std::string three = sim_csv(run_study(opt));
    CHECK(one == three);
}
