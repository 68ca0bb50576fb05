#include "tickdiff/errors.hpp"
#include "tickdiff/panel.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

using namespace tickdiff;

namespace {

struct TailCase {
    double t;
    double dof;
    double sf;
};

// Upper tails P(T >= t), evaluated with 30-digit arbitrary-precision arithmetic.
const TailCase kTails[] = {
    {3.7982, 4, 0.0095666377602591189},   {7.0142, 4, 0.0010877712399442774},
    {8.7527, 4, 0.00046954229867393426},  {0.5, 1, 0.35241638234956674},
    {1.0, 2, 0.2113248654051871},         {2.0, 3, 0.069662984279421582},
    {-1.5, 7, 0.91135075650501496},       {0.1, 30, 0.46050480589513523},
    {12.0, 10, 1.4607044123849929e-7},    {3.0, 100, 0.0017039576716647299},
    {25.0, 4, 7.5987628816578702e-6},     {0.0, 5, 0.5},
    {-4.0, 2, 0.97140452079103168},
};

} // namespace

TEST_CASE("Student-t upper tail matches high-precision values")
{
    for (const auto& c : kTails) {
        CAPTURE(c.t);
        CAPTURE(c.dof);
        CHECK(student_t_sf(c.t, c.dof) == doctest::Approx(c.sf).epsilon(1e-10));
    }
}

TEST_CASE("Student-t tail is monotone and symmetric")
{
    double prev = 1.0;
    for (double t = -10.0; t <= 10.0; t += 0.25) {
        const double p = student_t_sf(t, 4);
        CHECK(p <= prev);
        CHECK(p + student_t_sf(-t, 4) == doctest::Approx(1.0).epsilon(1e-12));
        prev = p;
    }
    CHECK_THROWS_AS(student_t_sf(1.0, 0.0), ParameterError);
}

TEST_CASE("incomplete beta closed forms")
{
    for (double x : {0.0, 0.1, 0.37, 0.5, 0.93, 1.0}) {
        CHECK(incomplete_beta(1.0, 1.0, x) == doctest::Approx(x).epsilon(1e-12));
        CHECK(incomplete_beta(3.0, 1.0, x) == doctest::Approx(x * x * x).epsilon(1e-12));
        CHECK(incomplete_beta(2.0, 2.0, x) == doctest::Approx(x * x * (3.0 - 2.0 * x)).epsilon(1e-12));
    }
    CHECK(incomplete_beta(2.5, 2.5, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(incomplete_beta(0.0, 1.0, 0.5), ParameterError);
    CHECK_THROWS_AS(incomplete_beta(1.0, 1.0, 1.5), ParameterError);
}

TEST_CASE("paired t-test on a clearly positive panel")
{
    const auto r = paired_one_sided_ttest(std::vector<double>{0.30, 0.35, 0.25, 0.32, 0.28}, Alternative::greater);
    CHECK(r.mean == doctest::Approx(0.30));
    CHECK(r.sd == doctest::Approx(0.038078866).epsilon(1e-8));
    CHECK(r.t_stat == doctest::Approx(17.616606).epsilon(1e-6));
    CHECK(r.p_value == doctest::Approx(3.0490e-5).epsilon(1e-3));
    CHECK(r.p_value < 0.001);
    CHECK(r.dof == 4);
}

TEST_CASE("sign flip with flipped alternative gives the same p")
{
    const std::vector<double> d{0.12, -0.03, 0.08, 0.2, 0.01, 0.05};
    std::vector<double> neg;
    for (double v : d) neg.push_back(-v);
    const auto a = paired_one_sided_ttest(d, Alternative::greater);
    const auto b = paired_one_sided_ttest(neg, Alternative::less);
    CHECK(a.t_stat == doctest::Approx(-b.t_stat));
    CHECK(a.p_value == doctest::Approx(b.p_value).epsilon(1e-14));
    const auto c = paired_one_sided_ttest(d, Alternative::less);
    CHECK(a.p_value + c.p_value == doctest::Approx(1.0));
}

TEST_CASE("a panel reproducing t = 3.7982 with five instruments gives p = 0.0096")
{
    // Differences with mean m and sd s chosen so that m / (s / sqrt(5)) = 3.7982.
    const double s = 1.0;
    const double m = 3.7982 * s / std::sqrt(5.0);
    // Zero-mean unit-sd pattern of five points.
    const double base[] = {-1.2649110640673518, -0.6324555320336759, 0.0, 0.6324555320336759, 1.2649110640673518};
    std::vector<double> d;
    for (double b : base) d.push_back(m + s * b);
    const auto r = paired_one_sided_ttest(d, Alternative::greater);
    CHECK(r.t_stat == doctest::Approx(3.7982).epsilon(1e-12));
    CHECK(std::round(r.p_value * 1e4) / 1e4 == doctest::Approx(0.0096).epsilon(1e-12));
}

TEST_CASE("t-test errors")
{
    CHECK_THROWS_AS(paired_one_sided_ttest(std::vector<double>{1, 1, 1, 1}, Alternative::greater), DegenerateError);
    CHECK_THROWS_AS(paired_one_sided_ttest(std::vector<double>{1.0}, Alternative::greater), InsufficientDataError);
    CHECK_THROWS_AS(parse_alternative("two_sided"), ParameterError);
    CHECK(parse_alternative("less") == Alternative::less);
    CHECK(to_string(Alternative::greater) == "greater");
}

TEST_CASE("build_panel pairs instruments by label")
{
    const auto same = build_panel({{"A", 1.0}, {"B", 2.0}}, {{"A", 1.0}, {"B", 2.0}}, "p0");
    CHECK(same.differences == std::vector<double>{0.0, 0.0});

    const auto p = build_panel({{"B", 2.0}, {"A", 1.0}}, {{"A", 3.0}, {"B", 1.0}}, "hurst");
    CHECK(p.statistic == "hurst");
    CHECK(p.instruments == std::vector<std::string>{"A", "B"});
    CHECK(p.before == std::vector<double>{1.0, 2.0});
    CHECK(p.after == std::vector<double>{3.0, 1.0});
    CHECK(p.differences == std::vector<double>{2.0, -1.0});
    CHECK(p.size() == 2);

    CHECK_THROWS_AS(build_panel({{"A", 1.0}}, {{"B", 1.0}}, "p0"), KeyingError);
    CHECK_THROWS_AS(build_panel({{"A", 1.0}, {"B", 1.0}}, {{"A", 1.0}}, "p0"), KeyingError);
}
