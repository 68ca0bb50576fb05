#include "tickdiff/panel.hpp"

#include "tickdiff/errors.hpp"

#include <cmath>
#include <limits>

namespace tickdiff {

std::string to_string(Alternative alt)
{
    return alt == Alternative::less ? "less" : "greater";
}

Alternative parse_alternative(const std::string& text)
{
    if (text == "less" || text == "lt") return Alternative::less;
    if (text == "greater" || text == "gt") return Alternative::greater;
    throw ParameterError("alternative must be 'less' or 'greater', got '" + text + "'");
}

PanelDifference build_panel(const std::map<std::string, double>& before, const std::map<std::string, double>& after,
                            std::string statistic)
{
    PanelDifference panel;
    panel.statistic = std::move(statistic);
    for (const auto& [label, value] : before) {
        const auto it = after.find(label);
        if (it == after.end()) throw KeyingError("instrument '" + label + "' missing from the after window");
        panel.instruments.push_back(label);
        panel.before.push_back(value);
        panel.after.push_back(it->second);
        panel.differences.push_back(it->second - value);
    }
    for (const auto& [label, value] : after)
        if (!before.contains(label)) throw KeyingError("instrument '" + label + "' missing from the before window");
    return panel;
}

namespace {

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x)
{
    constexpr int kMaxIter = 10000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    return h;
}

} // namespace

double incomplete_beta(double a, double b, double x)
{
    if (!(a > 0.0 && b > 0.0)) throw ParameterError("incomplete beta needs a, b > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw ParameterError("incomplete beta needs x in [0, 1]");
    if (x == 0.0 || x == 1.0) return x;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                             b * std::log1p(-x);
    const double front = std::exp(log_front);
    // The fraction converges fast for x < (a+1)/(a+b+2); use symmetry otherwise.
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_sf(double t, double dof)
{
    if (!(dof > 0.0)) throw ParameterError("Student-t needs positive degrees of freedom");
    if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(t)) return t > 0 ? 0.0 : 1.0;
    // P(|T| >= |t|) = I_{dof/(dof+t^2)}(dof/2, 1/2)
    const double x = dof / (dof + t * t);
    const double two_sided = incomplete_beta(0.5 * dof, 0.5, x);
    return t >= 0.0 ? 0.5 * two_sided : 1.0 - 0.5 * two_sided;
}

TTestResult paired_one_sided_ttest(const std::vector<double>& differences, Alternative alternative)
{
    const std::size_t n = differences.size();
    if (n < 2) throw InsufficientDataError("t-test needs at least 2 paired differences");
    double mean = 0.0;
    for (double d : differences) mean += d;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double d : differences) ss += (d - mean) * (d - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (!(sd > 0.0)) throw DegenerateError("t-test differences have zero variance");

    TTestResult res;
    res.mean = mean;
    res.sd = sd;
    res.dof = n - 1;
    res.alternative = alternative;
    res.t_stat = mean / (sd / std::sqrt(static_cast<double>(n)));
    const double upper = student_t_sf(res.t_stat, static_cast<double>(res.dof));
    res.p_value = alternative == Alternative::greater ? upper : student_t_sf(-res.t_stat, static_cast<double>(res.dof));
    return res;
}

TTestResult paired_one_sided_ttest(const PanelDifference& panel, Alternative alternative)
{
    return paired_one_sided_ttest(panel.differences, alternative);
}

} // namespace tickdiff
