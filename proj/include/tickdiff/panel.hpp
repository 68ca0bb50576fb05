// panel.hpp: paired before/after differences across instruments and the
// one-sided t-test applied to them.
#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace tickdiff {

struct PanelDifference {
    std::string statistic;                 // "p0", "alpha_h", "rho(k)", "hurst"
    std::vector<std::string> instruments;  // sorted
    std::vector<double> before;
    std::vector<double> after;
    std::vector<double> differences;       // after - before

    std::size_t size() const noexcept { return differences.size(); }
};

/// Alternative hypothesis on the mean difference.
enum class Alternative { less, greater };

std::string to_string(Alternative alt);
Alternative parse_alternative(const std::string& text);

struct TTestResult {
    double t_stat = 0.0;
    double p_value = 1.0;
    std::size_t dof = 0;
    Alternative alternative = Alternative::greater;
    double mean = 0.0;
    double sd = 0.0;
};

/// Pairs before/after values by instrument label. Throws KeyingError when
/// the two label sets differ.
PanelDifference build_panel(const std::map<std::string, double>& before, const std::map<std::string, double>& after,
                            std::string statistic);

/// t = mean / (s / sqrt(n)); p is the Student-t tail with n-1 degrees of
/// freedom on the side named by `alternative`.
TTestResult paired_one_sided_ttest(const PanelDifference& panel, Alternative alternative);
TTestResult paired_one_sided_ttest(const std::vector<double>& differences, Alternative alternative);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

/// P(T >= t) for Student-t with `dof` degrees of freedom.
double student_t_sf(double t, double dof);

} // namespace tickdiff
