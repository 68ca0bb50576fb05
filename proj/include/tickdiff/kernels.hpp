// kernels.hpp: data-parallel inner loops behind the estimators.
//
// Every kernel exists twice: `serial::` is the plain reference loop kept for
// testing and benchmarking, `parallel::` is the OpenMP version the library
// uses. Parallel reductions accumulate over fixed-size blocks and combine the
// block partials in index order, so results do not depend on the thread count.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tickdiff::kernels {

/// Block length of the parallel reductions. Part of the numeric contract:
/// changing it changes low-order bits of every reduced statistic.
inline constexpr std::size_t kReductionBlock = 8192;

/// Least-squares line through (i, y[i]), i = 0..n-1, and its residual sum of squares.
double linear_detrend_rss(std::span<const double> y) noexcept;

namespace serial {

/// c[k] = sum_t (x[t]-mean)(x[t+k]-mean) for k = 0..max_lag.
std::vector<double> lag_products(std::span<const double> x, double mean, std::size_t max_lag);

/// Root-mean-square residual of order-1 detrending over non-overlapping
/// windows of `window` points taken from the start of the profile.
double dfa_fluctuation(std::span<const double> profile, std::size_t window);

void snap_to_grid(std::span<const double> in, std::span<double> out, double delta);

double sum(std::span<const double> x) noexcept;

} // namespace serial

namespace parallel {

std::vector<double> lag_products(std::span<const double> x, double mean, std::size_t max_lag);
double dfa_fluctuation(std::span<const double> profile, std::size_t window);
void snap_to_grid(std::span<const double> in, std::span<double> out, double delta);
double sum(std::span<const double> x) noexcept;

} // namespace parallel

} // namespace tickdiff::kernels
