#pragma once

#include <cstdint>
#include <span>

namespace difftrail {

// Linear interpolation between order statistics at h = (n - 1) * p.
double quantile(std::span<const double> values, double p);

struct SummaryStats {
    double count = 0;
    double mean = 0;
    double std = 0; // n - 1 divisor
    double min = 0;
    double q1 = 0;
    double median = 0;
    double q3 = 0;
    double max = 0;
};

SummaryStats summarize(std::span<const double> values);

struct TTest {
    double t = 0;
    double df = 0;
    double p = 1; // two-sided
};

// Welch's unequal-variance t-test. Throws ParameterError when both groups have
// zero variance and equal means.
TTest welch_t_test(std::span<const double> a, std::span<const double> b);

// P(T <= t) for Student's t with `df` degrees of freedom.
double student_t_cdf(double t, double df);

// (z * sigma / margin)^2 rounded to the nearest integer, at least 1.
std::int64_t required_simulations(double sigma, double margin_of_error, double z = 1.96);

} // namespace difftrail
