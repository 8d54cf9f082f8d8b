#include "difftrail/stats.hpp"

#include "difftrail/error.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace difftrail {

namespace {

double quantile_sorted(const std::vector<double>& v, double p)
{
    const double h = static_cast<double>(v.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= v.size()) return v.back();
    return v[lo] + (h - static_cast<double>(lo)) * (v[lo + 1] - v[lo]);
}

struct Moments {
    double n = 0;
    double mean = 0;
    double var = 0; // n - 1 divisor
};

Moments moments(std::span<const double> v)
{
    Moments m;
    m.n = static_cast<double>(v.size());
    for (double x : v) m.mean += x;
    m.mean /= m.n;
    for (double x : v) m.var += (x - m.mean) * (x - m.mean);
    m.var /= m.n - 1;
    return m;
}

} // namespace

double quantile(std::span<const double> values, double p)
{
    if (values.empty()) throw ParameterError("quantile of an empty list");
    if (!(p >= 0 && p <= 1)) throw ParameterError("quantile level must be in [0, 1]");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    return quantile_sorted(v, p);
}

SummaryStats summarize(std::span<const double> values)
{
    if (values.size() < 2) throw ParameterError("summary needs at least 2 values");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const auto m = moments(v);
    return {m.n,
            m.mean,
            std::sqrt(m.var),
            v.front(),
            quantile_sorted(v, 0.25),
            quantile_sorted(v, 0.5),
            quantile_sorted(v, 0.75),
            v.back()};
}

double student_t_cdf(double t, double df)
{
    if (!(df > 0)) throw ParameterError("degrees of freedom must be positive");
    if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
    // Tail mass: P(|T| > |t|) = I_{df/(df+t^2)}(df/2, 1/2).
    const double tail = boost::math::ibeta(df / 2, 0.5, df / (df + t * t));
    return t < 0 ? tail / 2 : 1 - tail / 2;
}

TTest welch_t_test(std::span<const double> a, std::span<const double> b)
{
    if (a.size() < 2 || b.size() < 2) throw ParameterError("t-test needs at least 2 values per group");
    const auto ma = moments(a);
    const auto mb = moments(b);
    const double va = ma.var / ma.n;
    const double vb = mb.var / mb.n;
    const double se2 = va + vb;
    TTest r;
    if (se2 == 0) {
        if (ma.mean == mb.mean) throw ParameterError("t-test undefined: both groups constant and equal");
        r.t = ma.mean > mb.mean ? std::numeric_limits<double>::infinity()
                                : -std::numeric_limits<double>::infinity();
        r.df = ma.n + mb.n - 2;
        r.p = 0;
        return r;
    }
    r.t = (ma.mean - mb.mean) / std::sqrt(se2);
    r.df = se2 * se2 / (va * va / (ma.n - 1) + vb * vb / (mb.n - 1));
    r.p = boost::math::ibeta(r.df / 2, 0.5, r.df / (r.df + r.t * r.t));
    return r;
}

std::int64_t required_simulations(double sigma, double margin_of_error, double z)
{
    if (!(sigma > 0) || !(margin_of_error > 0) || !(z > 0))
        throw ParameterError("sigma, margin of error and z must be positive");
    const double n = std::round(std::pow(z * sigma / margin_of_error, 2));
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(n));
}

} // namespace difftrail
