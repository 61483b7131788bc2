#include "tunelab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "tunelab/optimizers.hpp"

namespace tunelab {

namespace {

template <typename Traces, typename Get>
Apc fold_apc(const Traces& traces, Get get) {
    if (traces.empty()) throw std::invalid_argument("apc needs at least one trace");
    const Eigen::Index len = get(traces.front()).size();
    if (len < 1) throw std::invalid_argument("apc needs non-empty traces");
    Apc apc;
    apc.mean_best = Eigen::ArrayXd::Zero(len);
    for (const auto& t : traces) {
        if (get(t).size() != len) throw std::invalid_argument("apc traces differ in length");
        apc.mean_best += get(t);  // fold in trace order
    }
    apc.mean_best /= static_cast<double>(traces.size());
    apc.n_runs = static_cast<int>(traces.size());
    apc.budget = static_cast<int>(len - 1);
    return apc;
}

}  // namespace

Apc compute_apc(std::span<const RunTrace> traces) {
    return fold_apc(traces, [](const RunTrace& t) -> const Eigen::ArrayXd& { return t.best; });
}

Apc compute_apc(std::span<const Eigen::ArrayXd> traces) {
    return fold_apc(traces, [](const Eigen::ArrayXd& t) -> const Eigen::ArrayXd& { return t; });
}

namespace {

Eigen::ArrayXd sample_curve(const Apc& apc, int intervals) {
    if (intervals < 1) throw std::invalid_argument("intervals must be >= 1");
    if (apc.mean_best.size() != apc.budget + 1)
        throw std::invalid_argument("apc trace length does not match its budget");
    if (apc.budget % intervals != 0)
        throw std::invalid_argument("budget " + std::to_string(apc.budget) +
                                    " is not divisible by " + std::to_string(intervals) +
                                    " intervals");
    const int stride = apc.budget / intervals;
    Eigen::ArrayXd d(intervals + 1);
    for (int i = 0; i <= intervals; ++i) d(i) = apc.mean_best(i * stride);
    return d;
}

}  // namespace

double utility_fa(const Apc& apc) {
    if (apc.mean_best.size() < 1) throw std::invalid_argument("empty apc");
    return apc.mean_best(apc.mean_best.size() - 1);
}

double utility_area(const Apc& apc, int intervals) {
    const Eigen::ArrayXd d = sample_curve(apc, intervals);
    double area = 0.0;
    for (int i = 0; i < intervals; ++i) area += 0.5 * (d(i) + d(i + 1));
    return area;
}

double utility_fb(const Apc& apc, int intervals) {
    return utility_area(apc, intervals) / static_cast<double>(intervals);
}

UtilityReport utility_fc(const Apc& apc, int intervals, double zl) {
    if (!(zl >= 1.0)) throw std::invalid_argument("zl must be >= 1");
    UtilityReport r;
    r.samples = sample_curve(apc, intervals);
    r.intervals = intervals;
    r.zl = zl;
    r.fa = r.samples(intervals);
    double area = 0.0;
    for (int i = 0; i < intervals; ++i) area += 0.5 * (r.samples(i) + r.samples(i + 1));
    r.area = area;
    r.fb = area / static_cast<double>(intervals);
    r.fc = (zl * r.fa + r.fb) / (1.0 + zl);
    return r;
}

FiveNumber five_number(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("five_number needs at least one value");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const auto quantile = [&sorted](double p) {
        const double h = p * static_cast<double>(sorted.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
        return sorted[lo] + (h - std::floor(h)) * (sorted[hi] - sorted[lo]);
    };
    FiveNumber fn;
    fn.min = sorted.front();
    fn.q25 = quantile(0.25);
    fn.median = quantile(0.5);
    fn.q75 = quantile(0.75);
    fn.max = sorted.back();
    return fn;
}

}  // namespace tunelab
