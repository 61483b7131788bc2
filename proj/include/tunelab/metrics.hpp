#pragma once

#include <Eigen/Dense>

#include <span>

namespace tunelab {

struct RunTrace;

/// Average progress curve: pointwise mean of best-so-far traces.
/// mean_best has budget + 1 entries (initial population included).
struct Apc {
    Eigen::ArrayXd mean_best;
    int n_runs = 0;
    int budget = 0;
};

/// Mean the traces pointwise. All traces must share one length; summation is
/// a left fold in trace order so results do not depend on scheduling.
Apc compute_apc(std::span<const RunTrace> traces);

/// Same fold over bare best-so-far curves.
Apc compute_apc(std::span<const Eigen::ArrayXd> traces);

struct UtilityReport {
    double fa = 0.0;    ///< final mean best
    double area = 0.0;  ///< trapezoid area under the sampled curve
    double fb = 0.0;    ///< area normalized by interval count and width
    double fc = 0.0;    ///< weighted blend of fa and fb
    double zl = 0.0;
    int intervals = 0;
    Eigen::ArrayXd samples;  ///< intervals + 1 curve samples used
};

/// Final value of the curve: mean best after the full budget.
double utility_fa(const Apc& apc);

/// Area under the sampled curve by the trapezoid rule, unit interval width.
double utility_area(const Apc& apc, int intervals);

/// utility_area divided by the interval count.
double utility_fb(const Apc& apc, int intervals);

/// Blended utility (zl * fa + fb) / (1 + zl). Lower is better: fa rewards the
/// final level, fb rewards getting low early. Requires budget divisible by
/// intervals and zl >= 1.
UtilityReport utility_fc(const Apc& apc, int intervals, double zl);

struct FiveNumber {
    double min = 0.0;
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
    double max = 0.0;
};

/// Min, quartiles (linear interpolation between closest ranks), max.
/// Throws on an empty sample.
FiveNumber five_number(std::span<const double> values);

}  // namespace tunelab
