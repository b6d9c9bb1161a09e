#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace neatnc::stats {

struct SampleGroup {
    std::string label;
    std::vector<double> values;
};

struct TestResult {
    double statistic = 0.0;
    int degrees_of_freedom = 0;
    double p_value = 1.0;
};

/// Upper tail of the chi-square distribution with `df` degrees of freedom.
double chi_square_sf(double x, int df);
/// Upper tail of the standard normal distribution.
double normal_sf(double z);

/// 1-based ranks; ties share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

/// Omnibus rank test with the usual tie correction. All-equal data gives H = 0, p = 1.
TestResult kruskal_wallis(std::span<const SampleGroup> groups);

/// Pearson chi-square on the k x 2 success/failure table, no continuity
/// correction. Throws ContractError if any expected cell count is zero.
TestResult chi_square_success(std::span<const std::size_t> successes, std::span<const std::size_t> trials);

/// Holm step-down adjustment, returned in the input order.
std::vector<double> holm_adjust(std::span<const double> p_values);

struct DunnResult {
    std::vector<std::string> labels;
    std::vector<double> mean_ranks;
    std::vector<std::vector<double>> z;           // z[i][j] = (R_i - R_j) / se
    std::vector<std::vector<double>> p_raw;       // two-sided, unit diagonal
    std::vector<std::vector<double>> p_adjusted;  // Holm over the k(k-1)/2 pairs
};

DunnResult dunn_posthoc(std::span<const SampleGroup> groups);

/// Group indices sorted by mean rank; `descending` puts the largest first.
std::vector<std::size_t> rank_order(std::span<const double> mean_ranks, bool descending);

}  // namespace neatnc::stats
