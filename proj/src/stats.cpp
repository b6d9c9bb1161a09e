#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "neatnc/common.hpp"
#include "neatnc/stats.hpp"

namespace neatnc::stats {
namespace {

struct Pooled {
    std::vector<double> ranks;  // aligned with concatenated group values
    double tie_sum = 0.0;       // sum over tie blocks of t^3 - t
    std::size_t n = 0;
};

Pooled pool(std::span<const SampleGroup> groups) {
    std::vector<double> all;
    for (const auto& g : groups) all.insert(all.end(), g.values.begin(), g.values.end());
    Pooled p;
    p.n = all.size();
    p.ranks = average_ranks(all);

    std::vector<double> sorted = all;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i);
        p.tie_sum += t * t * t - t;
        i = j;
    }
    return p;
}

std::vector<double> group_mean_ranks(std::span<const SampleGroup> groups, const Pooled& pooled) {
    std::vector<double> means;
    std::size_t offset = 0;
    for (const auto& g : groups) {
        double sum = 0.0;
        for (std::size_t i = 0; i < g.values.size(); ++i) sum += pooled.ranks[offset + i];
        means.push_back(sum / static_cast<double>(g.values.size()));
        offset += g.values.size();
    }
    return means;
}

void check_groups(std::span<const SampleGroup> groups) {
    require(groups.size() >= 2, "at least two groups are required");
    for (const auto& g : groups) {
        require(!g.values.empty(), "group '" + g.label + "' is empty");
        for (double v : g.values) require(std::isfinite(v), "group '" + g.label + "' holds a non-finite value");
    }
}

}  // namespace

double chi_square_sf(double x, int df) {
    require(df > 0, "chi_square_sf: df must be positive");
    require(!std::isnan(x), "chi_square_sf: x is NaN");
    if (x <= 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
        const double shared = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = shared;
        i = j;
    }
    return ranks;
}

TestResult kruskal_wallis(std::span<const SampleGroup> groups) {
    check_groups(groups);
    const Pooled pooled = pool(groups);
    require(pooled.n >= 3, "kruskal_wallis: total sample size must be at least 3");
    const double n = static_cast<double>(pooled.n);
    const auto means = group_mean_ranks(groups, pooled);

    TestResult result;
    result.degrees_of_freedom = static_cast<int>(groups.size()) - 1;
    const double correction = 1.0 - pooled.tie_sum / (n * n * n - n);
    if (correction <= 0.0) return result;

    double sum = 0.0;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const double ni = static_cast<double>(groups[i].values.size());
        sum += ni * means[i] * means[i];
    }
    const double h = (12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0)) / correction;
    result.statistic = std::max(h, 0.0);
    result.p_value = chi_square_sf(result.statistic, result.degrees_of_freedom);
    return result;
}

TestResult chi_square_success(std::span<const std::size_t> successes, std::span<const std::size_t> trials) {
    require(successes.size() == trials.size(), "chi_square_success: count vectors differ in length");
    require(successes.size() >= 2, "chi_square_success: at least two groups are required");
    double total_success = 0.0, total = 0.0;
    for (std::size_t i = 0; i < trials.size(); ++i) {
        require(trials[i] > 0, "chi_square_success: every group needs at least one trial");
        require(successes[i] <= trials[i], "chi_square_success: successes exceed trials");
        total_success += static_cast<double>(successes[i]);
        total += static_cast<double>(trials[i]);
    }
    const double total_failure = total - total_success;
    require(total_success > 0.0 && total_failure > 0.0,
            "chi_square_success: degenerate table (an expected count is zero)");

    double chi2 = 0.0;
    for (std::size_t i = 0; i < trials.size(); ++i) {
        const double row = static_cast<double>(trials[i]);
        const double observed_s = static_cast<double>(successes[i]);
        const double observed_f = row - observed_s;
        const double expected_s = row * total_success / total;
        const double expected_f = row * total_failure / total;
        chi2 += (observed_s - expected_s) * (observed_s - expected_s) / expected_s;
        chi2 += (observed_f - expected_f) * (observed_f - expected_f) / expected_f;
    }
    TestResult result;
    result.statistic = chi2;
    result.degrees_of_freedom = static_cast<int>(trials.size()) - 1;
    result.p_value = chi_square_sf(chi2, result.degrees_of_freedom);
    return result;
}

std::vector<double> holm_adjust(std::span<const double> p_values) {
    const std::size_t m = p_values.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
    std::vector<double> adjusted(m);
    double running = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double scaled = std::min(1.0, static_cast<double>(m - k) * p_values[order[k]]);
        running = std::max(running, scaled);
        adjusted[order[k]] = running;
    }
    return adjusted;
}

DunnResult dunn_posthoc(std::span<const SampleGroup> groups) {
    check_groups(groups);
    const Pooled pooled = pool(groups);
    const std::size_t k = groups.size();
    const double n = static_cast<double>(pooled.n);

    DunnResult result;
    for (const auto& g : groups) result.labels.push_back(g.label);
    result.mean_ranks = group_mean_ranks(groups, pooled);
    result.z.assign(k, std::vector<double>(k, 0.0));
    result.p_raw.assign(k, std::vector<double>(k, 1.0));
    result.p_adjusted.assign(k, std::vector<double>(k, 1.0));

    const double variance = n > 1.0 ? n * (n + 1.0) / 12.0 - pooled.tie_sum / (12.0 * (n - 1.0)) : 0.0;
    std::vector<double> pair_p;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            const double inv = 1.0 / static_cast<double>(groups[i].values.size()) +
                               1.0 / static_cast<double>(groups[j].values.size());
            const double se = std::sqrt(std::max(variance, 0.0) * inv);
            const double diff = result.mean_ranks[i] - result.mean_ranks[j];
            const double z = se > 0.0 ? diff / se : 0.0;
            const double p = std::min(1.0, 2.0 * normal_sf(std::abs(z)));
            result.z[i][j] = z;
            result.z[j][i] = -z;
            result.p_raw[i][j] = result.p_raw[j][i] = p;
            pair_p.push_back(p);
            pairs.emplace_back(i, j);
        }
    }
    const auto adjusted = holm_adjust(pair_p);
    for (std::size_t m = 0; m < pairs.size(); ++m) {
        const auto [i, j] = pairs[m];
        result.p_adjusted[i][j] = result.p_adjusted[j][i] = adjusted[m];
    }
    return result;
}

std::vector<std::size_t> rank_order(std::span<const double> mean_ranks, bool descending) {
    std::vector<std::size_t> order(mean_ranks.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return descending ? mean_ranks[a] > mean_ranks[b] : mean_ranks[a] < mean_ranks[b];
    });
    return order;
}

}  // namespace neatnc::stats
