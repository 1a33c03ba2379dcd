#include "vbspool/planner.hpp"

#include <algorithm>
#include <stdexcept>

namespace vbspool {

SweepResult dimension_pool(int m_vbs, double a, double p_threshold, SweepOptions options) {
    if (m_vbs < 1) throw std::invalid_argument("pool needs at least one VBS");
    const int k = dimension_radio(a, p_threshold);
    return dimension_pool(m_vbs, p_threshold, RecursionTable(k, a, m_vbs), options);
}

SweepResult dimension_pool(int m_vbs, double p_threshold, const RecursionTable& table,
                           SweepOptions options) {
    const double a = table.load();
    const int k = table.k_radio();
    if (dimension_radio(a, p_threshold) != k) {
        throw std::invalid_argument("table K does not match the dimensioned r-server count");
    }
    SweepResult sweep;
    sweep.m_vbs = m_vbs;
    sweep.k_radio = k;
    sweep.load = a;
    sweep.p_threshold = p_threshold;
    sweep.limit_bounds = large_pool_limit(k, a, p_threshold);
    sweep.asymptote = asymptotic_utilization(k, a);

    const PoolConfig full(m_vbs, k, m_vbs * k, TrafficModel::from_load(a));
    const int top = full.max_comp();
    const double stop_above = std::max(options.ceiling, p_threshold);
    sweep.n_min = top;
    for (int n = top; n >= 0; --n) {
        const auto report = compute_blocking(full.with_comp(n), table);
        sweep.points.push_back({n, static_cast<double>(n) / top, report.p_radio, report.p_comp,
                                report.p_total});
        if (report.p_total <= p_threshold) sweep.n_min = n;
        if (!options.full_descent && report.p_total > stop_above) break;
    }
    sweep.pooling_gain = 1.0 - static_cast<double>(sweep.n_min) / top;
    return sweep;
}

int knee_point(const SweepResult& sweep) {
    if (sweep.points.size() < 2) throw std::invalid_argument("knee point needs at least two points");
    std::vector<SweepPoint> points = sweep.points;
    std::sort(points.begin(), points.end(),
              [](const SweepPoint& x, const SweepPoint& y) { return x.n_comp > y.n_comp; });
    for (const auto& p : points) {
        if (p.p_comp > p.p_radio) return p.n_comp;
    }
    return sweep.m_vbs * sweep.k_radio;
}

std::vector<PoolSizeGain> gain_vs_pool_size(std::span<const int> m_list, double a,
                                            double p_threshold) {
    if (m_list.empty()) return {};
    if (*std::min_element(m_list.begin(), m_list.end()) < 1) {
        throw std::invalid_argument("pool sizes must be at least 1");
    }
    const int k = dimension_radio(a, p_threshold);
    const RecursionTable table(k, a, *std::max_element(m_list.begin(), m_list.end()));
    std::vector<PoolSizeGain> gains;
    gains.reserve(m_list.size());
    for (int m : m_list) {
        const auto sweep = dimension_pool(m, p_threshold, table);
        gains.push_back({m, sweep.n_min, static_cast<double>(sweep.n_min) / (m * k),
                         sweep.pooling_gain});
    }
    return gains;
}

} // namespace vbspool
