#include "vbspool/erlang.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace vbspool {
namespace {

void require_load(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw std::invalid_argument("offered load a must be positive and finite");
    }
}

void require_threshold(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("blocking threshold must lie in (0, 1)");
    }
}

} // namespace

double erlang_b(int k_radio, double a) {
    if (k_radio < 0) throw std::invalid_argument("k_radio must be non-negative");
    require_load(a);
    double b = 1.0;
    for (int i = 1; i <= k_radio; ++i) b = a * b / (i + a * b);
    return b;
}

double truncated_poisson_mean(int k_radio, double a) {
    return a * (1.0 - erlang_b(k_radio, a));
}

int dimension_radio(double a, double p_threshold) {
    require_load(a);
    require_threshold(p_threshold);
    double b = 1.0;
    int k = 0;
    while (b > p_threshold) {
        ++k;
        b = a * b / (k + a * b);
    }
    return k;
}

LimitBounds large_pool_limit(int k_radio, double a, double p_threshold) {
    if (k_radio < 1) throw std::invalid_argument("k_radio must be at least 1");
    require_load(a);
    require_threshold(p_threshold);
    const double upper = a / k_radio;
    if (upper > 1.0) {
        std::ostringstream msg;
        msg << "offered load " << a << " exceeds K = " << k_radio
            << "; the pool is under-dimensioned and the limit does not apply";
        throw std::domain_error(msg.str());
    }
    return {a * (1.0 - p_threshold) / k_radio, upper};
}

double asymptotic_utilization(int k_radio, double a) {
    if (k_radio < 1) throw std::invalid_argument("k_radio must be at least 1");
    return truncated_poisson_mean(k_radio, a) / k_radio;
}

} // namespace vbspool
