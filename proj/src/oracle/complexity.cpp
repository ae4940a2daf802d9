#include "twoscale/oracle/complexity.hpp"

#include <cmath>
#include <stdexcept>

namespace twoscale::oracle {

ComplexityEstimate complexity_estimate(long D, long M, long I, const ComplexityDims& n) {
    if (D <= 0 || M <= 0 || I <= 0) throw std::invalid_argument("complexity_estimate: D, M, I must be positive");
    auto p10 = [](int e) { return std::pow(10.0, e); };
    const double d1 = static_cast<double>(D + 1), m1 = static_cast<double>(M + 1), i = static_cast<double>(I);
    ComplexityEstimate e;
    e.flat_ops = d1 * (p10(n.x_ff + n.x_sf + n.x_s + n.u_s + n.w_s) + m1 * p10(n.x_ff + n.x_sf + n.x_s + n.u_f + n.w_f));
    e.resource_ops = i * m1 * p10(n.x_s) * p10(n.x_ff + n.x_sf + n.u_f + n.w_f) +
                     d1 * p10(n.x_sf + n.x_s + n.x_sf + n.u_s + n.w_s);
    e.price_ops = i * m1 * p10(n.x_s + n.x_sf) * p10(n.x_ff + n.u_f + n.w_f) +
                  d1 * p10(n.x_sf + n.x_s + n.x_sf + n.x_sf + n.u_s + n.w_s);
    e.ratio_R = i / static_cast<double>(D) + 1.0 / static_cast<double>(M);
    e.ratio_P = i / static_cast<double>(D) + 10.0 / static_cast<double>(M);
    e.exact_ratio_R = e.resource_ops / e.flat_ops;
    e.exact_ratio_P = e.price_ops / e.flat_ops;
    return e;
}

}  // namespace twoscale::oracle
