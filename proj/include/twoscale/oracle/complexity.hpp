#pragma once

namespace twoscale::oracle {

/// Dimensions of the variable groups; each scalar is discretized in 10 values.
struct ComplexityDims {
    int x_s = 1;   // slow state (capacity)
    int x_sf = 1;  // fast state with slow influence (health)
    int x_ff = 1;  // fast state without slow influence (state of charge)
    int u_s = 1;   // slow control (renewal)
    int u_f = 1;   // fast control
    int w_s = 1;   // slow noise (battery price)
    int w_f = 1;   // fast noise (net demand)
};

struct ComplexityEstimate {
    double flat_ops = 0.0;
    double resource_ops = 0.0;  // intraday tables + recursion
    double price_ops = 0.0;
    double ratio_R = 0.0;       // I/D + 1/M
    double ratio_P = 0.0;       // I/D + 10/M
    double exact_ratio_R = 0.0; // resource_ops / flat_ops
    double exact_ratio_P = 0.0;
};

ComplexityEstimate complexity_estimate(long D, long M, long I, const ComplexityDims& dims = {});

}  // namespace twoscale::oracle
