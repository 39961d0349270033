#include "qchaos/husimi.hpp"

namespace qchaos {

kernels::RealMatrix husimi_raw(const kernels::Vector& u, int G) {
    if (G < 8) throw Error("husimi: grid must be at least 8 x 8");
    return kernels::husimi_grid(u, G);
}

kernels::RealMatrix husimi(const kernels::Vector& u, int G) {
    kernels::RealMatrix raw = husimi_raw(u, G);
    double mean = raw.sum() / static_cast<double>(G) / static_cast<double>(G);
    if (mean > 0.0) raw /= mean;
    return raw;
}

}  // namespace qchaos
