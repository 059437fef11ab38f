#include "geoatt/gradcheck.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace geoatt {

std::vector<double> finite_diff_grad(const std::function<double(std::span<const double>)>& f,
                                     std::span<const double> x, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("finite_diff_grad needs eps > 0");
    std::vector<double> point(x.begin(), x.end());
    std::vector<double> grad(point.size(), 0.0);
    for (std::size_t k = 0; k < point.size(); ++k) {
        const double saved = point[k];
        point[k] = saved + eps;
        const double f_plus = f(point);
        point[k] = saved - eps;
        const double f_minus = f(point);
        point[k] = saved;
        if (!std::isfinite(f_plus) || !std::isfinite(f_minus))
            throw std::runtime_error("finite_diff_grad: non-finite value when perturbing coordinate " +
                                     std::to_string(k));
        grad[k] = (f_plus - f_minus) / (2.0 * eps);
    }
    return grad;
}

}  // namespace geoatt
