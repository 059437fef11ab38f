#pragma once

#include <functional>
#include <span>
#include <vector>

namespace geoatt {

// Central difference gradient of a scalar function, the oracle every
// analytic backward pass in this project is checked against:
//   g[k] = (f(x + eps*e_k) - f(x - eps*e_k)) / (2*eps)
// Throws if f returns a non-finite value, naming the perturbed coordinate.
std::vector<double> finite_diff_grad(const std::function<double(std::span<const double>)>& f,
                                     std::span<const double> x, double eps);

}  // namespace geoatt
