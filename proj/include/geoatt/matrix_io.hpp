#pragma once

#include <string>

#include "geoatt/grid_kernels.hpp"
#include "geoatt/tensor.hpp"

namespace geoatt {

// One CSV line per matrix row; values use the shortest decimal form that
// round-trips a 64-bit real exactly.
std::string matrix_to_csv(const Tensor& m);
Tensor matrix_from_csv(const std::string& text);

std::string format_double(double v);

// P2 ASCII image of one attention-map row reshaped to H x W; values scale
// linearly so the row maximum maps to 255.
std::string attention_row_to_pgm(const AttentionMatrix& attention, int focus_pixel);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace geoatt
