#include "geoatt/matrix_io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace geoatt {

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw std::runtime_error("failed to format double");
    return std::string(buf, ptr);
}

std::string matrix_to_csv(const Tensor& m) {
    if (m.rank() != 2) throw std::invalid_argument("matrix_to_csv expects rank 2");
    std::string out;
    out.reserve(m.size() * 20);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (j) out.push_back(',');
            out += format_double(m.at(i, j));
        }
        out.push_back('\n');
    }
    return out;
}

Tensor matrix_from_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        const char* p = line.c_str();
        const char* end = p + line.size();
        while (p < end) {
            char* after = nullptr;
            const double v = std::strtod(p, &after);
            if (after == p) throw std::invalid_argument("bad CSV number near: " + std::string(p));
            row.push_back(v);
            p = after;
            if (p < end && *p == ',') ++p;
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("empty CSV matrix");
    const int cols = static_cast<int>(rows[0].size());
    Tensor out({static_cast<int>(rows.size()), cols});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<int>(rows[i].size()) != cols)
            throw std::invalid_argument("ragged CSV row " + std::to_string(i));
        for (int j = 0; j < cols; ++j) out.at(static_cast<int>(i), j) = rows[i][static_cast<std::size_t>(j)];
    }
    return out;
}

std::string attention_row_to_pgm(const AttentionMatrix& attention, int focus_pixel) {
    const int hw = attention.shape.pixels();
    if (focus_pixel < 0 || focus_pixel >= hw)
        throw std::out_of_range("focus pixel " + std::to_string(focus_pixel) + " outside grid");
    double row_max = 0.0;
    for (int j = 0; j < hw; ++j) row_max = std::max(row_max, attention.a.at(focus_pixel, j));
    std::ostringstream out;
    out << "P2\n" << attention.shape.w << ' ' << attention.shape.h << "\n255\n";
    for (int y = 0; y < attention.shape.h; ++y) {
        for (int x = 0; x < attention.shape.w; ++x) {
            if (x) out << ' ';
            const double v = attention.a.at(focus_pixel, y * attention.shape.w + x);
            out << static_cast<int>(std::lround(v / row_max * 255.0));
        }
        out << '\n';
    }
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open for writing: " + path);
    file << content;
    if (!file) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream out;
    out << file.rdbuf();
    return out.str();
}

}  // namespace geoatt
