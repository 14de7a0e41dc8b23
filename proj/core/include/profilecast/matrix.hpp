#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace profilecast {

// Dense row-major matrix of finite reals, optionally with named columns.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;           // rows * cols, row-major
    std::vector<std::string> col_names; // empty, or exactly cols entries

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    static Matrix from_rows(const std::vector<std::vector<double>>& rows_in);

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::span<const double> row(std::size_t r) const {
        return {data.data() + r * cols, cols};
    }
    std::span<double> row(std::size_t r) {
        return {data.data() + r * cols, cols};
    }

    std::vector<double> column(std::size_t c) const;

    // Throws Error(Shape) if sizes are inconsistent or an entry is not finite.
    void validate() const;

    bool operator==(const Matrix& other) const = default;
};

} // namespace profilecast
