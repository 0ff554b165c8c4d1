#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hfusion/errors.hpp"

namespace hfusion {

/// Dense 1-D array of floating point values. The library computes in
/// `float`; `double` instantiations exist for numerical verification.
template <std::floating_point T>
class Vector {
public:
    using value_type = T;

    Vector() = default;
    explicit Vector(std::size_t dim, T fill = T{0}) : values_(dim, fill) {}
    Vector(std::initializer_list<T> init) : values_(init) {}
    explicit Vector(std::vector<T> values) : values_(std::move(values)) {}
    explicit Vector(std::span<const T> values) : values_(values.begin(), values.end()) {}

    std::size_t dim() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    T& operator[](std::size_t i) { return values_[i]; }
    const T& operator[](std::size_t i) const { return values_[i]; }

    std::span<T> values() noexcept { return values_; }
    std::span<const T> values() const noexcept { return values_; }
    const std::vector<T>& storage() const noexcept { return values_; }

    auto begin() noexcept { return values_.begin(); }
    auto end() noexcept { return values_.end(); }
    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    void fill(T v) { std::fill(values_.begin(), values_.end(), v); }

    template <std::floating_point U>
    Vector<U> cast() const {
        Vector<U> out(dim());
        for (std::size_t i = 0; i < dim(); ++i) out[i] = static_cast<U>(values_[i]);
        return out;
    }

    friend bool operator==(const Vector&, const Vector&) = default;

private:
    std::vector<T> values_;
};

/// Row-major dense matrix.
template <std::floating_point T>
class Matrix {
public:
    using value_type = T;

    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{0})
        : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<T> values)
        : rows_(rows), cols_(cols), values_(std::move(values)) {
        if (values_.size() != rows_ * cols_) {
            throw ShapeError("matrix storage holds " + std::to_string(values_.size()) +
                             " values, expected " + std::to_string(rows_ * cols_));
        }
    }
    Matrix(std::initializer_list<std::initializer_list<T>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        values_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw ShapeError("ragged matrix initializer");
            values_.insert(values_.end(), r.begin(), r.end());
        }
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    T& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }

    std::span<T> values() noexcept { return values_; }
    std::span<const T> values() const noexcept { return values_; }

    void fill(T v) { std::fill(values_.begin(), values_.end(), v); }

    template <std::floating_point U>
    Matrix<U> cast() const {
        Matrix<U> out(rows_, cols_);
        auto dst = out.values();
        for (std::size_t i = 0; i < values_.size(); ++i) dst[i] = static_cast<U>(values_[i]);
        return out;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> values_;
};

using DenseVector = Vector<float>;
using DenseMatrix = Matrix<float>;

template <std::floating_point T>
bool all_finite(std::span<const T> values) {
    return std::all_of(values.begin(), values.end(), [](T v) { return std::isfinite(v); });
}

inline void require_dim(std::size_t actual, std::size_t expected, const std::string& what) {
    if (actual != expected) {
        throw ShapeError(what + ": expected dim " + std::to_string(expected) + ", got " +
                         std::to_string(actual));
    }
}

}  // namespace hfusion
