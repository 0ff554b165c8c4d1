#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <unistd.h>

#include "hfusion/rng.hpp"
#include "hfusion/tensor.hpp"

namespace hfusion::test {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("hfusion_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

template <class T = float>
Vector<T> random_vector(SeededRng& rng, std::size_t n, double scale = 1.0) {
    Vector<T> v(n);
    for (auto& x : v.values()) x = static_cast<T>(scale * rng.normal());
    return v;
}

/// Central difference of f with respect to each entry of x, in double.
inline std::vector<double> numeric_gradient(std::vector<double>& x,
                                            const std::function<double()>& f,
                                            double eps = 1e-5) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double saved = x[i];
        x[i] = saved + eps;
        const double up = f();
        x[i] = saved - eps;
        const double down = f();
        x[i] = saved;
        g[i] = (up - down) / (2 * eps);
    }
    return g;
}

inline double rel_err(double a, double n) {
    const double denom = std::max({std::abs(a), std::abs(n), 1e-8});
    return std::abs(a - n) / denom;
}

}  // namespace hfusion::test
