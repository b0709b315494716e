#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace glyphlab {

// Dense row-major tensor of doubles. Rank is dynamic but in practice
// everything in this codebase is 1-D (vectors), 3-D ([C,H,W] feature maps)
// or 4-D (conv weights [Cout,Cin,Kh,Kw]).
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<int> shape_, double fill = 0.0)
        : shape(std::move(shape_)), data(numel_of(shape), fill) {}

    std::vector<int> shape;
    std::vector<double> data;

    static std::size_t numel_of(const std::vector<int>& s) {
        std::size_t n = 1;
        for (int d : s) {
            if (d < 0) throw std::invalid_argument("negative tensor dim");
            n *= static_cast<std::size_t>(d);
        }
        return s.empty() ? 0 : n;
    }

    std::size_t numel() const { return data.size(); }
    bool empty() const { return data.empty(); }

    int dim(int i) const { return shape.at(static_cast<std::size_t>(i)); }
    int rank() const { return static_cast<int>(shape.size()); }

    double* ptr() { return data.data(); }
    const double* ptr() const { return data.data(); }

    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }

    // [C,H,W] accessors
    double& at3(int c, int y, int x) {
        return data[(static_cast<std::size_t>(c) * shape[1] + y) * shape[2] + x];
    }
    double at3(int c, int y, int x) const {
        return data[(static_cast<std::size_t>(c) * shape[1] + y) * shape[2] + x];
    }

    bool same_shape(const Tensor& o) const { return shape == o.shape; }

    void fill(double v) { std::fill(data.begin(), data.end(), v); }

    std::string shape_str() const;
};

// Throws std::invalid_argument mentioning `where` if shapes differ.
void require_same_shape(const Tensor& a, const Tensor& b, const char* where);

bool all_finite(const Tensor& t);

}  // namespace glyphlab
