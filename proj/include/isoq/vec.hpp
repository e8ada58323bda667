#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <stdexcept>

namespace isoq {

inline constexpr int kMaxDim = 8;

/// Point or vector in R^N with 2 <= N <= kMaxDim (N = 1 allowed for
/// intermediate quantities). Coordinates beyond dim() are kept at zero so
/// that dot products and norms never pick up garbage.
class Vec {
public:
    Vec() = default;
    explicit Vec(int dim) : n_(dim) { check(dim); }
    Vec(std::initializer_list<double> xs) : n_(static_cast<int>(xs.size())) {
        check(n_);
        int i = 0;
        for (double x : xs) c_[i++] = x;
    }

    static Vec zero(int dim) { return Vec(dim); }
    static Vec unit(int dim, int axis) {
        Vec v(dim);
        v[axis] = 1.0;
        return v;
    }

    int dim() const { return n_; }
    double& operator[](int i) { return c_[static_cast<size_t>(i)]; }
    double operator[](int i) const { return c_[static_cast<size_t>(i)]; }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < n_; ++i) c_[i] += o.c_[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < n_; ++i) c_[i] -= o.c_[i];
        return *this;
    }
    Vec& operator*=(double t) {
        for (int i = 0; i < n_; ++i) c_[i] *= t;
        return *this;
    }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(Vec a, double t) { return a *= t; }
    friend Vec operator*(double t, Vec a) { return a *= t; }
    friend Vec operator-(Vec a) { return a *= -1.0; }

    friend bool operator==(const Vec& a, const Vec& b) {
        if (a.n_ != b.n_) return false;
        for (int i = 0; i < a.n_; ++i)
            if (a.c_[i] != b.c_[i]) return false;
        return true;
    }

    double dot(const Vec& o) const {
        double s = 0;
        for (int i = 0; i < n_; ++i) s += c_[i] * o.c_[i];
        return s;
    }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
    double dist(const Vec& o) const { return (*this - o).norm(); }

    /// Copy with coordinate `axis` replaced (used for projections onto
    /// coordinate hyperplanes and reflections).
    Vec with_coord(int axis, double value) const {
        Vec v = *this;
        v[axis] = value;
        return v;
    }

private:
    static void check(int dim) {
        if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("Vec: dimension out of range");
    }
    std::array<double, kMaxDim> c_{};
    int n_ = 0;
};

}  // namespace isoq
