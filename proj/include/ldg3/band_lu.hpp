#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ldg3 {

class SingularPivotError : public std::runtime_error {
public:
    explicit SingularPivotError(std::size_t column)
        : std::runtime_error("band LU: zero pivot in column " + std::to_string(column)), column_(column) {}
    std::size_t column() const { return column_; }

private:
    std::size_t column_;
};

/// Square banded matrix with kl sub- and ku super-diagonals.
///
/// Row-major band storage; each row keeps kl extra slots on the right for
/// the fill-in produced by row interchanges during factorization.
template <class T>
class BandMatrix {
public:
    BandMatrix() = default;
    BandMatrix(std::size_t n, std::size_t kl, std::size_t ku)
        : n_(n), kl_(kl), ku_(ku), width_(2 * kl + ku + 1), data_(n * width_, T{}) {}

    std::size_t size() const { return n_; }
    std::size_t lower() const { return kl_; }
    std::size_t upper() const { return ku_; }

    bool in_band(std::size_t i, std::size_t j) const { return j + kl_ >= i && j <= i + ku_; }

    T operator()(std::size_t i, std::size_t j) const {
        if (!in_band(i, j)) return T{};
        return data_[index(i, j)];
    }

    void add(std::size_t i, std::size_t j, T v) {
        if (i >= n_ || j >= n_ || !in_band(i, j))
            throw std::out_of_range("BandMatrix: entry (" + std::to_string(i) + "," + std::to_string(j) +
                                    ") outside the band");
        data_[index(i, j)] += v;
    }

    void multiply(std::span<const T> x, std::span<T> y) const {
        for (std::size_t i = 0; i < n_; ++i) {
            const std::size_t lo = i > kl_ ? i - kl_ : 0;
            const std::size_t hi = std::min(n_ - 1, i + ku_);
            T s{};
            for (std::size_t j = lo; j <= hi; ++j) s += data_[index(i, j)] * x[j];
            y[i] = s;
        }
    }

    T max_abs() const {
        T m{};
        for (const T& v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    template <class>
    friend class BandLU;

private:
    // Column j of row i lives at slot j - i + kl, which spans [0, 2kl+ku].
    std::size_t index(std::size_t i, std::size_t j) const { return i * width_ + (j + kl_ - i); }

    std::size_t n_ = 0, kl_ = 0, ku_ = 0, width_ = 1;
    std::vector<T> data_;
};

/// Gaussian elimination with partial pivoting restricted to the band,
/// in the style of LAPACK gbtrf/gbtrs.
template <class T>
class BandLU {
public:
    explicit BandLU(BandMatrix<T> a) : lu_(std::move(a)) { factor(); }

    /// max |U_ij| / max |A_ij|.
    T growth_factor() const { return growth_; }

    void solve_in_place(std::span<T> b) const {
        const std::size_t n = lu_.n_, kl = lu_.kl_;
        for (std::size_t k = 0; k < n; ++k) {
            if (pivots_[k] != k) std::swap(b[k], b[pivots_[k]]);
            const std::size_t last = std::min(n - 1, k + kl);
            for (std::size_t i = k + 1; i <= last; ++i) b[i] -= multipliers_[k * kl + (i - k - 1)] * b[k];
        }
        const std::size_t span_u = lu_.kl_ + lu_.ku_;
        for (std::size_t kk = n; kk-- > 0;) {
            T s = b[kk];
            const std::size_t last = std::min(n - 1, kk + span_u);
            for (std::size_t j = kk + 1; j <= last; ++j) s -= lu_.data_[lu_.index(kk, j)] * b[j];
            b[kk] = s / lu_.data_[lu_.index(kk, kk)];
        }
    }

private:
    void factor() {
        const std::size_t n = lu_.n_, kl = lu_.kl_, span_u = lu_.kl_ + lu_.ku_;
        const T amax = lu_.max_abs();
        pivots_.assign(n, 0);
        multipliers_.assign(n * std::max<std::size_t>(kl, 1), T{});
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t last_row = std::min(n - 1, k + kl);
            std::size_t p = k;
            T best = std::abs(lu_.data_[lu_.index(k, k)]);
            for (std::size_t i = k + 1; i <= last_row; ++i) {
                const T v = std::abs(lu_.data_[lu_.index(i, k)]);
                if (v > best) {
                    best = v;
                    p = i;
                }
            }
            if (!(best > T{})) throw SingularPivotError(k);
            pivots_[k] = p;
            const std::size_t last_col = std::min(n - 1, k + span_u);
            if (p != k)
                for (std::size_t j = k; j <= last_col; ++j)
                    std::swap(lu_.data_[lu_.index(k, j)], lu_.data_[lu_.index(p, j)]);
            const T piv = lu_.data_[lu_.index(k, k)];
            for (std::size_t i = k + 1; i <= last_row; ++i) {
                T& lik = lu_.data_[lu_.index(i, k)];
                const T l = lik / piv;
                lik = T{};
                multipliers_[k * kl + (i - k - 1)] = l;
                if (l == T{}) continue;
                for (std::size_t j = k + 1; j <= last_col; ++j)
                    lu_.data_[lu_.index(i, j)] -= l * lu_.data_[lu_.index(k, j)];
            }
        }
        T umax{};
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j <= std::min(n - 1, i + span_u); ++j)
                umax = std::max(umax, std::abs(lu_.data_[lu_.index(i, j)]));
        growth_ = amax > T{} ? umax / amax : T{};
    }

    BandMatrix<T> lu_;
    std::vector<std::size_t> pivots_;
    std::vector<T> multipliers_;
    T growth_{};
};

}  // namespace ldg3
