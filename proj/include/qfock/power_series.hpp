#pragma once

#include <cstddef>
#include <vector>

#include "qfock/errors.hpp"
#include "qfock/grid.hpp"

namespace qfock {

/// Truncated power series sum_n c[n] t^n, coefficients stored densely.
/// Just enough machinery for composing exp with a known log-series; the
/// recurrences avoid any numerical differentiation.
class PowerSeries {
public:
    explicit PowerSeries(std::vector<Cx> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) throw InputError("power series needs >= 1 coefficient");
    }

    static PowerSeries zero(std::size_t order) {
        return PowerSeries(std::vector<Cx>(order + 1, Cx(0.0, 0.0)));
    }

    std::size_t order() const { return c_.size() - 1; }
    const Cx& operator[](std::size_t n) const { return c_[n]; }
    Cx& operator[](std::size_t n) { return c_[n]; }
    const std::vector<Cx>& coeffs() const { return c_; }

    PowerSeries& operator+=(const PowerSeries& other) {
        if (other.c_.size() != c_.size())
            throw InputError("power series orders differ");
        for (std::size_t n = 0; n < c_.size(); ++n) c_[n] += other.c_[n];
        return *this;
    }

    Cx eval(Cx t) const {
        Cx acc(0.0, 0.0);
        for (std::size_t n = c_.size(); n-- > 0;) acc = acc * t + c_[n];
        return acc;
    }

private:
    std::vector<Cx> c_;
};

/// exp of a series with phi[0] = 0, via b_0 = 1 and
/// n b_n = sum_{k=1}^{n} k phi_k b_{n-k}.
inline PowerSeries exp_series(const PowerSeries& phi) {
    std::size_t N = phi.order();
    PowerSeries b = PowerSeries::zero(N);
    b[0] = Cx(1.0, 0.0);
    for (std::size_t n = 1; n <= N; ++n) {
        Cx acc(0.0, 0.0);
        for (std::size_t k = 1; k <= n; ++k)
            acc += double(k) * phi[k] * b[n - k];
        b[n] = acc / double(n);
    }
    return b;
}

/// Coefficients of -log(1 - z t) = sum_{n>=1} z^n t^n / n up to the given
/// order (constant term zero).
inline PowerSeries log_one_minus(Cx z, std::size_t order) {
    PowerSeries phi = PowerSeries::zero(order);
    Cx zn(1.0, 0.0);
    for (std::size_t n = 1; n <= order; ++n) {
        zn *= z;
        phi[n] = zn / double(n);
    }
    return phi;
}

}  // namespace qfock
