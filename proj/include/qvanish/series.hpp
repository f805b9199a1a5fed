#pragma once

/**
 * @file series.hpp
 * @brief Truncated Laurent series in q with arbitrary-precision integer coefficients.
 *
 * A series carries a window [valuation, order) of known exponents. Exponents
 * below the valuation are zero by construction; exponents at or above the
 * order are unknown. Every operation propagates the order conservatively so
 * that a coefficient is never reported unless it is exactly determined.
 */

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qvanish/errors.hpp"

namespace qvanish {

using Coefficient = boost::multiprecision::cpp_int;
using Exponent = std::int64_t;

class LaurentSeries {
public:
    /// Empty window at exponent 0.
    LaurentSeries() = default;

    /// All-zero series on [valuation, order).
    LaurentSeries(Exponent valuation, Exponent order)
        : valuation_(valuation), order_(order) {
        if (order < valuation) {
            throw std::invalid_argument("LaurentSeries: order below valuation");
        }
        coeffs_.resize(static_cast<std::size_t>(order - valuation));
    }

    LaurentSeries(Exponent valuation, std::vector<Coefficient> coeffs)
        : valuation_(valuation),
          order_(valuation + static_cast<Exponent>(coeffs.size())),
          coeffs_(std::move(coeffs)) {}

    /// Polynomial with the listed coefficients starting at `valuation`, padded
    /// with zeros (or cut) to the window [valuation, order).
    static LaurentSeries polynomial(Exponent valuation, std::initializer_list<long long> coeffs,
                                    Exponent order) {
        LaurentSeries s(valuation, order);
        std::size_t i = 0;
        for (long long c : coeffs) {
            if (i >= s.coeffs_.size()) break;
            s.coeffs_[i++] = c;
        }
        return s;
    }

    /// sign * q^exponent known below `order`.
    static LaurentSeries monomial(int sign, Exponent exponent, Exponent order) {
        LaurentSeries s(std::min(exponent, order), order);
        if (exponent < order) s.coeffs_[0] = sign;
        return s;
    }

    static LaurentSeries one(Exponent order) { return monomial(1, 0, std::max<Exponent>(order, 0)); }

    Exponent valuation() const noexcept { return valuation_; }
    Exponent order() const noexcept { return order_; }
    std::size_t size() const noexcept { return coeffs_.size(); }
    bool empty() const noexcept { return coeffs_.empty(); }

    std::span<const Coefficient> coefficients() const noexcept { return coeffs_; }
    std::span<Coefficient> coefficients() noexcept { return coeffs_; }

    /// Unchecked access; `e` must lie in the known window.
    const Coefficient& operator[](Exponent e) const { return coeffs_[static_cast<std::size_t>(e - valuation_)]; }
    Coefficient& operator[](Exponent e) { return coeffs_[static_cast<std::size_t>(e - valuation_)]; }

    bool contains(Exponent e) const noexcept { return e >= valuation_ && e < order_; }

    /// Lowest exponent with a nonzero coefficient, if any.
    std::optional<Exponent> leading_exponent() const {
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (!coeffs_[i].is_zero()) return valuation_ + static_cast<Exponent>(i);
        }
        return std::nullopt;
    }

    bool is_zero() const { return !leading_exponent().has_value(); }

    /// Same series with a smaller order. Raising the order is impossible.
    LaurentSeries truncated(Exponent new_order) const {
        if (new_order > order_) {
            throw OutOfRange("cannot raise truncation order from " + std::to_string(order_) + " to " +
                             std::to_string(new_order));
        }
        const Exponent lo = std::min(valuation_, new_order);
        std::vector<Coefficient> c(coeffs_.begin(), coeffs_.begin() + (new_order - lo));
        return LaurentSeries(lo, std::move(c));
    }

private:
    Exponent valuation_ = 0;
    Exponent order_ = 0;
    std::vector<Coefficient> coeffs_;
};

/// Exact coefficient of q^e. Zero below the valuation; OutOfRange at or above the order.
inline Coefficient coeff_at(const LaurentSeries& a, Exponent e) {
    if (e >= a.order()) {
        throw OutOfRange("coefficient of q^" + std::to_string(e) + " is unknown (series known below q^" +
                         std::to_string(a.order()) + ")");
    }
    if (e < a.valuation()) return Coefficient(0);
    return a[e];
}

inline LaurentSeries negate(LaurentSeries a) {
    for (auto& c : a.coefficients()) c = -c;
    return a;
}

inline LaurentSeries add(const LaurentSeries& a, const LaurentSeries& b) {
    const Exponent lo = std::min(a.valuation(), b.valuation());
    const Exponent hi = std::min(a.order(), b.order());
    LaurentSeries out(std::min(lo, hi), hi);
    for (Exponent e = std::max(a.valuation(), out.valuation()); e < std::min(a.order(), hi); ++e) out[e] += a[e];
    for (Exponent e = std::max(b.valuation(), out.valuation()); e < std::min(b.order(), hi); ++e) out[e] += b[e];
    return out;
}

inline LaurentSeries sub(const LaurentSeries& a, const LaurentSeries& b) { return add(a, negate(b)); }

/// Cauchy product. The result is known up to the first exponent where either
/// factor's unknown tail could contribute.
inline LaurentSeries mul(const LaurentSeries& a, const LaurentSeries& b) {
    const Exponent val = a.valuation() + b.valuation();
    const Exponent ord = std::min(a.order() + b.valuation(), b.order() + a.valuation());
    LaurentSeries out(val, ord);
    const auto ac = a.coefficients();
    const auto bc = b.coefficients();
    const std::size_t n = out.size();
    auto oc = out.coefficients();
    for (std::size_t i = 0; i < ac.size() && i < n; ++i) {
        if (ac[i].is_zero()) continue;
        const std::size_t jmax = std::min(bc.size(), n - i);
        for (std::size_t j = 0; j < jmax; ++j) {
            if (!bc[j].is_zero()) oc[i + j] += ac[i] * bc[j];
        }
    }
    return out;
}

/// Multiplication by sign * q^exponent.
inline LaurentSeries monomial_mul(const LaurentSeries& a, int sign, Exponent exponent) {
    std::vector<Coefficient> c(a.coefficients().begin(), a.coefficients().end());
    if (sign < 0) {
        for (auto& x : c) x = -x;
    }
    return LaurentSeries(a.valuation() + exponent, std::move(c));
}

/// Multiplicative inverse of a series whose lowest nonzero coefficient is +1 or -1.
inline LaurentSeries invert(const LaurentSeries& a) {
    const auto lead = a.leading_exponent();
    if (!lead) throw NotAUnit("cannot invert a series with no known nonzero coefficient");
    const Coefficient& u0 = a[*lead];
    if (u0 != 1 && u0 != -1) {
        throw NotAUnit("leading coefficient " + u0.str() + " is not a unit");
    }
    const int s0 = u0 == 1 ? 1 : -1;
    // a = q^v * u(q) with u known to `len` terms; 1/a = q^{-v} * w(q) with w u = 1.
    const Exponent v = *lead;
    const auto len = static_cast<std::size_t>(a.order() - v);
    std::vector<Coefficient> w(len);
    for (std::size_t n = 0; n < len; ++n) {
        Coefficient acc = n == 0 ? Coefficient(1) : Coefficient(0);
        for (std::size_t i = 1; i <= n; ++i) {
            const Coefficient& ui = a[v + static_cast<Exponent>(i)];
            if (!ui.is_zero()) acc -= ui * w[n - i];
        }
        w[n] = s0 == 1 ? std::move(acc) : Coefficient(-acc);
    }
    return LaurentSeries(-v, std::move(w));
}

/// Product with (1 - x q^e), x = +-1, e >= 1. Keeps the window.
inline LaurentSeries multiply_by_binomial(LaurentSeries a, int x, Exponent e) {
    const Exponent lo = a.valuation();
    for (Exponent n = a.order() - 1; n >= lo + e; --n) {
        if (x > 0) a[n] -= a[n - e];
        else a[n] += a[n - e];
    }
    return a;
}

/// Quotient by (1 - x q^e), x = +-1, e >= 1. Keeps the window.
inline LaurentSeries divide_by_binomial(LaurentSeries a, int x, Exponent e) {
    const Exponent lo = a.valuation();
    for (Exponent n = lo + e; n < a.order(); ++n) {
        if (x > 0) a[n] += a[n - e];
        else a[n] -= a[n - e];
    }
    return a;
}

/// Lowest exponent in the common known window where a and b differ.
/// Coefficients below a series' valuation count as zero.
inline std::optional<Exponent> first_difference(const LaurentSeries& a, const LaurentSeries& b) {
    const Exponent hi = std::min(a.order(), b.order());
    for (Exponent e = std::min(a.valuation(), b.valuation()); e < hi; ++e) {
        if (coeff_at(a, e) != coeff_at(b, e)) return e;
    }
    return std::nullopt;
}

/// Equality on the overlap of the known windows.
inline bool operator==(const LaurentSeries& a, const LaurentSeries& b) { return !first_difference(a, b); }

inline LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) { return add(a, b); }
inline LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return sub(a, b); }
inline LaurentSeries operator-(const LaurentSeries& a) { return negate(a); }
inline LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) { return mul(a, b); }

/// Human-readable rendering, e.g. "1 - q - q^2 + q^5 + O(q^6)".
inline std::string to_string(const LaurentSeries& a, std::size_t max_terms = 12) {
    std::ostringstream os;
    std::size_t shown = 0;
    bool first = true;
    for (Exponent e = a.valuation(); e < a.order() && shown < max_terms; ++e) {
        const Coefficient& c = a[e];
        if (c.is_zero()) continue;
        const bool neg = c < 0;
        const Coefficient mag = neg ? Coefficient(-c) : c;
        if (first) os << (neg ? "-" : "");
        else os << (neg ? " - " : " + ");
        const bool unit = mag == 1;
        if (!unit || e == 0) os << mag;
        if (e != 0) {
            os << 'q';
            if (e != 1) os << '^' << e;
        }
        first = false;
        ++shown;
    }
    if (first) os << '0';
    os << " + O(q^" << a.order() << ')';
    return os.str();
}

}  // namespace qvanish
