#pragma once

/**
 * @file products.hpp
 * @brief q-Pochhammer products, Jacobi theta sums and the bilateral Lambert
 * series obtained from Ramanujan's 1psi1 sum with
 *
 *     q -> q^{mk},  a -> q^{-tk},  b -> q^{mk-tk},  z -> q^{r}.
 *
 * All expansions are exact and truncated at an exclusive order.
 */

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qvanish/errors.hpp"
#include "qvanish/series.hpp"

namespace qvanish {

/// (sign * q^offset; q^modulus)_inf = prod_{i>=0} (1 - sign * q^{offset + i*modulus}).
struct PochhammerFactor {
    int sign = 1;
    Exponent offset = 1;
    Exponent modulus = 1;

    PochhammerFactor() = default;
    PochhammerFactor(int sign_, Exponent offset_, Exponent modulus_)
        : sign(sign_), offset(offset_), modulus(modulus_) {
        if (sign != 1 && sign != -1) throw InvalidParams("factor sign must be +1 or -1");
        if (offset < 1) throw InvalidParams("factor offset must be >= 1, got " + std::to_string(offset));
        if (modulus < 1) throw InvalidParams("factor modulus must be >= 1, got " + std::to_string(modulus));
    }

    friend bool operator==(const PochhammerFactor&, const PochhammerFactor&) = default;
};

/// prefactor_sign * q^prefactor_exponent * prod(numerator) / prod(denominator).
struct ProductSpec {
    int prefactor_sign = 1;
    Exponent prefactor_exponent = 0;
    std::vector<PochhammerFactor> numerator;
    std::vector<PochhammerFactor> denominator;

    /// The quotient of products alone, with the monomial prefactor dropped.
    ProductSpec normalized() const {
        ProductSpec s = *this;
        s.prefactor_sign = 1;
        s.prefactor_exponent = 0;
        return s;
    }

    friend bool operator==(const ProductSpec&, const ProductSpec&) = default;
};

namespace detail {

// Consecutive factors with equal modulus are grouped, as in (q^3,q^5;q^8)_inf.
inline std::string render_factors(const std::vector<PochhammerFactor>& fs) {
    if (fs.empty()) return "1";
    std::ostringstream os;
    std::size_t i = 0;
    bool first_group = true;
    while (i < fs.size()) {
        std::size_t j = i;
        while (j < fs.size() && fs[j].modulus == fs[i].modulus) ++j;
        if (!first_group) os << ' ';
        os << '(';
        for (std::size_t p = i; p < j; ++p) {
            if (p != i) os << ',';
            if (fs[p].sign < 0) os << '-';
            os << "q";
            if (fs[p].offset != 1) os << '^' << fs[p].offset;
        }
        os << ";q";
        if (fs[i].modulus != 1) os << '^' << fs[i].modulus;
        os << ")_inf";
        first_group = false;
        i = j;
    }
    return os.str();
}

}  // namespace detail

/// Rendering in the (q^a,q^b;q^M)_inf notation, e.g. "-q^-2 (q^28,q^2;q^30)_inf / (q,q^29;q^30)_inf".
inline std::string to_string(const ProductSpec& spec) {
    std::ostringstream os;
    if (spec.prefactor_sign < 0 || spec.prefactor_exponent != 0) {
        if (spec.prefactor_sign < 0) os << '-';
        if (spec.prefactor_exponent != 0) os << "q^" << spec.prefactor_exponent;
        else os << '1';
        os << ' ';
    }
    os << detail::render_factors(spec.numerator);
    if (!spec.denominator.empty()) os << " / " << detail::render_factors(spec.denominator);
    return os.str();
}

/// Truncated expansion of a single q-Pochhammer factor on [0, order).
inline LaurentSeries expand_factor(const PochhammerFactor& f, Exponent order) {
    LaurentSeries s = LaurentSeries::one(order);
    for (Exponent e = f.offset; e < order; e += f.modulus) s = multiply_by_binomial(std::move(s), f.sign, e);
    return s;
}

/// Exact expansion of a product specification on [prefactor_exponent, order).
///
/// Denominator factors are divided out one binomial at a time; each binomial
/// has constant term 1, so no general inversion is needed.
inline LaurentSeries expand_product(const ProductSpec& spec, Exponent order) {
    if (order < spec.prefactor_exponent) {
        throw InvalidParams("order " + std::to_string(order) + " is below the prefactor exponent " +
                            std::to_string(spec.prefactor_exponent));
    }
    const Exponent inner = order - spec.prefactor_exponent;
    LaurentSeries s = LaurentSeries::one(inner);
    for (const auto& f : spec.numerator) {
        for (Exponent e = f.offset; e < inner; e += f.modulus) s = multiply_by_binomial(std::move(s), f.sign, e);
    }
    for (const auto& f : spec.denominator) {
        for (Exponent e = f.offset; e < inner; e += f.modulus) s = divide_by_binomial(std::move(s), f.sign, e);
    }
    if (spec.prefactor_sign == 1 && spec.prefactor_exponent == 0) return s;
    return monomial_mul(s, spec.prefactor_sign, spec.prefactor_exponent);
}

/// sum_{j in Z} (-1)^j q^{M j(j+1)/2 - a j}, which equals (q^a, q^{M-a}, q^M; q^M)_inf
/// by the Jacobi triple product. `a` may be any integer.
inline LaurentSeries jtp_theta(Exponent modulus, Exponent a, Exponent order) {
    if (modulus < 1) throw InvalidParams("theta modulus must be >= 1");
    auto exponent = [&](Exponent j) { return modulus * j * (j + 1) / 2 - a * j; };
    // The exponent is a convex quadratic in j; walk outwards from its minimum.
    const double vertex = (2.0 * static_cast<double>(a) - static_cast<double>(modulus)) /
                          (2.0 * static_cast<double>(modulus));
    Exponent jmin = static_cast<Exponent>(vertex);
    for (Exponent j : {jmin - 1, jmin + 1}) {
        if (exponent(j) < exponent(jmin)) jmin = j;
    }
    const Exponent lowest = exponent(jmin);
    LaurentSeries out(std::min(lowest, order), order);
    auto add_term = [&](Exponent j) {
        const Exponent e = exponent(j);
        if (e >= order) return false;
        out[e] += (j % 2 == 0) ? 1 : -1;
        return true;
    };
    // Exponents are nondecreasing moving away from the vertex, so each walk
    // stops at the first term beyond the window.
    for (Exponent j = jmin; add_term(j); ++j) {
    }
    for (Exponent j = jmin - 1; add_term(j); --j) {
    }
    return out;
}

/// Parameters of the specialized 1psi1 sum; `r` is normally s*m + t.
struct BilateralSpecialization {
    Exponent m = 2;
    Exponent k = 2;
    Exponent t = 1;
    Exponent r = 1;

    Exponent mk() const { return m * k; }
    Exponent tk() const { return t * k; }

    void validate() const {
        if (m < 2 || k < 2) throw InvalidParams("m and k must both be > 1");
        if (t < 1 || t >= m) throw InvalidParams("t must satisfy 1 <= t < m");
        if (r < 1 || r >= mk()) throw InvalidParams("r must satisfy 1 <= r < mk");
        if (r == tk()) throw Degenerate("r = tk makes (q^{r-tk};q^{mk})_inf vanish");
    }
};

namespace detail {

// out += sign * q^e / (1 - q^c) on the window of `out`, c >= 1.
inline void add_geometric(LaurentSeries& out, int sign, Exponent e, Exponent c) {
    Exponent x = e;
    if (x < out.valuation()) x += (out.valuation() - x + c - 1) / c * c;
    for (; x < out.order(); x += c) out[x] += sign;
}

}  // namespace detail

/// sum_{n>=0} q^{rn}/(1-q^{nmk-tk}) - sum_{n>=1} q^{nmk+tk-rn}/(1-q^{nmk+tk}) on [0, order).
///
/// The n = 0 term 1/(1-q^{-tk}) is taken as -q^{tk}/(1-q^{tk}).
inline LaurentSeries lambert_series(const BilateralSpecialization& p, Exponent order) {
    p.validate();
    LaurentSeries out(0, std::max<Exponent>(order, 0));
    const Exponent mk = p.mk(), tk = p.tk();
    detail::add_geometric(out, -1, tk, tk);
    for (Exponent n = 1; p.r * n < order; ++n) detail::add_geometric(out, 1, p.r * n, n * mk - tk);
    for (Exponent n = 1; n * (mk - p.r) + tk < order; ++n) {
        detail::add_geometric(out, -1, n * (mk - p.r) + tk, n * mk + tk);
    }
    return out;
}

/// Outcome of comparing two independently expanded sides of an identity.
struct IdentityCheck {
    bool holds = true;
    Exponent window_low = 0;
    Exponent window_high = 0;
    std::optional<Exponent> discrepancy_exponent;
    Coefficient lhs_coefficient;
    Coefficient rhs_coefficient;
};

inline IdentityCheck compare_sides(const LaurentSeries& lhs, const LaurentSeries& rhs) {
    IdentityCheck out;
    out.window_low = std::min(lhs.valuation(), rhs.valuation());
    out.window_high = std::min(lhs.order(), rhs.order());
    if (auto e = first_difference(lhs, rhs)) {
        out.holds = false;
        out.discrepancy_exponent = e;
        out.lhs_coefficient = coeff_at(lhs, *e);
        out.rhs_coefficient = coeff_at(rhs, *e);
    }
    return out;
}

/// (q^{r-tk}, q^{mk-(r-tk)}; q^{mk})_inf with nonnegative offsets: when r < tk the
/// pair is rewritten as -q^{r-tk} (q^{mk-(tk-r)}, q^{tk-r}; q^{mk})_inf.
/// Returns the prefactor (sign, exponent) and the two factors.
struct ShiftedNumerator {
    int sign = 1;
    Exponent exponent = 0;
    std::vector<PochhammerFactor> factors;
};

inline ShiftedNumerator shifted_numerator(Exponent mk, Exponent d, int arg_sign = 1) {
    if (d == 0) throw Degenerate("r - tk = 0 gives the factor (1;q^mk)_inf = 0");
    ShiftedNumerator out;
    if (d > 0) {
        out.factors = {PochhammerFactor(arg_sign, d, mk), PochhammerFactor(arg_sign, mk - d, mk)};
    } else {
        // (1 - q^{-c}) = -q^{-c} (1 - q^c) for c = tk - r.
        out.sign = -1;
        out.exponent = d;
        out.factors = {PochhammerFactor(arg_sign, mk + d, mk), PochhammerFactor(arg_sign, -d, mk)};
    }
    return out;
}

/// The product side of the specialized 1psi1 identity:
///   (q^mk,q^mk;q^mk)(q^{r-tk},q^{mk-(r-tk)};q^mk) / [(q^tk,q^{mk-tk};q^mk)(q^r,q^{mk-r};q^mk)].
inline ProductSpec psi_product_side(const BilateralSpecialization& p) {
    p.validate();
    const Exponent mk = p.mk(), tk = p.tk();
    const auto num = shifted_numerator(mk, p.r - tk);
    ProductSpec spec;
    spec.prefactor_sign = num.sign;
    spec.prefactor_exponent = num.exponent;
    spec.numerator = {PochhammerFactor(1, mk, mk), PochhammerFactor(1, mk, mk)};
    spec.numerator.insert(spec.numerator.end(), num.factors.begin(), num.factors.end());
    spec.denominator = {PochhammerFactor(1, tk, mk), PochhammerFactor(1, mk - tk, mk), PochhammerFactor(1, p.r, mk),
                        PochhammerFactor(1, mk - p.r, mk)};
    return spec;
}

/// The series side -q^{-tk} * lambert_series, known below `order`.
inline LaurentSeries psi_series_side(const BilateralSpecialization& p, Exponent order) {
    return monomial_mul(lambert_series(p, order + p.tk()), -1, -p.tk());
}

/// Checks the specialized 1psi1 identity against an explicit product side.
inline IdentityCheck verify_1psi1(const BilateralSpecialization& p, Exponent order, const ProductSpec& product_side) {
    const LaurentSeries lhs = psi_series_side(p, order);
    const LaurentSeries rhs = expand_product(product_side, std::max(order, product_side.prefactor_exponent));
    return compare_sides(lhs, rhs);
}

inline IdentityCheck verify_1psi1(const BilateralSpecialization& p, Exponent order) {
    return verify_1psi1(p, order, psi_product_side(p));
}

/// The two sums whose difference must vanish once r = sm + t:
///   sum_{n>=1} q^{r(nk-s)} / (1-q^{(nk-s)mk-tk})
///   sum_{n>=0} q^{(nk+s)mk+tk-r(nk+s)} / (1-q^{(nk+s)mk+tk})
/// For s = 0 the n = 0 terms of the bilateral split cancel each other, so the
/// same index ranges apply.
inline IdentityCheck cancellation_check(const BilateralSpecialization& p, Exponent s, Exponent order) {
    p.validate();
    if (s < 0 || s >= p.k) throw InvalidParams("s must satisfy 0 <= s < k");
    const Exponent mk = p.mk(), tk = p.tk(), k = p.k, r = p.r;
    LaurentSeries first(0, std::max<Exponent>(order, 0));
    LaurentSeries second(0, std::max<Exponent>(order, 0));
    for (Exponent n = 1; r * (n * k - s) < order; ++n) {
        detail::add_geometric(first, 1, r * (n * k - s), (n * k - s) * mk - tk);
    }
    for (Exponent n = 0;; ++n) {
        const Exponent idx = n * k + s;
        const Exponent e = idx * (mk - r) + tk;
        if (e >= order) break;
        detail::add_geometric(second, 1, e, idx * mk + tk);
    }
    return compare_sides(first, second);
}

}  // namespace qvanish
