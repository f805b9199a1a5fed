#pragma once

/**
 * @file vanishing.hpp
 * @brief Product families predicting vanishing coefficients in arithmetic
 * progressions, and their verification against exact expansions.
 *
 * Four families are covered:
 *  - Andrews-Bressoud: (q^r,q^{2k-r};q^{2k}) / (q^{k-r},q^{k+r};q^{2k}),
 *    zero class r(k-r+1)/2 mod k.
 *  - McLaughlin (plus / minus): (q^{r-tk},q^{mk-(r-tk)};q^{mk}) / (+-q^r,+-q^{mk-r};q^{mk})
 *    with r = sm + t, zero class -rs mod k.
 *  - Alladi-Gordon (plus / minus): (q^r,q^{mk-r};q^{mk}) / (+-q^s,+-q^{mk-s};q^{mk}),
 *    zero class r r' mod k.
 *
 * Reports always refer to the product with nonnegative exponents, i.e. the
 * quotient of products without any monomial prefactor. When r < tk the
 * McLaughlin product carries a prefactor -q^{r-tk}, which moves the predicted
 * class from -rs to tk - r - rs.
 */

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qvanish/errors.hpp"
#include "qvanish/products.hpp"
#include "qvanish/series.hpp"

namespace qvanish {

enum class Sign { plus, minus };

inline std::string to_string(Sign s) { return s == Sign::plus ? "plus" : "minus"; }

struct AndrewsBressoudParams {
    Exponent k = 2;
    Exponent r = 1;
};

/// r = s*m + t; plus uses (q^r,q^{mk-r};q^{mk}) in the denominator, minus uses (-q^r,-q^{mk-r};q^{mk}).
struct McLaughlinParams {
    Exponent m = 2;
    Exponent k = 2;
    Exponent s = 0;
    Exponent t = 1;
    Sign sign = Sign::plus;

    Exponent r() const { return s * m + t; }
    Exponent mk() const { return m * k; }
    Exponent tk() const { return t * k; }
};

/// Derived quantities are recomputed from (m, k, s) on every call.
struct AlladiGordonParams {
    Exponent m = 2;
    Exponent k = 3;
    Exponent s = 1;
    Sign sign = Sign::plus;

    Exponent mk() const { return m * k; }
    Exponent r_star() const { return (k - 1) * s; }
    Exponent r() const { return r_star() % mk(); }
    /// ceil(r*/(mk)) reduced mod k. Since 1 <= s < mk the ceiling lies in
    /// [1, k-1], so the reduction never produces 0 for valid parameters.
    Exponent r_prime() const { return ((r_star() + mk() - 1) / mk()) % k; }
};

using TheoremInstance = std::variant<AndrewsBressoudParams, McLaughlinParams, AlladiGordonParams>;

struct ResidueClass {
    Exponent modulus = 1;
    Exponent residue = 0;

    ResidueClass() = default;
    ResidueClass(Exponent modulus_, Exponent value) : modulus(modulus_), residue(((value % modulus_) + modulus_) % modulus_) {}

    bool contains(Exponent e) const { return ((e % modulus) + modulus) % modulus == residue; }

    friend bool operator==(const ResidueClass&, const ResidueClass&) = default;
};

/// "15n+14" style rendering.
inline std::string to_string(const ResidueClass& c) {
    return std::to_string(c.modulus) + "n+" + std::to_string(c.residue);
}

/// Reason the parameters are invalid, or nullopt when they are valid.
inline std::optional<std::string> invalid_reason(const AndrewsBressoudParams& p) {
    if (p.k < 2) return "k must be >= 2";
    if (p.r < 1 || p.r >= p.k) return "r must satisfy 1 <= r < k";
    if (std::gcd(p.r, p.k) != 1) return "gcd(r,k) != 1";
    if ((p.r + p.k) % 2 == 0) return "r and k must have opposite parity";
    return std::nullopt;
}

inline std::optional<std::string> invalid_reason(const McLaughlinParams& p) {
    if (p.k < 2) return "k must be > 1";
    if (p.m < 2) return "m must be > 1";
    if (p.s < 0 || p.s >= p.k) return "s must satisfy 0 <= s < k";
    if (p.t < 1 || p.t >= p.m) return "t must satisfy 1 <= t < m";
    if (std::gcd(p.r(), p.k) != 1) return "gcd(r,k) != 1";
    if (p.sign == Sign::minus && p.k % 2 == 0) return "k must be odd for the minus family";
    return std::nullopt;
}

inline std::optional<std::string> invalid_reason(const AlladiGordonParams& p) {
    if (p.m < 2 || p.k <= p.m) return "must have 1 < m < k";
    if (p.s < 1 || p.s >= p.mk()) return "s must satisfy 1 <= s < mk";
    if (std::gcd(p.s, p.mk()) != 1) return "gcd(s,km) != 1";
    if (p.sign == Sign::minus && p.k % 2 == 0) return "k must be odd for the minus family";
    if (p.r() == 0) return "r* = (k-1)s is divisible by mk";
    if (p.r_prime() == 0) return "ceil(r*/(mk)) is divisible by k; r' has no representative in [1,k)";
    return std::nullopt;
}

inline std::optional<std::string> invalid_reason(const TheoremInstance& inst) {
    return std::visit([](const auto& p) { return invalid_reason(p); }, inst);
}

inline void validate(const TheoremInstance& inst) {
    if (auto why = invalid_reason(inst)) throw InvalidParams(*why);
}

inline std::string family_name(const TheoremInstance& inst) {
    struct Visitor {
        std::string operator()(const AndrewsBressoudParams&) const { return "ab"; }
        std::string operator()(const McLaughlinParams& p) const { return "mcl-" + to_string(p.sign); }
        std::string operator()(const AlladiGordonParams& p) const { return "ag-" + to_string(p.sign); }
    };
    return std::visit(Visitor{}, inst);
}

inline std::string describe(const TheoremInstance& inst) {
    struct Visitor {
        std::string operator()(const AndrewsBressoudParams& p) const {
            return "k=" + std::to_string(p.k) + " r=" + std::to_string(p.r);
        }
        std::string operator()(const McLaughlinParams& p) const {
            return "m=" + std::to_string(p.m) + " k=" + std::to_string(p.k) + " s=" + std::to_string(p.s) +
                   " t=" + std::to_string(p.t);
        }
        std::string operator()(const AlladiGordonParams& p) const {
            return "m=" + std::to_string(p.m) + " k=" + std::to_string(p.k) + " s=" + std::to_string(p.s);
        }
    };
    return std::visit(Visitor{}, inst);
}

/// The derived r of each family (the AB r is the parameter itself).
inline Exponent derived_r(const TheoremInstance& inst) {
    struct Visitor {
        Exponent operator()(const AndrewsBressoudParams& p) const { return p.r; }
        Exponent operator()(const McLaughlinParams& p) const { return p.r(); }
        Exponent operator()(const AlladiGordonParams& p) const { return p.r(); }
    };
    return std::visit(Visitor{}, inst);
}

/// Modulus k of the predicted progression.
inline Exponent class_modulus(const TheoremInstance& inst) {
    return std::visit([](const auto& p) { return p.k; }, inst);
}

/// The product whose coefficients are predicted to vanish. McLaughlin products
/// with r < tk carry the prefactor -q^{r-tk} and positive-offset factors.
inline ProductSpec build_spec(const TheoremInstance& inst) {
    validate(inst);
    struct Visitor {
        ProductSpec operator()(const AndrewsBressoudParams& p) const {
            ProductSpec s;
            const Exponent M = 2 * p.k;
            s.numerator = {PochhammerFactor(1, p.r, M), PochhammerFactor(1, M - p.r, M)};
            s.denominator = {PochhammerFactor(1, p.k - p.r, M), PochhammerFactor(1, p.k + p.r, M)};
            return s;
        }
        ProductSpec operator()(const McLaughlinParams& p) const {
            const Exponent mk = p.mk();
            const Exponent r = p.r();
            // gcd(r,k) = 1 with k > 1 rules out r = tk, so the numerator is never (1;q^mk)_inf.
            const auto num = shifted_numerator(mk, r - p.tk());
            const int den_sign = p.sign == Sign::plus ? 1 : -1;
            ProductSpec s;
            s.prefactor_sign = num.sign;
            s.prefactor_exponent = num.exponent;
            s.numerator = num.factors;
            s.denominator = {PochhammerFactor(den_sign, r, mk), PochhammerFactor(den_sign, mk - r, mk)};
            return s;
        }
        ProductSpec operator()(const AlladiGordonParams& p) const {
            const Exponent mk = p.mk();
            const int den_sign = p.sign == Sign::plus ? 1 : -1;
            ProductSpec s;
            s.numerator = {PochhammerFactor(1, p.r(), mk), PochhammerFactor(1, mk - p.r(), mk)};
            s.denominator = {PochhammerFactor(den_sign, p.s, mk), PochhammerFactor(den_sign, mk - p.s, mk)};
            return s;
        }
    };
    return std::visit(Visitor{}, inst);
}

/// Predicted zero class for the normalized (prefactor-free) product of build_spec.
inline ResidueClass zero_class(const TheoremInstance& inst) {
    validate(inst);
    struct Visitor {
        ResidueClass operator()(const AndrewsBressoudParams& p) const {
            return ResidueClass(p.k, p.r * (p.k - p.r + 1) / 2);
        }
        ResidueClass operator()(const McLaughlinParams& p) const {
            const Exponent r = p.r();
            const Exponent d = r - p.tk();
            if (d == 0) throw Degenerate("r - tk = 0");
            if (d > 0) return ResidueClass(p.k, -r * p.s);
            return ResidueClass(p.k, p.tk() - r - r * p.s);
        }
        ResidueClass operator()(const AlladiGordonParams& p) const {
            return ResidueClass(p.k, p.r() * p.r_prime());
        }
    };
    return std::visit(Visitor{}, inst);
}

struct Violation {
    Exponent exponent = 0;
    Coefficient coefficient;
};

struct VanishingReport {
    TheoremInstance params;
    ProductSpec spec;
    Exponent order = 0;
    ResidueClass predicted;
    /// The smallest violating exponents (at most max_listed_violations).
    std::vector<Violation> violations;
    std::size_t violation_count = 0;
    /// Residues mod k whose every checked coefficient is zero.
    std::vector<ResidueClass> observed_zero_classes;

    static constexpr std::size_t max_listed_violations = 3;
    /// A class must have this many checked exponents before it can be called all-zero.
    static constexpr std::size_t min_checked_per_class = 10;

    bool verified() const { return violation_count == 0; }
};

inline VanishingReport verify_vanishing(const TheoremInstance& inst, Exponent order) {
    if (order < 1) throw InvalidParams("order must be >= 1");
    VanishingReport rep;
    rep.params = inst;
    rep.spec = build_spec(inst);
    rep.order = order;
    rep.predicted = zero_class(inst);

    const LaurentSeries series = expand_product(rep.spec.normalized(), order);
    const Exponent k = rep.predicted.modulus;
    for (Exponent e = series.valuation(); e < series.order(); ++e) {
        if (rep.predicted.contains(e) && !series[e].is_zero()) {
            if (rep.violations.size() < VanishingReport::max_listed_violations) rep.violations.push_back({e, series[e]});
            ++rep.violation_count;
        }
    }

    std::vector<std::size_t> checked(static_cast<std::size_t>(k), 0);
    std::vector<bool> all_zero(static_cast<std::size_t>(k), true);
    for (Exponent e = series.valuation(); e < series.order(); ++e) {
        const auto res = static_cast<std::size_t>(((e % k) + k) % k);
        ++checked[res];
        if (!series[e].is_zero()) all_zero[res] = false;
    }
    for (Exponent res = 0; res < k; ++res) {
        const auto i = static_cast<std::size_t>(res);
        if (all_zero[i] && checked[i] >= VanishingReport::min_checked_per_class) {
            rep.observed_zero_classes.emplace_back(k, res);
        }
    }
    return rep;
}

/// Inclusive integer range; empty when lo > hi.
struct IntRange {
    Exponent lo = 0;
    Exponent hi = -1;

    bool empty() const { return lo > hi; }
};

enum class ScanFamily { mcl_plus, mcl_minus, ab, ag_plus, ag_minus };

struct ScanSkip {
    std::string family;
    std::string params;
    std::string reason;
};

struct ScanResult {
    std::vector<VanishingReport> reports;
    std::vector<ScanSkip> skipped;

    std::size_t violated() const {
        return static_cast<std::size_t>(
            std::count_if(reports.begin(), reports.end(), [](const auto& r) { return !r.verified(); }));
    }
};

/// Every candidate tuple of the grid in lexicographic parameter order, valid or not.
inline std::vector<TheoremInstance> scan_candidates(ScanFamily family, IntRange k_range, IntRange m_range) {
    std::vector<TheoremInstance> out;
    if (k_range.empty()) return out;
    switch (family) {
        case ScanFamily::ab:
            for (Exponent k = k_range.lo; k <= k_range.hi; ++k) {
                for (Exponent r = 1; r < k; ++r) out.emplace_back(AndrewsBressoudParams{k, r});
            }
            break;
        case ScanFamily::mcl_plus:
        case ScanFamily::mcl_minus: {
            if (m_range.empty()) break;
            const Sign sign = family == ScanFamily::mcl_plus ? Sign::plus : Sign::minus;
            for (Exponent m = m_range.lo; m <= m_range.hi; ++m) {
                for (Exponent k = k_range.lo; k <= k_range.hi; ++k) {
                    for (Exponent s = 0; s < k; ++s) {
                        for (Exponent t = 1; t < m; ++t) out.emplace_back(McLaughlinParams{m, k, s, t, sign});
                    }
                }
            }
            break;
        }
        case ScanFamily::ag_plus:
        case ScanFamily::ag_minus: {
            if (m_range.empty()) break;
            const Sign sign = family == ScanFamily::ag_plus ? Sign::plus : Sign::minus;
            for (Exponent m = m_range.lo; m <= m_range.hi; ++m) {
                for (Exponent k = k_range.lo; k <= k_range.hi; ++k) {
                    for (Exponent s = 1; s < m * k; ++s) out.emplace_back(AlladiGordonParams{m, k, s, sign});
                }
            }
            break;
        }
    }
    return out;
}

/// Verifies every valid tuple of the grid. Invalid tuples are skipped and
/// recorded with their reason. Output order does not depend on `threads`.
inline ScanResult scan(ScanFamily family, IntRange k_range, IntRange m_range, Exponent order, unsigned threads = 1) {
    if (order < 1) throw InvalidParams("order must be >= 1");
    ScanResult result;
    std::vector<TheoremInstance> valid;
    for (auto& inst : scan_candidates(family, k_range, m_range)) {
        if (auto why = invalid_reason(inst)) {
            result.skipped.push_back({family_name(inst), describe(inst), *why});
        } else {
            valid.push_back(std::move(inst));
        }
    }

    std::vector<std::optional<VanishingReport>> slots(valid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < valid.size(); i = next++) slots[i] = verify_vanishing(valid[i], order);
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(valid.size(), 1))));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    result.reports.reserve(slots.size());
    for (auto& s : slots) result.reports.push_back(std::move(*s));
    return result;
}

inline nlohmann::json to_json(const ResidueClass& c) { return {{"mod", c.modulus}, {"res", c.residue}}; }

inline nlohmann::json params_json(const TheoremInstance& inst) {
    struct Visitor {
        nlohmann::json operator()(const AndrewsBressoudParams& p) const { return {{"k", p.k}, {"r", p.r}}; }
        nlohmann::json operator()(const McLaughlinParams& p) const {
            return {{"m", p.m}, {"k", p.k}, {"s", p.s}, {"t", p.t}, {"sign", to_string(p.sign)}};
        }
        nlohmann::json operator()(const AlladiGordonParams& p) const {
            return {{"m", p.m},
                    {"k", p.k},
                    {"s", p.s},
                    {"sign", to_string(p.sign)},
                    {"r_star", p.r_star()},
                    {"r_prime", p.r_prime()}};
        }
    };
    return std::visit(Visitor{}, inst);
}

inline nlohmann::json to_json(const VanishingReport& rep) {
    nlohmann::json j;
    j["family"] = family_name(rep.params);
    j["params"] = params_json(rep.params);
    j["r"] = derived_r(rep.params);
    j["product"] = to_string(rep.spec);
    j["order"] = rep.order;
    j["zero_class"] = to_json(rep.predicted);
    auto viol = nlohmann::json::array();
    for (const auto& v : rep.violations) viol.push_back({v.exponent, v.coefficient.str()});
    j["violations"] = viol;
    j["violation_count"] = rep.violation_count;
    auto obs = nlohmann::json::array();
    for (const auto& c : rep.observed_zero_classes) obs.push_back(to_json(c));
    j["observed_zero_classes"] = obs;
    j["verified"] = rep.verified();
    return j;
}

}  // namespace qvanish
