#pragma once

/**
 * @file partitions.hpp
 * @brief Partitions with parts restricted to residue classes, counted by
 * dynamic programming and, for small inputs, enumerated exhaustively.
 */

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qvanish/errors.hpp"
#include "qvanish/series.hpp"
#include "qvanish/vanishing.hpp"

namespace qvanish {

/// Parts are positive integers whose residue mod `modulus` lies in one of the
/// two sets. Parts with a repeatable residue may occur any number of times,
/// parts with a distinct residue at most once.
struct RestrictedPartitionSpec {
    Exponent modulus = 1;
    std::set<Exponent> repeatable_residues;
    std::set<Exponent> distinct_residues;
    std::optional<Exponent> max_part;

    void validate() const {
        if (modulus < 1) throw InvalidParams("partition modulus must be >= 1");
        for (const auto* set : {&repeatable_residues, &distinct_residues}) {
            for (Exponent r : *set) {
                if (r < 0 || r >= modulus) {
                    throw InvalidParams("residue " + std::to_string(r) + " is not reduced mod " + std::to_string(modulus));
                }
            }
        }
        for (Exponent r : distinct_residues) {
            if (repeatable_residues.contains(r)) {
                throw InvalidParams("residue " + std::to_string(r) + " is both repeatable and distinct");
            }
        }
        if (distinct_residues.contains(0)) throw InvalidParams("residue 0 may only be repeatable");
    }
};

struct AllowedPart {
    Exponent size = 0;
    bool distinct = false;
};

/// Allowed part sizes <= n in ascending order.
inline std::vector<AllowedPart> allowed_parts(const RestrictedPartitionSpec& spec, Exponent n) {
    spec.validate();
    std::vector<AllowedPart> out;
    const Exponent top = spec.max_part ? std::min(n, *spec.max_part) : n;
    for (Exponent a = 1; a <= top; ++a) {
        const Exponent res = a % spec.modulus;
        if (spec.repeatable_residues.contains(res)) out.push_back({a, false});
        else if (spec.distinct_residues.contains(res)) out.push_back({a, true});
    }
    return out;
}

/// Counts for every integer 0..n.
inline std::vector<Coefficient> count_restricted_table(const RestrictedPartitionSpec& spec, Exponent n) {
    if (n < 0) return {};
    std::vector<Coefficient> dp(static_cast<std::size_t>(n + 1));
    dp[0] = 1;
    for (const auto& part : allowed_parts(spec, n)) {
        const auto a = static_cast<std::size_t>(part.size);
        if (part.distinct) {
            for (std::size_t s = dp.size() - 1; s >= a; --s) dp[s] += dp[s - a];
        } else {
            for (std::size_t s = a; s < dp.size(); ++s) dp[s] += dp[s - a];
        }
    }
    return dp;
}

inline Coefficient count_restricted(const RestrictedPartitionSpec& spec, Exponent n) {
    if (n < 0) throw InvalidParams("n must be >= 0");
    return count_restricted_table(spec, n).back();
}

struct ParityCountPair {
    Coefficient even_count;
    Coefficient odd_count;

    friend bool operator==(const ParityCountPair&, const ParityCountPair&) = default;
};

/// Counts for 0..n split by the parity of the number of parts.
inline std::vector<ParityCountPair> count_parity_table(const RestrictedPartitionSpec& spec, Exponent n) {
    if (n < 0) return {};
    const auto len = static_cast<std::size_t>(n + 1);
    std::vector<Coefficient> even(len), odd(len);
    even[0] = 1;
    for (const auto& part : allowed_parts(spec, n)) {
        const auto a = static_cast<std::size_t>(part.size);
        if (part.distinct) {
            for (std::size_t s = len - 1; s >= a; --s) {
                Coefficient e = even[s] + odd[s - a];
                odd[s] += even[s - a];
                even[s] = std::move(e);
            }
        } else {
            for (std::size_t s = a; s < len; ++s) {
                Coefficient e = even[s] + odd[s - a];
                odd[s] += even[s - a];
                even[s] = std::move(e);
            }
        }
    }
    std::vector<ParityCountPair> out(len);
    for (std::size_t i = 0; i < len; ++i) out[i] = {std::move(even[i]), std::move(odd[i])};
    return out;
}

/// A multiset of positive parts stored as (part, multiplicity) pairs with
/// strictly ascending parts.
class Partition {
public:
    Partition() = default;

    /// Builds from an unordered list of parts.
    static Partition from_parts(std::vector<Exponent> parts) {
        std::sort(parts.begin(), parts.end());
        Partition p;
        for (Exponent x : parts) {
            if (x < 1) throw InvalidParams("partition parts must be positive");
            if (!p.blocks_.empty() && p.blocks_.back().first == x) ++p.blocks_.back().second;
            else p.blocks_.emplace_back(x, 1);
        }
        return p;
    }

    /// Parses "2+13+17^6+32". Whitespace and braces around exponents ("13^{10}") are accepted.
    static Partition parse(const std::string& text) {
        std::vector<Exponent> parts;
        std::string cleaned;
        for (char c : text) {
            if (c != ' ' && c != '{' && c != '}') cleaned.push_back(c);
        }
        if (cleaned.empty()) return {};
        std::istringstream is(cleaned);
        std::string term;
        while (std::getline(is, term, '+')) {
            const auto caret = term.find('^');
            try {
                std::size_t used = 0;
                const long long base = std::stoll(term.substr(0, caret), &used);
                if (used != (caret == std::string::npos ? term.size() : caret)) throw std::invalid_argument(term);
                long long mult = 1;
                if (caret != std::string::npos) {
                    const std::string ms = term.substr(caret + 1);
                    mult = std::stoll(ms, &used);
                    if (used != ms.size() || mult < 1) throw std::invalid_argument(term);
                }
                parts.insert(parts.end(), static_cast<std::size_t>(mult), base);
            } catch (const std::logic_error&) {
                throw InvalidParams("cannot parse partition term '" + term + "'");
            }
        }
        return from_parts(std::move(parts));
    }

    const std::vector<std::pair<Exponent, Exponent>>& blocks() const { return blocks_; }

    Exponent total() const {
        Exponent s = 0;
        for (const auto& [part, mult] : blocks_) s += part * mult;
        return s;
    }

    Exponent part_count() const {
        Exponent c = 0;
        for (const auto& b : blocks_) c += b.second;
        return c;
    }

    /// Multiplicity notation: parts ascending, "b^e" for e >= 2, joined by "+".
    std::string to_string() const {
        std::string out;
        for (const auto& [part, mult] : blocks_) {
            if (!out.empty()) out += '+';
            out += std::to_string(part);
            if (mult > 1) out += '^' + std::to_string(mult);
        }
        return out;
    }

    void push_block(Exponent part, Exponent mult) { blocks_.emplace_back(part, mult); }
    void pop_block() { blocks_.pop_back(); }

    /// Canonical order: lexicographic on the ascending list of distinct part
    /// sizes, then on the multiplicities.
    friend std::strong_ordering operator<=>(const Partition& a, const Partition& b) {
        const std::size_t n = std::min(a.blocks_.size(), b.blocks_.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (auto c = a.blocks_[i].first <=> b.blocks_[i].first; c != 0) return c;
        }
        if (auto c = a.blocks_.size() <=> b.blocks_.size(); c != 0) return c;
        for (std::size_t i = 0; i < n; ++i) {
            if (auto c = a.blocks_[i].second <=> b.blocks_[i].second; c != 0) return c;
        }
        return std::strong_ordering::equal;
    }
    friend bool operator==(const Partition& a, const Partition& b) { return a.blocks_ == b.blocks_; }

private:
    std::vector<std::pair<Exponent, Exponent>> blocks_;
};

inline constexpr std::size_t default_enumeration_cap = 1'000'000;

/// Every partition of n allowed by `spec`, in canonical order.
inline std::vector<Partition> enumerate_restricted(const RestrictedPartitionSpec& spec, Exponent n,
                                                   std::size_t cap = default_enumeration_cap) {
    if (n < 0) throw InvalidParams("n must be >= 0");
    const auto parts = allowed_parts(spec, n);
    std::vector<Partition> out;
    Partition current;
    // Depth-first over part sizes ascending, choosing a multiplicity for each.
    auto rec = [&](auto&& self, std::size_t idx, Exponent remaining) -> void {
        if (remaining == 0) {
            if (out.size() >= cap) {
                throw TooLarge("more than " + std::to_string(cap) + " partitions of " + std::to_string(n));
            }
            out.push_back(current);
            return;
        }
        if (idx == parts.size() || parts[idx].size > remaining) return;
        const Exponent a = parts[idx].size;
        const Exponent max_mult = parts[idx].distinct ? 1 : remaining / a;
        for (Exponent mult = 1; mult <= max_mult; ++mult) {
            current.push_block(a, mult);
            self(self, idx + 1, remaining - mult * a);
            current.pop_block();
        }
        self(self, idx + 1, remaining);
    };
    rec(rec, 0, n);
    std::sort(out.begin(), out.end());
    return out;
}

/// The spec for p_{m,k,r}: parts = 0, +-r (mod mk), all repeatable.
inline RestrictedPartitionSpec pmkr_spec(Exponent m, Exponent k, Exponent r) {
    RestrictedPartitionSpec spec;
    spec.modulus = m * k;
    spec.repeatable_residues = {0, ((r % spec.modulus) + spec.modulus) % spec.modulus,
                                ((-r % spec.modulus) + spec.modulus) % spec.modulus};
    return spec;
}

/// Parts +-r (mod mk) repeatable, parts +-(r-tk) (mod mk) distinct.
inline RestrictedPartitionSpec parity_spec(const McLaughlinParams& p) {
    const Exponent mk = p.mk();
    const Exponent d = p.r() - p.tk();
    auto red = [mk](Exponent x) { return ((x % mk) + mk) % mk; };
    RestrictedPartitionSpec spec;
    spec.modulus = mk;
    spec.repeatable_residues = {red(p.r()), red(-p.r())};
    spec.distinct_residues = {red(d), red(-d)};
    return spec;
}

struct SignedSumTerm {
    Exponent j = 0;
    Exponent argument = 0;
    Coefficient signed_count;
};

struct SignedSumResult {
    std::vector<SignedSumTerm> terms;
    Coefficient total;
};

/// sum_j (-1)^j p_{m,k,r}(nk - rs - mk j(j+1)/2 - j(tk-r)) over the j with nonnegative argument.
inline SignedSumResult signed_sum(Exponent m, Exponent k, Exponent s, Exponent t, Exponent n) {
    const McLaughlinParams p{m, k, s, t, Sign::plus};
    if (auto why = invalid_reason(TheoremInstance{p})) throw InvalidParams(*why);
    const Exponent r = p.r(), mk = p.mk(), c = p.tk() - r;
    const Exponent base = n * k - r * s;
    auto arg = [&](Exponent j) { return base - mk * j * (j + 1) / 2 - j * c; };

    // arg(j) >= 0  <=>  mk j^2 + (mk + 2c) j - 2 base <= 0.
    const double A = static_cast<double>(mk);
    const double B = static_cast<double>(mk + 2 * c);
    const double disc = B * B + 8.0 * A * static_cast<double>(base);
    SignedSumResult out;
    if (disc < 0) return out;
    const double root = std::sqrt(disc);
    auto lo = static_cast<Exponent>(std::ceil((-B - root) / (2 * A)));
    auto hi = static_cast<Exponent>(std::floor((-B + root) / (2 * A)));
    // Floating roots can be off by one; fix them up exactly.
    while (arg(lo - 1) >= 0) --lo;
    while (lo <= hi && arg(lo) < 0) ++lo;
    while (arg(hi + 1) >= 0) ++hi;
    while (hi >= lo && arg(hi) < 0) --hi;
    if (lo > hi) return out;

    Exponent top = 0;
    for (Exponent j = lo; j <= hi; ++j) top = std::max(top, arg(j));
    const auto table = count_restricted_table(pmkr_spec(m, k, r), top);
    for (Exponent j = lo; j <= hi; ++j) {
        const Exponent a = arg(j);
        Coefficient v = table[static_cast<std::size_t>(a)];
        if (j % 2 != 0) v = -v;
        out.total += v;
        out.terms.push_back({j, a, std::move(v)});
    }
    return out;
}

inline McLaughlinParams parity_params(Exponent m, Exponent k, Exponent s, Exponent t) {
    const McLaughlinParams p{m, k, s, t, Sign::minus};
    if (auto why = invalid_reason(TheoremInstance{p})) throw InvalidParams(*why);
    return p;
}

/// (p^e(n), p^o(n)) for parts +-r repeatable and +-(r-tk) distinct modulo mk.
inline ParityCountPair count_parity_split(Exponent m, Exponent k, Exponent s, Exponent t, Exponent n) {
    const auto p = parity_params(m, k, s, t);
    if (n < 0) throw InvalidParams("n must be >= 0");
    return count_parity_table(parity_spec(p), n).back();
}

struct ParityIdentityReport {
    McLaughlinParams params;
    ResidueClass checked_class;
    Exponent n_max = 0;
    std::size_t checked = 0;
    std::vector<std::pair<Exponent, ParityCountPair>> violations;

    bool verified() const { return violations.empty(); }
};

/// Class where p^e = p^o: -rs mod k when r > tk, -r(s+1) mod k when r < tk.
inline ResidueClass parity_class(const McLaughlinParams& p) {
    const Exponent r = p.r();
    return r > p.tk() ? ResidueClass(p.k, -r * p.s) : ResidueClass(p.k, -r * (p.s + 1));
}

/// Checks p^e(N) = p^o(N) for every N in the parity class with 0 <= N <= n_max.
inline ParityIdentityReport verify_parity_identity(Exponent m, Exponent k, Exponent s, Exponent t, Exponent n_max) {
    ParityIdentityReport rep;
    rep.params = parity_params(m, k, s, t);
    rep.checked_class = parity_class(rep.params);
    rep.n_max = n_max;
    if (n_max < 0) return rep;
    const auto table = count_parity_table(parity_spec(rep.params), n_max);
    for (Exponent nn = 0; nn <= n_max; ++nn) {
        if (!rep.checked_class.contains(nn)) continue;
        ++rep.checked;
        const auto& pair = table[static_cast<std::size_t>(nn)];
        if (pair.even_count != pair.odd_count) rep.violations.emplace_back(nn, pair);
    }
    return rep;
}

}  // namespace qvanish
