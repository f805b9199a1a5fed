#pragma once

// Command-line front end. Exit codes: 0 success, 1 mathematical violation,
// 2 usage or parameter error.

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qvanish/qvanish.hpp"

namespace qvanish::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_violation = 1;
inline constexpr int exit_usage = 2;

/// Usage error that names the offending flag.
class UsageError : public std::runtime_error {
public:
    UsageError(const std::string& flag, const std::string& what)
        : std::runtime_error("--" + flag + ": " + what) {}
};

enum class OutputFormat { text, json, csv };

struct RunConfig {
    Exponent order = 1000;
    OutputFormat format = OutputFormat::text;
    std::size_t cap = default_enumeration_cap;
    unsigned threads = 1;
};

/// Parses "3,5:8" into (q^3,q^5;q^8)_inf; a leading '-' on an offset negates the argument.
inline std::vector<PochhammerFactor> parse_factor_group(const std::string& flag, const std::string& text) {
    std::vector<PochhammerFactor> out;
    if (text.empty()) return out;
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw UsageError(flag, "expected 'a,b,...:M', got '" + text + "'");
    Exponent modulus = 0;
    try {
        std::size_t used = 0;
        modulus = std::stoll(text.substr(colon + 1), &used);
        if (used != text.size() - colon - 1) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
        throw UsageError(flag, "bad modulus in '" + text + "'");
    }
    std::istringstream is(text.substr(0, colon));
    std::string item;
    while (std::getline(is, item, ',')) {
        int sign = 1;
        std::string digits = item;
        if (!digits.empty() && digits[0] == '-') {
            sign = -1;
            digits.erase(0, 1);
        }
        try {
            std::size_t used = 0;
            const Exponent offset = std::stoll(digits, &used);
            if (used != digits.size() || digits.empty() || digits[0] == '-' || digits[0] == '+') {
                throw std::invalid_argument("trailing");
            }
            out.emplace_back(sign, offset, modulus);
        } catch (const InvalidParams& e) {
            throw UsageError(flag, e.what());
        } catch (const std::logic_error&) {
            throw UsageError(flag, "bad offset '" + item + "' in '" + text + "'");
        }
    }
    return out;
}

/// "sign:exponent", e.g. "-1:-2" for -q^{-2}.
inline std::pair<int, Exponent> parse_prefactor(const std::string& text) {
    const auto colon = text.find(':');
    try {
        if (colon == std::string::npos) throw std::invalid_argument("colon");
        std::size_t u1 = 0, u2 = 0;
        const long long sign = std::stoll(text.substr(0, colon), &u1);
        const std::string rest = text.substr(colon + 1);
        const long long exponent = std::stoll(rest, &u2);
        if (u1 != colon || u2 != rest.size() || (sign != 1 && sign != -1)) throw std::invalid_argument("bad");
        return {static_cast<int>(sign), exponent};
    } catch (const std::logic_error&) {
        throw UsageError("pre", "expected '+-1:exponent', got '" + text + "'");
    }
}

/// "2..6" or "4".
inline IntRange parse_range(const std::string& flag, const std::string& text) {
    try {
        const auto dots = text.find("..");
        std::size_t used = 0;
        if (dots == std::string::npos) {
            const Exponent v = std::stoll(text, &used);
            if (used != text.size()) throw std::invalid_argument("trailing");
            return {v, v};
        }
        const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
        const Exponent lo = std::stoll(a, &used);
        if (used != a.size()) throw std::invalid_argument("trailing");
        const Exponent hi = std::stoll(b, &used);
        if (used != b.size()) throw std::invalid_argument("trailing");
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw UsageError(flag, "expected 'lo..hi' or a single integer, got '" + text + "'");
    }
}

inline std::set<Exponent> parse_residues(const std::string& flag, const std::string& text) {
    std::set<Exponent> out;
    if (text.empty()) return out;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
        try {
            std::size_t used = 0;
            out.insert(std::stoll(item, &used));
            if (used != item.size()) throw std::invalid_argument("trailing");
        } catch (const std::logic_error&) {
            throw UsageError(flag, "bad residue '" + item + "'");
        }
    }
    return out;
}

/// Bare "key=value" tokens become "--key=value" so both spellings work. An
/// empty value ("num=") means "none" and is dropped.
inline std::vector<std::string> normalize_args(std::vector<std::string> args) {
    std::vector<std::string> out;
    for (auto& a : args) {
        const auto eq = a.find('=');
        if (!a.empty() && a[0] != '-' && eq != std::string::npos && eq > 0) a = "--" + a;
        if (a.starts_with("--") && !a.empty() && a.back() == '=') continue;
        out.push_back(std::move(a));
    }
    return out;
}

namespace detail {

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

inline std::string join_classes(const std::vector<ResidueClass>& cs) {
    std::string out;
    for (const auto& c : cs) {
        if (!out.empty()) out += ' ';
        out += to_string(c);
    }
    return out.empty() ? "none" : out;
}

inline const char* report_csv_header() {
    return "family,params,r,order,zero_class,violation_count,observed_zero_classes,verified\n";
}

inline void report_csv_row(std::ostream& out, const VanishingReport& rep) {
    out << family_name(rep.params) << ',' << csv_quote(describe(rep.params)) << ',' << derived_r(rep.params) << ','
        << rep.order << ',' << to_string(rep.predicted) << ',' << rep.violation_count << ','
        << csv_quote(join_classes(rep.observed_zero_classes)) << ',' << (rep.verified() ? "true" : "false") << '\n';
}

inline void report_text(std::ostream& out, const VanishingReport& rep) {
    out << "family: " << family_name(rep.params) << '\n'
        << "params: " << describe(rep.params) << '\n'
        << "r: " << derived_r(rep.params) << '\n'
        << "product: " << to_string(rep.spec) << '\n'
        << "order: " << rep.order << '\n'
        << "zero class: " << to_string(rep.predicted) << '\n'
        << "observed zero classes: " << join_classes(rep.observed_zero_classes) << '\n';
    if (rep.verified()) {
        out << "violations: none\n";
    } else {
        out << "violations: " << rep.violation_count << " (smallest:";
        for (const auto& v : rep.violations) out << " q^" << v.exponent << " -> " << v.coefficient;
        out << ")\n";
    }
    out << "result: " << (rep.verified() ? "verified" : "VIOLATED") << '\n';
}

inline nlohmann::json identity_json(const std::string& name, const IdentityCheck& c) {
    nlohmann::json j{{"identity", name}, {"holds", c.holds}, {"window", {c.window_low, c.window_high}}};
    if (c.discrepancy_exponent) {
        j["discrepancy"] = {{"exponent", *c.discrepancy_exponent},
                            {"lhs", c.lhs_coefficient.str()},
                            {"rhs", c.rhs_coefficient.str()}};
    }
    return j;
}

}  // namespace detail

/// Parsed command line plus the dispatch into the library.
class Driver {
public:
    Driver() { build(); }

    int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
        args = normalize_args(std::move(args));
        std::reverse(args.begin(), args.end());
        try {
            app_.parse(args);
        } catch (const CLI::CallForHelp&) {
            out << help_target_->help();
            return exit_ok;
        } catch (const CLI::CallForAllHelp&) {
            out << app_.help("", CLI::AppFormatMode::All);
            return exit_ok;
        } catch (const CLI::ParseError& e) {
            err << "error: " << e.what() << '\n';
            return exit_usage;
        }
        try {
            cfg_.format = format_ == "json" ? OutputFormat::json : format_ == "csv" ? OutputFormat::csv : OutputFormat::text;
            if (cfg_.order < 1) throw UsageError("order", "must be >= 1");
            if (cfg_.cap < 1) throw UsageError("cap", "must be >= 1");
            return dispatch(out);
        } catch (const UsageError& e) {
            err << "error: " << e.what() << '\n';
            return exit_usage;
        } catch (const InvalidParams& e) {
            err << "error: invalid parameters: " << e.what() << '\n';
            return exit_usage;
        } catch (const TooLarge& e) {
            err << "error: " << e.what() << " (raise --cap)\n";
            return exit_usage;
        } catch (const Error& e) {
            err << "error: " << e.what() << '\n';
            return exit_usage;
        }
    }

private:
    CLI::App app_{"Exact q-series expansions and vanishing-coefficient checks", "qvanish"};
    CLI::App* help_target_ = &app_;
    RunConfig cfg_;
    std::string format_ = "text";

    CLI::App* expand_ = nullptr;
    CLI::App* verify_ = nullptr;
    CLI::App* scan_ = nullptr;
    CLI::App* partitions_ = nullptr;
    CLI::App* p_count_ = nullptr;
    CLI::App* p_enumerate_ = nullptr;
    CLI::App* p_signed_ = nullptr;
    CLI::App* p_parity_ = nullptr;
    CLI::App* identity_ = nullptr;
    CLI::App* i_psi_ = nullptr;
    CLI::App* i_jtp_ = nullptr;
    CLI::App* i_cancel_ = nullptr;

    std::vector<std::string> num_, den_;
    std::string pre_;
    std::string family_, sign_ = "plus", m_range_, k_range_;
    std::optional<Exponent> m_, k_, s_, t_, r_, n_, big_m_, a_, nmax_, modulus_, max_part_;
    std::string rep_, dist_, parity_filter_ = "all";
    bool show_terms_ = false, enumerate_ = false;

    static Exponent require(const std::optional<Exponent>& v, const char* flag) {
        if (!v) throw UsageError(flag, "is required");
        return *v;
    }

    void build() {
        app_.require_subcommand(1);
        app_.fallthrough();
        app_.set_help_all_flag("--help-all", "Show help for every subcommand");
        app_.footer(
            "Flags may also be written as key=value, e.g.\n"
            "  qvanish expand num=3,5:8 den=1,7:8 order=12\n"
            "expands F(q) = (q^3,q^5;q^8)_inf / (q,q^7;q^8)_inf. A '-' before an offset\n"
            "negates the argument: den=-4,-5:9 is (-q^4,-q^5;q^9)_inf. pre=-1:-2 multiplies\n"
            "by -q^-2. The default order can be set with QVANISH_ORDER.");
        app_.add_option("--order", cfg_.order, "Exclusive truncation order")->envname("QVANISH_ORDER")->capture_default_str();
        app_.add_option("--format", format_, "Output format")->check(CLI::IsMember({"text", "json", "csv"}))->capture_default_str();
        app_.add_option("--cap", cfg_.cap, "Enumeration cap")->capture_default_str();
        cfg_.threads = std::max(1u, std::thread::hardware_concurrency());
        app_.add_option("--threads", cfg_.threads, "Worker threads for scans")->capture_default_str();

        expand_ = app_.add_subcommand("expand", "Expand a product of q-Pochhammer symbols");
        expand_->add_option("--num", num_, "Numerator group a,b,...:M (repeatable)")->allow_extra_args(false);
        expand_->add_option("--den", den_, "Denominator group a,b,...:M (repeatable)")->allow_extra_args(false);
        expand_->add_option("--pre", pre_, "Prefactor sign:exponent");

        verify_ = app_.add_subcommand("verify", "Check a parameter tuple's predicted zero class");
        verify_->add_option("--family", family_, "ab | mcl | ag")->required()->check(CLI::IsMember({"ab", "mcl", "ag"}));
        verify_->add_option("--sign", sign_, "plus | minus")->check(CLI::IsMember({"plus", "minus"}));
        verify_->add_option("--m", m_);
        verify_->add_option("--k", k_);
        verify_->add_option("--s", s_);
        verify_->add_option("--t", t_);
        verify_->add_option("--r", r_);

        scan_ = app_.add_subcommand("scan", "Verify every valid tuple of a parameter grid");
        scan_->add_option("--family", family_, "plus | minus | mcl | ab | ag")
            ->required()
            ->check(CLI::IsMember({"plus", "minus", "mcl", "ab", "ag"}));
        scan_->add_option("--sign", sign_, "plus | minus (for mcl and ag)")->check(CLI::IsMember({"plus", "minus"}));
        scan_->add_option("--m", m_range_, "Range lo..hi");
        scan_->add_option("--k", k_range_, "Range lo..hi")->required();

        partitions_ = app_.add_subcommand("partitions", "Restricted partition counts and identities");
        partitions_->require_subcommand(1);
        p_count_ = partitions_->add_subcommand("count", "Count partitions into parts from residue classes");
        p_enumerate_ = partitions_->add_subcommand("enumerate", "List partitions into parts from residue classes");
        for (auto* sub : {p_count_, p_enumerate_}) {
            sub->add_option("--modulus", modulus_)->required();
            sub->add_option("--rep", rep_, "Repeatable residues, comma separated");
            sub->add_option("--dist", dist_, "Distinct residues, comma separated");
            sub->add_option("--n", n_)->required();
            sub->add_option("--max-part", max_part_);
        }
        p_enumerate_->add_option("--parity", parity_filter_, "even | odd | all")
            ->check(CLI::IsMember({"even", "odd", "all"}));
        p_signed_ = partitions_->add_subcommand("signed-sum", "Alternating sum of p_{m,k,r} values");
        p_parity_ = partitions_->add_subcommand("parity", "Even/odd part-count split");
        for (auto* sub : {p_signed_, p_parity_}) {
            sub->add_option("--m", m_)->required();
            sub->add_option("--k", k_)->required();
            sub->add_option("--s", s_)->required();
            sub->add_option("--t", t_)->required();
            sub->add_option("--n", n_);
        }
        p_signed_->add_flag("--show-terms", show_terms_, "Print one row per j");
        p_parity_->add_flag("--enumerate", enumerate_, "List the partitions as well");
        p_parity_->add_option("--nmax", nmax_, "Check p^e = p^o on the whole class up to nmax");

        identity_ = app_.add_subcommand("identity", "Check one of the series identities");
        identity_->require_subcommand(1);
        i_psi_ = identity_->add_subcommand("1psi1", "Specialized 1psi1 sum against its product side");
        i_jtp_ = identity_->add_subcommand("jtp", "Theta sum against (q^a,q^{M-a},q^M;q^M)_inf");
        i_cancel_ = identity_->add_subcommand("lambert-cancel", "Term cancellation between the two Lambert sums");
        for (auto* sub : {i_psi_, i_cancel_}) {
            sub->add_option("--m", m_)->required();
            sub->add_option("--k", k_)->required();
            sub->add_option("--t", t_)->required();
            sub->add_option("--r", r_);
        }
        i_cancel_->add_option("--s", s_)->required();
        i_jtp_->add_option("--M", big_m_)->required();
        i_jtp_->add_option("--a", a_)->required();

        // Route --help to the innermost subcommand that was named.
        for (auto* sub : {expand_, verify_, scan_, partitions_, p_count_, p_enumerate_, p_signed_, p_parity_, identity_,
                          i_psi_, i_jtp_, i_cancel_}) {
            sub->preparse_callback([this, sub](std::size_t) { help_target_ = sub; });
        }
    }

    int dispatch(std::ostream& out) {
        if (*expand_) return cmd_expand(out);
        if (*verify_) return cmd_verify(out);
        if (*scan_) return cmd_scan(out);
        if (*p_count_) return cmd_count(out);
        if (*p_enumerate_) return cmd_enumerate(out);
        if (*p_signed_) return cmd_signed_sum(out);
        if (*p_parity_) return cmd_parity(out);
        if (*i_psi_) return cmd_1psi1(out);
        if (*i_jtp_) return cmd_jtp(out);
        if (*i_cancel_) return cmd_cancel(out);
        throw UsageError("help", "no command given");
    }

    Sign sign() const { return sign_ == "minus" ? Sign::minus : Sign::plus; }

    int cmd_expand(std::ostream& out) {
        ProductSpec spec;
        for (const auto& g : num_) {
            auto fs = parse_factor_group("num", g);
            spec.numerator.insert(spec.numerator.end(), fs.begin(), fs.end());
        }
        for (const auto& g : den_) {
            auto fs = parse_factor_group("den", g);
            spec.denominator.insert(spec.denominator.end(), fs.begin(), fs.end());
        }
        if (!pre_.empty()) std::tie(spec.prefactor_sign, spec.prefactor_exponent) = parse_prefactor(pre_);
        if (cfg_.order < spec.prefactor_exponent) throw UsageError("order", "must be >= the prefactor exponent");
        const LaurentSeries s = expand_product(spec, cfg_.order);
        switch (cfg_.format) {
            case OutputFormat::json: {
                auto coeffs = nlohmann::json::array();
                for (const auto& c : s.coefficients()) coeffs.push_back(c.str());
                out << nlohmann::json{{"product", to_string(spec)},
                                      {"valuation", s.valuation()},
                                      {"order", s.order()},
                                      {"coefficients", coeffs}}
                           .dump()
                    << '\n';
                break;
            }
            case OutputFormat::csv:
                out << "exponent,coefficient\n";
                for (Exponent e = s.valuation(); e < s.order(); ++e) out << e << ',' << s[e] << '\n';
                break;
            case OutputFormat::text:
                out << "# " << to_string(spec) << ", exponents " << s.valuation() << ".." << s.order() - 1 << '\n';
                for (Exponent e = s.valuation(); e < s.order(); ++e) out << e << ' ' << s[e] << '\n';
                break;
        }
        return exit_ok;
    }

    TheoremInstance verify_instance() const {
        if (family_ == "ab") return AndrewsBressoudParams{require(k_, "k"), require(r_, "r")};
        if (family_ == "mcl") {
            return McLaughlinParams{require(m_, "m"), require(k_, "k"), require(s_, "s"), require(t_, "t"), sign()};
        }
        return AlladiGordonParams{require(m_, "m"), require(k_, "k"), require(s_, "s"), sign()};
    }

    int cmd_verify(std::ostream& out) {
        const auto inst = verify_instance();
        if (auto why = invalid_reason(inst)) throw InvalidParams(*why);
        const auto rep = verify_vanishing(inst, cfg_.order);
        switch (cfg_.format) {
            case OutputFormat::json: out << to_json(rep).dump() << '\n'; break;
            case OutputFormat::csv:
                out << detail::report_csv_header();
                detail::report_csv_row(out, rep);
                break;
            case OutputFormat::text: detail::report_text(out, rep); break;
        }
        return rep.verified() ? exit_ok : exit_violation;
    }

    int cmd_scan(std::ostream& out) {
        ScanFamily fam{};
        if (family_ == "plus") fam = ScanFamily::mcl_plus;
        else if (family_ == "minus") fam = ScanFamily::mcl_minus;
        else if (family_ == "mcl") fam = sign() == Sign::plus ? ScanFamily::mcl_plus : ScanFamily::mcl_minus;
        else if (family_ == "ab") fam = ScanFamily::ab;
        else fam = sign() == Sign::plus ? ScanFamily::ag_plus : ScanFamily::ag_minus;
        const IntRange k = parse_range("k", k_range_);
        IntRange m{};
        if (fam != ScanFamily::ab) {
            if (m_range_.empty()) throw UsageError("m", "is required for this family");
            m = parse_range("m", m_range_);
        }
        const auto res = scan(fam, k, m, cfg_.order, cfg_.threads);
        const std::size_t violated = res.violated();
        switch (cfg_.format) {
            case OutputFormat::json: {
                auto reports = nlohmann::json::array();
                for (const auto& r : res.reports) reports.push_back(to_json(r));
                auto skipped = nlohmann::json::array();
                for (const auto& s : res.skipped) {
                    skipped.push_back({{"family", s.family}, {"params", s.params}, {"reason", s.reason}});
                }
                out << nlohmann::json{{"order", cfg_.order},
                                      {"checked", res.reports.size()},
                                      {"skipped_count", res.skipped.size()},
                                      {"violated", violated},
                                      {"reports", reports},
                                      {"skipped", skipped}}
                           .dump()
                    << '\n';
                break;
            }
            case OutputFormat::csv:
                out << detail::report_csv_header();
                for (const auto& r : res.reports) detail::report_csv_row(out, r);
                break;
            case OutputFormat::text:
                for (const auto& r : res.reports) {
                    out << family_name(r.params) << ' ' << describe(r.params) << " r=" << derived_r(r.params)
                        << " class " << to_string(r.predicted) << ": "
                        << (r.verified() ? std::string("ok") : "VIOLATED (" + std::to_string(r.violation_count) + ")")
                        << '\n';
                }
                for (const auto& s : res.skipped) out << "skip " << s.family << ' ' << s.params << ": " << s.reason << '\n';
                out << res.reports.size() << " tuples checked, " << res.skipped.size() << " skipped, " << violated
                    << " violated\n";
                break;
        }
        return violated == 0 ? exit_ok : exit_violation;
    }

    RestrictedPartitionSpec partition_spec() const {
        RestrictedPartitionSpec spec;
        spec.modulus = require(modulus_, "modulus");
        spec.repeatable_residues = parse_residues("rep", rep_);
        spec.distinct_residues = parse_residues("dist", dist_);
        spec.max_part = max_part_;
        spec.validate();
        return spec;
    }

    int cmd_count(std::ostream& out) {
        const Exponent n = require(n_, "n");
        if (n < 0) throw UsageError("n", "must be >= 0");
        const Coefficient c = count_restricted(partition_spec(), n);
        switch (cfg_.format) {
            case OutputFormat::json: out << nlohmann::json{{"n", n}, {"count", c.str()}}.dump() << '\n'; break;
            case OutputFormat::csv: out << "n,count\n" << n << ',' << c << '\n'; break;
            case OutputFormat::text: out << c << '\n'; break;
        }
        return exit_ok;
    }

    static nlohmann::json partition_json(const Partition& p) {
        auto arr = nlohmann::json::array();
        for (const auto& [part, mult] : p.blocks()) arr.push_back({part, mult});
        return arr;
    }

    void write_partitions(std::ostream& out, const std::vector<Partition>& ps) const {
        switch (cfg_.format) {
            case OutputFormat::json: {
                auto arr = nlohmann::json::array();
                for (const auto& p : ps) arr.push_back(partition_json(p));
                out << arr.dump() << '\n';
                break;
            }
            case OutputFormat::csv:
                out << "partition,part_count\n";
                for (const auto& p : ps) out << p.to_string() << ',' << p.part_count() << '\n';
                break;
            case OutputFormat::text:
                for (const auto& p : ps) out << p.to_string() << '\n';
                break;
        }
    }

    int cmd_enumerate(std::ostream& out) {
        const Exponent n = require(n_, "n");
        if (n < 0) throw UsageError("n", "must be >= 0");
        auto ps = enumerate_restricted(partition_spec(), n, cfg_.cap);
        if (parity_filter_ != "all") {
            const Exponent want = parity_filter_ == "odd" ? 1 : 0;
            std::erase_if(ps, [want](const Partition& p) { return p.part_count() % 2 != want; });
        }
        write_partitions(out, ps);
        return exit_ok;
    }

    int cmd_signed_sum(std::ostream& out) {
        const Exponent n = require(n_, "n");
        const auto res = signed_sum(*m_, *k_, *s_, *t_, n);
        switch (cfg_.format) {
            case OutputFormat::json: {
                auto terms = nlohmann::json::array();
                for (const auto& t : res.terms) {
                    terms.push_back({{"j", t.j}, {"n_j", t.argument}, {"signed_count", t.signed_count.str()}});
                }
                out << nlohmann::json{{"m", *m_}, {"k", *k_}, {"s", *s_}, {"t", *t_}, {"n", n},
                                      {"terms", terms}, {"sum", res.total.str()}}
                           .dump()
                    << '\n';
                break;
            }
            case OutputFormat::csv:
                out << "j,n_j,signed_count\n";
                for (const auto& t : res.terms) out << t.j << ',' << t.argument << ',' << t.signed_count << '\n';
                break;
            case OutputFormat::text:
                if (show_terms_) {
                    out << "j\tn_j\t(-1)^j p(n_j)\n";
                    for (const auto& t : res.terms) out << t.j << '\t' << t.argument << '\t' << t.signed_count << '\n';
                }
                out << "sum = " << res.total << '\n';
                break;
        }
        return res.total.is_zero() ? exit_ok : exit_violation;
    }

    int cmd_parity(std::ostream& out) {
        const Exponent m = *m_, k = *k_, s = *s_, t = *t_;
        const auto params = parity_params(m, k, s, t);
        const ResidueClass cls = parity_class(params);
        bool failed = false;
        nlohmann::json doc{{"m", m}, {"k", k}, {"s", s}, {"t", t}, {"class", to_json(cls)}};
        std::ostringstream text;
        text << "class: " << to_string(cls) << '\n';
        std::ostringstream csv;
        csv << "n,even,odd\n";

        if (n_) {
            const Exponent n = *n_;
            if (n < 0) throw UsageError("n", "must be >= 0");
            const auto pair = count_parity_split(m, k, s, t, n);
            if (cls.contains(n) && pair.even_count != pair.odd_count) failed = true;
            doc["n"] = n;
            doc["even"] = pair.even_count.str();
            doc["odd"] = pair.odd_count.str();
            text << "p_even(" << n << ") = " << pair.even_count << '\n' << "p_odd(" << n << ") = " << pair.odd_count << '\n';
            csv << n << ',' << pair.even_count << ',' << pair.odd_count << '\n';
            if (enumerate_) {
                const auto all = enumerate_restricted(parity_spec(params), n, cfg_.cap);
                std::vector<Partition> odd, even;
                for (const auto& p : all) (p.part_count() % 2 ? odd : even).push_back(p);
                auto arr = [](const std::vector<Partition>& v) {
                    auto a = nlohmann::json::array();
                    for (const auto& p : v) a.push_back(p.to_string());
                    return a;
                };
                doc["odd_partitions"] = arr(odd);
                doc["even_partitions"] = arr(even);
                text << "odd:\n";
                for (const auto& p : odd) text << "  " << p.to_string() << '\n';
                text << "even:\n";
                for (const auto& p : even) text << "  " << p.to_string() << '\n';
            }
        }
        if (nmax_) {
            const auto rep = verify_parity_identity(m, k, s, t, *nmax_);
            failed = failed || !rep.verified();
            auto viol = nlohmann::json::array();
            for (const auto& [nn, pair] : rep.violations) viol.push_back({nn, pair.even_count.str(), pair.odd_count.str()});
            doc["nmax"] = *nmax_;
            doc["checked"] = rep.checked;
            doc["violations"] = viol;
            text << "checked " << rep.checked << " values of " << to_string(cls) << " up to " << *nmax_ << ": "
                 << (rep.verified() ? "p_even = p_odd everywhere" : std::to_string(rep.violations.size()) + " violations")
                 << '\n';
        }
        if (!n_ && !nmax_) throw UsageError("n", "give --n and/or --nmax");
        switch (cfg_.format) {
            case OutputFormat::json: out << doc.dump() << '\n'; break;
            case OutputFormat::csv: out << csv.str(); break;
            case OutputFormat::text: out << text.str(); break;
        }
        return failed ? exit_violation : exit_ok;
    }

    int report_identity(std::ostream& out, const std::string& name, const IdentityCheck& c) const {
        switch (cfg_.format) {
            case OutputFormat::json: out << detail::identity_json(name, c).dump() << '\n'; break;
            case OutputFormat::csv:
                out << "identity,holds,window_low,window_high,discrepancy_exponent,lhs,rhs\n"
                    << name << ',' << (c.holds ? "true" : "false") << ',' << c.window_low << ',' << c.window_high << ',';
                if (c.discrepancy_exponent) out << *c.discrepancy_exponent << ',' << c.lhs_coefficient << ',' << c.rhs_coefficient;
                else out << ",,";
                out << '\n';
                break;
            case OutputFormat::text:
                if (c.holds) {
                    out << "pass: " << name << " agrees on q^" << c.window_low << "..q^" << c.window_high - 1 << '\n';
                } else {
                    out << "fail: " << name << " first differs at q^" << *c.discrepancy_exponent
                        << ": lhs=" << c.lhs_coefficient << " rhs=" << c.rhs_coefficient << '\n';
                }
                break;
        }
        return c.holds ? exit_ok : exit_violation;
    }

    int cmd_1psi1(std::ostream& out) {
        const BilateralSpecialization p{*m_, *k_, *t_, require(r_, "r")};
        return report_identity(out, "1psi1", verify_1psi1(p, cfg_.order));
    }

    int cmd_jtp(std::ostream& out) {
        const Exponent M = *big_m_, a = *a_;
        if (M < 1) throw UsageError("M", "must be >= 1");
        if (a < 1 || a >= M) throw UsageError("a", "must satisfy 1 <= a < M");
        ProductSpec spec;
        spec.numerator = {PochhammerFactor(1, a, M), PochhammerFactor(1, M - a, M), PochhammerFactor(1, M, M)};
        return report_identity(out, "jtp", compare_sides(jtp_theta(M, a, cfg_.order), expand_product(spec, cfg_.order)));
    }

    int cmd_cancel(std::ostream& out) {
        const Exponent r = r_ ? *r_ : *s_ * *m_ + *t_;
        const BilateralSpecialization p{*m_, *k_, *t_, r};
        return report_identity(out, "lambert-cancel", cancellation_check(p, *s_, cfg_.order));
    }
};

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Driver d;
    return d.run(args, out, err);
}

}  // namespace qvanish::cli
