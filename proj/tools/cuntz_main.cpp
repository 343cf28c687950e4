// Command line front end: construct the endomorphisms, run the checks, and
// print replication reports. Exit codes: 0 all checks pass, 1 a mathematical
// check failed, 2 usage or input format error.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cuntz/cuntz.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kMathFail = 1;
constexpr int kUsage = 2;

struct UsageFailure {
    std::string message;
};

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageFailure{"cannot open " + path};
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw UsageFailure{path + ": " + e.what()};
    }
}

cuntz::Element load_element(const std::string& path) {
    try {
        return cuntz::element_from_json(load_json(path));
    } catch (const cuntz::ValidationError& e) {
        throw UsageFailure{path + ": " + e.what()};
    }
}

cuntz::Element load_endomorphism_unitary(const std::string& path) {
    try {
        return cuntz::endomorphism_unitary_from_json(load_json(path));
    } catch (const cuntz::ValidationError& e) {
        throw UsageFailure{path + ": " + e.what()};
    }
}

cuntz::ComplexMatrix load_matrix(const std::string& path) {
    try {
        return cuntz::matrix_from_json(load_json(path));
    } catch (const cuntz::ValidationError& e) {
        throw UsageFailure{path + ": " + e.what()};
    }
}

cuntz::DualGroup resolve_group(const std::string& spec,
                               const std::string& file) {
    try {
        if (!file.empty()) return cuntz::group_from_json(load_json(file));
        if (spec.empty()) throw UsageFailure{"no group given"};
        // getline drops a trailing delimiter instead of yielding an empty
        // token, so "2x" would otherwise parse as {2}.
        if (spec.back() == 'x')
            throw UsageFailure{"bad group spec '" + spec + "'"};
        std::vector<int> orders;
        std::stringstream ss(spec);
        std::string part;
        while (std::getline(ss, part, 'x')) {
            std::size_t used = 0;
            int v = 0;
            try {
                v = std::stoi(part, &used);
            } catch (const std::exception&) {
                throw UsageFailure{"bad group spec '" + spec + "'"};
            }
            if (used != part.size() || v < 1)
                throw UsageFailure{"bad group spec '" + spec + "'"};
            orders.push_back(v);
        }
        if (orders.empty()) throw UsageFailure{"bad group spec '" + spec + "'"};
        return cuntz::DualGroup::cyclic(orders);
    } catch (const cuntz::ValidationError& e) {
        throw UsageFailure{e.what()};
    }
}

std::string group_label(const cuntz::DualGroup& g) {
    std::string s;
    for (std::size_t i = 0; i < g.orders().size(); ++i) {
        if (i) s += "x";
        s += "Z/" + std::to_string(g.orders()[i]);
    }
    return s + " (N=" + std::to_string(g.n()) + ")";
}

std::uint64_t enumeration_budget() {
    const char* env = std::getenv("CUNTZ_BUDGET");
    if (env == nullptr) return std::uint64_t{1} << 22;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0)
        throw UsageFailure{"CUNTZ_BUDGET must be a positive integer"};
    return v;
}

void emit(const nlohmann::json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw UsageFailure{"cannot write " + out_path};
    out << j.dump(2) << "\n";
}

// One verdict row of a replication run. Informational rows never gate the
// exit code; that is reserved for computed checks.
struct CheckLine {
    std::string name;
    bool ok = false;
    std::string detail;
    bool informational = false;
};

void print_lines(const std::vector<CheckLine>& lines) {
    for (const CheckLine& line : lines) {
        const char* mark =
            line.informational ? "info" : (line.ok ? " ok " : "FAIL");
        std::printf("[%s] %s", mark, line.name.c_str());
        if (!line.detail.empty()) std::printf("  (%s)", line.detail.c_str());
        std::printf("\n");
    }
}

nlohmann::json lines_to_json(const std::vector<CheckLine>& lines) {
    nlohmann::json arr = nlohmann::json::array();
    for (const CheckLine& line : lines) {
        nlohmann::json j{{"name", line.name}, {"ok", line.ok}};
        if (!line.detail.empty()) j["detail"] = line.detail;
        if (line.informational) j["informational"] = true;
        arr.push_back(std::move(j));
    }
    return arr;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

int run_replicate(const cuntz::DualGroup& g, int m_max, int depth,
                  const std::string& format) {
    using namespace cuntz;
    std::vector<CheckLine> lines;
    auto add = [&lines](std::string name, bool ok, std::string detail = {}) {
        lines.push_back(CheckLine{std::move(name), ok, std::move(detail)});
    };
    auto info = [&lines](std::string name, std::string detail = {}) {
        lines.push_back(
            CheckLine{std::move(name), true, std::move(detail), true});
    };

    const BracketReport bracket = validate_bracket(g);
    add("pairing axioms", bracket.ok, bracket.message);

    EntropyReport entropy;
    if (bracket.ok) {
        const Endomorphism rho = izumi_endomorphism(g);
        const Endomorphism twisted = compose(rho, fourier_automorphism(g));
        const Endomorphism square = power(rho, 2);

        add("associated unitary matches the pairing formula",
            equals(rho.unitary(), duality_unitary(g)));

        const ClosedFormReport cf = verify_closed_forms(g);
        add("twisted map is the letter-translation form", cf.twisted_matches);
        add("squared map is the diagonal form", cf.square_matches);
        add("square intertwines with the canonical shift",
            cf.square_root_relation);

        const MasaReport base_masa = check_masa_invariant(rho, 1);
        add("base endomorphism moves the diagonal", !base_masa.ok,
            base_masa.ok ? ""
                         : "witness at [" + word_to_string(base_masa.cylinder) +
                               "]: " + base_masa.failure.message);
        add("twisted endomorphism preserves the diagonal to depth " +
                std::to_string(depth),
            check_masa_invariant(twisted, depth).ok);
        add("squared endomorphism preserves the diagonal to depth " +
                std::to_string(depth),
            check_masa_invariant(square, depth).ok);

        try {
            const LocalRule tw_rule = extract_local_rule(twisted, depth);
            const LocalRule sq_rule = extract_local_rule(square, depth);
            add("twisted rule is successive differences",
                rules_equal(tw_rule,
                            closed_form_rule(RuleKind::difference, g, depth),
                            depth));
            add("squared rule is anchored differences",
                rules_equal(
                    sq_rule,
                    closed_form_rule(RuleKind::anchored_difference, g, depth),
                    depth));
            const LocalRule sum_rule = rule_from_letter_map(
                g.n(), 1, depth,
                [&g](const Word& w) {
                    Word out(w.size() - 1);
                    for (std::size_t i = 0; i + 1 < w.size(); ++i)
                        out[i] = static_cast<Letter>(g.add(w[0], w[i + 1]));
                    return out;
                },
                "closed-form", "anchored-sum");
            info("anchored differences vs anchored sums",
                 rules_equal(sq_rule, sum_rule, depth)
                     ? "identical on this group (exponent " +
                           std::to_string(g.exponent()) + ")"
                     : "differ on this group (exponent " +
                           std::to_string(g.exponent()) + ")");
        } catch (const ExtractionError& e) {
            add("rule extraction", false, e.what());
        }

        ItineraryConfig icfg;
        icfg.max_orbit = m_max;
        icfg.budget = enumeration_budget();
        entropy = entropy_report(g, icfg);
        add("associated unitaries lie in the level-2 slice",
            entropy.unitaries_in_level_two);
        add("twisted itinerary counts are exact alphabet powers",
            entropy.twisted.counts_are_alphabet_powers,
            entropy.twisted.truncated
                ? "truncated: " + entropy.twisted.truncation_reason
                : "");
        add("squared itinerary counts are exact alphabet powers",
            entropy.square.counts_are_alphabet_powers,
            entropy.square.truncated
                ? "truncated: " + entropy.square.truncation_reason
                : "");

        try {
            const LegMatrix w = extract_w_from(square);
            add("extracted W satisfies the pentagon equation",
                pentagon_check(w),
                "residual " + format_double(pentagon_residual(w)));
            const LegMatrix flip = LegMatrix::wrap(g.n(), flip_matrix(g.n()));
            add("tensor flip fails the pentagon equation (negative control)",
                !pentagon_check(flip),
                "residual " + format_double(pentagon_residual(flip)));
            const FactorOrderReport orders = compare_factor_orders(square);
            info("pentagon residual by factor order",
                 "U*flip " + format_double(orders.residual_u_flip) +
                     ", flip*U " + format_double(orders.residual_flip_u));
        } catch (const ExtractionError& e) {
            add("multiplicative unitary extraction", false, e.what());
        }
    }

    bool all_ok = true;
    for (const CheckLine& line : lines)
        if (!line.informational && !line.ok) all_ok = false;

    if (format == "json") {
        nlohmann::json j{{"group", group_to_json(g)},
                         {"checks", lines_to_json(lines)},
                         {"overall", all_ok}};
        if (bracket.ok) {
            j["entropy"] = nlohmann::json{
                {"twisted", estimate_to_json(entropy.twisted)},
                {"square", estimate_to_json(entropy.square)}};
            nlohmann::json values = nlohmann::json::array();
            for (const cuntz::ProvenancedValue& v : entropy.values)
                values.push_back(nlohmann::json{{"name", v.name},
                                                {"value", v.value},
                                                {"provenance", v.provenance}});
            j["values"] = std::move(values);
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("group: %s\n", group_label(g).c_str());
        print_lines(lines);
        if (bracket.ok) {
            std::printf("\n  m   C_twisted     h_m      C_square      h_m\n");
            const std::size_t rows = std::max(entropy.twisted.counts.size(),
                                              entropy.square.counts.size());
            for (std::size_t i = 0; i < rows; ++i) {
                auto cell = [](const cuntz::EntropyEstimate& est,
                               std::size_t i) {
                    return i < est.counts.size()
                               ? std::pair<std::string, std::string>(
                                     std::to_string(est.counts[i]),
                                     format_double(est.h_ratio[i]))
                               : std::pair<std::string, std::string>("-", "-");
                };
                const auto tw = cell(entropy.twisted, i);
                const auto sq = cell(entropy.square, i);
                std::printf("%3zu %10s %10s %10s %10s\n", i + 1,
                            tw.first.c_str(), tw.second.c_str(),
                            sq.first.c_str(), sq.second.c_str());
            }
            std::printf("\nvalues:\n");
            for (const cuntz::ProvenancedValue& v : entropy.values)
                std::printf("  %-28s = %-12s [%s]\n", v.name.c_str(),
                            format_double(v.value).c_str(),
                            v.provenance.c_str());
        }
        std::printf("\noverall: %s\n", all_ok ? "PASS" : "FAIL");
    }
    return all_ok ? kOk : kMathFail;
}

int emit_verdict(const std::string& check, bool ok, nlohmann::json extra) {
    extra["check"] = check;
    extra["ok"] = ok;
    std::cout << extra.dump(2) << "\n";
    return ok ? kOk : kMathFail;
}

int run_check_pentagon(const std::string& file, int n) {
    const cuntz::ComplexMatrix m = load_matrix(file);
    if (n < 2) throw UsageFailure{"--N must be at least 2"};
    if (m.rows() != static_cast<std::size_t>(n) * n)
        throw UsageFailure{"matrix dimension is not N^2"};
    if (!cuntz::matrix_is_unitary(m))
        return emit_verdict("pentagon", false,
                            {{"reason", "matrix is not unitary"}});
    const cuntz::LegMatrix v = cuntz::LegMatrix::wrap(n, m);
    const double residual = cuntz::pentagon_residual(v);
    return emit_verdict("pentagon", cuntz::pentagon_check(v),
                        {{"residual", residual}});
}

int run_check_masa(const std::string& file, int depth) {
    const cuntz::Element u = load_endomorphism_unitary(file);
    if (!cuntz::is_unitary(u))
        return emit_verdict("masa", false,
                            {{"reason", "associated element is not unitary"}});
    const cuntz::Endomorphism rho = cuntz::Endomorphism::from_unitary(u);
    const cuntz::MasaReport report = cuntz::check_masa_invariant(rho, depth);
    nlohmann::json extra;
    if (!report.ok) {
        extra["cylinder"] = cuntz::detail::word_to_json(report.cylinder);
        extra["witness"] = report.failure.message;
    }
    return emit_verdict("masa", report.ok, std::move(extra));
}

int run_check_unitary(const std::string& file) {
    const cuntz::Element e = load_element(file);
    return emit_verdict("unitary", cuntz::is_unitary(e), {});
}

int run_check_closed_forms(const cuntz::DualGroup& g) {
    const cuntz::BracketReport bracket = cuntz::validate_bracket(g);
    if (!bracket.ok)
        return emit_verdict("closed-forms", false,
                            {{"reason", bracket.message}});
    const cuntz::ClosedFormReport report = cuntz::verify_closed_forms(g);
    return emit_verdict("closed-forms", report.all(),
                        {{"twisted", report.twisted_matches},
                         {"square", report.square_matches},
                         {"square_root_relation", report.square_root_relation}});
}

int run_check_phi(const std::string& file) {
    const cuntz::Element u = load_endomorphism_unitary(file);
    if (!cuntz::is_unitary(u))
        return emit_verdict("phi", false,
                            {{"reason", "associated element is not unitary"}});
    const cuntz::Endomorphism rho = cuntz::Endomorphism::from_unitary(u);
    std::vector<cuntz::Element> samples;
    for (std::size_t lj = 0; lj <= 2; ++lj)
        for (std::size_t lk = 0; lk <= 2; ++lk)
            for (const cuntz::Word& j : cuntz::all_words(rho.n(), lj))
                for (const cuntz::Word& k : cuntz::all_words(rho.n(), lk))
                    samples.push_back(cuntz::Element::monomial(
                        rho.n(), cuntz::Complex(1.0), j, k));
    return emit_verdict("phi", cuntz::check_phi_invariance(rho, samples),
                        {{"samples", samples.size()}});
}

int run_entropy(const std::string& rule_file, int window, int m_max,
                const std::string& format) {
    cuntz::LocalRule rule;
    try {
        rule = cuntz::rule_from_json(load_json(rule_file));
    } catch (const cuntz::ValidationError& e) {
        throw UsageFailure{rule_file + ": " + e.what()};
    }
    if (window < 1 || m_max < 1)
        throw UsageFailure{"--n and --m must be positive"};
    cuntz::ItineraryConfig cfg;
    cfg.window = window;
    cfg.max_orbit = m_max;
    cfg.budget = enumeration_budget();
    const cuntz::EntropyEstimate est = cuntz::entropy_estimate(rule, cfg);
    if (format == "json") {
        std::cout << cuntz::estimate_to_json(est).dump(2) << "\n";
    } else {
        std::printf("  m      C(m)    h_ratio  h_cumulative\n");
        for (std::size_t i = 0; i < est.counts.size(); ++i)
            std::printf("%3zu %9llu %10s %10s\n", i + 1,
                        static_cast<unsigned long long>(est.counts[i]),
                        format_double(est.h_ratio[i]).c_str(),
                        format_double(est.h_cumulative[i]).c_str());
        if (est.truncated)
            std::printf("truncated: %s\n", est.truncation_reason.c_str());
    }
    return kOk;
}

int run_extract_rule(const std::string& endo_file, int depth,
                     const std::string& out_path) {
    const cuntz::Element u = load_endomorphism_unitary(endo_file);
    if (!cuntz::is_unitary(u)) {
        std::fprintf(stderr, "associated element is not unitary\n");
        return kMathFail;
    }
    const cuntz::Endomorphism rho = cuntz::Endomorphism::from_unitary(u);
    try {
        const cuntz::LocalRule rule = cuntz::extract_local_rule(rho, depth);
        emit(cuntz::rule_to_json(rule), out_path);
    } catch (const cuntz::ExtractionError& e) {
        std::fprintf(stderr, "extraction failed: %s\n", e.what());
        return kMathFail;
    }
    return kOk;
}

int run_commutant(const std::string& endo_file, int k, int m,
                  const std::string& format) {
    const cuntz::Element u = load_endomorphism_unitary(endo_file);
    if (!cuntz::is_unitary(u)) {
        std::fprintf(stderr, "associated element is not unitary\n");
        return kMathFail;
    }
    const cuntz::Endomorphism rho = cuntz::Endomorphism::from_unitary(u);
    cuntz::CommutantReport report;
    try {
        report = cuntz::relative_commutant(rho, k, m);
    } catch (const cuntz::ValidationError& e) {
        throw UsageFailure{e.what()};
    }
    if (format == "json") {
        std::cout << nlohmann::json{
                         {"generators", report.generator_count},
                         {"ambient_dimension", report.ambient_dimension},
                         {"commutant_dimension", report.commutant_dimension},
                         {"residual", report.residual}}
                         .dump(2)
                  << "\n";
    } else {
        std::printf(
            "generators %zu, ambient dimension %zu, commutant dimension %zu "
            "(residual %s)\n",
            report.generator_count, report.ambient_dimension,
            report.commutant_dimension,
            format_double(report.residual).c_str());
    }
    return kOk;
}

int run_apply(const std::string& endo_file, const std::string& elem_file,
              const std::string& out_path) {
    const cuntz::Element u = load_endomorphism_unitary(endo_file);
    if (!cuntz::is_unitary(u)) {
        std::fprintf(stderr, "associated element is not unitary\n");
        return kMathFail;
    }
    const cuntz::Endomorphism rho = cuntz::Endomorphism::from_unitary(u);
    const cuntz::Element x = load_element(elem_file);
    if (x.n() != rho.n())
        throw UsageFailure{"element and endomorphism alphabets differ"};
    emit(cuntz::element_to_json(cuntz::apply(rho, x)), out_path);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cuntz algebra endomorphism toolkit"};
    app.require_subcommand(1);

    std::string group_spec, group_file, format = "text";
    int m_max = 10, depth = 4;

    CLI::App* replicate = app.add_subcommand(
        "replicate", "run the full verification pipeline over one group");
    replicate->add_option("--group,-g", group_spec,
                          "cyclic orders, e.g. 2 or 2x2");
    replicate->add_option("--group-file", group_file,
                          "group spec as a JSON file");
    replicate->add_option("--m", m_max, "maximal orbit length for counting");
    replicate->add_option("--depth", depth, "masa verification depth");
    replicate->add_option("--format", format)
        ->check(CLI::IsMember({"text", "json"}));

    CLI::App* check = app.add_subcommand("check", "run a single verdict");
    check->require_subcommand(1);
    std::string file, endo_file, elem_file;
    int n_flag = 2, check_depth = 1;
    CLI::App* pentagon = check->add_subcommand(
        "pentagon", "pentagon equation for a matrix on a tensor square");
    pentagon->add_option("--file", file, "matrix JSON")->required();
    pentagon->add_option("--N", n_flag, "tensor factor dimension");
    CLI::App* masa = check->add_subcommand(
        "masa", "does the endomorphism preserve the diagonal");
    masa->add_option("--endo", endo_file, "endomorphism JSON")->required();
    masa->add_option("--depth", check_depth, "cylinder length bound");
    CLI::App* unitary =
        check->add_subcommand("unitary", "is the element unitary");
    unitary->add_option("--elem", elem_file, "element JSON")->required();
    CLI::App* closed = check->add_subcommand(
        "closed-forms", "twisted/squared closed forms over a group");
    closed->add_option("--group,-g", group_spec, "cyclic orders");
    closed->add_option("--group-file", group_file, "group JSON");
    CLI::App* phi_cmd = check->add_subcommand(
        "phi", "does the endomorphism preserve the canonical state");
    phi_cmd->add_option("--endo", endo_file, "endomorphism JSON")->required();

    CLI::App* entropy = app.add_subcommand(
        "entropy", "itinerary counting for a local rule");
    std::string rule_file;
    int window = 1;
    entropy->add_option("--rule", rule_file, "rule JSON")->required();
    entropy->add_option("--n", window, "observation window");
    entropy->add_option("--m", m_max, "maximal orbit length");
    entropy->add_option("--format", format)
        ->check(CLI::IsMember({"text", "json"}));

    CLI::App* extract = app.add_subcommand(
        "extract-rule", "recover the sequence map of a diagonal-preserving "
                        "endomorphism");
    std::string out_path;
    extract->add_option("--endo", endo_file, "endomorphism JSON")->required();
    extract->add_option("--depth", depth, "table depth");
    extract->add_option("--emit-rule", out_path, "output path");

    CLI::App* commutant = app.add_subcommand(
        "commutant", "finite-level relative commutant dimension");
    int level_k = 1, level_m = 2;
    commutant->add_option("--endo", endo_file, "endomorphism JSON")
        ->required();
    commutant->add_option("--k", level_k, "source level");
    commutant->add_option("--m", level_m, "ambient level");
    commutant->add_option("--format", format)
        ->check(CLI::IsMember({"text", "json"}));

    CLI::App* apply_cmd =
        app.add_subcommand("apply", "apply an endomorphism to an element");
    apply_cmd->add_option("--endo", endo_file, "endomorphism JSON")
        ->required();
    apply_cmd->add_option("--elem", elem_file, "element JSON")->required();
    apply_cmd->add_option("--out", out_path, "output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (replicate->parsed())
            return run_replicate(resolve_group(group_spec, group_file), m_max,
                                 depth, format);
        if (pentagon->parsed()) return run_check_pentagon(file, n_flag);
        if (masa->parsed()) return run_check_masa(endo_file, check_depth);
        if (unitary->parsed()) return run_check_unitary(elem_file);
        if (closed->parsed())
            return run_check_closed_forms(
                resolve_group(group_spec, group_file));
        if (phi_cmd->parsed()) return run_check_phi(endo_file);
        if (entropy->parsed())
            return run_entropy(rule_file, window, m_max, format);
        if (extract->parsed())
            return run_extract_rule(endo_file, depth, out_path);
        if (commutant->parsed())
            return run_commutant(endo_file, level_k, level_m, format);
        if (apply_cmd->parsed())
            return run_apply(endo_file, elem_file, out_path);
        throw UsageFailure{"no subcommand"};
    } catch (const UsageFailure& e) {
        std::fprintf(stderr, "error: %s\n", e.message.c_str());
        return kUsage;
    } catch (const cuntz::Error& e) {
        std::fprintf(stderr, "check failed: %s\n", e.what());
        return kMathFail;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    }
}
