// Command driver. Parses argv-style arguments, loads a builtin or on-disk
// instance, dispatches over the coefficient field, runs the requested
// computation, and renders one report per command. Lives apart from the
// binary so tests can exercise the whole pipeline in-process.

#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "koszul/instances.hpp"
#include "koszul/report.hpp"

namespace koszul {

struct CommandResult {
    int exit_code = 3;
    std::string text;
    std::string json;
};

namespace detail {

struct CliOptions {
    std::string instance;
    std::string command;
    std::string module;
    std::string claim;
    std::string field;  // empty = take the instance file's declaration
    std::string out;
    int d = 0;  // 0 = derive from the instance
    int homdeg = -1;
    int degbound = -1;
    int effort = 1;
    int grades = 3;
    bool generalized = false;
    bool odd = false;
    bool even = false;
    bool no_cache = false;
};

// The degree template of an instance: the common length of its relations,
// else the truncation power, else 2. The --d flag overrides.
inline int derive_d(const InstanceFile& f) {
    int best = 0;
    for (const auto& rel : f.relations)
        for (const auto& t : rel.terms)
            best = std::max(best, static_cast<int>(t.arrows.size()));
    if (best > 0) return best;
    if (f.truncate > 0) return f.truncate;
    return 2;
}

inline CommandResult finish(const CliOptions& o, const ReportValue& doc, std::string text,
                            std::string json) {
    CommandResult r;
    r.exit_code = exit_code_for(doc.is_array()
                                    ? [&] {
                                          std::string worst = "pass";
                                          for (const auto& d : doc) {
                                              const auto v = d["verdict"].get<std::string>();
                                              if (v == "fail") return v;
                                              if (v != "pass") worst = v;
                                          }
                                          return worst;
                                      }()
                                    : doc["verdict"].get<std::string>());
    r.text = std::move(text);
    r.json = std::move(json);
    if (!o.out.empty()) {
        std::ofstream os(o.out);
        if (!os) {
            return CommandResult{3, "cannot write report to '" + o.out + "'\n",
                                 render_json(error_report("output", "input-error",
                                                          "cannot write report to '" + o.out +
                                                              "'"))};
        }
        os << r.json;
    }
    return r;
}

inline CommandResult input_failure(const CliOptions& o, const std::string& message) {
    const auto doc = error_report(o.command.empty() ? "input" : o.command, "input-error", message);
    return finish(o, doc, render_text(doc), render_json(doc));
}

inline CommandResult budget_failure(const CliOptions& o, const std::string& message) {
    const auto doc = error_report(o.command, "budget-exceeded", message);
    return finish(o, doc, render_text(doc), render_json(doc));
}

// Restores the process-wide cache switch on scope exit, so in-process
// callers (tests) never inherit the driver's setting.
template <class F>
struct CacheScope {
    bool prev;
    explicit CacheScope(bool on) : prev(ResolutionCache<F>::instance().enabled()) {
        ResolutionCache<F>::instance().set_enabled(on);
    }
    ~CacheScope() { ResolutionCache<F>::instance().set_enabled(prev); }
};

inline const std::vector<std::string>& verify_claims() {
    static const std::vector<std::string> c = {"lemma-2-5",    "theorem-2-6", "exact-sequences",
                                               "gmmz",         "main-theorem", "corollary"};
    return c;
}

template <class F>
VerificationReport run_one_claim(const std::string& claim, const Algebra<F>& a,
                                 const GradedModule<F>& m, int d, int H, int H_E) {
    if (claim == "lemma-2-5") return verify_lemma_2_5(a, m, d, H);
    if (claim == "theorem-2-6") return verify_theorem_2_6(a, m, d, H);
    if (claim == "exact-sequences") return verify_exact_sequences(a, m, d, H);
    if (claim == "gmmz") return verify_gmmz(a, m, d, H_E);
    if (claim == "main-theorem") return verify_main_theorem(a, m, d, H_E);
    return verify_corollary(a, m, d, H_E);
}

template <class F>
CommandResult run_with_field(const F& fld, const CliOptions& o, const InstanceFile& file,
                             const std::string& default_module) {
    CacheScope<F> cache_scope(!o.no_cache);
    const int d = o.d > 0 ? o.d : derive_d(file);

    try {
        if (o.command == "verify") {
            const int effort = o.effort;
            const int H = o.homdeg > 0 ? o.homdeg : 4 + 2 * effort;
            const int H_E = effort + 1;
            // corollary resolves one step past 2*H_E; take the larger window
            const int top_H = std::max(H, 2 * H_E + 1);
            const int W = std::max(o.degbound, delta(top_H, d) + d);
            const auto mat = materialize(file, fld, W);
            const auto* m = mat.find(o.module);
            if (!m)
                return input_failure(o, "instance declares no module named '" + o.module + "'");
            const int formulas_effort = o.homdeg > 0 ? -1 : effort;

            if (o.claim == "all") {
                ReportValue docs = ReportValue::array();
                std::string text;
                for (const auto& c : verify_claims()) {
                    const auto rep = run_one_claim(c, *mat.algebra, *m, d, H, H_E);
                    auto doc = report_value(rep, formulas_effort);
                    if (!text.empty()) text += "\n";
                    text += render_text(doc);
                    docs.push_back(std::move(doc));
                }
                return finish(o, docs, std::move(text), render_json(docs));
            }
            const auto rep = run_one_claim(o.claim, *mat.algebra, *m, d, H, H_E);
            const auto doc = report_value(rep, formulas_effort);
            return finish(o, doc, render_text(doc), render_json(doc));
        }

        if (o.command == "check") {
            const int H = o.homdeg > 0 ? o.homdeg : 8;
            const int W = o.degbound > 0 ? o.degbound : delta(H, d) + d;
            const auto mat = materialize(file, fld, W);
            const std::string name = o.module.empty() ? default_module : o.module;
            const auto* m = mat.find(name);
            if (!m) return input_failure(o, "instance declares no module named '" + name + "'");
            const auto cert = o.generalized ? is_generalized_d_koszul(*m, d, H, W)
                                            : is_d_koszul(*m, d, H, W);
            const auto doc = check_report(*mat.algebra, name, cert);
            return finish(o, doc, render_text(doc), render_json(doc));
        }

        if (o.command == "resolve") {
            const int H = o.homdeg > 0 ? o.homdeg : 4;
            const int W = o.degbound > 0 ? o.degbound : delta(H, d) + d;
            const auto mat = materialize(file, fld, W);
            const std::string name = o.module.empty() ? default_module : o.module;
            const auto* m = mat.find(name);
            if (!m) return input_failure(o, "instance declares no module named '" + name + "'");
            const auto res = minimal_resolution(*m, H, W);
            const auto doc = resolve_report(*mat.algebra, name, res);
            return finish(o, doc, render_text(doc), render_json(doc));
        }

        // ext
        const int H_E = o.grades;
        const int H = 2 * H_E + 1;
        const int W = o.degbound > 0 ? o.degbound : delta(H, d) + d;
        const auto mat = materialize(file, fld, W);
        const std::string name = o.module.empty() ? default_module : o.module;
        const auto* m = mat.find(name);
        if (!m) return input_failure(o, "instance declares no module named '" + name + "'");
        const auto bundle = build_ext_even_algebra(*mat.algebra, H_E, W);
        const auto res_m = minimal_resolution(*m, H, W);
        const auto em = o.odd ? build_ext_odd_module(bundle, res_m)
                              : build_ext_even_module(bundle, res_m);
        const auto doc = ext_report(*mat.algebra, name, o.odd, bundle, em);
        return finish(o, doc, render_text(doc), render_json(doc));
    } catch (const BudgetError& e) {
        return budget_failure(o, e.what());
    } catch (const InputError& e) {
        return input_failure(o, e.what());
    }
}

template <class F>
void run_selftest_with_field(const F& fld, const CliOptions& o, const BuiltinInstance& b,
                             ReportValue& doc) {
    CacheScope<F> cache_scope(!o.no_cache);
    ReportValue sub;
    sub["label"] = b.name;
    sub["pass"] = false;
    sub["evidence"] = "";
    try {
        auto pr = parse_instance(b.text);
        if (!pr.ok()) {
            sub["evidence"] = "built-in text does not parse";
        } else if (serialize_instance(*pr.file) != b.text) {
            sub["evidence"] = "built-in text is not in canonical form";
        } else {
            const int d = detail::derive_d(*pr.file);
            const int W = delta(4, d) + d;
            const auto mat = materialize(*pr.file, fld, W);
            if (!mat.algebra->structure_report().pass()) {
                sub["evidence"] =
                    "algebra structure checks fail: " + mat.algebra->structure_report().witness;
            } else if (!mat.find(b.module)) {
                sub["evidence"] = std::string("default module '") + b.module + "' missing";
            } else {
                const auto res = minimal_resolution(*mat.find(b.module), 2, W);
                sub["pass"] = res.verify();
                sub["evidence"] = sub["pass"].get<bool>()
                                      ? "parses, canonical, materializes, resolves to depth 2"
                                      : "depth-2 resolution failed verification";
            }
        }
    } catch (const std::exception& e) {
        sub["evidence"] = std::string("exception: ") + e.what();
    }
    if (!sub["pass"].get<bool>()) doc["witnesses"].push_back(sub["label"].get<std::string>() +
                                                             ": " +
                                                             sub["evidence"].get<std::string>());
    doc["subclaims"].push_back(std::move(sub));
}

}  // namespace detail

inline CommandResult run_command(const std::vector<std::string>& args) {
    detail::CliOptions o;
    CLI::App app{"graded resolutions, koszulity certificates, theorem verification over "
                 "truncated path algebras"};
    app.name("koszulcheck");
    app.add_option("instance", o.instance,
                   "built-in instance name or path to an instance file");

    const auto add_common = [&](CLI::App* sub, bool with_homdeg) {
        sub->add_option("--field", o.field, "prime:P or rational (default: the file's choice)");
        sub->add_option("--degbound", o.degbound, "override the internal degree window");
        sub->add_flag("--no-cache", o.no_cache, "recompute every resolution");
        sub->add_option("--out", o.out, "also write the machine-readable report here");
        if (with_homdeg)
            sub->add_option("--homdeg", o.homdeg, "homological bound for the resolution");
    };

    auto* resolve = app.add_subcommand("resolve", "minimal graded projective resolution");
    resolve->add_option("module", o.module, "module name (default: the instance's pick)");
    add_common(resolve, true);

    auto* check = app.add_subcommand("check", "koszulity certificate for a module");
    check->add_option("module", o.module, "module name (default: the instance's pick)");
    check->add_option("--d", o.d, "degree template (default: derived from the instance)");
    check->add_flag("--generalized", o.generalized, "allow the full degree window Delta(i)");
    add_common(check, true);

    auto* ext = app.add_subcommand("ext", "grade dimensions of an Ext module");
    ext->add_option("module", o.module, "module name (default: the instance's pick)");
    ext->add_flag("--even", o.even, "even part (default)");
    ext->add_flag("--odd", o.odd, "odd part");
    ext->add_option("--grades", o.grades, "Ext-grade bound H_E");
    ext->add_option("--d", o.d, "degree template (default: derived from the instance)");
    add_common(ext, false);

    auto* verify = app.add_subcommand("verify", "machine-check one of the paper-scale claims");
    verify->add_option("claim", o.claim,
                       "lemma-2-5 | theorem-2-6 | exact-sequences | gmmz | main-theorem | "
                       "corollary | all")
        ->required();
    verify->add_option("--module", o.module, "module the claim quantifies over (default: k)");
    verify->add_option("--d", o.d, "degree template (default: derived from the instance)");
    verify->add_option("--effort", o.effort, "budget knob: H = 4 + 2*effort, H_E = effort + 1");
    add_common(verify, true);

    auto* selftest = app.add_subcommand("selftest", "run the built-in instances end to end");
    selftest->add_flag("--no-cache", o.no_cache, "recompute every resolution");
    selftest->add_option("--out", o.out, "also write the machine-readable report here");

    app.require_subcommand(0, 1);

    std::vector<const char*> argv;
    argv.push_back("koszulcheck");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        return {0, app.help(), ""};
    } catch (const CLI::ParseError& e) {
        return detail::input_failure(o, std::string("argument error: ") + e.what());
    }

    if (app.got_subcommand(selftest)) {
        o.command = "selftest";
        ReportValue doc = blank_report("selftest", "pass");
        const PrimeField fp(32003);
        for (const auto& b : builtin_instances()) detail::run_selftest_with_field(fp, o, b, doc);
        for (const auto& s : doc["subclaims"])
            if (!s["pass"].get<bool>()) doc["verdict"] = "fail";
        return detail::finish(o, doc, render_text(doc), render_json(doc));
    }

    for (auto* sub : {resolve, check, ext, verify})
        if (app.got_subcommand(sub)) o.command = sub->get_name();
    if (o.command.empty())
        return detail::input_failure(o, "expected one of: resolve, check, ext, verify, selftest");
    if (o.instance.empty())
        return detail::input_failure(o, "an instance name or file path is required");

    if (o.command == "verify") {
        if (o.module.empty()) o.module = "k";
        const auto& claims = detail::verify_claims();
        if (o.claim != "all" &&
            std::find(claims.begin(), claims.end(), o.claim) == claims.end())
            return detail::input_failure(
                o, "unknown claim '" + o.claim +
                       "'; expected lemma-2-5, theorem-2-6, exact-sequences, gmmz, "
                       "main-theorem, corollary, or all");
        if (o.effort < 1) return detail::input_failure(o, "effort must be at least 1");
    }
    if (o.command == "ext" && o.even && o.odd)
        return detail::input_failure(o, "choose one of --even or --odd");

    // load the instance: builtin name first, then the filesystem
    std::string text;
    std::string default_module;
    if (const auto* b = find_builtin(o.instance)) {
        text = b->text;
        default_module = b->module;
    } else {
        std::ifstream in(o.instance);
        if (!in)
            return detail::input_failure(
                o, "no built-in instance or readable file named '" + o.instance + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    auto pr = parse_instance(text);
    if (!pr.ok()) {
        std::ostringstream msg;
        for (std::size_t i = 0; i < pr.issues.size(); ++i) {
            const auto& is = pr.issues[i];
            if (i) msg << "; ";
            msg << is.line << ':' << is.col << ": "
                << (is.code == ParseIssue::Code::syntax ? "syntax" : "semantic") << " error: "
                << is.message;
        }
        return detail::input_failure(o, msg.str());
    }
    if (default_module.empty() && !pr.file->modules.empty())
        default_module = pr.file->modules.front().name;
    if (default_module.empty() && o.module.empty() && o.command != "verify")
        return detail::input_failure(o, "the instance declares no modules");

    const std::string field_choice = o.field.empty() ? pr.file->field : o.field;
    if (field_choice == "rational") {
        const RationalField fq;
        return detail::run_with_field(fq, o, *pr.file, default_module);
    }
    if (field_choice.rfind("prime:", 0) == 0) {
        const std::string digits = field_choice.substr(6);
        if (digits.empty() || digits.size() > 9 ||
            digits.find_first_not_of("0123456789") != std::string::npos)
            return detail::input_failure(o, "field '" + field_choice +
                                                "' is not prime:P with P prime");
        try {
            const PrimeField fp(static_cast<std::uint32_t>(std::stoll(digits)));
            return detail::run_with_field(fp, o, *pr.file, default_module);
        } catch (const FieldError& e) {
            return detail::input_failure(o, e.what());
        }
    }
    return detail::input_failure(o, "unknown field '" + field_choice +
                                        "'; expected prime:P or rational");
}

}  // namespace koszul
