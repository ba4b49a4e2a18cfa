#pragma once

// Text format for quiver presentations plus named modules, and the
// materializer that turns a parsed file into a live algebra and modules.
//
// The format is line-oriented: `key: payload`, '#' starts a comment, blank
// lines are skipped. Paths are written in application order (leftmost arrow
// acts first), and every file must say so explicitly via the `convention:`
// line, so a file is self-describing. Greek letters in identifiers are
// normalized to their ASCII names (alpha, beta, ...) on input; the canonical
// serialization always emits ASCII.
//
//   instance: ex23
//   convention: application-order
//   field: prime:32003
//   vertices: 1 2 3
//   arrow: alpha 1 1
//   relation: alpha alpha alpha
//   relation: 2 alpha beta - 1/3 gamma delta
//   truncate: 3
//   module: S1 = simple 1
//   module: M = shift S1 2
//
// Module constructors: simple V | trivial | projective (V s)+ |
// shift NAME n | radical p NAME | syzygy i NAME. References must point at
// modules declared on earlier lines.

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "koszul/gmod.hpp"
#include "koszul/resolution.hpp"

namespace koszul {

struct ParseIssue {
    enum class Code { syntax, semantic };
    int line = 0;  // 1-based
    int col = 0;   // 1-based, start of the offending token
    Code code = Code::syntax;
    std::string message;
};

struct InstanceArrow {
    std::string name, src, tgt;
    bool operator==(const InstanceArrow&) const = default;
};

struct InstanceTerm {
    long long num = 1;
    long long den = 1;
    std::vector<std::string> arrows;  // application order
    bool operator==(const InstanceTerm&) const = default;
};

struct InstanceRelation {
    std::vector<InstanceTerm> terms;
    bool operator==(const InstanceRelation&) const = default;
};

struct ModuleDecl {
    enum class Kind { simple, trivial, projective, shift, radical, syzygy };
    std::string name;
    Kind kind = Kind::trivial;
    std::string vertex;                                  // simple
    std::vector<std::pair<std::string, int>> summands;   // projective: (vertex, shift)
    std::string base;                                    // shift / radical / syzygy
    int arg = 0;                                         // shift n, radical p, syzygy i
    bool operator==(const ModuleDecl&) const = default;
};

struct InstanceFile {
    std::string name;   // empty when the file has no instance: line
    std::string field;  // empty when the file has no field: line
    std::vector<std::string> vertices;
    std::vector<InstanceArrow> arrows;
    std::vector<InstanceRelation> relations;
    int truncate = 0;  // 0 = no truncate line
    std::vector<ModuleDecl> modules;
    bool operator==(const InstanceFile&) const = default;
};

struct ParseResult {
    std::optional<InstanceFile> file;  // present iff issues is empty
    std::vector<ParseIssue> issues;
    bool ok() const { return file.has_value(); }
};

namespace detail {

// Greek minuscules are two-byte UTF-8 sequences with lead byte 0xCE or 0xCF.
inline const char* greek_name(unsigned char lead, unsigned char cont) {
    if (lead == 0xCE) {
        switch (cont) {
            case 0xB1: return "alpha";
            case 0xB2: return "beta";
            case 0xB3: return "gamma";
            case 0xB4: return "delta";
            case 0xB5: return "epsilon";
            case 0xB6: return "zeta";
            case 0xB7: return "eta";
            case 0xB8: return "theta";
            case 0xB9: return "iota";
            case 0xBA: return "kappa";
            case 0xBB: return "lambda";
            case 0xBC: return "mu";
            case 0xBD: return "nu";
            case 0xBE: return "xi";
            case 0xBF: return "omicron";
            default: return nullptr;
        }
    }
    if (lead == 0xCF) {
        switch (cont) {
            case 0x80: return "pi";
            case 0x81: return "rho";
            case 0x83: return "sigma";
            case 0x84: return "tau";
            case 0x85: return "upsilon";
            case 0x86: return "phi";
            case 0x87: return "chi";
            case 0x88: return "psi";
            case 0x89: return "omega";
            default: return nullptr;
        }
    }
    return nullptr;
}

inline std::string normalize_identifier(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto lead = static_cast<unsigned char>(raw[i]);
        if ((lead == 0xCE || lead == 0xCF) && i + 1 < raw.size()) {
            if (const char* name = greek_name(lead, static_cast<unsigned char>(raw[i + 1]))) {
                out += name;
                ++i;
                continue;
            }
        }
        out += raw[i];
    }
    return out;
}

struct Token {
    std::string text;
    int col = 0;  // 1-based
};

inline std::vector<Token> split_tokens(const std::string& line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
        i = j;
    }
    return out;
}

inline bool is_integer(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

// unsigned "N" or "N/M"; signs live in the term separators
inline bool is_coefficient(const std::string& s, long long& num, long long& den) {
    const auto slash = s.find('/');
    const std::string a = slash == std::string::npos ? s : s.substr(0, slash);
    const std::string b = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (a.empty() || b.empty()) return false;
    for (char ch : a)
        if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    for (char ch : b)
        if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    num = std::stoll(a);
    den = std::stoll(b);
    return true;
}

class InstanceParser {
public:
    ParseResult run(const std::string& text) {
        std::istringstream in(text);
        std::string raw;
        int lineno = 0;
        bool any_content = false;
        while (std::getline(in, raw)) {
            ++lineno;
            const auto hash = raw.find('#');
            std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
            const auto toks = split_tokens(line);
            if (toks.empty()) continue;
            any_content = true;
            parse_line(lineno, toks);
        }
        if (!any_content)
            issue(1, 1, ParseIssue::Code::syntax, "empty instance file");
        else
            finish(lineno);
        ParseResult r;
        r.issues = std::move(issues_);
        if (r.issues.empty()) r.file = std::move(file_);
        return r;
    }

private:
    void issue(int line, int col, ParseIssue::Code code, std::string msg) {
        ParseIssue p;
        p.line = line;
        p.col = col;
        p.code = code;
        p.message = std::move(msg);
        issues_.push_back(std::move(p));
    }

    void parse_line(int lineno, const std::vector<Token>& toks) {
        const std::string& head = toks[0].text;
        if (head.empty() || head.back() != ':') {
            issue(lineno, toks[0].col, ParseIssue::Code::syntax,
                  "expected 'key: payload', got '" + head + "'");
            return;
        }
        const std::string key = head.substr(0, head.size() - 1);
        const std::vector<Token> rest(toks.begin() + 1, toks.end());
        if (key == "instance")
            parse_name(lineno, toks[0].col, rest);
        else if (key == "convention")
            parse_convention(lineno, toks[0].col, rest);
        else if (key == "field")
            parse_field(lineno, toks[0].col, rest);
        else if (key == "vertices")
            parse_vertices(lineno, toks[0].col, rest);
        else if (key == "arrow")
            parse_arrow(lineno, toks[0].col, rest);
        else if (key == "relation")
            parse_relation(lineno, toks[0].col, rest);
        else if (key == "truncate")
            parse_truncate(lineno, toks[0].col, rest);
        else if (key == "module")
            parse_module(lineno, toks[0].col, rest);
        else
            issue(lineno, toks[0].col, ParseIssue::Code::syntax, "unknown key '" + key + "'");
    }

    void parse_name(int lineno, int col, const std::vector<Token>& rest) {
        if (rest.size() != 1) {
            issue(lineno, col, ParseIssue::Code::syntax, "instance: expects one name");
            return;
        }
        if (!file_.name.empty())
            issue(lineno, col, ParseIssue::Code::semantic, "duplicate instance: line");
        file_.name = normalize_identifier(rest[0].text);
    }

    void parse_convention(int lineno, int col, const std::vector<Token>& rest) {
        if (rest.size() != 1) {
            issue(lineno, col, ParseIssue::Code::syntax, "convention: expects one value");
            return;
        }
        if (rest[0].text != "application-order") {
            issue(lineno, rest[0].col, ParseIssue::Code::semantic,
                  "unsupported convention '" + rest[0].text + "' (expected application-order)");
            return;
        }
        convention_seen_ = true;
    }

    void parse_field(int lineno, int col, const std::vector<Token>& rest) {
        if (rest.size() != 1) {
            issue(lineno, col, ParseIssue::Code::syntax, "field: expects one value");
            return;
        }
        const std::string& f = rest[0].text;
        bool ok = f == "rational";
        if (f.rfind("prime:", 0) == 0) {
            const std::string p = f.substr(6);
            ok = is_integer(p) && p[0] != '-' && p[0] != '+' && prime_like(p);
        }
        if (!ok) {
            issue(lineno, rest[0].col, ParseIssue::Code::semantic,
                  "field must be 'prime:P' with P prime, or 'rational'; got '" + f + "'");
            return;
        }
        if (!file_.field.empty())
            issue(lineno, col, ParseIssue::Code::semantic, "duplicate field: line");
        file_.field = f;
    }

    static bool prime_like(const std::string& digits) {
        if (digits.size() > 9) return false;  // engine fields are word-sized
        const long long p = std::stoll(digits);
        if (p < 2) return false;
        for (long long q = 2; q * q <= p; ++q)
            if (p % q == 0) return false;
        return true;
    }

    void parse_vertices(int lineno, int col, const std::vector<Token>& rest) {
        if (!file_.vertices.empty()) {
            issue(lineno, col, ParseIssue::Code::semantic, "duplicate vertices: line");
            return;
        }
        if (rest.empty()) {
            issue(lineno, col, ParseIssue::Code::syntax, "vertices: expects at least one name");
            return;
        }
        for (const auto& t : rest) {
            const std::string v = normalize_identifier(t.text);
            if (vertex_set_.count(v)) {
                issue(lineno, t.col, ParseIssue::Code::semantic, "duplicate vertex name: " + v);
                continue;
            }
            vertex_set_.insert(v);
            file_.vertices.push_back(v);
        }
    }

    void parse_arrow(int lineno, int col, const std::vector<Token>& rest) {
        if (rest.size() != 3) {
            issue(lineno, col, ParseIssue::Code::syntax, "arrow: expects 'name src tgt'");
            return;
        }
        if (file_.vertices.empty()) {
            issue(lineno, col, ParseIssue::Code::semantic, "arrow declared before vertices");
            return;
        }
        InstanceArrow a{normalize_identifier(rest[0].text), normalize_identifier(rest[1].text),
                        normalize_identifier(rest[2].text)};
        bool bad = false;
        if (arrow_set_.count(a.name)) {
            issue(lineno, rest[0].col, ParseIssue::Code::semantic,
                  "duplicate arrow name: " + a.name);
            bad = true;
        }
        if (!vertex_set_.count(a.src)) {
            issue(lineno, rest[1].col, ParseIssue::Code::semantic, "unknown vertex: " + a.src);
            bad = true;
        }
        if (!vertex_set_.count(a.tgt)) {
            issue(lineno, rest[2].col, ParseIssue::Code::semantic, "unknown vertex: " + a.tgt);
            bad = true;
        }
        if (bad) return;
        arrow_set_.insert(a.name);
        arrow_tgt_[a.name] = a.tgt;
        arrow_src_[a.name] = a.src;
        file_.arrows.push_back(std::move(a));
    }

    void parse_relation(int lineno, int col, const std::vector<Token>& rest) {
        if (!convention_seen_ && !convention_complained_) {
            issue(lineno, col, ParseIssue::Code::semantic,
                  "convention must be declared as application-order before relations");
            convention_complained_ = true;
        }
        if (rest.empty()) {
            issue(lineno, col, ParseIssue::Code::syntax, "relation: expects at least one term");
            return;
        }
        InstanceRelation rel;
        InstanceTerm cur;
        bool negative = false, coeff_seen = false, open = false;
        int term_col = rest[0].col;
        bool bad = false;
        auto close_term = [&](int at_col) {
            if (cur.arrows.empty()) {
                issue(lineno, at_col, ParseIssue::Code::syntax, "relation term has no path");
                bad = true;
            }
            if (negative) cur.num = -cur.num;
            rel.terms.push_back(std::move(cur));
            cur = InstanceTerm{};
            negative = false;
            coeff_seen = false;
            open = false;
        };
        for (const auto& t : rest) {
            if (t.text == "+" || t.text == "-") {
                if (open) close_term(term_col);
                negative = t.text == "-";
                term_col = t.col;
                open = true;
                continue;
            }
            long long num = 1, den = 1;
            if (!coeff_seen && cur.arrows.empty() && is_coefficient(t.text, num, den)) {
                if (den == 0) {
                    issue(lineno, t.col, ParseIssue::Code::syntax, "coefficient denominator is zero");
                    bad = true;
                }
                cur.num = num;
                cur.den = den;
                coeff_seen = true;
                open = true;
                continue;
            }
            const std::string name = normalize_identifier(t.text);
            if (!arrow_set_.count(name)) {
                issue(lineno, t.col, ParseIssue::Code::semantic, "unknown arrow: " + name);
                bad = true;
            }
            cur.arrows.push_back(name);
            open = true;
        }
        close_term(term_col);
        if (bad) return;
        if (check_relation(lineno, col, rel)) file_.relations.push_back(std::move(rel));
    }

    bool check_relation(int lineno, int col, const InstanceRelation& rel) {
        const std::size_t len = rel.terms[0].arrows.size();
        for (const auto& t : rel.terms)
            if (t.arrows.size() != len) {
                issue(lineno, col, ParseIssue::Code::semantic, "inhomogeneous relation");
                return false;
            }
        if (len < 2) {
            issue(lineno, col, ParseIssue::Code::semantic,
                  "relation paths must have length >= 2");
            return false;
        }
        for (const auto& t : rel.terms)
            for (std::size_t i = 0; i + 1 < t.arrows.size(); ++i)
                if (arrow_tgt_.at(t.arrows[i]) != arrow_src_.at(t.arrows[i + 1])) {
                    issue(lineno, col, ParseIssue::Code::semantic,
                          "non-composable path: target of '" + t.arrows[i] +
                              "' differs from source of '" + t.arrows[i + 1] + "'");
                    return false;
                }
        const std::string &src = arrow_src_.at(rel.terms[0].arrows.front()),
                          &tgt = arrow_tgt_.at(rel.terms[0].arrows.back());
        for (const auto& t : rel.terms)
            if (arrow_src_.at(t.arrows.front()) != src || arrow_tgt_.at(t.arrows.back()) != tgt) {
                issue(lineno, col, ParseIssue::Code::semantic,
                      "relation terms are not parallel paths");
                return false;
            }
        return true;
    }

    void parse_truncate(int lineno, int col, const std::vector<Token>& rest) {
        if (rest.size() != 1 || !is_integer(rest[0].text)) {
            issue(lineno, col, ParseIssue::Code::syntax, "truncate: expects one integer");
            return;
        }
        const int d = std::stoi(rest[0].text);
        if (d < 2) {
            issue(lineno, rest[0].col, ParseIssue::Code::semantic,
                  "truncate exponent must be >= 2, got " + rest[0].text);
            return;
        }
        if (file_.truncate != 0) {
            issue(lineno, col, ParseIssue::Code::semantic, "duplicate truncate: line");
            return;
        }
        file_.truncate = d;
    }

    void parse_module(int lineno, int col, const std::vector<Token>& rest) {
        if (rest.size() < 3 || rest[1].text != "=") {
            issue(lineno, col, ParseIssue::Code::syntax,
                  "module: expects 'NAME = constructor args'");
            return;
        }
        ModuleDecl m;
        m.name = normalize_identifier(rest[0].text);
        if (module_set_.count(m.name)) {
            issue(lineno, rest[0].col, ParseIssue::Code::semantic,
                  "duplicate module name: " + m.name);
            return;
        }
        const std::string& kind = rest[2].text;
        const std::vector<Token> args(rest.begin() + 3, rest.end());
        bool ok = false;
        if (kind == "simple")
            ok = parse_simple(lineno, col, args, m);
        else if (kind == "trivial")
            ok = parse_trivial(lineno, col, args, m);
        else if (kind == "projective")
            ok = parse_projective(lineno, col, args, m);
        else if (kind == "shift")
            ok = parse_unary(lineno, col, args, m, ModuleDecl::Kind::shift, /*arg_first=*/false);
        else if (kind == "radical")
            ok = parse_unary(lineno, col, args, m, ModuleDecl::Kind::radical, /*arg_first=*/true);
        else if (kind == "syzygy")
            ok = parse_unary(lineno, col, args, m, ModuleDecl::Kind::syzygy, /*arg_first=*/true);
        else
            issue(lineno, rest[2].col, ParseIssue::Code::syntax,
                  "unknown module constructor '" + kind + "'");
        if (!ok) return;
        module_set_.insert(m.name);
        file_.modules.push_back(std::move(m));
    }

    bool parse_simple(int lineno, int col, const std::vector<Token>& args, ModuleDecl& m) {
        if (args.size() != 1) {
            issue(lineno, col, ParseIssue::Code::syntax, "simple expects one vertex");
            return false;
        }
        m.kind = ModuleDecl::Kind::simple;
        m.vertex = normalize_identifier(args[0].text);
        if (!vertex_set_.count(m.vertex)) {
            issue(lineno, args[0].col, ParseIssue::Code::semantic, "unknown vertex: " + m.vertex);
            return false;
        }
        return true;
    }

    bool parse_trivial(int lineno, int col, const std::vector<Token>& args, ModuleDecl& m) {
        if (!args.empty()) {
            issue(lineno, col, ParseIssue::Code::syntax, "trivial takes no arguments");
            return false;
        }
        m.kind = ModuleDecl::Kind::trivial;
        return true;
    }

    bool parse_projective(int lineno, int col, const std::vector<Token>& args, ModuleDecl& m) {
        if (args.empty() || args.size() % 2 != 0) {
            issue(lineno, col, ParseIssue::Code::syntax,
                  "projective expects vertex/shift pairs");
            return false;
        }
        m.kind = ModuleDecl::Kind::projective;
        for (std::size_t i = 0; i < args.size(); i += 2) {
            const std::string v = normalize_identifier(args[i].text);
            if (!vertex_set_.count(v)) {
                issue(lineno, args[i].col, ParseIssue::Code::semantic, "unknown vertex: " + v);
                return false;
            }
            if (!is_integer(args[i + 1].text)) {
                issue(lineno, args[i + 1].col, ParseIssue::Code::syntax,
                      "projective shift must be an integer, got '" + args[i + 1].text + "'");
                return false;
            }
            m.summands.emplace_back(v, std::stoi(args[i + 1].text));
        }
        return true;
    }

    bool parse_unary(int lineno, int col, const std::vector<Token>& args, ModuleDecl& m,
                     ModuleDecl::Kind kind, bool arg_first) {
        const char* shape = kind == ModuleDecl::Kind::shift ? "shift expects 'NAME n'"
                            : kind == ModuleDecl::Kind::radical ? "radical expects 'p NAME'"
                                                                : "syzygy expects 'i NAME'";
        if (args.size() != 2) {
            issue(lineno, col, ParseIssue::Code::syntax, shape);
            return false;
        }
        const Token& num_tok = arg_first ? args[0] : args[1];
        const Token& ref_tok = arg_first ? args[1] : args[0];
        if (!is_integer(num_tok.text)) {
            issue(lineno, num_tok.col, ParseIssue::Code::syntax, shape);
            return false;
        }
        m.kind = kind;
        m.arg = std::stoi(num_tok.text);
        m.base = normalize_identifier(ref_tok.text);
        if (!module_set_.count(m.base)) {
            issue(lineno, ref_tok.col, ParseIssue::Code::semantic, "unknown module: " + m.base);
            return false;
        }
        if (kind == ModuleDecl::Kind::radical && m.arg < 1) {
            issue(lineno, num_tok.col, ParseIssue::Code::semantic,
                  "radical power must be >= 1, got " + num_tok.text);
            return false;
        }
        if (kind == ModuleDecl::Kind::syzygy && m.arg < 1) {
            issue(lineno, num_tok.col, ParseIssue::Code::semantic,
                  "syzygy index must be >= 1, got " + num_tok.text);
            return false;
        }
        return true;
    }

    void finish(int last_line) {
        if (!convention_seen_ && !convention_complained_)
            issue(1, 1, ParseIssue::Code::semantic,
                  "missing 'convention: application-order' line");
        if (file_.vertices.empty() && issues_.empty())
            issue(last_line, 1, ParseIssue::Code::semantic, "no vertices declared");
    }

    InstanceFile file_;
    std::vector<ParseIssue> issues_;
    bool convention_seen_ = false, convention_complained_ = false;
    std::set<std::string> vertex_set_, arrow_set_, module_set_;
    std::map<std::string, std::string> arrow_src_, arrow_tgt_;
};

}  // namespace detail

inline ParseResult parse_instance(const std::string& text) {
    return detail::InstanceParser{}.run(text);
}

// Canonical form: fixed key order, single spaces, ASCII identifiers,
// coefficient 1 omitted. parse(serialize(parse(f))) == parse(f), and a file
// already in canonical form serializes to itself byte for byte.
inline std::string serialize_instance(const InstanceFile& f) {
    std::ostringstream out;
    if (!f.name.empty()) out << "instance: " << f.name << "\n";
    out << "convention: application-order\n";
    if (!f.field.empty()) out << "field: " << f.field << "\n";
    out << "vertices:";
    for (const auto& v : f.vertices) out << " " << v;
    out << "\n";
    for (const auto& a : f.arrows)
        out << "arrow: " << a.name << " " << a.src << " " << a.tgt << "\n";
    for (const auto& rel : f.relations) {
        out << "relation:";
        for (std::size_t i = 0; i < rel.terms.size(); ++i) {
            const auto& t = rel.terms[i];
            const long long mag = t.num < 0 ? -t.num : t.num;
            if (i > 0)
                out << (t.num < 0 ? " -" : " +");
            else if (t.num < 0)
                out << " -";
            if (mag != 1 || t.den != 1) {
                out << " " << mag;
                if (t.den != 1) out << "/" << t.den;
            }
            for (const auto& name : t.arrows) out << " " << name;
        }
        out << "\n";
    }
    if (f.truncate != 0) out << "truncate: " << f.truncate << "\n";
    for (const auto& m : f.modules) {
        out << "module: " << m.name << " = ";
        switch (m.kind) {
            case ModuleDecl::Kind::simple: out << "simple " << m.vertex; break;
            case ModuleDecl::Kind::trivial: out << "trivial"; break;
            case ModuleDecl::Kind::projective:
                out << "projective";
                for (const auto& [v, s] : m.summands) out << " " << v << " " << s;
                break;
            case ModuleDecl::Kind::shift: out << "shift " << m.base << " " << m.arg; break;
            case ModuleDecl::Kind::radical: out << "radical " << m.arg << " " << m.base; break;
            case ModuleDecl::Kind::syzygy: out << "syzygy " << m.arg << " " << m.base; break;
        }
        out << "\n";
    }
    return out.str();
}

// A live algebra plus the file's modules, in declaration order. Modules
// borrow the algebra by raw pointer, so it lives on the heap here and the
// bundle must outlive anything derived from its modules.
template <class F>
struct Materialized {
    std::shared_ptr<Algebra<F>> algebra;
    std::vector<std::pair<std::string, GradedModule<F>>> modules;

    const GradedModule<F>* find(const std::string& name) const {
        for (const auto& [n, m] : modules)
            if (n == name) return &m;
        return nullptr;
    }
};

template <class F>
Materialized<F> materialize(const InstanceFile& f, const F& fld, int D) {
    std::vector<Arrow> arrows;
    std::map<std::string, int> vidx, aidx;
    for (int i = 0; i < static_cast<int>(f.vertices.size()); ++i) vidx[f.vertices[i]] = i;
    for (const auto& a : f.arrows) {
        aidx[a.name] = static_cast<int>(arrows.size());
        arrows.push_back({a.name, vidx.at(a.src), vidx.at(a.tgt)});
    }
    Quiver q(f.vertices, std::move(arrows));
    std::vector<Relation> rels;
    for (const auto& rel : f.relations) {
        Relation r;
        for (const auto& t : rel.terms) {
            Path p;
            for (const auto& name : t.arrows) p.push_back(aidx.at(name));
            r.terms.push_back({t.num, t.den, std::move(p)});
        }
        rels.push_back(std::move(r));
    }
    if (f.truncate != 0)
        for (const auto& p : q.all_paths(f.truncate))
            rels.push_back(Relation{{RelationTerm{1, 1, p}}});

    Materialized<F> out;
    out.algebra = std::make_shared<Algebra<F>>(
        Algebra<F>::path_algebra(fld, q, rels, D, f.name));
    const Algebra<F>& a = *out.algebra;

    auto lookup = [&](const std::string& name) -> const GradedModule<F>& {
        const GradedModule<F>* m = out.find(name);
        engine_check(m != nullptr, "module reference escaped the parser: " + name);
        return *m;
    };
    for (const auto& m : f.modules) {
        switch (m.kind) {
            case ModuleDecl::Kind::simple:
                out.modules.emplace_back(m.name, simple_module(a, vidx.at(m.vertex)));
                break;
            case ModuleDecl::Kind::trivial:
                out.modules.emplace_back(m.name, trivial_module(a));
                break;
            case ModuleDecl::Kind::projective: {
                std::vector<std::pair<int, int>> gens;
                for (const auto& [v, s] : m.summands) gens.emplace_back(vidx.at(v), s);
                out.modules.emplace_back(m.name, projective_module(a, gens));
                break;
            }
            case ModuleDecl::Kind::shift:
                out.modules.emplace_back(m.name, shift(lookup(m.base), m.arg));
                break;
            case ModuleDecl::Kind::radical:
                out.modules.emplace_back(m.name,
                                         radical_power(lookup(m.base), m.arg, D).module);
                break;
            case ModuleDecl::Kind::syzygy: {
                auto res = minimal_resolution(lookup(m.base), m.arg, D);
                out.modules.emplace_back(m.name, syzygy(res, m.arg));
                break;
            }
        }
    }
    return out;
}

}  // namespace koszul
