#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "primeglue/poset.hpp"
#include "primeglue/varset.hpp"

// Script language, one statement per line, '#' starts a comment:
//
//   ring <name> = <base>[[v1,...,vn]] / (a,b) & (c,d) & ...
//   glue <new> = <ring> at (q1vars), (q2vars)
//   gluemin <new> = <ring> classes {(p1), (p2) | (p3)}
//   shape <ring>
//   preshape <ring> at (q1vars), (q2vars)
//   embed <posetfile> in <ring-or-shape>
//   verify <ring> [at (q1vars), (q2vars)]
//   report
//
// <base> is C, R, Q or a glued base created by an earlier glue; the k-th glue
// of a script creates base R<k>.

namespace primeglue::script {

class ParseError : public Error {
public:
    ParseError(int line, int column, const std::string& msg)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg), line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

using VarList = std::vector<std::string>;

struct RingStmt {
    std::string name;
    std::string base;
    VarList vars;
    std::vector<VarList> family;  // empty when no quotient is written
};

struct GlueStmt {
    std::string name;
    std::string source;
    VarList q1;
    VarList q2;
};

struct GlueMinStmt {
    std::string name;
    std::string source;
    std::vector<std::vector<VarList>> classes;
};

struct ShapeStmt {
    std::string ring;
};

struct PreshapeStmt {
    std::string ring;
    VarList q1;
    VarList q2;
};

struct EmbedStmt {
    std::string file;
    std::string target;
};

struct VerifyStmt {
    std::string ring;
    std::optional<std::pair<VarList, VarList>> at;
};

struct ReportStmt {};

using Statement = std::variant<RingStmt, GlueStmt, GlueMinStmt, ShapeStmt, PreshapeStmt, EmbedStmt, VerifyStmt,
                               ReportStmt>;

struct Script {
    std::vector<Statement> statements;
    std::vector<int> lines;  // source line of each statement
};

/// Name of the base symbol created by the k-th glue (1-based).
inline std::string glued_base_name(int k) { return "R" + std::to_string(k); }

/// Name under which `preshape <ring>` publishes its poset.
inline std::string preshape_name(const std::string& ring) { return ring + "_pre"; }

namespace detail {

class LineParser {
public:
    LineParser(std::string_view text, int line) : text_(text), line_(line) {}

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, column(), msg); }
    [[noreturn]] void fail_at(std::size_t pos, const std::string& msg) const {
        throw ParseError(line_, static_cast<int>(pos) + 1, msg);
    }

    int column() const { return static_cast<int>(pos_) + 1; }
    std::size_t pos() const { return pos_; }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) ++pos_;
    }

    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }

    bool peek(std::string_view tok) {
        skip_ws();
        return text_.substr(pos_, tok.size()) == tok;
    }

    bool accept(std::string_view tok) {
        if (!peek(tok)) return false;
        pos_ += tok.size();
        return true;
    }

    void expect(std::string_view tok) {
        if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                           text_[pos_] == '_' || text_[pos_] == '\''))
                ++pos_;
        }
        if (start == pos_) fail("expected identifier");
        return std::string(text_.substr(start, pos_ - start));
    }

    /// Poset element name: letters, digits, '_' and '\''.
    std::string element() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                                       text_[pos_] == '\''))
            ++pos_;
        if (start == pos_) fail("expected element name");
        return std::string(text_.substr(start, pos_ - start));
    }

    /// Keyword must be followed by whitespace or end of line.
    void keyword(std::string_view kw) {
        skip_ws();
        std::size_t at = pos_;
        std::string w = ident();
        if (w != kw) fail_at(at, "expected '" + std::string(kw) + "'");
    }

    std::string word() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected file name");
        return std::string(text_.substr(start, pos_ - start));
    }

    /// Comma-separated identifiers up to (not including) `close`; rejects
    /// duplicates.
    VarList var_list(std::string_view close) {
        VarList out;
        std::set<std::string> seen;
        if (peek(close)) return out;
        for (;;) {
            skip_ws();
            std::size_t at = pos_;
            std::string v = ident();
            if (!seen.insert(v).second) fail_at(at, "duplicate variable '" + v + "'");
            out.push_back(std::move(v));
            if (!accept(",")) break;
        }
        return out;
    }

    VarList prime() {
        expect("(");
        VarList v = var_list(")");
        expect(")");
        return v;
    }

    void end() {
        if (!at_end()) fail("unexpected trailing input");
    }

private:
    std::string_view text_;
    int line_;
    std::size_t pos_ = 0;
};

struct Names {
    std::map<std::string, VarList> declared_vars;  // rings with known variables
    std::set<std::string> rings;
    std::set<std::string> shapes;
    std::set<std::string> bases{"C", "R", "Q"};
    std::map<std::string, std::string> lineage;  // ring -> root ring
    std::set<std::string> terminal_lineages;
    int glues = 0;
};

}  // namespace detail

/// Parses a script. Names must be declared before use; positions in errors
/// are 1-based line:column.
inline Script parse(std::string_view text) {
    Script script;
    detail::Names names;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        std::string_view raw = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        std::string_view line = raw.substr(0, raw.find('#'));
        detail::LineParser p(line, line_no);
        if (p.at_end()) continue;

        auto fresh = [&](std::size_t at, const std::string& n) {
            if (names.rings.count(n) || names.shapes.count(n)) p.fail_at(at, "duplicate name '" + n + "'");
        };
        auto ring_ref = [&]() {
            p.skip_ws();
            std::size_t at = p.pos();
            std::string n = p.ident();
            if (!names.rings.count(n)) p.fail_at(at, "undeclared ring '" + n + "'");
            return n;
        };
        auto check_prime_vars = [&](const std::string& ring, const VarList& vars, std::size_t at) {
            auto it = names.declared_vars.find(ring);
            if (it == names.declared_vars.end()) return;
            for (const auto& v : vars)
                if (std::find(it->second.begin(), it->second.end(), v) == it->second.end())
                    p.fail_at(at, "variable '" + v + "' is not a variable of " + ring);
        };
        auto two_primes = [&](const std::string& ring) {
            p.skip_ws();
            std::size_t at1 = p.pos();
            VarList a = p.prime();
            check_prime_vars(ring, a, at1);
            p.expect(",");
            p.skip_ws();
            std::size_t at2 = p.pos();
            VarList b = p.prime();
            check_prime_vars(ring, b, at2);
            return std::pair{std::move(a), std::move(b)};
        };

        p.skip_ws();
        std::size_t kw_at = p.pos();
        std::string kw = p.ident();
        Statement stmt;
        if (kw == "ring") {
            RingStmt s;
            p.skip_ws();
            std::size_t at = p.pos();
            s.name = p.ident();
            fresh(at, s.name);
            p.expect("=");
            p.skip_ws();
            std::size_t base_at = p.pos();
            s.base = p.ident();
            if (!names.bases.count(s.base)) p.fail_at(base_at, "undeclared base '" + s.base + "'");
            p.expect("[[");
            s.vars = p.var_list("]]");
            p.expect("]]");
            if (p.accept("/")) {
                do {
                    p.skip_ws();
                    std::size_t m_at = p.pos();
                    VarList m = p.prime();
                    for (const auto& v : m)
                        if (std::find(s.vars.begin(), s.vars.end(), v) == s.vars.end())
                            p.fail_at(m_at, "variable '" + v + "' is not adjoined in " + s.name);
                    s.family.push_back(std::move(m));
                } while (p.accept("&"));
            }
            names.rings.insert(s.name);
            names.declared_vars[s.name] = s.vars;
            names.lineage[s.name] = s.name;
            stmt = std::move(s);
        } else if (kw == "glue") {
            GlueStmt s;
            p.skip_ws();
            std::size_t at = p.pos();
            s.name = p.ident();
            fresh(at, s.name);
            p.expect("=");
            s.source = ring_ref();
            p.keyword("at");
            std::tie(s.q1, s.q2) = two_primes(s.source);
            names.rings.insert(s.name);
            names.bases.insert(glued_base_name(++names.glues));
            names.lineage[s.name] = names.lineage[s.source];
            stmt = std::move(s);
        } else if (kw == "gluemin") {
            GlueMinStmt s;
            p.skip_ws();
            std::size_t at = p.pos();
            s.name = p.ident();
            fresh(at, s.name);
            p.expect("=");
            p.skip_ws();
            std::size_t src_at = p.pos();
            s.source = ring_ref();
            p.keyword("classes");
            p.expect("{");
            do {
                std::vector<VarList> cls;
                do {
                    p.skip_ws();
                    std::size_t m_at = p.pos();
                    cls.push_back(p.prime());
                    check_prime_vars(s.source, cls.back(), m_at);
                } while (p.accept(","));
                s.classes.push_back(std::move(cls));
            } while (p.accept("|"));
            p.expect("}");
            const std::string root = names.lineage[s.source];
            if (!names.terminal_lineages.insert(root).second)
                p.fail_at(src_at, "lineage of '" + s.source + "' already has a terminal gluemin");
            names.shapes.insert(s.name);
            stmt = std::move(s);
        } else if (kw == "shape") {
            stmt = ShapeStmt{ring_ref()};
        } else if (kw == "preshape") {
            PreshapeStmt s;
            s.ring = ring_ref();
            p.keyword("at");
            std::tie(s.q1, s.q2) = two_primes(s.ring);
            names.shapes.insert(preshape_name(s.ring));
            stmt = std::move(s);
        } else if (kw == "embed") {
            EmbedStmt s;
            s.file = p.word();
            p.keyword("in");
            p.skip_ws();
            std::size_t at = p.pos();
            s.target = p.ident();
            if (!names.rings.count(s.target) && !names.shapes.count(s.target))
                p.fail_at(at, "undeclared ring or shape '" + s.target + "'");
            stmt = std::move(s);
        } else if (kw == "verify") {
            VerifyStmt s;
            s.ring = ring_ref();
            if (!p.at_end()) {
                p.keyword("at");
                s.at = two_primes(s.ring);
            }
            stmt = std::move(s);
        } else if (kw == "report") {
            stmt = ReportStmt{};
        } else {
            p.fail_at(kw_at, "unknown statement '" + kw + "'");
        }
        p.end();
        script.statements.push_back(std::move(stmt));
        script.lines.push_back(line_no);
    }
    return script;
}

namespace detail {

inline std::string join(const VarList& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
    return out;
}

inline std::string paren(const VarList& v) { return "(" + join(v) + ")"; }

}  // namespace detail

/// Canonical text of one statement; parse(print(s)) reproduces s.
inline std::string print(const Statement& stmt) {
    using detail::join;
    using detail::paren;
    struct Printer {
        std::string operator()(const RingStmt& s) const {
            std::string out = "ring " + s.name + " = " + s.base + "[[" + join(s.vars) + "]]";
            for (std::size_t i = 0; i < s.family.size(); ++i) out += (i ? " & " : " / ") + paren(s.family[i]);
            return out;
        }
        std::string operator()(const GlueStmt& s) const {
            return "glue " + s.name + " = " + s.source + " at " + paren(s.q1) + ", " + paren(s.q2);
        }
        std::string operator()(const GlueMinStmt& s) const {
            std::string out = "gluemin " + s.name + " = " + s.source + " classes {";
            for (std::size_t c = 0; c < s.classes.size(); ++c) {
                if (c) out += " | ";
                for (std::size_t i = 0; i < s.classes[c].size(); ++i) out += (i ? ", " : "") + paren(s.classes[c][i]);
            }
            return out + "}";
        }
        std::string operator()(const ShapeStmt& s) const { return "shape " + s.ring; }
        std::string operator()(const PreshapeStmt& s) const {
            return "preshape " + s.ring + " at " + paren(s.q1) + ", " + paren(s.q2);
        }
        std::string operator()(const EmbedStmt& s) const { return "embed " + s.file + " in " + s.target; }
        std::string operator()(const VerifyStmt& s) const {
            std::string out = "verify " + s.ring;
            if (s.at) out += " at " + paren(s.at->first) + ", " + paren(s.at->second);
            return out;
        }
        std::string operator()(const ReportStmt&) const { return "report"; }
    };
    return std::visit(Printer{}, stmt);
}

inline std::string print(const Script& script) {
    std::string out;
    for (const auto& s : script.statements) out += print(s) + "\n";
    return out;
}

/// Poset file: one relation `a < b` per line (a single name declares an
/// isolated element); '#' comments. Relations are reduced to covers.
inline FinitePoset parse_poset(std::string_view text) {
    FinitePoset x;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        std::string_view raw = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        detail::LineParser p(raw.substr(0, raw.find('#')), line_no);
        if (p.at_end()) continue;
        std::string a = p.element();
        if (p.accept("<")) {
            std::string b = p.element();
            if (a == b) p.fail("an element is not below itself");
            x.relate(a, b);
        } else {
            x.element(a);
        }
        p.end();
    }
    if (x.size() == 0) throw Error("empty poset file");
    x.finalize();
    return x;
}

}  // namespace primeglue::script
