#include "mtmorph/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

namespace mtmorph {

GrammarError::GrammarError(const std::string& msg, int line, int column)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", column " +
                                        std::to_string(column) + ": " + msg
                                  : msg),
      line_(line),
      column_(column) {}

bool Rule::operator==(const Rule& o) const {
    return id == o.id && op == o.op && lsc == o.lsc && surf == o.surf && rsc == o.rsc &&
           llc == o.llc && lex == o.lex && rlc == o.rlc && constraints == o.constraints;
}

std::set<std::string> Rule::variables() const {
    std::set<std::string> vars;
    auto terms = [&](const std::vector<Term>& ts) {
        for (const auto& t : ts)
            if (t.is_var()) vars.insert(t.text);
    };
    terms(lsc);
    terms(surf);
    terms(rsc);
    terms(lex.cells);
    for (const auto& item : llc)
        if (item.kind == ContextItem::Kind::Tuple) terms(item.tuple.cells);
    for (const auto& t : rlc) terms(t.cells);
    return vars;
}

const Rule* Grammar::find_rule(std::string_view id) const {
    for (const auto& r : rules)
        if (r.id == id) return &r;
    return nullptr;
}

bool Grammar::is_declared(std::string_view symbol) const {
    for (const auto& [name, syms] : alphabets)
        if (std::find(syms.begin(), syms.end(), symbol) != syms.end()) return true;
    return false;
}

const std::vector<Symbol>& Grammar::alphabet(const std::string& name) const {
    static const std::vector<Symbol> empty;
    auto it = alphabets.find(name);
    return it == alphabets.end() ? empty : it->second;
}

VariableRanges Grammar::ranges(const Rule& rule) const {
    std::map<std::string, std::optional<std::set<Symbol>>> acc;
    auto narrow = [&](const std::string& var, const std::vector<Symbol>& alpha) {
        std::set<Symbol> s(alpha.begin(), alpha.end());
        auto& slot = acc[var];
        if (!slot) {
            slot = std::move(s);
            return;
        }
        std::set<Symbol> out;
        std::set_intersection(slot->begin(), slot->end(), s.begin(), s.end(),
                              std::inserter(out, out.begin()));
        slot = std::move(out);
    };
    auto tuple = [&](const TuplePattern& t) {
        for (std::size_t i = 0; i < t.cells.size() && i < tapes.size(); ++i)
            if (t.cells[i].is_var()) narrow(t.cells[i].text, alphabet(tapes.names[i]));
    };
    auto surface = [&](const std::vector<Term>& ts) {
        for (const auto& t : ts)
            if (t.is_var()) narrow(t.text, alphabet(kSurfaceAlphabet));
    };
    surface(rule.lsc);
    surface(rule.surf);
    surface(rule.rsc);
    tuple(rule.lex);
    for (const auto& item : rule.llc)
        if (item.kind == ContextItem::Kind::Tuple) tuple(item.tuple);
    for (const auto& t : rule.rlc) tuple(t);

    VariableRanges out;
    for (auto& [var, s] : acc) out[var] = s ? *s : std::set<Symbol>{};
    for (const auto& c : rule.constraints) {
        auto it = out.find(c.var);
        if (it == out.end()) continue;
        std::set<Symbol> members(c.members.begin(), c.members.end());
        std::set<Symbol> narrowed;
        for (const auto& s : it->second)
            if (members.contains(s) != c.negated) narrowed.insert(s);
        it->second = std::move(narrowed);
    }
    return out;
}

Grammar Grammar::without(const std::set<std::string>& rule_ids) const {
    Grammar g = *this;
    std::erase_if(g.rules, [&](const Rule& r) { return rule_ids.contains(r.id); });
    for (const auto& id : rule_ids) g.deletion_rules.erase(id);
    return g;
}

namespace {

struct Token {
    std::string text;
    int column = 0;
};

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

// Whitespace tokenizer that keeps a parenthesized tuple (with any inner
// whitespace removed) as one token.
std::vector<Token> tokenize(std::string_view line, int base_column, int lineno) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        Token tok;
        tok.column = base_column + static_cast<int>(i);
        if (line[i] == '(') {
            auto close = line.find(')', i);
            if (close == std::string_view::npos)
                throw GrammarError("unterminated tuple", lineno, tok.column);
            for (std::size_t j = i; j <= close; ++j)
                if (!std::isspace(static_cast<unsigned char>(line[j]))) tok.text += line[j];
            i = close + 1;
        } else {
            while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
                tok.text += line[i++];
        }
        out.push_back(std::move(tok));
    }
    return out;
}

bool is_variable_token(std::string_view tok) {
    return !tok.empty() && std::isupper(static_cast<unsigned char>(tok[0]));
}

struct RawRule {
    std::string text;
    int line = 0;
    int column = 0;  // column of the rule body in the first line
};

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Grammar run() {
        collect();
        if (!have_tapes_) throw GrammarError("missing 'tapes:' header");
        for (const auto& raw : raw_rules_) g_.rules.push_back(parse_rule(raw));
        return std::move(g_);
    }

private:
    void collect() {
        std::istringstream in{std::string(text_)};
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            if (trim(line).empty()) continue;
            bool continuation = std::isspace(static_cast<unsigned char>(line[0]));
            std::string body = trim(line);
            if (continuation && in_rule_) {
                raw_rules_.back().text += " " + body;
                continue;
            }
            in_rule_ = false;
            declaration(body, lineno);
        }
    }

    void declaration(const std::string& body, int lineno) {
        auto starts = [&](std::string_view kw) {
            return body.rfind(kw, 0) == 0 &&
                   (body.size() == kw.size() || std::isspace(static_cast<unsigned char>(body[kw.size()])) ||
                    body[kw.size()] == ':');
        };
        if (starts("tapes")) return tapes(body, lineno);
        if (starts("alphabet")) return alphabet(body, lineno);
        if (starts("set")) return set(body, lineno);
        if (starts("render")) return render(body, lineno);
        if (starts("deletion")) return deletion(body, lineno);
        if (starts("rule")) {
            auto colon = body.find(':');
            if (colon == std::string::npos) throw GrammarError("rule without ':'", lineno, 1);
            std::string id = trim(std::string_view(body).substr(4, colon - 4));
            if (id.empty()) throw GrammarError("rule without id", lineno, 6);
            raw_rules_.push_back({id + "\n" + body.substr(colon + 1), lineno,
                                  static_cast<int>(colon) + 2});
            in_rule_ = true;
            return;
        }
        throw GrammarError("unrecognized declaration '" + split_ws(body).front() + "'", lineno, 1);
    }

    std::vector<std::string> after_colon(const std::string& body, int lineno) {
        auto colon = body.find(':');
        if (colon == std::string::npos) throw GrammarError("expected ':'", lineno, 1);
        return split_ws(std::string_view(body).substr(colon + 1));
    }

    void tapes(const std::string& body, int lineno) {
        if (have_tapes_) throw GrammarError("duplicate 'tapes:' header", lineno, 1);
        auto toks = after_colon(body, lineno);
        std::optional<std::size_t> plt;
        for (auto tok : toks) {
            bool star = false;
            if (tok == "*") {
                if (g_.tapes.names.empty()) throw GrammarError("'*' before any tape name", lineno, 1);
                star = true;
            } else {
                if (tok.back() == '*') {
                    star = true;
                    tok.pop_back();
                }
                g_.tapes.names.push_back(tok);
            }
            if (star) {
                if (plt) throw GrammarError("more than one primary lexical tape", lineno, 1);
                plt = g_.tapes.names.size() - 1;
            }
        }
        if (g_.tapes.names.empty()) throw GrammarError("no tapes declared", lineno, 1);
        if (!plt) {
            if (g_.tapes.names.size() > 1)
                throw GrammarError("no primary lexical tape marked with '*'", lineno, 1);
            plt = 0;
        }
        g_.tapes.plt = *plt;
        have_tapes_ = true;
    }

    void alphabet(const std::string& body, int lineno) {
        auto colon = body.find(':');
        if (colon == std::string::npos) throw GrammarError("expected ':' after alphabet name", lineno, 1);
        std::string name = trim(std::string_view(body).substr(8, colon - 8));
        if (name.empty()) throw GrammarError("alphabet without name", lineno, 10);
        auto& syms = g_.alphabets[name];
        for (auto& s : split_ws(std::string_view(body).substr(colon + 1))) {
            if (is_epsilon(s)) throw GrammarError("'0' is reserved for epsilon", lineno, 1);
            if (std::find(syms.begin(), syms.end(), s) == syms.end()) syms.push_back(s);
        }
    }

    void set(const std::string& body, int lineno) {
        auto eq = body.find('=');
        auto open = body.find('{');
        auto close = body.rfind('}');
        if (eq == std::string::npos || open == std::string::npos || close == std::string::npos ||
            close < open)
            throw GrammarError("expected 'set NAME = { ... }'", lineno, 1);
        std::string name = trim(std::string_view(body).substr(3, eq - 3));
        if (name.empty()) throw GrammarError("set without name", lineno, 5);
        g_.sets[name] = split_ws(std::string_view(body).substr(open + 1, close - open - 1));
    }

    void render(const std::string& body, int lineno) {
        auto toks = split_ws(std::string_view(body).substr(6));
        if (toks.size() != 3 || toks[1] != ":")
            throw GrammarError("expected 'render SYMBOL : TEXT'", lineno, 1);
        g_.render[toks[0]] = decode_codepoints(toks[2]);
    }

    // "U+0300" (or "U+006F+0300") spells the text by code points.
    static std::string decode_codepoints(const std::string& text) {
        if (text.rfind("U+", 0) != 0) return text;
        std::string out;
        std::size_t pos = 2;
        while (pos < text.size()) {
            std::size_t used = 0;
            unsigned long cp = std::stoul(text.substr(pos), &used, 16);
            if (cp < 0x80) {
                out += static_cast<char>(cp);
            } else if (cp < 0x800) {
                out += static_cast<char>(0xC0 | (cp >> 6));
                out += static_cast<char>(0x80 | (cp & 0x3F));
            } else if (cp < 0x10000) {
                out += static_cast<char>(0xE0 | (cp >> 12));
                out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
                out += static_cast<char>(0x80 | (cp & 0x3F));
            } else {
                out += static_cast<char>(0xF0 | (cp >> 18));
                out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
                out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
                out += static_cast<char>(0x80 | (cp & 0x3F));
            }
            pos += used;
            if (pos < text.size() && text[pos] == '+') ++pos;
        }
        return out;
    }

    void deletion(const std::string& body, int lineno) {
        for (auto& id : after_colon(body, lineno)) g_.deletion_rules.insert(id);
    }

    Term term(const std::string& tok) const {
        if (is_epsilon(tok)) return Term::epsilon();
        if (g_.is_declared(tok)) return Term::literal(tok);
        if (is_variable_token(tok)) return Term::variable(tok);
        return Term::literal(tok);
    }

    TuplePattern tuple(const Token& tok, int lineno) const {
        const std::size_t n = g_.tapes.size();
        TuplePattern out;
        std::vector<std::string> cells;
        if (tok.text.front() == '(') {
            if (tok.text.back() != ')') throw GrammarError("malformed tuple", lineno, tok.column);
            std::string inner = tok.text.substr(1, tok.text.size() - 2);
            std::string cur;
            for (char c : inner) {
                if (c == ',') {
                    cells.push_back(cur);
                    cur.clear();
                } else {
                    cur += c;
                }
            }
            cells.push_back(cur);
        } else {
            cells.push_back(tok.text);
        }
        if (cells.size() == 1) {
            out.plt_only = true;
            out.cells.assign(n, Term::epsilon());
            out.cells[g_.tapes.plt] = term(cells[0].empty() ? std::string(kEpsilon) : cells[0]);
            return out;
        }
        if (cells.size() != n)
            throw GrammarError("tuple " + tok.text + " has arity " + std::to_string(cells.size()) +
                                   ", expected " + std::to_string(n),
                               lineno, tok.column);
        for (auto& c : cells) out.cells.push_back(term(c.empty() ? std::string(kEpsilon) : c));
        return out;
    }

    static std::vector<std::vector<Token>> split_side(const std::vector<Token>& toks, int lineno,
                                                      int column) {
        std::vector<std::vector<Token>> groups(1);
        for (const auto& t : toks) {
            if (t.text == "-")
                groups.emplace_back();
            else
                groups.back().push_back(t);
        }
        if (groups.size() != 3)
            throw GrammarError("expected 'context - form - context' (found " +
                                   std::to_string(groups.size()) + " parts)",
                               lineno, column);
        return groups;
    }

    std::vector<Term> surface_group(const std::vector<Token>& group, bool is_context, int lineno) const {
        std::vector<Term> out;
        if (is_context && group.size() == 1 && group[0].text == "*") return out;
        for (const auto& t : group) {
            if (t.text == "*")
                throw GrammarError("'*' must be the sole item of a context", lineno, t.column);
            if (t.text == "...")
                throw GrammarError("ellipsis is only allowed in the left lexical context", lineno, t.column);
            if (t.text.front() == '(')
                throw GrammarError("tuple in surface expression", lineno, t.column);
            Term tm = term(t.text);
            if (tm.kind != Term::Kind::Epsilon) out.push_back(tm);
        }
        return out;
    }

    std::vector<ContextItem> lexical_context(const std::vector<Token>& group, bool allow_ellipsis,
                                             int lineno) const {
        std::vector<ContextItem> out;
        if (group.size() == 1 && group[0].text == "*") return out;
        for (const auto& t : group) {
            if (t.text == "*")
                throw GrammarError("'*' must be the sole item of a context", lineno, t.column);
            if (t.text == "..." || t.text == "…") {
                if (!allow_ellipsis)
                    throw GrammarError("ellipsis is only allowed in the left lexical context", lineno,
                                       t.column);
                out.push_back(ContextItem::ellipsis());
                continue;
            }
            out.push_back({ContextItem::Kind::Tuple, tuple(t, lineno)});
        }
        return out;
    }

    Constraint condition(const std::string& text, int lineno, int column) const {
        // VAR op SET, where SET is a name, a symbol, or "{ a b c }"
        std::string s = trim(text);
        auto toks = split_ws(s);
        if (toks.size() < 3) throw GrammarError("malformed condition '" + s + "'", lineno, column);
        Constraint c;
        c.var = toks[0];
        const std::string& op = toks[1];
        if (op == "in" || op == "=" || op == "is" || op == "∈") {
            c.negated = false;
        } else if (op == "notin" || op == "!=" || op == "∉" || op == "≠") {
            c.negated = true;
        } else {
            throw GrammarError("unknown condition operator '" + op + "'", lineno, column);
        }
        auto rest_pos = s.find(op, toks[0].size()) + op.size();
        std::string rest = trim(std::string_view(s).substr(rest_pos));
        if (!rest.empty() && rest.front() == '{') {
            if (rest.back() != '}') throw GrammarError("unterminated set", lineno, column);
            for (auto m : split_ws(std::string_view(rest).substr(1, rest.size() - 2))) {
                if (m.back() == ',') m.pop_back();
                if (!m.empty()) c.members.push_back(m);
            }
            return c;
        }
        if (split_ws(rest).size() != 1) throw GrammarError("malformed condition '" + s + "'", lineno, column);
        if (auto it = g_.sets.find(rest); it != g_.sets.end()) {
            c.set_name = rest;
            c.members = it->second;
        } else if (auto a = g_.alphabets.find(rest); a != g_.alphabets.end()) {
            c.set_name = rest;
            c.members = a->second;
        } else if (g_.is_declared(rest)) {
            c.members = {rest};
        } else {
            throw GrammarError("unknown set name '" + rest + "'", lineno, column);
        }
        return c;
    }

    Rule parse_rule(const RawRule& raw) const {
        Rule r;
        auto nl = raw.text.find('\n');
        r.id = raw.text.substr(0, nl);
        r.line = raw.line;
        std::string body = raw.text.substr(nl + 1);
        if (trim(body).empty()) throw GrammarError("empty rule body", raw.line, raw.column);

        std::string where;
        {
            auto toks = tokenize(body, 0, raw.line);
            for (const auto& t : toks)
                if (t.text == "where") {
                    where = body.substr(static_cast<std::size_t>(t.column) + 5);
                    body = body.substr(0, static_cast<std::size_t>(t.column));
                    break;
                }
        }

        auto toks = tokenize(body, raw.column, raw.line);
        std::size_t op_index = toks.size();
        for (std::size_t i = 0; i < toks.size(); ++i) {
            const auto& t = toks[i].text;
            if (t == "=>" || t == "⇒") {
                r.op = Operator::Optional;
            } else if (t == "<=>" || t == "⇔") {
                r.op = Operator::Composite;
            } else if (t == "<=" || t == "⇐" || t == "/<=" || t == "/⇐") {
                throw GrammarError("operator '" + t +
                                       "' (surface coercion/exclusion) is not part of this formalism; use "
                                       "'<=>' for obligatory rules",
                                   raw.line, toks[i].column);
            } else {
                continue;
            }
            if (op_index != toks.size()) throw GrammarError("more than one operator", raw.line, toks[i].column);
            op_index = i;
        }
        if (op_index == toks.size()) throw GrammarError("rule without '=>' or '<=>'", raw.line, raw.column);

        std::vector<Token> surface(toks.begin(), toks.begin() + static_cast<long>(op_index));
        std::vector<Token> lexical(toks.begin() + static_cast<long>(op_index) + 1, toks.end());
        if (surface.empty() || lexical.empty()) throw GrammarError("rule side is empty", raw.line, raw.column);

        auto sg = split_side(surface, raw.line, surface.front().column);
        auto lg = split_side(lexical, raw.line, lexical.front().column);
        r.lsc = surface_group(sg[0], true, raw.line);
        r.surf = surface_group(sg[1], false, raw.line);
        r.rsc = surface_group(sg[2], true, raw.line);
        r.llc = lexical_context(lg[0], true, raw.line);

        auto lex_items = lexical_context(lg[1], false, raw.line);
        int lex_col = lg[1].empty() ? lexical.front().column : lg[1].front().column;
        if (lex_items.empty()) throw GrammarError("empty LEX (an all-epsilon LEX is forbidden)", raw.line, lex_col);
        if (lex_items.size() != 1) throw GrammarError("LEX must be a single tuple", raw.line, lex_col);
        r.lex = lex_items.front().tuple;
        bool all_eps = std::all_of(r.lex.cells.begin(), r.lex.cells.end(),
                                   [](const Term& t) { return t.kind == Term::Kind::Epsilon; });
        if (all_eps) throw GrammarError("all-epsilon LEX is forbidden", raw.line, lex_col);

        for (auto& item : lexical_context(lg[2], false, raw.line)) r.rlc.push_back(item.tuple);

        if (!trim(where).empty()) {
            std::string cur;
            int depth = 0;
            auto flush = [&] {
                if (!trim(cur).empty()) r.constraints.push_back(condition(cur, raw.line, raw.column));
                cur.clear();
            };
            for (char c : where) {
                if (c == '{') ++depth;
                if (c == '}') --depth;
                if (c == ',' && depth == 0)
                    flush();
                else
                    cur += c;
            }
            flush();
        }
        return r;
    }

    std::string_view text_;
    Grammar g_;
    bool have_tapes_ = false;
    bool in_rule_ = false;
    std::vector<RawRule> raw_rules_;
};

}  // namespace

Grammar parse_grammar(std::string_view text) {
    Grammar g = Parser(text).run();
    std::set<std::string> seen;
    for (const auto& r : g.rules)
        if (!seen.insert(r.id).second) throw GrammarError("duplicate rule id '" + r.id + "'", r.line, 1);
    return g;
}

Grammar load_grammar(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw GrammarError("cannot open grammar file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_grammar(ss.str());
}

namespace {

std::string print_tuple(const Grammar& g, const TuplePattern& t) {
    if (t.plt_only) return t.cells[g.tapes.plt].text;
    return t.str();
}

std::string print_terms(const std::vector<Term>& ts, bool context) {
    if (ts.empty()) return context ? "*" : "";
    std::vector<std::string> parts;
    for (const auto& t : ts) parts.push_back(t.text);
    return join(parts, " ");
}

}  // namespace

std::string print_rule(const Grammar& g, const Rule& r) {
    std::ostringstream out;
    auto form = [](const std::string& s) { return s.empty() ? std::string(" ") : " " + s + " "; };
    out << "rule " << r.id << ": " << print_terms(r.lsc, true) << " -" << form(print_terms(r.surf, false))
        << "- " << print_terms(r.rsc, true) << (r.op == Operator::Optional ? " => " : " <=> ");
    if (r.llc.empty()) {
        out << "*";
    } else {
        std::vector<std::string> parts;
        for (const auto& item : r.llc)
            parts.push_back(item.kind == ContextItem::Kind::Ellipsis ? "..." : print_tuple(g, item.tuple));
        out << join(parts, " ");
    }
    out << " - " << print_tuple(g, r.lex) << " - ";
    if (r.rlc.empty()) {
        out << "*";
    } else {
        std::vector<std::string> parts;
        for (const auto& t : r.rlc) parts.push_back(print_tuple(g, t));
        out << join(parts, " ");
    }
    if (!r.constraints.empty()) {
        std::vector<std::string> conds;
        for (const auto& c : r.constraints) {
            std::string set = c.set_name.empty() ? "{ " + join(c.members, " ") + " }" : c.set_name;
            conds.push_back(c.var + (c.negated ? " notin " : " in ") + set);
        }
        out << " where " << join(conds, ", ");
    }
    return out.str();
}

std::string print_grammar(const Grammar& g) {
    std::ostringstream out;
    out << "tapes:";
    for (std::size_t i = 0; i < g.tapes.size(); ++i)
        out << " " << g.tapes.names[i] << (i == g.tapes.plt ? "*" : "");
    out << "\n";
    for (const auto& [name, syms] : g.alphabets) out << "alphabet " << name << ": " << join(syms, " ") << "\n";
    for (const auto& [name, syms] : g.sets) out << "set " << name << " = { " << join(syms, " ") << " }\n";
    for (const auto& [sym, text] : g.render) out << "render " << sym << " : " << text << "\n";
    if (!g.deletion_rules.empty())
        out << "deletion: " << join({g.deletion_rules.begin(), g.deletion_rules.end()}, " ") << "\n";
    for (const auto& r : g.rules) out << print_rule(g, r) << "\n";
    return out.str();
}

std::vector<Diagnostic> validate_grammar(const Grammar& g) {
    std::vector<Diagnostic> out;
    auto error = [&](const std::string& rule, const std::string& msg) {
        out.push_back({Diagnostic::Severity::Error, rule, msg});
    };

    for (const auto& name : g.tapes.names)
        if (!g.alphabets.contains(name)) error("", "no alphabet declared for tape '" + name + "'");
    if (!g.alphabets.contains(kSurfaceAlphabet)) error("", "no surface alphabet declared");

    for (const auto& [name, members] : g.sets)
        for (const auto& m : members)
            if (!g.is_declared(m)) error("", "undeclared symbol " + m + " (in set " + name + ")");

    bool has_default = false;
    for (const auto& r : g.rules) {
        has_default |= r.is_default_style();
        std::set<std::string> reported;
        auto check_literal = [&](const Term& t, const std::string& alpha) {
            if (t.kind != Term::Kind::Literal) return;
            const auto& a = g.alphabet(alpha);
            if (std::find(a.begin(), a.end(), t.text) != a.end()) return;
            if (!reported.insert(t.text).second) return;
            if (!g.is_declared(t.text))
                error(r.id, "undeclared symbol " + t.text);
            else
                error(r.id, "symbol " + t.text + " is not in the " + alpha + " alphabet");
        };
        auto check_tuple = [&](const TuplePattern& t) {
            for (std::size_t i = 0; i < t.cells.size(); ++i) check_literal(t.cells[i], g.tapes.names[i]);
        };
        for (const auto* side : {&r.lsc, &r.surf, &r.rsc})
            for (const auto& t : *side) check_literal(t, kSurfaceAlphabet);
        check_tuple(r.lex);
        for (const auto& t : r.rlc) check_tuple(t);
        for (std::size_t i = 0; i < r.llc.size(); ++i) {
            const auto& item = r.llc[i];
            if (item.kind == ContextItem::Kind::Tuple) {
                check_tuple(item.tuple);
                continue;
            }
            if (i == 0 || r.llc[i - 1].kind == ContextItem::Kind::Ellipsis)
                error(r.id, "ellipsis must follow a tuple in the left lexical context");
        }

        auto vars = r.variables();
        for (const auto& c : r.constraints)
            if (!vars.contains(c.var)) error(r.id, "constraint on unknown variable " + c.var);

        std::set<std::string> lexical_vars;
        auto collect = [&](const TuplePattern& t) {
            for (const auto& c : t.cells)
                if (c.is_var()) lexical_vars.insert(c.text);
        };
        collect(r.lex);
        for (const auto& item : r.llc)
            if (item.kind == ContextItem::Kind::Tuple) collect(item.tuple);
        for (const auto& t : r.rlc) collect(t);
        for (const auto& t : r.surf) {
            if (!t.is_var() || lexical_vars.contains(t.text)) continue;
            bool constrained = std::any_of(r.constraints.begin(), r.constraints.end(), [&](const Constraint& c) {
                return c.var == t.text && !c.negated;
            });
            if (!constrained) error(r.id, "unbounded variable " + t.text);
        }

        for (const auto& [var, range] : g.ranges(r))
            if (range.empty()) error(r.id, "variable " + var + " has an empty range");
    }

    for (const auto& id : g.deletion_rules)
        if (!g.find_rule(id)) error("", "deletion rule '" + id + "' does not exist");
    const auto& surface = g.alphabet(kSurfaceAlphabet);
    for (const auto& [sym, text] : g.render)
        if (std::find(surface.begin(), surface.end(), sym) == surface.end())
            error("", "render entry for non-surface symbol " + sym);

    if (!g.rules.empty() && !has_default)
        out.push_back({Diagnostic::Severity::Warning, "", "no default-style (context-free '=>') rule"});
    return out;
}

bool has_errors(const std::vector<Diagnostic>& diags) {
    return std::any_of(diags.begin(), diags.end(),
                       [](const Diagnostic& d) { return d.severity == Diagnostic::Severity::Error; });
}

std::vector<LicensedPair> compute_licensed_pairs(const Grammar& g) {
    std::set<LicensedPair> out;
    for (std::size_t ri = 0; ri < g.rules.size(); ++ri) {
        const Rule& r = g.rules[ri];
        auto ranges = g.ranges(r);
        std::vector<std::string> vars;
        {
            std::set<std::string> s;
            for (const auto& c : r.lex.cells)
                if (c.is_var()) s.insert(c.text);
            for (const auto& t : r.surf)
                if (t.is_var()) s.insert(t.text);
            vars.assign(s.begin(), s.end());
        }
        for (const auto& v : vars)
            if (!ranges.contains(v)) throw GrammarError("unbounded variable " + v + " in rule " + r.id, r.line);

        Bindings env;
        std::function<void(std::size_t)> enumerate = [&](std::size_t k) {
            if (k == vars.size()) {
                FeasiblePair p;
                for (const auto& c : r.lex.cells) {
                    if (c.kind == Term::Kind::Variable)
                        p.lex.cells.push_back(env.at(c.text));
                    else
                        p.lex.cells.push_back(c.text);
                }
                if (p.lex.all_epsilon()) return;
                for (const auto& t : r.surf) p.surf.push_back(t.is_var() ? env.at(t.text) : t.text);
                out.insert({std::move(p), ri});
                return;
            }
            for (const auto& value : ranges.at(vars[k])) {
                env[vars[k]] = value;
                enumerate(k + 1);
            }
            env.erase(vars[k]);
        };
        enumerate(0);
    }
    return {out.begin(), out.end()};
}

std::set<FeasiblePair> compute_feasible_pairs(const Grammar& g) {
    std::set<FeasiblePair> out;
    for (auto& lp : compute_licensed_pairs(g)) out.insert(std::move(lp.pair));
    return out;
}

}  // namespace mtmorph
