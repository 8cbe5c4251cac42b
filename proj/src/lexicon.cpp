#include "mtmorph/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace mtmorph {

LexiconError::LexiconError(const std::string& msg, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg) {}

namespace {

constexpr unsigned kPrefix = 1, kMain = 2, kSuffix = 4;

unsigned bit(Slot s) {
    switch (s) {
        case Slot::Prefix: return kPrefix;
        case Slot::Main: return kMain;
        case Slot::Suffix: return kSuffix;
    }
    return 0;
}

std::uint8_t next_phase(unsigned slot_bit) { return slot_bit == kPrefix ? 1 : slot_bit == kMain ? 2 : 3; }

bool word_may_end(std::uint8_t phase) { return phase >= 2; }

// Whitespace tokens; a double-quoted run (inside key="...") stays whole.
std::vector<std::string> tokens(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (char c : s) {
        if (c == '"') {
            quoted = !quoted;
            continue;
        }
        if (!quoted && std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

}  // namespace

unsigned Lexicon::allowed(std::size_t tape, std::uint8_t phase) const {
    if (tape != tapes_.plt) return phase == 0 ? kMain : 0;
    switch (phase) {
        case 0: return kPrefix | kMain;
        case 1: return kMain;
        case 2: return kSuffix;
        default: return 0;
    }
}

void Lexicon::insert(std::size_t index) {
    const MorphemeEntry& e = entries_[index];
    auto& trie = tries_[e.tape];
    std::uint32_t n = 0;
    trie[0].below |= bit(e.slot);
    for (const auto& s : e.symbols) {
        auto it = trie[n].children.find(s);
        if (it == trie[n].children.end()) {
            trie.emplace_back();
            it = trie[n].children.emplace(s, static_cast<std::uint32_t>(trie.size() - 1)).first;
        }
        n = it->second;
        trie[n].below |= bit(e.slot);
    }
    trie[n].entries.push_back(index);
    trie[n].here |= bit(e.slot);
}

std::vector<const MorphemeEntry*> Lexicon::find(std::string_view id, std::string_view category) const {
    std::vector<const MorphemeEntry*> out;
    for (const auto& e : entries_)
        if (e.id == id && (category.empty() || e.category == category)) out.push_back(&e);
    return out;
}

std::vector<const MorphemeEntry*> Lexicon::main_entries(std::size_t tape) const {
    std::vector<const MorphemeEntry*> out;
    for (const auto& e : entries_)
        if (e.tape == tape && e.slot == Slot::Main) out.push_back(&e);
    return out;
}

Lexicon::Cursor Lexicon::cursor(std::size_t) const { return {}; }

std::vector<Lexicon::Cursor> Lexicon::advance(std::size_t tape, const Cursor& c, const Symbol& symbol) const {
    const auto& trie = tries_[tape];
    std::vector<Cursor> out;
    auto step = [&](std::uint32_t from, std::uint8_t phase) {
        auto it = trie[from].children.find(symbol);
        if (it == trie[from].children.end() || !(trie[it->second].below & allowed(tape, phase))) return;
        Cursor n{it->second, phase};
        if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    };
    step(c.node, c.phase);
    if (c.node != 0) {
        unsigned done = trie[c.node].here & allowed(tape, c.phase);
        for (unsigned b : {kPrefix, kMain, kSuffix})
            if (done & b) step(0, next_phase(b));
    }
    return out;
}

bool Lexicon::at_entry_end(std::size_t tape, const Cursor& c) const {
    if (c.node == 0) return false;
    unsigned done = tries_[tape][c.node].here & allowed(tape, c.phase);
    for (unsigned b : {kPrefix, kMain, kSuffix})
        if ((done & b) && word_may_end(next_phase(b))) return true;
    return false;
}

std::vector<std::vector<const MorphemeEntry*>> Lexicon::segment(std::size_t tape,
                                                                const std::vector<Symbol>& symbols) const {
    const auto& trie = tries_[tape];
    std::vector<std::vector<const MorphemeEntry*>> out;
    std::vector<const MorphemeEntry*> acc;
    std::function<void(std::size_t, std::uint8_t, std::uint32_t)> rec = [&](std::size_t pos, std::uint8_t phase,
                                                                             std::uint32_t n) {
        if (n != 0) {
            unsigned done = trie[n].here & allowed(tape, phase);
            for (auto idx : trie[n].entries) {
                const MorphemeEntry& e = entries_[idx];
                if (!(done & bit(e.slot))) continue;
                std::uint8_t p = next_phase(bit(e.slot));
                acc.push_back(&e);
                if (pos == symbols.size()) {
                    if (word_may_end(p)) out.push_back(acc);
                } else {
                    rec(pos, p, 0);
                }
                acc.pop_back();
            }
        }
        if (pos < symbols.size()) {
            auto it = trie[n].children.find(symbols[pos]);
            if (it != trie[n].children.end() && (trie[it->second].below & allowed(tape, phase)))
                rec(pos + 1, phase, it->second);
        }
    };
    rec(0, 0, 0);
    return out;
}

std::vector<std::pair<std::vector<Symbol>, const MorphemeEntry*>> Lexicon::enumerate(std::size_t tape) const {
    const auto& trie = tries_[tape];
    std::vector<std::pair<std::vector<Symbol>, const MorphemeEntry*>> out;
    std::vector<Symbol> path;
    std::function<void(std::uint32_t)> rec = [&](std::uint32_t n) {
        for (auto idx : trie[n].entries) out.emplace_back(path, &entries_[idx]);
        for (const auto& [sym, child] : trie[n].children) {
            path.push_back(sym);
            rec(child);
            path.pop_back();
        }
    };
    rec(0);
    return out;
}

Lexicon parse_lexicon(std::string_view text, const Grammar& g) {
    Lexicon lex;
    lex.tapes_ = g.tapes;
    lex.tries_.assign(g.tapes.size(), std::vector<Lexicon::Node>(1));
    bool have_tapes = false;

    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto toks = tokens(line);
        if (toks.empty()) continue;
        if (toks[0] == "tapes:") {
            TapeConfig tc;
            for (std::size_t i = 1; i < toks.size(); ++i) {
                std::string name = toks[i];
                if (name.back() == '*') {
                    name.pop_back();
                    tc.plt = tc.names.size();
                }
                tc.names.push_back(name);
            }
            if (!(tc == g.tapes))
                throw LexiconError("tape configuration does not match the grammar's", lineno);
            have_tapes = true;
            continue;
        }
        auto colon = std::find(toks.begin(), toks.end(), ":");
        if (toks.size() < 3 || colon != toks.begin() + 2)
            throw LexiconError("expected 'category id : symbols'", lineno);
        MorphemeEntry e;
        e.category = toks[0];
        e.id = toks[1];
        if (e.category == "prefix") {
            e.tape = g.tapes.plt;
            e.slot = Slot::Prefix;
        } else if (e.category == "suffix") {
            e.tape = g.tapes.plt;
            e.slot = Slot::Suffix;
        } else if (e.category == "particle" || e.category == "stem") {
            e.tape = g.tapes.plt;
        } else if (auto t = g.tapes.index_of(e.category)) {
            e.tape = *t;
        } else {
            throw LexiconError("unknown tape or category '" + e.category + "'", lineno);
        }
        const auto& alphabet = g.alphabet(g.tapes.names[e.tape]);
        for (auto it = colon + 1; it != toks.end(); ++it) {
            if (auto eq = it->find('='); eq != std::string::npos && eq > 0) {
                std::string key = it->substr(0, eq), value = it->substr(eq + 1);
                if (key == "gloss")
                    e.gloss = value;
                else
                    e.attrs[key] = value;
                continue;
            }
            if (std::find(alphabet.begin(), alphabet.end(), *it) == alphabet.end())
                throw LexiconError("symbol " + *it + " outside the alphabet of tape " + g.tapes.names[e.tape], lineno);
            e.symbols.push_back(*it);
        }
        if (e.symbols.empty()) throw LexiconError("entry '" + e.id + "' has no symbols", lineno);
        for (const auto& other : lex.entries_)
            if (other.tape == e.tape && other.id == e.id && other.symbols == e.symbols && other.slot == e.slot)
                throw LexiconError("duplicate entry '" + e.id + "'", lineno);
        lex.entries_.push_back(std::move(e));
        lex.insert(lex.entries_.size() - 1);
    }
    if (!have_tapes) throw LexiconError("missing 'tapes:' header");
    return lex;
}

Lexicon load_lexicon(const std::string& path, const Grammar& g) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LexiconError("cannot open lexicon file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_lexicon(ss.str(), g);
}

std::vector<LexicalSource::State> LexiconSource::advance(std::size_t tape, State s, const Symbol& symbol) const {
    std::vector<State> out;
    for (const auto& c : lex_.advance(tape, decode(s), symbol)) out.push_back(encode(c));
    return out;
}

}  // namespace mtmorph
