#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtmorph/grammar.hpp"
#include "mtmorph/search.hpp"

namespace mtmorph {

class LexiconError : public std::runtime_error {
public:
    LexiconError(const std::string& msg, int line = 0);
};

/// Position of a morpheme within its tape's word.
enum class Slot { Prefix, Main, Suffix };

struct MorphemeEntry {
    std::string id;
    std::string category;  // pattern, root, vocalism, prefix, suffix, ...
    std::size_t tape = 0;
    Slot slot = Slot::Main;
    std::vector<Symbol> symbols;
    std::map<std::string, std::string> attrs;
    std::string gloss;
};

/// One prefix tree per lexical tape.
class Lexicon {
public:
    struct Node {
        std::map<Symbol, std::uint32_t> children;
        std::vector<std::size_t> entries;  // indices into entries()
        unsigned below = 0;                // slots of entries in this subtree (bit mask)
        unsigned here = 0;                 // slots of entries ending here
    };

    /// A read position on one tape: a trie node plus how far the tape's
    /// morphotactics (prefix, main, suffix) has progressed.
    struct Cursor {
        std::uint32_t node = 0;
        std::uint8_t phase = 0;
        auto operator<=>(const Cursor&) const = default;
    };

    const TapeConfig& tapes() const { return tapes_; }
    const std::vector<MorphemeEntry>& entries() const { return entries_; }

    /// Entries with this id, optionally restricted to a category.
    std::vector<const MorphemeEntry*> find(std::string_view id, std::string_view category = {}) const;
    /// The main morpheme entries of a tape.
    std::vector<const MorphemeEntry*> main_entries(std::size_t tape) const;

    Cursor cursor(std::size_t tape) const;
    std::vector<Cursor> advance(std::size_t tape, const Cursor& c, const Symbol& symbol) const;
    bool at_entry_end(std::size_t tape, const Cursor& c) const;  // a complete word may end here
    const Node& node(std::size_t tape, std::uint32_t id) const { return tries_[tape][id]; }

    /// All ways to split a tape string into a morphotactically valid
    /// morpheme sequence.
    std::vector<std::vector<const MorphemeEntry*>> segment(std::size_t tape, const std::vector<Symbol>& symbols) const;

    /// Paths (symbol sequences) of every entry reachable from the root.
    std::vector<std::pair<std::vector<Symbol>, const MorphemeEntry*>> enumerate(std::size_t tape) const;

private:
    friend Lexicon parse_lexicon(std::string_view text, const Grammar& g);
    void insert(std::size_t index);
    unsigned allowed(std::size_t tape, std::uint8_t phase) const;

    TapeConfig tapes_;
    std::vector<MorphemeEntry> entries_;
    std::vector<std::vector<Node>> tries_;
};

Lexicon parse_lexicon(std::string_view text, const Grammar& g);
Lexicon load_lexicon(const std::string& path, const Grammar& g);

/// Lexicon cursors as the lexical side of a search (recognition).
class LexiconSource : public LexicalSource {
public:
    explicit LexiconSource(const Lexicon& lex) : lex_(lex) {}
    std::size_t tape_count() const override { return lex_.tapes().size(); }
    State start(std::size_t tape) const override { return encode(lex_.cursor(tape)); }
    std::vector<State> advance(std::size_t tape, State s, const Symbol& symbol) const override;
    bool at_end(std::size_t tape, State s) const override { return lex_.at_entry_end(tape, decode(s)); }

private:
    static State encode(const Lexicon::Cursor& c) { return c.node * 4 + c.phase; }
    static Lexicon::Cursor decode(State s) { return {s / 4, static_cast<std::uint8_t>(s % 4)}; }
    const Lexicon& lex_;
};

}  // namespace mtmorph
