#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mtmorph/grammar.hpp"

namespace mtmorph {

struct Step {
    FeasiblePair pair;
    std::string rule;
    Bindings env;
};

/// An accepted correspondence: the partition of the lexical tapes and the
/// surface into licensed tuple pairs.
struct Derivation {
    std::vector<Step> steps;

    std::vector<Symbol> surface() const;
    std::vector<std::string> rule_ids() const;
    /// Per-tape projection of the lexical cells, epsilon dropped.
    std::vector<std::vector<Symbol>> tapes(std::size_t tape_count) const;

    /// Same pairs and licensing rules (bindings ignored).
    bool same_steps(const Derivation& o) const;
};

/// Orders by rule-id sequence, then by the pairs themselves.
bool operator<(const Derivation& a, const Derivation& b);

/// One line per step: "rule-id TAB lex-tuple TAB surf".
std::string format_trace(const Derivation& d);

/// The lexical side of a search, seen one tape at a time as a graph of
/// read positions.
class LexicalSource {
public:
    using State = std::uint32_t;
    virtual ~LexicalSource() = default;
    virtual std::size_t tape_count() const = 0;
    virtual State start(std::size_t tape) const = 0;
    virtual std::vector<State> advance(std::size_t tape, State s, const Symbol& symbol) const = 0;
    virtual bool at_end(std::size_t tape, State s) const = 0;
};

/// Fully specified lexical tapes; the state is the read position.
class FixedTapes : public LexicalSource {
public:
    explicit FixedTapes(std::vector<std::vector<Symbol>> tapes) : tapes_(std::move(tapes)) {}
    std::size_t tape_count() const override { return tapes_.size(); }
    State start(std::size_t) const override { return 0; }
    std::vector<State> advance(std::size_t tape, State s, const Symbol& symbol) const override;
    bool at_end(std::size_t tape, State s) const override { return s == tapes_[tape].size(); }

private:
    std::vector<std::vector<Symbol>> tapes_;
};

/// Depth-first enumeration of partitions into licensed pairs. The policy
/// decides, step by step, whether a pair is admissible in context and
/// whether a complete partition is accepted:
///
///   struct Policy {
///       using State = ...;
///       State initial();
///       // successors after appending `lp` to `history`; each with the
///       // step's bindings
///       std::vector<std::pair<State, Bindings>> advance(const State&,
///           const std::vector<Step>& history, const LicensedPair& lp);
///       bool accept(const State&, const std::vector<Step>& steps);
///   };
///
/// Branches whose remaining tapes cannot be consumed at all (ignoring
/// contexts) are pruned with a memo on (tape states, surface position).
template <class Policy>
class Search {
public:
    Search(const Grammar& g, const std::vector<LicensedPair>& sigma, const LexicalSource& src,
           const std::vector<Symbol>* target, Policy& policy)
        : g_(g), sigma_(sigma), src_(src), target_(target), policy_(policy) {}

    void run(const std::function<void(const Derivation&)>& emit) {
        std::vector<LexicalSource::State> states;
        for (std::size_t i = 0; i < src_.tape_count(); ++i) states.push_back(src_.start(i));
        emit_ = &emit;
        dfs(states, 0, policy_.initial());
    }

private:
    using States = std::vector<LexicalSource::State>;

    bool all_at_end(const States& states) const {
        for (std::size_t i = 0; i < states.size(); ++i)
            if (!src_.at_end(i, states[i])) return false;
        return true;
    }

    bool surface_fits(const FeasiblePair& p, std::size_t spos) const {
        if (!target_) return true;
        if (spos + p.surf.size() > target_->size()) return false;
        for (std::size_t k = 0; k < p.surf.size(); ++k)
            if ((*target_)[spos + k] != p.surf[k]) return false;
        return true;
    }

    std::vector<States> successors(const States& states, const SymbolTuple& lex) const {
        std::vector<States> out{states};
        for (std::size_t i = 0; i < lex.cells.size(); ++i) {
            if (is_epsilon(lex.cells[i])) continue;
            std::vector<States> next;
            for (const auto& s : out)
                for (auto n : src_.advance(i, s[i], lex.cells[i])) {
                    States t = s;
                    t[i] = n;
                    next.push_back(std::move(t));
                }
            out = std::move(next);
            if (out.empty()) break;
        }
        return out;
    }

    bool live(const States& states, std::size_t spos) {
        if (all_at_end(states) && (!target_ || spos == target_->size())) return true;
        auto key = std::make_pair(states, target_ ? spos : 0);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        bool ok = false;
        for (const auto& lp : sigma_) {
            if (!surface_fits(lp.pair, spos)) continue;
            for (const auto& next : successors(states, lp.pair.lex))
                if (live(next, spos + lp.pair.surf.size())) {
                    ok = true;
                    break;
                }
            if (ok) break;
        }
        memo_[key] = ok;
        return ok;
    }

    void dfs(const States& states, std::size_t spos, const typename Policy::State& ps) {
        if (all_at_end(states) && (!target_ || spos == target_->size()) && policy_.accept(ps, steps_)) {
            Derivation d;
            d.steps = steps_;
            (*emit_)(d);
        }
        for (const auto& lp : sigma_) {
            if (!surface_fits(lp.pair, spos)) continue;
            auto nexts = successors(states, lp.pair.lex);
            std::size_t nspos = spos + lp.pair.surf.size();
            std::erase_if(nexts, [&](const States& n) { return !live(n, nspos); });
            if (nexts.empty()) continue;
            for (auto& [next_ps, env] : policy_.advance(ps, steps_, lp)) {
                steps_.push_back({lp.pair, g_.rules[lp.rule].id, std::move(env)});
                for (const auto& n : nexts) dfs(n, nspos, next_ps);
                steps_.pop_back();
            }
        }
    }

    const Grammar& g_;
    const std::vector<LicensedPair>& sigma_;
    const LexicalSource& src_;
    const std::vector<Symbol>* target_;
    Policy& policy_;
    const std::function<void(const Derivation&)>* emit_ = nullptr;
    std::vector<Step> steps_;
    std::map<std::pair<States, std::size_t>, bool> memo_;
};

}  // namespace mtmorph
