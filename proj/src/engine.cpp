#include "engine.hpp"

#include <algorithm>

namespace ag {

namespace {
const std::vector<std::uint32_t> empty_bucket;
}

const std::vector<std::uint32_t>& derivation_ledger::bucket(const predicate_key& key) const {
    auto it = by_predicate_.find(key);
    return it == by_predicate_.end() ? empty_bucket : it->second;
}

std::int64_t derivation_ledger::find(const atom& fact) const {
    auto it = by_text_.find(fact.to_string());
    return it == by_text_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::string derivation_ledger::dump() const {
    std::vector<std::string> lines;
    lines.reserve(entries_.size());
    for (const auto& e : entries_) lines.push_back(e.fact.to_string() + ".");
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& line : lines) {
        out += line;
        out += '\n';
    }
    return out;
}

std::string derivation_ledger::dump_with_provenance() const {
    std::string out;
    for (std::size_t id = 0; id < entries_.size(); ++id) {
        const ledger_entry& e = entries_[id];
        out += e.fact.to_string() + " @" + std::to_string(e.round) + "\n";
        for (const instantiation& inst : e.derivations) {
            out += "  by clause " + std::to_string(inst.clause_index) + " <-";
            for (std::uint32_t b : inst.body_facts)
                out += " " + entries_[b].fact.to_string();
            out += '\n';
        }
    }
    return out;
}

class evaluator {
public:
    evaluator(const program& prog, const evaluation_options& options) : options_(options) {
        ledger_.program_ = prog;
    }

    derivation_ledger run() {
        seed_input_facts();
        for (std::uint32_t i = 0; i < ledger_.program_.clauses.size(); ++i)
            if (!ledger_.program_.clauses[i].is_fact()) rules_.push_back(i);

        std::uint32_t round = 1;
        while (true) {
            progress_ = false;
            for (std::uint32_t rule_index : rules_) fire_rule(rule_index, round);
            if (!progress_) break;
            ++round;
        }
        return std::move(ledger_);
    }

private:
    void seed_input_facts() {
        for (const clause& c : ledger_.program_.clauses) {
            if (!c.is_fact()) continue;
            // Named variables in a fact behave as wildcards.
            add_fact(substitute(c.head, binding{}), 0);
        }
    }

    // Returns the fact id; inserts with the given round when unseen.
    std::uint32_t add_fact(const atom& fact, std::uint32_t round) {
        std::string text = fact.to_string();
        auto it = ledger_.by_text_.find(text);
        if (it != ledger_.by_text_.end()) return it->second;
        if (round > 0 && ++ledger_.derived_count_ > options_.max_derived_facts)
            throw evaluation_limit_error(options_.max_derived_facts);
        std::uint32_t id = static_cast<std::uint32_t>(ledger_.entries_.size());
        ledger_.entries_.push_back({fact, round, {}});
        ledger_.by_text_.emplace(std::move(text), id);
        ledger_.by_predicate_[key_of(fact)].push_back(id);
        progress_ = true;
        return id;
    }

    // Semi-naive firing for one rule at one round. The position `dpos` is the
    // first body slot that uses a fact from the previous round's delta; slots
    // before it are restricted to older facts so each instantiation is
    // enumerated exactly once across the whole run.
    void fire_rule(std::uint32_t rule_index, std::uint32_t round) {
        const clause& rule = ledger_.program_.clauses[rule_index];
        std::vector<std::uint32_t> chosen(rule.body.size());
        for (std::size_t dpos = 0; dpos < rule.body.size(); ++dpos)
            match_from(rule, rule_index, 0, dpos, round, binding{}, chosen);
    }

    void match_from(const clause& rule, std::uint32_t rule_index, std::size_t pos,
                    std::size_t dpos, std::uint32_t round, const binding& bound,
                    std::vector<std::uint32_t>& chosen) {
        if (pos == rule.body.size()) {
            std::uint32_t head = add_fact(substitute(rule.head, bound), round);
            instantiation inst{rule_index, chosen};
            auto& derivations = ledger_.entries_[head].derivations;
            derivations.push_back(std::move(inst));
            progress_ = true;
            return;
        }
        const atom& pattern = rule.body[pos];
        const auto& bucket = ledger_.by_predicate_[key_of(pattern)];
        // The bucket may grow while we recurse; facts added this round are
        // filtered out by the round window anyway.
        std::size_t count = bucket.size();
        for (std::size_t i = 0; i < count; ++i) {
            std::uint32_t fact_id = bucket[i];
            std::uint32_t fact_round = ledger_.entries_[fact_id].round;
            if (pos < dpos) {
                if (fact_round + 1 >= round) continue; // older than the delta
            } else if (pos == dpos) {
                if (fact_round + 1 != round) continue; // exactly the delta
            } else {
                if (fact_round >= round) continue; // anything existing so far
            }
            auto extended = unify(pattern, ledger_.entries_[fact_id].fact, bound);
            if (!extended) continue;
            chosen[pos] = fact_id;
            match_from(rule, rule_index, pos + 1, dpos, round, *extended, chosen);
        }
    }

    evaluation_options options_;
    derivation_ledger ledger_;
    std::vector<std::uint32_t> rules_;
    bool progress_ = false;
};

derivation_ledger evaluate(const program& prog, const evaluation_options& options) {
    return evaluator(prog, options).run();
}

std::vector<std::pair<atom, binding>> query(const derivation_ledger& ledger, const atom& goal) {
    std::vector<std::pair<atom, binding>> out;
    for (std::uint32_t id : ledger.bucket(key_of(goal))) {
        const atom& fact = ledger.entry(id).fact;
        if (auto bound = unify(goal, fact, binding{})) out.emplace_back(fact, *bound);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.first.to_string() < b.first.to_string();
    });
    return out;
}

} // namespace ag
