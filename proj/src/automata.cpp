#include "wmcfg/automata.hpp"

#include "wmcfg/error.hpp"

#include <map>
#include <sstream>

namespace wmcfg {

Fsa::Fsa(std::vector<std::string> state_names, std::set<Symbol> alphabet, State initial, std::set<State> finals,
         std::vector<Transition> transitions)
    : state_names_(std::move(state_names)),
      alphabet_(std::move(alphabet)),
      initial_(initial),
      finals_(std::move(finals)),
      transitions_(std::move(transitions)),
      outgoing_(state_names_.size()) {
    std::set<std::string> names;
    for (const auto& n : state_names_)
        if (!names.insert(n).second) throw ValidationError("state name '" + n + "' used twice");
    if (initial_ >= state_names_.size()) throw ValidationError("initial state out of range");
    for (State f : finals_)
        if (f >= state_names_.size()) throw ValidationError("final state out of range");
    for (std::size_t t = 0; t < transitions_.size(); ++t) {
        const auto& tr = transitions_[t];
        if (tr.from >= state_names_.size() || tr.to >= state_names_.size())
            throw ValidationError("transition refers to an unknown state");
        for (const auto& s : tr.label)
            if (!alphabet_.contains(s)) throw ValidationError("transition label uses '" + s + "' outside the alphabet");
        outgoing_[tr.from].push_back(t);
    }
}

namespace {

// Symbol-level view: every multi-symbol label becomes a chain through fresh states.
class Exploded {
public:
    explicit Exploded(const Fsa& a) : states_(a.state_count()) {
        edges_.resize(states_);
        for (const auto& tr : a.transitions()) {
            if (tr.label.empty()) {
                edges_[tr.from].push_back({nullptr, tr.to});
                continue;
            }
            State at = tr.from;
            for (std::size_t i = 0; i < tr.label.size(); ++i) {
                State next = i + 1 == tr.label.size() ? tr.to : fresh();
                edges_[at].push_back({&*a.alphabet().find(tr.label[i]), next});
                at = next;
            }
        }
        finals_ = a.finals();
    }

    using Set = std::set<State>;

    Set closure(Set s) const {
        std::vector<State> work(s.begin(), s.end());
        while (!work.empty()) {
            State q = work.back();
            work.pop_back();
            for (const auto& e : edges_[q])
                if (e.symbol == nullptr && s.insert(e.to).second) work.push_back(e.to);
        }
        return s;
    }

    std::map<Symbol, Set> successors(const Set& s) const {
        std::map<Symbol, Set> out;
        for (State q : s)
            for (const auto& e : edges_[q])
                if (e.symbol != nullptr) out[*e.symbol].insert(e.to);
        for (auto& [sym, next] : out) next = closure(std::move(next));
        return out;
    }

    bool accepting(const Set& s) const {
        for (State q : s)
            if (finals_.contains(q)) return true;
        return false;
    }

private:
    struct Edge {
        const Symbol* symbol;   // nullptr: epsilon
        State to;
    };

    State fresh() {
        edges_.emplace_back();
        return states_++;
    }

    std::size_t states_;
    std::vector<std::vector<Edge>> edges_;
    std::set<State> finals_;
};

} // namespace

bool accepts(const Fsa& a, const Word& word) {
    Exploded x(a);
    auto current = x.closure({a.initial()});
    for (const auto& s : word) {
        if (!a.alphabet().contains(s)) return false;
        auto next = x.successors(current);
        auto it = next.find(s);
        if (it == next.end()) return false;
        current = std::move(it->second);
    }
    return x.accepting(current);
}

void for_each_word(const Fsa& a, std::size_t max_length, const PrefixFilter& viable,
                   const std::function<void(const Word&)>& visit) {
    Exploded x(a);
    Word prefix;
    std::function<void(const Exploded::Set&)> rec = [&](const Exploded::Set& current) {
        if (x.accepting(current)) visit(prefix);
        if (prefix.size() >= max_length) return;
        for (const auto& [symbol, next] : x.successors(current)) {
            prefix.push_back(symbol);
            if (!viable || viable(prefix)) rec(next);
            prefix.pop_back();
        }
    };
    rec(x.closure({a.initial()}));
}

std::set<Word> enumerate_language(const Fsa& a, std::size_t max_length) {
    std::set<Word> out;
    for_each_word(a, max_length, {}, [&](const Word& w) { out.insert(w); });
    return out;
}

bool is_deterministic(const Fsa& a) {
    for (State q = 0; q < a.state_count(); ++q) {
        std::set<Symbol> first;
        for (std::size_t t : a.outgoing(q)) {
            const auto& label = a.transitions()[t].label;
            if (label.empty()) return false;
            if (!first.insert(label.front()).second) return false;
        }
    }
    return true;
}

std::string format_fsa(const Fsa& a) {
    std::ostringstream out;
    out << "initial " << a.state_names()[a.initial()] << "\n";
    out << "final";
    for (State f : a.finals()) out << ' ' << a.state_names()[f];
    out << "\n";
    for (const auto& tr : a.transitions())
        out << a.state_names()[tr.from] << " -- " << format_word(tr.label) << " --> " << a.state_names()[tr.to] << "\n";
    return out.str();
}

} // namespace wmcfg
