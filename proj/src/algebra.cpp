#include "wmcfg/algebra.hpp"

#include "wmcfg/error.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>

namespace wmcfg {

// ---------------------------------------------------------------------------
// ExtendedRational

ExtendedRational ExtendedRational::positive_infinity() {
    ExtendedRational r;
    r.infinity_ = 1;
    return r;
}

ExtendedRational ExtendedRational::negative_infinity() {
    ExtendedRational r;
    r.infinity_ = -1;
    return r;
}

bool operator==(const ExtendedRational& a, const ExtendedRational& b) {
    if (a.infinity_ != b.infinity_) return false;
    return a.infinity_ != 0 || a.finite_ == b.finite_;
}

std::strong_ordering operator<=>(const ExtendedRational& a, const ExtendedRational& b) {
    if (a.infinity_ != b.infinity_) return a.infinity_ <=> b.infinity_;
    if (a.infinity_ != 0) return std::strong_ordering::equal;
    int c = cmp(a.finite_, b.finite_);
    return c <=> 0;
}

ExtendedRational operator+(const ExtendedRational& a, const ExtendedRational& b) {
    if (a.infinity_ != 0 && b.infinity_ != 0 && a.infinity_ != b.infinity_)
        throw UsageError("inf + -inf is undefined");
    if (a.infinity_ != 0) return a;
    if (b.infinity_ != 0) return b;
    return ExtendedRational(Rational(a.finite_ + b.finite_));
}

std::string ExtendedRational::to_string() const {
    if (infinity_ > 0) return "inf";
    if (infinity_ < 0) return "-inf";
    return finite_.get_str();
}

// ---------------------------------------------------------------------------
// Literal helpers

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(),
                                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

Natural parse_integer(std::string_view s) {
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!is_digits(s)) throw ParseError("malformed number '" + std::string(s) + "'");
    Natural n(std::string(s), 10);
    return negative ? Natural(-n) : n;
}

} // namespace

Rational parse_rational(std::string_view literal) {
    auto s = trim(literal);
    if (s.empty()) throw ParseError("empty weight literal");
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        Natural num = parse_integer(s.substr(0, slash));
        auto den_text = s.substr(slash + 1);
        if (!is_digits(den_text)) throw ParseError("malformed denominator in '" + std::string(s) + "'");
        Natural den(std::string(den_text), 10);
        if (den == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
        Rational q(num, den);
        q.canonicalize();
        return q;
    }
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        auto int_part = s.substr(0, dot);
        auto frac_part = s.substr(dot + 1);
        bool negative = !int_part.empty() && int_part.front() == '-';
        if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+'))
            int_part.remove_prefix(1);
        if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !is_digits(int_part)) ||
            (!frac_part.empty() && !is_digits(frac_part)))
            throw ParseError("malformed decimal '" + std::string(s) + "'");
        Natural scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac_part.size());
        Natural whole = int_part.empty() ? Natural(0) : Natural(std::string(int_part), 10);
        Natural frac = frac_part.empty() ? Natural(0) : Natural(std::string(frac_part), 10);
        Rational q(Natural(whole * scale + frac), scale);
        q.canonicalize();
        return negative ? Rational(-q) : q;
    }
    return Rational(parse_integer(s));
}

// ---------------------------------------------------------------------------
// Shipped algebras

namespace {

const Rational& as_rational(const Carrier& c) {
    if (auto* q = std::get_if<Rational>(&c)) return *q;
    throw UsageError("carrier value is not a rational");
}

const ExtendedRational& as_extended(const Carrier& c) {
    if (auto* q = std::get_if<ExtendedRational>(&c)) return *q;
    throw UsageError("carrier value is not an extended rational");
}

bool in_unit_interval(const Rational& q) { return q >= 0 && q <= 1; }

class BooleanAlgebra final : public Bimonoid {
public:
    std::string name() const override { return "boolean"; }
    Carrier zero() const override { return false; }
    Carrier one() const override { return true; }
    Carrier plus(const Carrier& a, const Carrier& b) const override {
        return std::get<bool>(a) || std::get<bool>(b);
    }
    Carrier times(const Carrier& a, const Carrier& b) const override {
        return std::get<bool>(a) && std::get<bool>(b);
    }
    bool contains(const Carrier& v) const override { return std::holds_alternative<bool>(v); }
    Carrier parse(std::string_view literal) const override {
        auto s = trim(literal);
        if (s == "true" || s == "1") return true;
        if (s == "false" || s == "0") return false;
        throw ParseError("boolean weight must be true/false, got '" + std::string(s) + "'");
    }
    std::string format(const Carrier& v) const override { return std::get<bool>(v) ? "true" : "false"; }
};

/// Algebras over a sub-interval of the rationals, differing in + and *.
class RationalAlgebra : public Bimonoid {
public:
    Carrier zero() const override { return Rational(0); }
    Carrier one() const override { return Rational(1); }
    bool contains(const Carrier& v) const override {
        auto* q = std::get_if<Rational>(&v);
        return q != nullptr && in_carrier(*q);
    }
    Carrier parse(std::string_view literal) const override {
        Rational q = parse_rational(literal);
        if (!in_carrier(q))
            throw ValidationError("weight " + q.get_str() + " lies outside the carrier of " + name());
        return q;
    }
    std::string format(const Carrier& v) const override { return as_rational(v).get_str(); }

protected:
    virtual bool in_carrier(const Rational& q) const = 0;
};

class ProbabilityAlgebra final : public RationalAlgebra {
public:
    std::string name() const override { return "probability"; }
    Carrier plus(const Carrier& a, const Carrier& b) const override {
        return Rational(as_rational(a) + as_rational(b));
    }
    Carrier times(const Carrier& a, const Carrier& b) const override {
        return Rational(as_rational(a) * as_rational(b));
    }

protected:
    bool in_carrier(const Rational& q) const override { return q >= 0; }
};

class ViterbiAlgebra final : public RationalAlgebra {
public:
    std::string name() const override { return "viterbi"; }
    Carrier plus(const Carrier& a, const Carrier& b) const override {
        return std::max(as_rational(a), as_rational(b));
    }
    Carrier times(const Carrier& a, const Carrier& b) const override {
        return Rational(as_rational(a) * as_rational(b));
    }

protected:
    bool in_carrier(const Rational& q) const override { return in_unit_interval(q); }
};

/// Pr1: a (+) b = a + b - a*b.
class Pr1Algebra final : public RationalAlgebra {
public:
    std::string name() const override { return "pr1"; }
    Carrier plus(const Carrier& a, const Carrier& b) const override {
        const auto& x = as_rational(a);
        const auto& y = as_rational(b);
        return Rational(x + y - x * y);
    }
    Carrier times(const Carrier& a, const Carrier& b) const override {
        return Rational(as_rational(a) * as_rational(b));
    }

protected:
    bool in_carrier(const Rational& q) const override { return in_unit_interval(q); }
};

/// Pr2: a (+) b = min(a + b, 1).
class Pr2Algebra final : public RationalAlgebra {
public:
    std::string name() const override { return "pr2"; }
    Carrier plus(const Carrier& a, const Carrier& b) const override {
        Rational s = as_rational(a) + as_rational(b);
        return s > 1 ? Rational(1) : s;
    }
    Carrier times(const Carrier& a, const Carrier& b) const override {
        return Rational(as_rational(a) * as_rational(b));
    }

protected:
    bool in_carrier(const Rational& q) const override { return in_unit_interval(q); }
};

/// Algebras over the rationals extended with one infinity.
class ExtendedAlgebra : public Bimonoid {
public:
    bool contains(const Carrier& v) const override {
        auto* q = std::get_if<ExtendedRational>(&v);
        return q != nullptr && in_carrier(*q);
    }
    Carrier parse(std::string_view literal) const override {
        auto s = trim(literal);
        ExtendedRational value;
        if (s == "inf" || s == "+inf")
            value = ExtendedRational::positive_infinity();
        else if (s == "-inf")
            value = ExtendedRational::negative_infinity();
        else
            value = ExtendedRational(parse_rational(s));
        if (!in_carrier(value))
            throw ValidationError("weight " + value.to_string() + " lies outside the carrier of " + name());
        return value;
    }
    std::string format(const Carrier& v) const override { return as_extended(v).to_string(); }

protected:
    virtual bool in_carrier(const ExtendedRational& q) const = 0;
};

/// (Q u {inf}, min, +, inf, 0)
class TropicalSemiring final : public ExtendedAlgebra {
public:
    std::string name() const override { return "tropical"; }
    Carrier zero() const override { return ExtendedRational::positive_infinity(); }
    Carrier one() const override { return ExtendedRational(Rational(0)); }
    Carrier plus(const Carrier& a, const Carrier& b) const override {
        return std::min(as_extended(a), as_extended(b));
    }
    Carrier times(const Carrier& a, const Carrier& b) const override {
        return as_extended(a) + as_extended(b);
    }

protected:
    bool in_carrier(const ExtendedRational& q) const override { return !q.is_negative_infinity(); }
};

/// (Q u {-inf}, max, +, -inf, 0)
class ArcticSemiring final : public ExtendedAlgebra {
public:
    std::string name() const override { return "arctic"; }
    Carrier zero() const override { return ExtendedRational::negative_infinity(); }
    Carrier one() const override { return ExtendedRational(Rational(0)); }
    Carrier plus(const Carrier& a, const Carrier& b) const override {
        return std::max(as_extended(a), as_extended(b));
    }
    Carrier times(const Carrier& a, const Carrier& b) const override {
        return as_extended(a) + as_extended(b);
    }

protected:
    bool in_carrier(const ExtendedRational& q) const override { return !q.is_positive_infinity(); }
};

/// (Q>=0 u {inf}, +, min, 0, inf)
class TropicalBimonoid final : public ExtendedAlgebra {
public:
    std::string name() const override { return "tropical-bimonoid"; }
    Carrier zero() const override { return ExtendedRational(Rational(0)); }
    Carrier one() const override { return ExtendedRational::positive_infinity(); }
    Carrier plus(const Carrier& a, const Carrier& b) const override {
        return as_extended(a) + as_extended(b);
    }
    Carrier times(const Carrier& a, const Carrier& b) const override {
        return std::min(as_extended(a), as_extended(b));
    }

protected:
    bool in_carrier(const ExtendedRational& q) const override {
        return q.is_positive_infinity() || (q.is_finite() && q.finite() >= 0);
    }
};

/// (Q<=0 u {-inf}, +, max, 0, -inf)
class ArcticBimonoid final : public ExtendedAlgebra {
public:
    std::string name() const override { return "arctic-bimonoid"; }
    Carrier zero() const override { return ExtendedRational(Rational(0)); }
    Carrier one() const override { return ExtendedRational::negative_infinity(); }
    Carrier plus(const Carrier& a, const Carrier& b) const override {
        return as_extended(a) + as_extended(b);
    }
    Carrier times(const Carrier& a, const Carrier& b) const override {
        return std::max(as_extended(a), as_extended(b));
    }

protected:
    bool in_carrier(const ExtendedRational& q) const override {
        return q.is_negative_infinity() || (q.is_finite() && q.finite() <= 0);
    }
};

/// (N, lcm, gcd, 1, 0)
class LcmGcdLattice final : public Bimonoid {
public:
    std::string name() const override { return "lcm-gcd"; }
    Carrier zero() const override { return Natural(1); }
    Carrier one() const override { return Natural(0); }
    Carrier plus(const Carrier& a, const Carrier& b) const override {
        Natural r;
        mpz_lcm(r.get_mpz_t(), std::get<Natural>(a).get_mpz_t(), std::get<Natural>(b).get_mpz_t());
        return r;
    }
    Carrier times(const Carrier& a, const Carrier& b) const override {
        Natural r;
        mpz_gcd(r.get_mpz_t(), std::get<Natural>(a).get_mpz_t(), std::get<Natural>(b).get_mpz_t());
        return r;
    }
    bool contains(const Carrier& v) const override {
        auto* n = std::get_if<Natural>(&v);
        return n != nullptr && *n >= 0;
    }
    Carrier parse(std::string_view literal) const override {
        Natural n = parse_integer(trim(literal));
        if (n < 0) throw ValidationError("lcm-gcd weights are natural numbers, got " + n.get_str());
        return n;
    }
    std::string format(const Carrier& v) const override { return std::get<Natural>(v).get_str(); }
};

class FiniteLattice final : public Bimonoid {
public:
    FiniteLattice(std::string name, std::vector<std::string> elements,
                  std::vector<std::vector<std::size_t>> join, std::vector<std::vector<std::size_t>> meet,
                  std::size_t bottom, std::size_t top)
        : name_(std::move(name)), elements_(std::move(elements)), join_(std::move(join)),
          meet_(std::move(meet)), bottom_(bottom), top_(top) {}

    std::string name() const override { return name_; }
    Carrier zero() const override { return LatticeElement{bottom_}; }
    Carrier one() const override { return LatticeElement{top_}; }
    Carrier plus(const Carrier& a, const Carrier& b) const override {
        return LatticeElement{join_.at(index(a)).at(index(b))};
    }
    Carrier times(const Carrier& a, const Carrier& b) const override {
        return LatticeElement{meet_.at(index(a)).at(index(b))};
    }
    bool contains(const Carrier& v) const override {
        auto* e = std::get_if<LatticeElement>(&v);
        return e != nullptr && e->index < elements_.size();
    }
    Carrier parse(std::string_view literal) const override {
        auto s = trim(literal);
        auto it = std::find(elements_.begin(), elements_.end(), s);
        if (it == elements_.end())
            throw ValidationError("'" + std::string(s) + "' is not an element of lattice " + name_);
        return LatticeElement{static_cast<std::size_t>(it - elements_.begin())};
    }
    std::string format(const Carrier& v) const override { return elements_.at(index(v)); }

    const std::vector<std::string>& elements() const { return elements_; }

private:
    static std::size_t index(const Carrier& c) { return std::get<LatticeElement>(c).index; }

    std::string name_;
    std::vector<std::string> elements_;
    std::vector<std::vector<std::size_t>> join_;
    std::vector<std::vector<std::size_t>> meet_;
    std::size_t bottom_;
    std::size_t top_;
};

const std::map<std::string, AlgebraPtr, std::less<>>& shipped_algebras() {
    static const std::map<std::string, AlgebraPtr, std::less<>> table = [] {
        std::map<std::string, AlgebraPtr, std::less<>> m;
        for (AlgebraPtr a : std::vector<AlgebraPtr>{
                 std::make_shared<BooleanAlgebra>(), std::make_shared<ProbabilityAlgebra>(),
                 std::make_shared<ViterbiAlgebra>(), std::make_shared<TropicalSemiring>(),
                 std::make_shared<ArcticSemiring>(), std::make_shared<Pr1Algebra>(),
                 std::make_shared<Pr2Algebra>(), std::make_shared<TropicalBimonoid>(),
                 std::make_shared<ArcticBimonoid>(), std::make_shared<LcmGcdLattice>()})
            m.emplace(a->name(), a);
        return m;
    }();
    return table;
}

void require_same_algebra(const Weight& a, const Weight& b) {
    if (a.algebra() != b.algebra())
        throw UsageError("mixed algebras: " + a.algebra()->name() + " and " + b.algebra()->name());
}

} // namespace

// ---------------------------------------------------------------------------
// Weight

Weight::Weight(AlgebraPtr algebra, Carrier value) : algebra_(std::move(algebra)), value_(std::move(value)) {
    if (!algebra_) throw UsageError("weight without algebra");
    if (!algebra_->contains(value_)) throw ValidationError("value outside the carrier of " + algebra_->name());
}

Weight Weight::zero(const AlgebraPtr& algebra) { return Weight(algebra, algebra->zero()); }
Weight Weight::one(const AlgebraPtr& algebra) { return Weight(algebra, algebra->one()); }

bool Weight::is_zero() const { return value_ == algebra_->zero(); }
bool Weight::is_one() const { return value_ == algebra_->one(); }

std::string Weight::to_string() const { return algebra_->format(value_); }

bool operator==(const Weight& a, const Weight& b) {
    return a.algebra_ == b.algebra_ && a.value_ == b.value_;
}

Weight plus(const Weight& a, const Weight& b) {
    require_same_algebra(a, b);
    return Weight(a.algebra(), a.algebra()->plus(a.value(), b.value()));
}

Weight times(const Weight& a, const Weight& b) {
    require_same_algebra(a, b);
    return Weight(a.algebra(), a.algebra()->times(a.value(), b.value()));
}

Weight sum(const AlgebraPtr& algebra, std::span<const Weight> family) {
    Weight total = Weight::zero(algebra);
    for (const auto& w : family) total = plus(total, w);
    return total;
}

Weight product(const AlgebraPtr& algebra, std::span<const Weight> family) {
    Weight total = Weight::one(algebra);
    for (const auto& w : family) total = times(total, w);
    return total;
}

Weight parse_weight(const AlgebraPtr& algebra, std::string_view literal) {
    return Weight(algebra, algebra->parse(literal));
}

const std::vector<std::string>& shipped_algebra_names() {
    static const std::vector<std::string> names = {
        "boolean", "probability", "viterbi",          "tropical",        "arctic",
        "pr1",     "pr2",         "tropical-bimonoid", "arctic-bimonoid", "lcm-gcd"};
    return names;
}

AlgebraPtr algebra_by_name(std::string_view name) {
    const auto& table = shipped_algebras();
    if (auto it = table.find(name); it != table.end()) return it->second;
    if (name == "language" || name == "formal-languages" || name == "lcp" ||
        name == "longest-common-prefix")
        throw UsageError("algebra '" + std::string(name) +
                         "' is not commutative and cannot weight a grammar");
    throw UsageError("unknown algebra '" + std::string(name) + "'");
}

AlgebraPtr make_finite_lattice(std::string name, std::vector<std::string> elements,
                               std::vector<std::vector<std::size_t>> join,
                               std::vector<std::vector<std::size_t>> meet) {
    const std::size_t n = elements.size();
    if (n == 0) throw ValidationError("lattice " + name + " has no elements");
    auto check_table = [&](const auto& table, const char* what) {
        if (table.size() != n) throw ValidationError(std::string(what) + " table has wrong size");
        for (const auto& row : table) {
            if (row.size() != n) throw ValidationError(std::string(what) + " table has wrong size");
            for (auto v : row)
                if (v >= n) throw ValidationError(std::string(what) + " table refers to unknown element");
        }
        for (std::size_t a = 0; a < n; ++a)
            if (table[a][a] != a) throw ValidationError(std::string(what) + " is not idempotent");
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                if (table[a][b] != table[b][a])
                    throw ValidationError(std::string(what) + " is not commutative");
                for (std::size_t c = 0; c < n; ++c)
                    if (table[table[a][b]][c] != table[a][table[b][c]])
                        throw ValidationError(std::string(what) + " is not associative");
            }
    };
    check_table(join, "join");
    check_table(meet, "meet");

    auto neutral = [&](const auto& table) -> std::optional<std::size_t> {
        for (std::size_t e = 0; e < n; ++e) {
            bool ok = true;
            for (std::size_t x = 0; x < n && ok; ++x) ok = table[e][x] == x;
            if (ok) return e;
        }
        return std::nullopt;
    };
    auto bottom = neutral(join);
    auto top = neutral(meet);
    if (!bottom) throw ValidationError("lattice " + name + " has no bottom element");
    if (!top) throw ValidationError("lattice " + name + " has no top element");
    for (std::size_t x = 0; x < n; ++x)
        if (meet[*bottom][x] != *bottom)
            throw ValidationError("bottom of lattice " + name + " does not annihilate meet");
    return std::make_shared<FiniteLattice>(std::move(name), std::move(elements), std::move(join),
                                           std::move(meet), *bottom, *top);
}

AlgebraPtr parse_lattice(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::string name;
    std::vector<std::string> elements;
    std::vector<std::vector<std::size_t>> join, meet;
    std::vector<std::vector<std::size_t>>* current = nullptr;

    auto element_index = [&](const std::string& e) {
        auto it = std::find(elements.begin(), elements.end(), e);
        if (it == elements.end()) throw ParseError("unknown lattice element '" + e + "'", line_no);
        return static_cast<std::size_t>(it - elements.begin());
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream words(line);
        std::string head;
        if (!(words >> head)) continue;
        if (head == "lattice") {
            if (!(words >> name)) throw ParseError("lattice needs a name", line_no);
        } else if (head == "elements") {
            for (std::string e; words >> e;) elements.push_back(e);
        } else if (head == "join") {
            current = &join;
        } else if (head == "meet") {
            current = &meet;
        } else {
            if (current == nullptr) throw ParseError("unexpected '" + head + "'", line_no);
            std::vector<std::size_t> row{element_index(head)};
            for (std::string e; words >> e;) row.push_back(element_index(e));
            current->push_back(std::move(row));
        }
    }
    if (name.empty()) throw ParseError("missing 'lattice <name>' line");
    return make_finite_lattice(std::move(name), std::move(elements), std::move(join), std::move(meet));
}

std::vector<std::string> lattice_elements(const Bimonoid& algebra) {
    if (auto* lattice = dynamic_cast<const FiniteLattice*>(&algebra)) return lattice->elements();
    return {};
}

} // namespace wmcfg
