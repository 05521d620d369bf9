#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace wmcfg {

using Rational = mpq_class;
using Natural = mpz_class;

/// A rational number or one of the two infinities.
class ExtendedRational {
public:
    ExtendedRational() = default;
    ExtendedRational(Rational value) : finite_(std::move(value)) { finite_.canonicalize(); }

    static ExtendedRational positive_infinity();
    static ExtendedRational negative_infinity();

    bool is_finite() const noexcept { return infinity_ == 0; }
    bool is_positive_infinity() const noexcept { return infinity_ > 0; }
    bool is_negative_infinity() const noexcept { return infinity_ < 0; }

    /// Finite part; only meaningful when is_finite().
    const Rational& finite() const noexcept { return finite_; }

    friend bool operator==(const ExtendedRational& a, const ExtendedRational& b);
    friend std::strong_ordering operator<=>(const ExtendedRational& a, const ExtendedRational& b);

    /// Sum with the convention x + inf = inf; inf + -inf is rejected.
    friend ExtendedRational operator+(const ExtendedRational& a, const ExtendedRational& b);

    std::string to_string() const;

private:
    int infinity_ = 0;
    Rational finite_;
};

/// Element of a user-declared finite lattice, identified by its index in the element list.
struct LatticeElement {
    std::size_t index = 0;
    friend bool operator==(const LatticeElement&, const LatticeElement&) = default;
};

using Carrier = std::variant<bool, Rational, ExtendedRational, Natural, LatticeElement>;

/// A complete commutative strong bimonoid (A, +, *, 0, 1).
///
/// Both operations are commutative and associative, 0 is neutral for + and
/// annihilates *, 1 is neutral for *. Distributivity is not assumed anywhere.
/// Infinitary sums are only ever taken over finite families, where they
/// coincide with iterated +.
class Bimonoid {
public:
    virtual ~Bimonoid() = default;

    virtual std::string name() const = 0;
    virtual Carrier zero() const = 0;
    virtual Carrier one() const = 0;
    virtual Carrier plus(const Carrier& a, const Carrier& b) const = 0;
    virtual Carrier times(const Carrier& a, const Carrier& b) const = 0;

    /// True iff the value lies in the declared carrier set.
    virtual bool contains(const Carrier& value) const = 0;

    /// Parses a weight literal; throws ParseError or ValidationError.
    virtual Carrier parse(std::string_view literal) const = 0;
    virtual std::string format(const Carrier& value) const = 0;
};

using AlgebraPtr = std::shared_ptr<const Bimonoid>;

/// A carrier value tagged with the algebra it belongs to.
class Weight {
public:
    Weight(AlgebraPtr algebra, Carrier value);

    static Weight zero(const AlgebraPtr& algebra);
    static Weight one(const AlgebraPtr& algebra);

    const AlgebraPtr& algebra() const noexcept { return algebra_; }
    const Carrier& value() const noexcept { return value_; }

    bool is_zero() const;
    bool is_one() const;

    std::string to_string() const;

    /// Equal iff both belong to the same algebra and carry the same value.
    friend bool operator==(const Weight& a, const Weight& b);

private:
    AlgebraPtr algebra_;
    Carrier value_;
};

Weight plus(const Weight& a, const Weight& b);
Weight times(const Weight& a, const Weight& b);

/// Sum of a finite family; the empty family sums to zero of `algebra`.
Weight sum(const AlgebraPtr& algebra, std::span<const Weight> family);

/// Product of a finite family; the empty family multiplies to one of `algebra`.
Weight product(const AlgebraPtr& algebra, std::span<const Weight> family);

Weight parse_weight(const AlgebraPtr& algebra, std::string_view literal);

/// Names of the built-in algebras, in a fixed order.
const std::vector<std::string>& shipped_algebra_names();

/// Looks up a built-in algebra. Throws UsageError for unknown names and for
/// the known non-commutative algebras, which are not supported.
AlgebraPtr algebra_by_name(std::string_view name);

/// Builds a finite lattice from explicit join and meet tables
/// (join[i][j] = element index of elements[i] v elements[j]).
/// The bottom element becomes the bimonoid zero and the top element the one.
AlgebraPtr make_finite_lattice(std::string name, std::vector<std::string> elements,
                               std::vector<std::vector<std::size_t>> join,
                               std::vector<std::vector<std::size_t>> meet);

/// Parses the lattice table format:
///
///     lattice <name>
///     elements e1 e2 ... en
///     join
///     <n rows of n element names>
///     meet
///     <n rows of n element names>
AlgebraPtr parse_lattice(std::string_view text);

/// Element names of a finite lattice algebra, empty for other algebras.
std::vector<std::string> lattice_elements(const Bimonoid& algebra);

/// Exact rational parsing of `p/q`, integers and finite decimals.
Rational parse_rational(std::string_view literal);

} // namespace wmcfg
