#pragma once

#include "rht/rational.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace rht {

using SymbolId = std::uint32_t;

class SymbolTable {
public:
    SymbolId add(std::string name);
    const std::string& name(SymbolId id) const { return names_.at(id); }
    std::size_t size() const { return names_.size(); }
    std::optional<SymbolId> find(const std::string& name) const;

private:
    std::vector<std::string> names_;
    std::map<std::string, SymbolId> index_;
};

// product of symbols; factors sorted by id, exponents > 0
struct PolyMonomial {
    std::vector<std::pair<SymbolId, std::uint32_t>> factors;

    bool is_one() const { return factors.empty(); }
    std::uint32_t degree_in(SymbolId v) const;
    std::uint32_t total_degree() const;
    auto operator<=>(const PolyMonomial&) const = default;
    bool operator==(const PolyMonomial&) const = default;
};

PolyMonomial operator*(const PolyMonomial& a, const PolyMonomial& b);
bool divides(const PolyMonomial& a, const PolyMonomial& b);
PolyMonomial quotient(const PolyMonomial& b, const PolyMonomial& a);  // b / a, requires divides(a,b)
PolyMonomial monomial_gcd(const PolyMonomial& a, const PolyMonomial& b);
// graded lex; a real monomial order, used for division
bool order_less(const PolyMonomial& a, const PolyMonomial& b);

class Polynomial {
public:
    using Terms = std::map<PolyMonomial, Rational>;

    Polynomial() = default;
    Polynomial(const Rational& c);  // NOLINT: constants convert implicitly
    Polynomial(long c) : Polynomial(Rational(c)) {}
    static Polynomial variable(SymbolId v, std::uint32_t e = 1);
    static Polynomial term(const Rational& c, PolyMonomial m);

    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_value() const;  // the degree-0 coefficient
    bool is_monomial() const { return terms_.size() == 1; }
    std::set<SymbolId> variables() const;
    bool contains(SymbolId v) const;
    std::uint32_t degree_in(SymbolId v) const;

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Polynomial& o);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    Polynomial operator-() const;
    bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }

    Polynomial pow(unsigned e) const;
    void add_term(const PolyMonomial& m, const Rational& c);

    PolyMonomial content() const;  // gcd of all monomials
    Polynomial divide_monomial(const PolyMonomial& m) const;
    std::optional<Polynomial> exact_divide(const Polynomial& g) const;
    std::pair<PolyMonomial, Rational> leading_term() const;

    Polynomial substitute(const std::map<SymbolId, Polynomial>& subs) const;
    Rational evaluate(const std::map<SymbolId, Rational>& values) const;

    std::string str(const SymbolTable& syms) const;
    std::string str(const std::function<std::string(SymbolId)>& name) const;

private:
    Terms terms_;
};

inline bool is_zero(const Polynomial& p) { return p.is_zero(); }

}  // namespace rht
