#pragma once

// Free graded-commutative algebra over Q on finitely many generators.

#include "rht/polynomial.hpp"
#include "rht/rational.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rht {

struct Generator {
    std::string name;
    int degree = 0;
    bool odd() const { return degree % 2 != 0; }
    bool operator==(const Generator&) const = default;
};

class Monomial;

class GeneratorSet {
public:
    explicit GeneratorSet(std::vector<Generator> gens);

    std::size_t size() const { return gens_.size(); }
    const Generator& operator[](std::size_t i) const { return gens_[i]; }
    const std::vector<Generator>& generators() const { return gens_; }
    std::optional<std::size_t> find(const std::string& name) const;
    std::size_t index(const std::string& name) const;  // throws StructuralError
    int degree(std::size_t i) const { return gens_[i].degree; }
    bool is_odd(std::size_t i) const { return gens_[i].odd(); }
    const std::vector<std::size_t>& odd_indices() const { return odd_; }
    const std::vector<std::size_t>& even_indices() const { return even_; }
    int degree(const Monomial& m) const;
    bool operator==(const GeneratorSet& o) const { return gens_ == o.gens_; }

private:
    std::vector<Generator> gens_;
    std::vector<std::size_t> odd_, even_;
    std::map<std::string, std::size_t> index_;
};

using GeneratorSetPtr = std::shared_ptr<const GeneratorSet>;

// Exponent vector indexed by generator; odd generators carry exponent 0 or 1.
// Odd factors are implicitly ordered by generator index, which makes this the
// canonical form.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::size_t n) : e_(n, 0) {}
    explicit Monomial(std::vector<std::uint32_t> e) : e_(std::move(e)) {}
    static Monomial generator(std::size_t n, std::size_t i) {
        Monomial m(n);
        m.e_[i] = 1;
        return m;
    }

    std::size_t size() const { return e_.size(); }
    std::uint32_t operator[](std::size_t i) const { return e_[i]; }
    std::uint32_t& operator[](std::size_t i) { return e_[i]; }
    const std::vector<std::uint32_t>& exponents() const { return e_; }
    std::uint32_t word_length() const;
    bool is_unit() const;

    auto operator<=>(const Monomial&) const = default;
    bool operator==(const Monomial&) const = default;

private:
    std::vector<std::uint32_t> e_;
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const noexcept;
};

struct SignedMonomial {
    int sign = 0;  // 0 means the product vanishes
    Monomial mono;
};

SignedMonomial mul_monomials(const GeneratorSet& gens, const Monomial& a, const Monomial& b);

std::vector<Monomial> basis_of_degree(const GeneratorSet& gens, int n);

std::string monomial_str(const GeneratorSet& gens, const Monomial& m);

namespace detail {
inline std::string coeff_str(const Rational& c) { return to_string(c); }
inline bool coeff_is_one(const Rational& c) { return c == 1; }
inline bool coeff_is_neg(const Rational& c) { return sgn(c) < 0; }
}  // namespace detail

template <class C>
class BasicElement {
public:
    using Terms = std::map<Monomial, C>;

    BasicElement() = default;
    explicit BasicElement(GeneratorSetPtr g) : gens_(std::move(g)) {}
    BasicElement(GeneratorSetPtr g, const Monomial& m, C c = C(1)) : gens_(std::move(g)) {
        add_term(m, c);
    }
    static BasicElement generator(GeneratorSetPtr g, std::size_t i) {
        auto n = g->size();
        return BasicElement(std::move(g), Monomial::generator(n, i));
    }
    static BasicElement one(GeneratorSetPtr g) {
        auto n = g->size();
        return BasicElement(std::move(g), Monomial(n));
    }

    const GeneratorSetPtr& gens() const { return gens_; }
    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    C coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? C(0) : it->second;
    }

    void add_term(const Monomial& m, const C& c) {
        if (gens_ && m.size() != gens_->size())
            throw StructuralError("monomial does not match generator set");
        if (rht::is_zero(c)) return;
        auto [it, fresh] = terms_.try_emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (rht::is_zero(it->second)) terms_.erase(it);
        }
    }

    // homogeneous degree, nullopt for zero or mixed
    std::optional<int> degree() const {
        std::optional<int> d;
        for (auto& [m, c] : terms_) {
            int dm = gens_->degree(m);
            if (d && *d != dm) return std::nullopt;
            d = dm;
        }
        return d;
    }
    bool is_homogeneous(int n) const {
        for (auto& [m, c] : terms_)
            if (gens_->degree(m) != n) return false;
        return true;
    }

    BasicElement& operator+=(const BasicElement& o) {
        check(o);
        for (auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    BasicElement& operator-=(const BasicElement& o) {
        check(o);
        for (auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend BasicElement operator+(BasicElement a, const BasicElement& b) { return a += b; }
    friend BasicElement operator-(BasicElement a, const BasicElement& b) { return a -= b; }
    BasicElement operator-() const {
        BasicElement r = *this;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }
    BasicElement scaled(const C& q) const {
        BasicElement r(gens_);
        if (rht::is_zero(q)) return r;
        for (auto& [m, c] : terms_) r.add_term(m, c * q);
        return r;
    }
    friend BasicElement operator*(const BasicElement& a, const BasicElement& b) {
        a.check(b);
        BasicElement r(a.gens_ ? a.gens_ : b.gens_);
        for (auto& [ma, ca] : a.terms_)
            for (auto& [mb, cb] : b.terms_) {
                auto sm = mul_monomials(*r.gens_, ma, mb);
                if (sm.sign == 0) continue;
                C c = ca * cb;
                if (sm.sign < 0) c = -c;
                r.add_term(sm.mono, c);
            }
        return r;
    }
    bool operator==(const BasicElement& o) const { return terms_ == o.terms_; }

    BasicElement pow(unsigned e) const {
        BasicElement r = one(gens_);
        for (unsigned i = 0; i < e; ++i) r = r * *this;
        return r;
    }

    template <class F>
    auto map_coefficients(F&& f) const {
        using D = decltype(f(std::declval<const C&>()));
        BasicElement<D> r(gens_);
        for (auto& [m, c] : terms_) r.add_term(m, f(c));
        return r;
    }

private:
    void check(const BasicElement& o) const {
        if (gens_ && o.gens_ && gens_ != o.gens_ && !(*gens_ == *o.gens_))
            throw StructuralError("elements over different generator sets");
    }

    GeneratorSetPtr gens_;
    Terms terms_;
};

using Element = BasicElement<Rational>;
using SymElement = BasicElement<Polynomial>;

std::string element_str(const Element& e);
std::string element_str(const SymElement& e, const SymbolTable& syms);

inline SymElement to_symbolic(const Element& e) {
    return e.map_coefficients([](const Rational& c) { return Polynomial(c); });
}

// Algebra map on generators, extended multiplicatively: m -> prod f(g)^a in
// canonical factor order.  Images live over `target`.
template <class C>
BasicElement<C> apply_map(const Element& e, const std::vector<BasicElement<C>>& images,
                          const GeneratorSetPtr& target) {
    const auto& src = *e.gens();
    if (images.size() != src.size()) throw StructuralError("map does not cover every generator");
    std::map<std::pair<std::size_t, std::uint32_t>, BasicElement<C>> powers;
    auto power = [&](std::size_t g, std::uint32_t a) -> const BasicElement<C>& {
        auto key = std::make_pair(g, a);
        auto it = powers.find(key);
        if (it != powers.end()) return it->second;
        BasicElement<C> p = BasicElement<C>::one(target);
        for (std::uint32_t i = 0; i < a; ++i) p = p * images[g];
        return powers.emplace(key, std::move(p)).first->second;
    };
    BasicElement<C> out(target);
    for (auto& [m, c] : e.terms()) {
        BasicElement<C> acc = BasicElement<C>::one(target);
        for (std::size_t g : src.even_indices())
            if (m[g]) {
                acc = acc * power(g, m[g]);
                if (acc.is_zero()) break;
            }
        if (!acc.is_zero())
            for (std::size_t g : src.odd_indices())
                if (m[g]) {
                    acc = acc * images[g];
                    if (acc.is_zero()) break;
                }
        out += acc.scaled(C(c));
    }
    return out;
}

}  // namespace rht
