#include "rht/gca.hpp"

#include <sstream>

namespace rht {

GeneratorSet::GeneratorSet(std::vector<Generator> gens) : gens_(std::move(gens)) {
    for (std::size_t i = 0; i < gens_.size(); ++i) {
        const auto& g = gens_[i];
        if (g.degree < 2)
            throw StructuralError("generator " + g.name + " has degree " +
                                  std::to_string(g.degree) + " (need >= 2)");
        if (!index_.emplace(g.name, i).second)
            throw StructuralError("duplicate generator name " + g.name);
        (g.odd() ? odd_ : even_).push_back(i);
    }
}

std::optional<std::size_t> GeneratorSet::find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t GeneratorSet::index(const std::string& name) const {
    auto i = find(name);
    if (!i) throw StructuralError("unknown generator " + name);
    return *i;
}

int GeneratorSet::degree(const Monomial& m) const {
    if (m.size() != gens_.size()) throw StructuralError("monomial does not match generator set");
    int d = 0;
    for (std::size_t i = 0; i < gens_.size(); ++i) d += static_cast<int>(m[i]) * gens_[i].degree;
    return d;
}

std::uint32_t Monomial::word_length() const {
    std::uint32_t w = 0;
    for (auto a : e_) w += a;
    return w;
}

bool Monomial::is_unit() const {
    for (auto a : e_)
        if (a) return false;
    return true;
}

std::size_t MonomialHash::operator()(const Monomial& m) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (auto a : m.exponents()) h = (h ^ a) * 0x100000001b3ull;
    return h;
}

SignedMonomial mul_monomials(const GeneratorSet& gens, const Monomial& a, const Monomial& b) {
    if (a.size() != gens.size() || b.size() != gens.size())
        throw StructuralError("monomials over mismatched generator sets");
    SignedMonomial r{1, a};
    // sign: count pairs (odd i in a, odd j in b) with j < i
    std::uint32_t odd_in_a_after = 0;
    for (std::size_t i : gens.odd_indices())
        if (a[i]) ++odd_in_a_after;
    unsigned swaps = 0;
    for (std::size_t i : gens.odd_indices()) {
        if (a[i]) --odd_in_a_after;
        if (b[i]) {
            if (a[i]) return {0, {}};
            swaps += odd_in_a_after;
            r.mono[i] = 1;
        }
    }
    for (std::size_t i : gens.even_indices()) r.mono[i] += b[i];
    if (swaps & 1) r.sign = -1;
    return r;
}

namespace {

void fill_even(const GeneratorSet& gens, std::size_t k, int remaining, Monomial& cur,
               std::vector<Monomial>& out) {
    const auto& ev = gens.even_indices();
    if (k == ev.size()) {
        if (remaining == 0) out.push_back(cur);
        return;
    }
    std::size_t g = ev[k];
    int d = gens.degree(g);
    for (int a = remaining / d; a >= 0; --a) {
        cur[g] = static_cast<std::uint32_t>(a);
        fill_even(gens, k + 1, remaining - a * d, cur, out);
    }
    cur[g] = 0;
}

}  // namespace

std::vector<Monomial> basis_of_degree(const GeneratorSet& gens, int n) {
    std::vector<Monomial> out;
    if (n < 0) return out;
    const auto& od = gens.odd_indices();
    if (od.size() >= 63) throw StructuralError("too many odd generators");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << od.size()); ++mask) {
        Monomial cur(gens.size());
        int used = 0;
        for (std::size_t k = 0; k < od.size(); ++k)
            if (mask >> k & 1) {
                cur[od[k]] = 1;
                used += gens.degree(od[k]);
            }
        if (used > n) continue;
        fill_even(gens, 0, n - used, cur, out);
    }
    return out;
}

std::string monomial_str(const GeneratorSet& gens, const Monomial& m) {
    std::string s;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!m[i]) continue;
        if (!s.empty()) s += "*";
        s += gens[i].name;
        if (m[i] > 1) s += "^" + std::to_string(m[i]);
    }
    return s.empty() ? "1" : s;
}

namespace {

template <class C, class F>
std::string render(const BasicElement<C>& e, F&& coeff) {
    if (e.is_zero()) return "0";
    std::string out;
    bool first = true;
    // higher-degree monomials last keeps output stable and readable
    for (auto it = e.terms().rbegin(); it != e.terms().rend(); ++it) {
        auto [neg, cs] = coeff(it->second);
        std::string mono = monomial_str(*e.gens(), it->first);
        std::string body;
        if (cs.empty())
            body = mono;
        else if (it->first.is_unit())
            body = cs;
        else
            body = cs + "*" + mono;
        if (first)
            out += neg ? "-" + body : body;
        else
            out += (neg ? " - " : " + ") + body;
        first = false;
    }
    return out;
}

}  // namespace

std::string element_str(const Element& e) {
    return render(e, [](const Rational& c) {
        Rational a = abs(c);
        return std::make_pair(sgn(c) < 0, a == 1 ? std::string() : to_string(a));
    });
}

std::string element_str(const SymElement& e, const SymbolTable& syms) {
    return render(e, [&](const Polynomial& p) {
        if (p.is_constant()) {
            Rational c = p.constant_value();
            Rational a = abs(c);
            return std::make_pair(sgn(c) < 0, a == 1 ? std::string() : to_string(a));
        }
        return std::make_pair(false, "(" + p.str(syms) + ")");
    });
}

}  // namespace rht
