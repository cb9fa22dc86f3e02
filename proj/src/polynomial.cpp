#include "rht/polynomial.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace rht {

SymbolId SymbolTable::add(std::string name) {
    if (index_.count(name)) throw StructuralError("duplicate symbol " + name);
    SymbolId id = static_cast<SymbolId>(names_.size());
    index_.emplace(name, id);
    names_.push_back(std::move(name));
    return id;
}

std::optional<SymbolId> SymbolTable::find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::uint32_t PolyMonomial::degree_in(SymbolId v) const {
    for (auto& [s, e] : factors)
        if (s == v) return e;
    return 0;
}

std::uint32_t PolyMonomial::total_degree() const {
    std::uint32_t t = 0;
    for (auto& f : factors) t += f.second;
    return t;
}

PolyMonomial operator*(const PolyMonomial& a, const PolyMonomial& b) {
    PolyMonomial r;
    r.factors.reserve(a.factors.size() + b.factors.size());
    auto i = a.factors.begin(), j = b.factors.begin();
    while (i != a.factors.end() || j != b.factors.end()) {
        if (j == b.factors.end() || (i != a.factors.end() && i->first < j->first))
            r.factors.push_back(*i++);
        else if (i == a.factors.end() || j->first < i->first)
            r.factors.push_back(*j++);
        else {
            r.factors.emplace_back(i->first, i->second + j->second);
            ++i, ++j;
        }
    }
    return r;
}

bool divides(const PolyMonomial& a, const PolyMonomial& b) {
    for (auto& [s, e] : a.factors)
        if (b.degree_in(s) < e) return false;
    return true;
}

PolyMonomial quotient(const PolyMonomial& b, const PolyMonomial& a) {
    PolyMonomial r;
    for (auto& [s, e] : b.factors) {
        auto ea = a.degree_in(s);
        if (ea > e) throw std::logic_error("monomial quotient not exact");
        if (e > ea) r.factors.emplace_back(s, e - ea);
    }
    return r;
}

PolyMonomial monomial_gcd(const PolyMonomial& a, const PolyMonomial& b) {
    PolyMonomial r;
    for (auto& [s, e] : a.factors) {
        auto eb = b.degree_in(s);
        if (eb) r.factors.emplace_back(s, std::min(e, eb));
    }
    return r;
}

bool order_less(const PolyMonomial& a, const PolyMonomial& b) {
    auto da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db;
    // lex with smaller symbol id dominant
    std::size_t i = 0, j = 0;
    while (i < a.factors.size() || j < b.factors.size()) {
        if (i == a.factors.size()) return true;
        if (j == b.factors.size()) return false;
        auto [sa, ea] = a.factors[i];
        auto [sb, eb] = b.factors[j];
        if (sa != sb) return sa > sb;
        if (ea != eb) return ea < eb;
        ++i, ++j;
    }
    return false;
}

Polynomial::Polynomial(const Rational& c) {
    if (!rht::is_zero(c)) terms_.emplace(PolyMonomial{}, c);
}

Polynomial Polynomial::variable(SymbolId v, std::uint32_t e) {
    Polynomial p;
    if (e == 0) return Polynomial(1);
    p.terms_.emplace(PolyMonomial{{{v, e}}}, Rational(1));
    return p;
}

Polynomial Polynomial::term(const Rational& c, PolyMonomial m) {
    Polynomial p;
    if (!rht::is_zero(c)) p.terms_.emplace(std::move(m), c);
    return p;
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational Polynomial::constant_value() const {
    auto it = terms_.find(PolyMonomial{});
    return it == terms_.end() ? Rational(0) : it->second;
}

std::set<SymbolId> Polynomial::variables() const {
    std::set<SymbolId> out;
    for (auto& [m, c] : terms_)
        for (auto& f : m.factors) out.insert(f.first);
    return out;
}

bool Polynomial::contains(SymbolId v) const {
    for (auto& [m, c] : terms_)
        if (m.degree_in(v)) return true;
    return false;
}

std::uint32_t Polynomial::degree_in(SymbolId v) const {
    std::uint32_t d = 0;
    for (auto& [m, c] : terms_) d = std::max(d, m.degree_in(v));
    return d;
}

void Polynomial::add_term(const PolyMonomial& m, const Rational& c) {
    if (rht::is_zero(c)) return;
    auto [it, fresh] = terms_.try_emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (rht::is_zero(it->second)) terms_.erase(it);
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    for (auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    for (auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    if (a.is_zero() || b.is_zero()) return r;
    for (auto& [ma, ca] : a.terms_)
        for (auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
    *this = *this * o;
    return *this;
}

Polynomial Polynomial::operator-() const {
    Polynomial r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

Polynomial Polynomial::pow(unsigned e) const {
    Polynomial result(1), base = *this;
    while (e) {
        if (e & 1) result *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return result;
}

PolyMonomial Polynomial::content() const {
    if (terms_.empty()) return {};
    PolyMonomial g = terms_.begin()->first;
    for (auto& [m, c] : terms_) {
        g = monomial_gcd(g, m);
        if (g.is_one()) break;
    }
    return g;
}

Polynomial Polynomial::divide_monomial(const PolyMonomial& m) const {
    Polynomial r;
    for (auto& [t, c] : terms_) r.terms_.emplace(quotient(t, m), c);
    return r;
}

std::pair<PolyMonomial, Rational> Polynomial::leading_term() const {
    if (terms_.empty()) throw std::logic_error("leading term of zero");
    auto best = terms_.begin();
    for (auto it = terms_.begin(); it != terms_.end(); ++it)
        if (order_less(best->first, it->first)) best = it;
    return *best;
}

std::optional<Polynomial> Polynomial::exact_divide(const Polynomial& g) const {
    if (g.is_zero()) throw std::invalid_argument("division by zero polynomial");
    auto [lm, lc] = g.leading_term();
    Polynomial rem = *this, q;
    // single divisor => {g} is a Groebner basis, so remainder 0 iff g | p
    while (!rem.is_zero()) {
        auto [rm, rc] = rem.leading_term();
        if (!divides(lm, rm)) return std::nullopt;
        Polynomial t = term(rc / lc, quotient(rm, lm));
        q += t;
        rem -= t * g;
    }
    return q;
}

Polynomial Polynomial::substitute(const std::map<SymbolId, Polynomial>& subs) const {
    if (subs.empty()) return *this;
    std::map<std::pair<SymbolId, std::uint32_t>, Polynomial> powers;
    auto power = [&](SymbolId v, std::uint32_t e) -> const Polynomial& {
        auto key = std::make_pair(v, e);
        auto it = powers.find(key);
        if (it != powers.end()) return it->second;
        Polynomial p = subs.at(v).pow(e);
        return powers.emplace(key, std::move(p)).first->second;
    };
    Polynomial out;
    for (auto& [m, c] : terms_) {
        PolyMonomial kept;
        Polynomial acc(c);
        for (auto& [v, e] : m.factors) {
            if (subs.count(v)) {
                acc *= power(v, e);
                if (acc.is_zero()) break;
            } else {
                kept.factors.emplace_back(v, e);
            }
        }
        if (acc.is_zero()) continue;
        for (auto& [am, ac] : acc.terms_) out.add_term(am * kept, ac);
    }
    return out;
}

Rational Polynomial::evaluate(const std::map<SymbolId, Rational>& values) const {
    Rational total = 0;
    for (auto& [m, c] : terms_) {
        Rational t = c;
        for (auto& [v, e] : m.factors) {
            auto it = values.find(v);
            if (it == values.end()) throw std::invalid_argument("unassigned symbol in evaluation");
            Rational p;
            mpz_pow_ui(p.get_num_mpz_t(), it->second.get_num_mpz_t(), e);
            mpz_pow_ui(p.get_den_mpz_t(), it->second.get_den_mpz_t(), e);
            t *= p;
        }
        total += t;
    }
    return total;
}

std::string Polynomial::str(const SymbolTable& syms) const {
    return str([&](SymbolId v) { return syms.name(v); });
}

std::string Polynomial::str(const std::function<std::string(SymbolId)>& name) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // highest order first reads better
    std::vector<const Terms::value_type*> ts;
    for (auto& t : terms_) ts.push_back(&t);
    std::sort(ts.begin(), ts.end(),
              [](auto* a, auto* b) { return order_less(b->first, a->first); });
    for (auto* t : ts) {
        Rational c = t->second;
        bool neg = sgn(c) < 0;
        if (neg) c = -c;
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        first = false;
        bool unit = c == 1 && !t->first.is_one();
        if (!unit) os << to_string(c);
        bool star = !unit;
        for (auto& [v, e] : t->first.factors) {
            if (star) os << "*";
            os << name(v);
            if (e > 1) os << "^" << e;
            star = true;
        }
    }
    return os.str();
}

}  // namespace rht
