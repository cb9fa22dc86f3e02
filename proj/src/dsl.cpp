#include "rht/dsl.hpp"

#include "rht/endo.hpp"

#include <cctype>
#include <memory>
#include <sstream>

namespace rht {

ParseError::ParseError(int l, int c, const std::string& msg)
    : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), col(c) {}

namespace {

enum class Tok { Ident, Int, Sym, End };

struct Token {
    Tok kind;
    std::string text;
    int col;
};

std::vector<Token> lex(const std::string& s, int line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char ch = s[i];
        int col = static_cast<int>(i) + 1;
        if (ch == '#') break;
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\''))
                ++j;
            out.push_back({Tok::Ident, s.substr(i, j - i), col});
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            out.push_back({Tok::Int, s.substr(i, j - i), col});
            i = j;
        } else if (s.compare(i, 2, "..") == 0) {
            out.push_back({Tok::Sym, "..", col});
            i += 2;
        } else if (std::string("+-*/^()=:,").find(ch) != std::string::npos) {
            out.push_back({Tok::Sym, std::string(1, ch), col});
            ++i;
        } else {
            throw ParseError(line, col, std::string("unexpected character '") + ch + "'");
        }
    }
    out.push_back({Tok::End, "", static_cast<int>(s.size()) + 1});
    return out;
}

struct Node {
    enum Kind { Num, Ident, Add, Sub, Mul, Div, Pow, Neg } kind;
    Integer num;
    std::string ident;
    std::unique_ptr<Node> a, b;
    int col = 0;
};
using NodeP = std::unique_ptr<Node>;

class ExprParser {
public:
    ExprParser(const std::vector<Token>& t, std::size_t pos, int line) : t_(t), p_(pos), line_(line) {}

    NodeP parse() { return sum(); }
    std::size_t pos() const { return p_; }

private:
    const Token& peek() const { return t_[p_]; }
    bool is(const char* s) const { return peek().kind == Tok::Sym && peek().text == s; }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, peek().col, msg); }

    NodeP make(Node::Kind k, NodeP a, NodeP b, int col) {
        auto n = std::make_unique<Node>();
        n->kind = k;
        n->a = std::move(a);
        n->b = std::move(b);
        n->col = col;
        return n;
    }

    NodeP sum() {
        NodeP lhs = product();
        while (is("+") || is("-")) {
            int col = peek().col;
            auto k = peek().text == "+" ? Node::Add : Node::Sub;
            ++p_;
            lhs = make(k, std::move(lhs), product(), col);
        }
        return lhs;
    }
    NodeP product() {
        NodeP lhs = unary();
        while (is("*") || is("/")) {
            int col = peek().col;
            auto k = peek().text == "*" ? Node::Mul : Node::Div;
            ++p_;
            lhs = make(k, std::move(lhs), unary(), col);
        }
        return lhs;
    }
    NodeP unary() {
        if (is("-")) {
            int col = peek().col;
            ++p_;
            return make(Node::Neg, unary(), nullptr, col);
        }
        if (is("+")) {
            ++p_;
            return unary();
        }
        return power();
    }
    NodeP power() {
        NodeP base = primary();
        if (is("^")) {
            int col = peek().col;
            ++p_;
            // right-associative; exponent may carry a sign only inside parentheses
            NodeP ex = power();
            return make(Node::Pow, std::move(base), std::move(ex), col);
        }
        return base;
    }
    NodeP primary() {
        const Token& tk = peek();
        if (tk.kind == Tok::Int) {
            auto n = std::make_unique<Node>();
            n->kind = Node::Num;
            n->num = Integer(tk.text);
            n->col = tk.col;
            ++p_;
            return n;
        }
        if (tk.kind == Tok::Ident) {
            auto n = std::make_unique<Node>();
            n->kind = Node::Ident;
            n->ident = tk.text;
            n->col = tk.col;
            ++p_;
            return n;
        }
        if (is("(")) {
            ++p_;
            NodeP e = sum();
            if (!is(")")) fail("expected ')'");
            ++p_;
            return e;
        }
        if (tk.kind == Tok::End) fail("unexpected end of expression");
        fail("unexpected '" + tk.text + "'");
    }

    const std::vector<Token>& t_;
    std::size_t p_;
    int line_;
};

struct Scope {
    const std::map<std::string, long>* params = nullptr;
    const SullivanAlgebra* alg = nullptr;  // null: scalar-only context
    GeneratorSetPtr gens;
    int line = 0;
};

Rational eval_scalar(const Node& n, const Scope& s);

long to_exponent(const Node& n, const Scope& s) {
    Rational e = eval_scalar(n, s);
    if (e.get_den() != 1 || sgn(e) < 0 || !e.get_num().fits_slong_p())
        throw ParseError(s.line, n.col, "exponent must be a non-negative integer");
    return e.get_num().get_si();
}

Rational eval_scalar(const Node& n, const Scope& s) {
    switch (n.kind) {
        case Node::Num:
            return Rational(n.num);
        case Node::Ident: {
            if (s.params) {
                auto it = s.params->find(n.ident);
                if (it != s.params->end()) return Rational(it->second);
            }
            throw ParseError(s.line, n.col, "unknown name '" + n.ident + "' in integer expression");
        }
        case Node::Add:
            return eval_scalar(*n.a, s) + eval_scalar(*n.b, s);
        case Node::Sub:
            return eval_scalar(*n.a, s) - eval_scalar(*n.b, s);
        case Node::Mul:
            return eval_scalar(*n.a, s) * eval_scalar(*n.b, s);
        case Node::Neg:
            return -eval_scalar(*n.a, s);
        case Node::Div: {
            Rational d = eval_scalar(*n.b, s);
            if (is_zero(d)) throw ParseError(s.line, n.col, "division by zero");
            return eval_scalar(*n.a, s) / d;
        }
        case Node::Pow: {
            Rational b = eval_scalar(*n.a, s);
            long e = to_exponent(*n.b, s);
            Rational r = 1;
            for (long i = 0; i < e; ++i) r *= b;
            return r;
        }
    }
    return 0;
}

Element eval_element(const Node& n, const Scope& s) {
    const auto& gs = s.gens;
    switch (n.kind) {
        case Node::Num:
            return Element::one(gs).scaled(Rational(n.num));
        case Node::Ident: {
            if (auto g = gs->find(n.ident)) return Element::generator(gs, *g);
            if (s.params) {
                auto it = s.params->find(n.ident);
                if (it != s.params->end()) return Element::one(gs).scaled(Rational(it->second));
            }
            throw ParseError(s.line, n.col, "unknown name '" + n.ident + "'");
        }
        case Node::Add:
            return eval_element(*n.a, s) + eval_element(*n.b, s);
        case Node::Sub:
            return eval_element(*n.a, s) - eval_element(*n.b, s);
        case Node::Mul:
            return eval_element(*n.a, s) * eval_element(*n.b, s);
        case Node::Neg:
            return -eval_element(*n.a, s);
        case Node::Div: {
            Rational d;
            try {
                d = eval_scalar(*n.b, s);
            } catch (const ParseError&) {
                throw ParseError(s.line, n.col, "can only divide by a number");
            }
            if (is_zero(d)) throw ParseError(s.line, n.col, "division by zero");
            return eval_element(*n.a, s).scaled(1 / d);
        }
        case Node::Pow: {
            long e = to_exponent(*n.b, s);
            if (n.a->kind == Node::Ident && e >= 2)
                if (auto g = gs->find(n.a->ident); g && gs->is_odd(*g))
                    throw ParseError(s.line, n.col, "odd generator '" + n.a->ident + "' squared");
            Element b = eval_element(*n.a, s);
            if (e >= 2 && b.degree() && *b.degree() % 2)
                throw ParseError(s.line, n.col, "power of an odd-degree element");
            return b.pow(static_cast<unsigned>(e));
        }
    }
    return Element(gs);
}

struct Line {
    int no;
    std::vector<Token> toks;
};

std::vector<Line> split_lines(const std::string& text) {
    std::vector<Line> out;
    std::istringstream in(text);
    std::string s;
    int no = 0;
    while (std::getline(in, s)) {
        ++no;
        auto toks = lex(s, no);
        if (toks.size() > 1) out.push_back({no, std::move(toks)});
    }
    return out;
}

void expect(const Line& l, std::size_t& p, const char* sym) {
    const Token& t = l.toks[p];
    if (t.kind != Tok::Sym || t.text != sym)
        throw ParseError(l.no, t.col, std::string("expected '") + sym + "'");
    ++p;
}

std::string ident(const Line& l, std::size_t& p, const char* what) {
    const Token& t = l.toks[p];
    if (t.kind != Tok::Ident) throw ParseError(l.no, t.col, std::string("expected ") + what);
    ++p;
    return t.text;
}

void expect_end(const Line& l, std::size_t p) {
    if (l.toks[p].kind != Tok::End) throw ParseError(l.no, l.toks[p].col, "unexpected '" + l.toks[p].text + "'");
}

NodeP expr_at(const Line& l, std::size_t& p) {
    ExprParser ep(l.toks, p, l.no);
    NodeP n = ep.parse();
    p = ep.pos();
    return n;
}

long signed_int(const Line& l, std::size_t& p) {
    bool neg = false;
    if (l.toks[p].kind == Tok::Sym && l.toks[p].text == "-") neg = true, ++p;
    const Token& t = l.toks[p];
    if (t.kind != Tok::Int) throw ParseError(l.no, t.col, "expected integer");
    ++p;
    long v = std::stol(t.text);
    return neg ? -v : v;
}

}  // namespace

AlgebraFile parse_algebra(const std::string& text, const ParamOverrides& overrides) {
    AlgebraFile file;
    file.source = text;
    auto lines = split_lines(text);

    std::map<std::string, long> params;
    std::vector<Generator> gens;
    std::vector<int> gen_line;
    std::vector<std::pair<const Line*, std::size_t>> dlines, vlines;

    for (auto& l : lines) {
        std::size_t p = 0;
        const Token& kw = l.toks[p];
        if (kw.kind != Tok::Ident) throw ParseError(l.no, kw.col, "expected a keyword");
        ++p;
        if (kw.text == "name") {
            std::string n;
            while (l.toks[p].kind != Tok::End) n += l.toks[p++].text;
            file.name = n;
        } else if (kw.text == "param") {
            ParamDecl pd;
            pd.name = ident(l, p, "parameter name");
            expect(l, p, "=");
            pd.value = signed_int(l, p);
            if (l.toks[p].kind == Tok::Ident && l.toks[p].text == "range") {
                ++p;
                if (l.toks[p].kind != Tok::Sym) pd.min = signed_int(l, p);
                expect(l, p, "..");
                if (l.toks[p].kind != Tok::End) pd.max = signed_int(l, p);
            }
            expect_end(l, p);
            if (auto it = overrides.find(pd.name); it != overrides.end()) pd.value = it->second;
            if ((pd.min && pd.value < *pd.min) || (pd.max && pd.value > *pd.max))
                throw ParseError(l.no, kw.col, "parameter " + pd.name + " = " + std::to_string(pd.value) +
                                                   " out of range");
            if (params.count(pd.name)) throw ParseError(l.no, kw.col, "parameter declared twice");
            params[pd.name] = pd.value;
            file.params.push_back(pd);
        } else if (kw.text == "gen") {
            std::vector<std::pair<std::string, int>> names;
            do {
                int col = l.toks[p].col;
                names.emplace_back(ident(l, p, "generator name"), col);
            } while (l.toks[p].kind == Tok::Sym && l.toks[p].text == "," && ++p);
            expect(l, p, ":");
            int dcol = l.toks[p].col;
            NodeP e = expr_at(l, p);
            expect_end(l, p);
            Scope s{&params, nullptr, nullptr, l.no};
            Rational d = eval_scalar(*e, s);
            if (d.get_den() != 1 || d < 2 || d > 100000)
                throw ParseError(l.no, dcol, "generator degree must be an integer >= 2");
            for (auto& [n, col] : names) {
                if (params.count(n)) throw ParseError(l.no, col, "name '" + n + "' is a parameter");
                for (auto& g : gens)
                    if (g.name == n) throw ParseError(l.no, col, "generator '" + n + "' declared twice");
                gens.push_back({n, static_cast<int>(d.get_num().get_si())});
                gen_line.push_back(l.no);
            }
        } else if (kw.text == "d") {
            dlines.emplace_back(&l, p);
        } else if (kw.text == "volume") {
            vlines.emplace_back(&l, p);
        } else {
            throw ParseError(l.no, kw.col, "unknown keyword '" + kw.text + "'");
        }
    }

    GeneratorSetPtr gs;
    try {
        gs = std::make_shared<const GeneratorSet>(gens);
    } catch (const StructuralError& e) {
        throw ParseError(lines.empty() ? 1 : lines.front().no, 1, e.what());
    }
    std::vector<Element> diff(gs->size(), Element(gs));
    std::vector<bool> seen(gs->size(), false);
    for (auto [l, p0] : dlines) {
        std::size_t p = p0;
        int col = l->toks[p].col;
        std::string g = ident(*l, p, "generator name");
        auto gi = gs->find(g);
        if (!gi) throw ParseError(l->no, col, "unknown generator '" + g + "'");
        if (seen[*gi]) throw ParseError(l->no, col, "differential of '" + g + "' given twice");
        seen[*gi] = true;
        expect(*l, p, "=");
        int ecol = l->toks[p].col;
        NodeP e = expr_at(*l, p);
        expect_end(*l, p);
        Scope s{&params, nullptr, gs, l->no};
        Element v = eval_element(*e, s);
        int want = gs->degree(*gi) + 1;
        if (!v.is_homogeneous(want)) {
            std::string got = v.degree() ? "degree " + std::to_string(*v.degree()) : "an inhomogeneous element";
            throw ParseError(l->no, ecol,
                             "degree mismatch: d" + g + " must have degree " + std::to_string(want) + ", got " + got);
        }
        diff[*gi] = std::move(v);
    }
    if (vlines.size() > 1) throw ParseError(vlines[1].first->no, 1, "volume declared twice");
    for (auto [l, p0] : vlines) {
        std::size_t p = p0;
        NodeP e = expr_at(*l, p);
        expect_end(*l, p);
        Scope s{&params, nullptr, gs, l->no};
        file.volume = eval_element(*e, s);
        if (!file.volume->is_zero() && !file.volume->degree())
            throw ParseError(l->no, l->toks[p0].col, "volume is not homogeneous");
    }
    if (file.name.empty()) file.name = "unnamed";
    std::string full = file.name;
    if (!file.params.empty()) {
        full += "(";
        for (std::size_t i = 0; i < file.params.size(); ++i)
            full += (i ? "," : "") + std::to_string(file.params[i].value);
        full += ")";
    }
    file.algebra = std::make_shared<const SullivanAlgebra>(full, gs, std::move(diff));
    return file;
}

std::string print_algebra(const SullivanAlgebra& alg, const std::optional<Element>& volume) {
    std::ostringstream os;
    os << "name " << alg.name() << "\n";
    const auto& G = *alg.gens();
    for (std::size_t i = 0; i < G.size(); ++i) os << "gen " << G[i].name << " : " << G[i].degree << "\n";
    for (std::size_t i = 0; i < G.size(); ++i)
        if (!alg.d(i).is_zero()) os << "d " << G[i].name << " = " << element_str(alg.d(i)) << "\n";
    if (volume) os << "volume " << element_str(*volume) << "\n";
    return os.str();
}

std::string print_algebra(const AlgebraFile& f) { return print_algebra(*f.algebra, f.volume); }

Element parse_element(const SullivanAlgebra& alg, const std::string& text) {
    auto toks = lex(text, 1);
    ExprParser ep(toks, 0, 1);
    NodeP e = ep.parse();
    if (toks[ep.pos()].kind != Tok::End)
        throw ParseError(1, toks[ep.pos()].col, "unexpected '" + toks[ep.pos()].text + "'");
    Scope s{nullptr, &alg, alg.gens(), 1};
    return eval_element(*e, s);
}

ConcreteMorphism parse_morphism(const SullivanAlgebra& alg, const std::string& text) {
    const auto& gs = alg.gens();
    ConcreteMorphism f;
    f.images.assign(gs->size(), Element(gs));
    std::vector<bool> seen(gs->size(), false);
    for (auto& l : split_lines(text)) {
        std::size_t p = 0;
        const Token& kw = l.toks[p];
        if (kw.kind != Tok::Ident || kw.text != "f") throw ParseError(l.no, kw.col, "expected 'f NAME = EXPR'");
        ++p;
        int col = l.toks[p].col;
        std::string g = ident(l, p, "generator name");
        auto gi = gs->find(g);
        if (!gi) throw ParseError(l.no, col, "unknown generator '" + g + "'");
        if (seen[*gi]) throw ParseError(l.no, col, "image of '" + g + "' given twice");
        seen[*gi] = true;
        expect(l, p, "=");
        int ecol = l.toks[p].col;
        NodeP e = expr_at(l, p);
        expect_end(l, p);
        Scope s{nullptr, &alg, gs, l.no};
        Element v = eval_element(*e, s);
        if (!v.is_homogeneous(gs->degree(*gi)))
            throw ParseError(l.no, ecol, "image of '" + g + "' must have degree " + std::to_string(gs->degree(*gi)));
        f.images[*gi] = std::move(v);
    }
    for (std::size_t i = 0; i < gs->size(); ++i)
        if (!seen[i]) throw ParseError(1, 1, "no image given for generator '" + (*gs)[i].name + "'");
    return f;
}

std::string print_morphism(const ConcreteMorphism& f) {
    std::ostringstream os;
    if (f.images.empty()) return "";
    const auto& G = *f.images.front().gens();
    for (std::size_t i = 0; i < f.images.size(); ++i)
        os << "f " << G[i].name << " = " << element_str(f.images[i]) << "\n";
    return os.str();
}

}  // namespace rht
