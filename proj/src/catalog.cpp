#include "rht/catalog.hpp"

#include <cctype>
#include <stdexcept>

namespace rht {

namespace {

const char* kA = R"(name A
param i = 0 range 0..
gen x1 : 4
gen x2 : 6
gen y1 : 27
gen y2 : 29
gen y3 : 31
gen z : 77
gen z' : 75 + 4*i
d y1 = x1^4*x2^2
d y2 = x1^3*x2^3
d y3 = x1^2*x2^4
d z = x1*x2^3*y1*y2 - x1^2*x2^2*y1*y3 + x1^3*x2*y2*y3 + x2*x1^18 + x2^13
d z' = x1^(19+i)
volume x2^26*z' - x1^(15+i)*x2^24*y1
)";

const char* kCLBase = R"(name CL-base
gen x1 : 2
gen x2 : 4
gen y1 : 9
gen y2 : 11
gen y3 : 13
gen z : 35
d y1 = x1^3*x2
d y2 = x1^2*x2^2
d y3 = x1*x2^3
d z = x2^4*y1*y2 - x1*x2^3*y1*y3 + x1^2*x2^2*y2*y3 + x1^18 + x2^9
volume x2^16
)";

// base with a rational S^2 fibre: d x2' = xb2^2 - x2 (not minimal)
const char* kCLFibered = R"(name CL-fibered
gen x1 : 2
gen x2 : 4
gen y1 : 9
gen y2 : 11
gen y3 : 13
gen z : 35
gen xb2 : 2
gen x2' : 3
d y1 = x1^3*x2
d y2 = x1^2*x2^2
d y3 = x1*x2^3
d z = x2^4*y1*y2 - x1*x2^3*y1*y3 + x1^2*x2^2*y2*y3 + x1^18 + x2^9
d x2' = xb2^2 - x2
volume xb2^33
)";

const char* kProp1 = R"(name prop1
param l1 = 4 range 2..
param l2 = 2 range 2..
gen x1 : 2
gen x2 : 4
gen n1 : 11
gen n2 : 11
gen n3 : 4*l1 + 1
gen n4 : 8*l2 + 3
d n1 = x1^4*x2
d n2 = x1^2*x2^2 + x2^3
d n3 = x1^(2*l1+1)
d n4 = x2^(2*l2+1)
volume x1^(2*l1)*x2^(2*l2)*n1*n2 - (x1^(2*l1+2)*x2 + x1^(2*l1)*x2^2)*n1*n4 + x1^(2*l1+4)*n2*n4
)";

const char* kProp2 = R"(name prop2
param l = 4 range 4..
gen x1 : 2
gen x2 : 4
gen n1 : 13
gen n2 : 11
gen n3 : 4*l + 1
gen n4 : 19
gen n5 : 17
d n1 = x1^5*x2
d n2 = x1^2*x2^2 + x2^3
d n3 = x1^(2*l+1)
d n4 = x2^5
d n5 = x1^3*x2^3
volume x1^(2*l)*x2^4*n1*n2*n5 - x1^(2*l+3)*x2^2*n1*n2*n4 - (x1^(2*l+2)*x2 + x1^(2*l)*x2^2)*n1*n4*n5 + x1^(2*l+5)*n2*n4*n5
)";

const char* kProp3 = R"(name prop3
param l = 5 range 5..
gen x1 : 2
gen x2 : 4
gen n1 : 11
gen n2 : 19
gen n3 : 4*l + 1
d n1 = x1^2*x2^2 + x2^3
d n2 = x2^5
d n3 = x1^(2*l+1)
volume x2^4*x1^(2*l)*n1 - x1^(2*l+2)*x2*n2 - x1^(2*l)*x2^2*n2
)";

const char* kEx02 = R"(name ex02
gen a, b : 3
gen n : 5
gen m : 7
d n = a*b
d m = a*n
volume a*b*n*m
)";

// model of CP^(2n)
const char* kCP = R"(name CP
param n = 4 range 1..
gen x : 2
gen y : 4*n + 1
d y = x^(2*n+1)
volume x^(2*n)
)";

const char* kSphereEven = R"(name sphere
param d = 2 range 2..
gen x : d
gen y : 2*d - 1
d y = x^2
volume x
)";

const char* kSphereOdd = R"(name sphere
param d = 3 range 3..
gen y : d
volume y
)";

struct Call {
    std::string head;
    std::vector<std::string> args;
};

Call split_call(const std::string& s0) {
    std::string s;
    for (char c : s0)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    Call c;
    auto open = s.find('(');
    if (open == std::string::npos) {
        c.head = s;
        return c;
    }
    if (s.back() != ')') throw std::invalid_argument("malformed catalog name '" + s0 + "'");
    c.head = s.substr(0, open);
    int depth = 0;
    std::string cur;
    for (std::size_t i = open + 1; i + 1 < s.size(); ++i) {
        char ch = s[i];
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == ',' && depth == 0) {
            c.args.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) c.args.push_back(cur);
    return c;
}

long to_long(const std::string& s) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty()) throw std::invalid_argument("catalog parameter '" + s + "' is not an integer");
    return v;
}

AlgebraFile with_params(const char* text, const std::vector<std::string>& names, const std::vector<std::string>& args,
                        const std::string& sig) {
    if (args.size() > names.size()) throw std::invalid_argument(sig + " takes " + std::to_string(names.size()) +
                                                                " parameter(s)");
    ParamOverrides ov;
    for (std::size_t i = 0; i < args.size(); ++i) ov[names[i]] = to_long(args[i]);
    try {
        return parse_algebra(text, ov);
    } catch (const ParseError& e) {
        throw PreconditionError(sig + ": " + e.what());
    }
}

AlgebraFile from_algebra(AlgebraPtr alg, Element vol) {
    AlgebraFile f;
    f.name = alg->name();
    f.algebra = std::move(alg);
    f.volume = std::move(vol);
    f.source = print_algebra(f);
    return f;
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
    static const std::vector<CatalogEntry> list = {
        {"A", "A(i)", "inflexible odd-dimensional family, dimension 231+4i"},
        {"CL-base", "CL-base", "inflexible base algebra, dimension 64"},
        {"CL-fibered", "CL-fibered", "CL-base with a rational S^2 fibre (not minimal)"},
        {"ex01", "ex01", "minimal model of CL-fibered, dimension 66 (alias ex01-fibered-reduced)"},
        {"prop1", "prop1(l1,l2)", "no orientation reversal, dimension 4*l1+8*l2+22, l1,l2 >= 2"},
        {"prop2", "prop2(l)", "no orientation reversal, dimension 4l+57, l >= 4"},
        {"prop3", "prop3(l)", "no orientation reversal, dimension 4l+27, l >= 5"},
        {"ex02", "ex02", "flexible non-formal three-stage algebra, dimension 18"},
        {"CP", "CP(n)", "model of CP^(2n)"},
        {"sphere", "sphere(d)", "model of S^d"},
        {"tensor", "tensor(X,Y)", "tensor product of two catalog algebras"},
    };
    return list;
}

std::string catalog_template(const std::string& name) {
    if (name == "A") return kA;
    if (name == "CL-base") return kCLBase;
    if (name == "CL-fibered") return kCLFibered;
    if (name == "prop1") return kProp1;
    if (name == "prop2") return kProp2;
    if (name == "prop3") return kProp3;
    if (name == "ex02") return kEx02;
    if (name == "CP") return kCP;
    if (name == "sphere") return kSphereEven;
    throw std::invalid_argument("no template for '" + name + "'");
}

AlgebraFile catalog(const std::string& spec) {
    Call c = split_call(spec);
    auto none = [&] {
        if (!c.args.empty()) throw std::invalid_argument(c.head + " takes no parameters");
    };
    if (c.head == "A") return with_params(kA, {"i"}, c.args, "A(i)");
    if (c.head == "CL-base") return none(), parse_algebra(kCLBase);
    if (c.head == "CL-fibered") return none(), parse_algebra(kCLFibered);
    if (c.head == "ex01" || c.head == "ex01-fibered-reduced") {
        none();
        auto fib = parse_algebra(kCLFibered);
        auto red = eliminate_contractible_pair(*fib.algebra, "x2'", "x2");
        auto renamed = std::make_shared<const SullivanAlgebra>("ex01", red->gens(), red->differential());
        return from_algebra(renamed, parse_element(*renamed, "xb2^33"));
    }
    if (c.head == "prop1") return with_params(kProp1, {"l1", "l2"}, c.args, "prop1(l1,l2)");
    if (c.head == "prop2") return with_params(kProp2, {"l"}, c.args, "prop2(l)");
    if (c.head == "prop3") return with_params(kProp3, {"l"}, c.args, "prop3(l)");
    if (c.head == "ex02") return none(), parse_algebra(kEx02);
    if (c.head == "CP") return with_params(kCP, {"n"}, c.args, "CP(n)");
    if (c.head == "sphere") {
        long d = c.args.empty() ? 2 : to_long(c.args[0]);
        return with_params(d % 2 ? kSphereOdd : kSphereEven, {"d"}, c.args, "sphere(d)");
    }
    if (c.head == "tensor") {
        if (c.args.size() != 2) throw std::invalid_argument("tensor takes two catalog names");
        auto a = catalog(c.args[0]), b = catalog(c.args[1]);
        if (!a.volume || !b.volume) throw PreconditionError("tensor factors need volume forms");
        auto p = tensor_product(a.algebra, b.algebra);
        auto named = std::make_shared<const SullivanAlgebra>("tensor(" + a.algebra->name() + "," + b.algebra->name() + ")",
                                                             p->gens(), p->differential(), p->factors());
        Element vol = embed_factor(*named, 0, *a.volume) * embed_factor(*named, 1, *b.volume);
        return from_algebra(named, vol);
    }
    throw std::invalid_argument("unknown catalog entry '" + spec + "'");
}

}  // namespace rht
