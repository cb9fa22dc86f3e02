// Degree spectrum: generators are solved one at a time in degree order.  At
// each generator the commutation condition is linear in the new unknowns
// (pivots get substituted, the rest stay free) and polynomial compatibility
// conditions on the earlier ones are handed to simplify(), which may ask for
// a case split.  Leaves finish with the monomial solver and the degree
// polynomial.

#include "rht/endo.hpp"

#include <algorithm>
#include <unordered_map>

namespace rht {

struct LeafData {
    CaseContext ctx;
    std::vector<SymElement> images;      // coefficients in surviving symbols
    Polynomial lambda;                   // degree in surviving symbols
    std::vector<SymbolId> survivors;
    std::optional<MonomialSolution> msol;
    std::vector<std::vector<int>> signs;  // sign points of msol
    // per sign point: lambda with the lattice vars replaced by t-parameters
    std::vector<Polynomial> per_sign;
    std::size_t nsym = 0;                 // t_j has id nsym + j
};

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Inflexible: return "Inflexible";
        case Verdict::NoOrientationReversal: return "NoOrientationReversal";
        case Verdict::Flexible: return "Flexible";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

std::string outcome_name(CaseNode::Outcome o) {
    switch (o) {
        case CaseNode::Outcome::Split: return "split";
        case CaseNode::Outcome::Contradiction: return "contradiction";
        case CaseNode::Outcome::ZeroDegree: return "zero-degree";
        case CaseNode::Outcome::Solved: return "solved";
        case CaseNode::Outcome::Unresolved: return "unresolved";
    }
    return "?";
}

namespace {

using Row = std::map<std::uint32_t, Rational>;

struct GenSystem {
    std::vector<SymbolId> unknowns;
    std::unordered_map<Monomial, std::uint32_t, MonomialHash> support;
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_col;
    std::vector<Row> rref;       // rank rows over unknown columns
    std::vector<Row> transform;  // one per support row
};

Rational rpow(const Rational& b, long e) {
    Rational r = 1;
    Rational base = e < 0 ? Rational(1 / b) : b;
    for (long i = 0; i < std::labs(e); ++i) r *= base;
    return r;
}

DegreeExpression make_expression(const Polynomial& p, const std::function<std::string(SymbolId)>& name) {
    DegreeExpression d;
    auto vars = p.variables();
    std::map<SymbolId, Polynomial> ren;
    std::uint32_t i = 0;
    for (auto v : vars) {
        d.params.push_back(vars.size() == 1 ? "t" : name(v));
        ren[v] = Polynomial::variable(i++);
    }
    d.value = p.substitute(ren);
    d.constant = vars.empty();
    d.text = d.value.str([&](SymbolId v) { return d.params.at(v); });
    if (d.constant) {
        d.nonnegative = sgn(d.value.constant_value()) >= 0;
    } else {
        d.nonnegative = true;
        for (auto& [m, c] : d.value.terms()) {
            if (sgn(c) < 0) d.nonnegative = false;
            for (auto& f : m.factors)
                if (f.second % 2) d.nonnegative = false;
        }
    }
    return d;
}

class Explorer {
public:
    Explorer(AlgebraPtr alg, std::shared_ptr<EndoAnsatz> ansatz, TopFunctional phi, Element vol,
             SpectrumOptions opts)
        : alg_(std::move(alg)), G_(*alg_->gens()), ansatz_(std::move(ansatz)), phi_(std::move(phi)),
          vol_(std::move(vol)), opts_(opts), systems_(G_.size()) {
        for (std::size_t g = 0; g < G_.size(); ++g) order_.push_back(g);
        std::stable_sort(order_.begin(), order_.end(),
                         [&](std::size_t a, std::size_t b) { return G_.degree(a) < G_.degree(b); });
        processed_.assign(G_.size(), false);
    }

    CaseNode run() {
        CaseNode root;
        root.decision = "root";
        State s;
        explore(std::move(s), root);
        return root;
    }

    bool capped() const { return capped_; }

private:
    struct State {
        CaseContext ctx;
        std::vector<Polynomial> pending;
        std::size_t step = 0;
        unsigned depth = 0;
    };

    std::string name(SymbolId v) const {
        if (v < ansatz_->symbols.size()) return ansatz_->symbols.name(v);
        return "t" + std::to_string(v - ansatz_->symbols.size() + 1);
    }
    std::string pstr(const Polynomial& p) const {
        return p.str([&](SymbolId v) { return name(v); });
    }

    const GenSystem& system(std::size_t g) {
        auto& sys = systems_[g];
        if (sys) return *sys;
        sys = std::make_unique<GenSystem>();
        auto& S = *sys;
        const auto& entries = ansatz_->entries[g];
        std::uint32_t C = entries.size();
        std::vector<Row> rows;
        for (std::uint32_t j = 0; j < C; ++j) {
            S.unknowns.push_back(entries[j].symbol);
            Element dm = extend_derivation(*alg_, Element(alg_->gens(), entries[j].mono));
            for (auto& [m, c] : dm.terms()) {
                auto [it, fresh] = S.support.try_emplace(m, static_cast<std::uint32_t>(rows.size()));
                if (fresh) {
                    rows.emplace_back();
                    rows.back()[C + it->second] = 1;
                }
                rows[it->second][j] = c;
            }
        }
        std::size_t r = 0;
        for (std::uint32_t c = 0; c < C && r < rows.size(); ++c) {
            std::size_t p = r;
            while (p < rows.size() && !rows[p].count(c)) ++p;
            if (p == rows.size()) continue;
            std::swap(rows[p], rows[r]);
            Rational inv = 1 / rows[r][c];
            for (auto& [k, v] : rows[r]) v *= inv;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (i == r) continue;
                auto it = rows[i].find(c);
                if (it == rows[i].end()) continue;
                Rational f = it->second;
                for (auto& [k, v] : rows[r]) {
                    auto& x = rows[i][k];
                    x -= f * v;
                    if (x == 0) rows[i].erase(k);
                }
            }
            S.pivot_col.push_back(c);
            ++r;
        }
        S.rank = r;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            Row a, t;
            for (auto& [k, v] : rows[i]) {
                if (k < C)
                    a[k] = v;
                else
                    t[k - C] = v;
            }
            if (i < r) S.rref.push_back(std::move(a));
            S.transform.push_back(std::move(t));
        }
        return S;
    }

    std::vector<SymElement> images(const CaseContext& ctx) const {
        std::vector<SymElement> out;
        for (std::size_t g = 0; g < G_.size(); ++g) {
            if (!processed_[g]) {
                out.emplace_back(alg_->gens());
                continue;
            }
            out.push_back(ansatz_->image(*alg_, g).map_coefficients(
                [&](const Polynomial& p) { return ctx.apply(p); }));
        }
        return out;
    }

    // every monomial of vol contains a generator sent to 0
    bool volume_killed(const std::vector<SymElement>& im) const {
        for (auto& [m, c] : vol_.terms()) {
            bool dead = false;
            for (std::size_t g = 0; g < G_.size() && !dead; ++g)
                if (m[g] && processed_[g] && im[g].is_zero()) dead = true;
            if (!dead) return false;
        }
        return true;
    }

    void unresolved(CaseNode& node, const State& s, const std::string& why) {
        node.outcome = CaseNode::Outcome::Unresolved;
        node.note = why;
        for (auto& c : s.pending) node.residual.push_back(pstr(c) + " = 0");
    }

    // commutation at one generator; false if the node had to stop
    bool process(State& s, CaseNode& node) {
        std::size_t g = order_[s.step];
        for (auto& [m, c] : alg_->d(g).terms())
            for (std::size_t h = 0; h < G_.size(); ++h)
                if (m[h] && !processed_[h]) {
                    unresolved(node, s, "d(" + G_[g].name + ") involves " + G_[h].name +
                                            ", which is not solved yet");
                    return false;
                }
        auto im = images(s.ctx);
        SymElement F = apply_map(alg_->d(g), im, alg_->gens());
        std::size_t terms = 0;
        for (auto& [m, p] : F.terms()) terms += p.size();
        if (terms > opts_.max_terms) {
            unresolved(node, s, "term cap exceeded at " + G_[g].name);
            return false;
        }
        const GenSystem& S = system(g);
        std::vector<const Polynomial*> Fs(S.transform.size(), nullptr);
        for (auto& [m, p] : F.terms()) {
            auto it = S.support.find(m);
            if (it == S.support.end())
                s.pending.push_back(p);
            else
                Fs[it->second] = &p;
        }
        for (std::size_t i = 0; i < S.transform.size(); ++i) {
            Polynomial fi;
            for (auto& [k, v] : S.transform[i])
                if (Fs[k]) fi += *Fs[k] * Polynomial(v);
            if (i < S.rank) {
                std::size_t pc = S.pivot_col[i];
                for (auto& [j, v] : S.rref[i])
                    if (j != pc) fi -= Polynomial::variable(S.unknowns[j]) * Polynomial(v);
                s.ctx.eliminate(S.unknowns[pc], fi);
            } else if (!fi.is_zero()) {
                s.pending.push_back(std::move(fi));
            }
        }
        return true;
    }

    void explore(State s, CaseNode& node) {
        if (++nodes_ > opts_.max_nodes) {
            capped_ = true;
            unresolved(node, s, "node cap exceeded");
            return;
        }
        for (;;) {
            bool final_stage = s.step == order_.size();
            // processed_ mirrors the current step (exploration is depth-first)
            for (std::size_t i = 0; i < order_.size(); ++i) processed_[order_[i]] = i < s.step;
            auto r = simplify(std::move(s.pending), std::move(s.ctx), final_stage ? &ansatz_->diagonal : nullptr);
            s.ctx = std::move(r.ctx);
            s.pending = std::move(r.constraints);
            if (r.contradiction) {
                node.outcome = CaseNode::Outcome::Contradiction;
                node.note = r.why;
                return;
            }
            if (r.split) {
                if (s.depth >= opts_.case_depth) {
                    capped_ = true;
                    unresolved(node, s, "case depth cap reached");
                    return;
                }
                node.outcome = CaseNode::Outcome::Split;
                SymbolId u = *r.split;
                node.note = "split on " + name(u);
                State z = s, nz = std::move(s);
                z.ctx.set_zero(u);
                nz.ctx.nonzero[u] = true;
                z.depth = nz.depth = z.depth + 1;
                node.children.resize(2);
                node.children[0].decision = name(u) + " = 0";
                node.children[1].decision = name(u) + " != 0";
                std::size_t step = z.step;
                explore(std::move(z), node.children[0]);
                for (std::size_t i = 0; i < order_.size(); ++i) processed_[order_[i]] = i < step;
                explore(std::move(nz), node.children[1]);
                return;
            }
            if (volume_killed(images(s.ctx))) {
                node.outcome = CaseNode::Outcome::ZeroDegree;
                node.note = "every monomial of the volume form contains a generator mapped to 0";
                return;
            }
            if (final_stage) {
                leaf(std::move(s), node);
                return;
            }
            if (!process(s, node)) return;
            processed_[order_[s.step]] = true;
            ++s.step;
        }
    }

    void leaf(State s, CaseNode& node) {
        auto L = std::make_shared<LeafData>();
        L->nsym = ansatz_->symbols.size();
        L->images = images(s.ctx);
        L->lambda = volume_degree_polynomial(*alg_, L->images, vol_, phi_);
        for (auto& [u, p] : s.ctx.subs)
            if (u < ansatz_->diagonal.size() && ansatz_->diagonal[u] && !p.is_zero())
                node.substitutions.push_back(name(u) + " := " + pstr(p));
        std::size_t zeros = 0;
        for (auto& [u, b] : s.ctx.nonzero) zeros += !b;
        std::set<SymbolId> surv;
        for (auto& e : L->images)
            for (auto& [m, p] : e.terms())
                for (auto v : p.variables()) surv.insert(v);
        for (auto v : L->lambda.variables()) surv.insert(v);
        L->survivors.assign(surv.begin(), surv.end());
        L->ctx = s.ctx;

        if (L->lambda.is_zero()) {
            node.outcome = CaseNode::Outcome::ZeroDegree;
            node.note = "degree polynomial vanishes";
            return;
        }
        // residual constraints: binomials m1 = +-m2 in nonzero unknowns
        MonomialEquationSystem sys;
        bool lattice = true;
        for (auto& c : s.pending) {
            if (c.size() != 2) {
                lattice = false;
                break;
            }
            auto it = c.terms().begin();
            auto [m1, c1] = *it++;
            auto [m2, c2] = *it;
            Rational ratio = -c2 / c1;
            if (ratio != 1 && ratio != -1) {
                lattice = false;
                break;
            }
            for (auto v : c.variables())
                if (!s.ctx.is_nonzero(v)) lattice = false;
            if (!lattice) break;
            sys.equations.push_back({m1, m2, ratio == 1 ? 1 : -1});
        }
        if (!lattice) {
            for (auto& c : s.pending)
                if (L->lambda.exact_divide(c)) {
                    node.outcome = CaseNode::Outcome::ZeroDegree;
                    node.note = "degree polynomial lies in the ideal of " + pstr(c);
                    for (auto& c2 : s.pending) node.residual.push_back(pstr(c2) + " = 0");
                    return;
                }
            unresolved(node, s, "residual constraints outside the monomial fragment");
            return;
        }
        if (!sys.equations.empty()) {
            MonomialSolution sol = solve_monomial_system(sys);
            if (!sol.consistent) {
                node.outcome = CaseNode::Outcome::Contradiction;
                node.note = "sign conditions are inconsistent";
                return;
            }
            for (auto& row : sol.kernel)
                for (auto& k : row)
                    if (k < 0) {
                        unresolved(node, s, "magnitude lattice needs negative exponents");
                        return;
                    }
            L->signs = sol.sign_points(64);
            for (auto& pt : L->signs) {
                std::map<SymbolId, Polynomial> sub;
                for (std::size_t i = 0; i < sol.vars.size(); ++i) {
                    Polynomial m(pt[i]);
                    for (std::size_t j = 0; j < sol.parameters(); ++j) {
                        unsigned long e = sol.kernel[i][j].get_ui();
                        if (e) m *= Polynomial::variable(static_cast<SymbolId>(L->nsym + j), e);
                    }
                    sub[sol.vars[i]] = m;
                }
                L->per_sign.push_back(L->lambda.substitute(sub));
            }
            L->msol = std::move(sol);
            node.note = std::to_string(sys.equations.size()) + " monomial equations, " +
                        std::to_string(L->msol->parameters()) + " free magnitudes, " +
                        std::to_string(L->signs.size()) + " sign patterns";
        } else {
            L->signs.push_back({});
            L->per_sign.push_back(L->lambda);
        }
        if (zeros) node.note += (node.note.empty() ? "" : "; ") + std::to_string(zeros) + " unknowns set to 0";
        std::set<std::string> seen;
        for (auto& p : L->per_sign) {
            auto d = make_expression(p, [&](SymbolId v) { return name(v); });
            if (seen.insert(d.text).second) node.degrees.push_back(std::move(d));
        }
        for (auto& c : s.pending) node.residual.push_back(pstr(c) + " = 0");
        node.outcome = CaseNode::Outcome::Solved;
        node.leaf = std::move(L);
    }

    AlgebraPtr alg_;
    const GeneratorSet& G_;
    std::shared_ptr<EndoAnsatz> ansatz_;
    TopFunctional phi_;
    Element vol_;
    SpectrumOptions opts_;
    std::vector<std::unique_ptr<GenSystem>> systems_;
    std::vector<std::size_t> order_;
    std::vector<bool> processed_;
    std::size_t nodes_ = 0;
    bool capped_ = false;
};

// concrete morphism of a solved leaf; `params` gives the free survivors and
// the t-parameters (ids >= nsym), missing entries default to 0 / 1
std::optional<std::pair<ConcreteMorphism, Rational>> instantiate(const LeafData& L, std::size_t sign,
                                                                 const std::map<SymbolId, Rational>& params) {
    std::map<SymbolId, Rational> val;
    std::set<SymbolId> lat;
    if (L.msol) {
        const auto& sol = *L.msol;
        for (std::size_t i = 0; i < sol.vars.size(); ++i) {
            Rational v = L.signs[sign][i];
            for (std::size_t j = 0; j < sol.parameters(); ++j) {
                auto it = params.find(static_cast<SymbolId>(L.nsym + j));
                Rational t = it == params.end() ? Rational(1) : it->second;
                v *= rpow(t, sol.kernel[i][j].get_si());
            }
            val[sol.vars[i]] = v;
            lat.insert(sol.vars[i]);
        }
    }
    for (auto v : L.survivors) {
        if (lat.count(v)) continue;
        auto it = params.find(v);
        Rational x = it != params.end() ? it->second : Rational(L.ctx.is_nonzero(v) ? 1 : 0);
        if (L.ctx.is_nonzero(v) && x == 0) return std::nullopt;
        val[v] = x;
    }
    ConcreteMorphism f;
    for (auto& e : L.images)
        f.images.push_back(e.map_coefficients([&](const Polynomial& p) { return p.evaluate(val); }));
    return std::make_pair(std::move(f), L.lambda.evaluate(val));
}

void collect_leaves(const CaseNode& n, std::vector<const CaseNode*>& out) {
    if (n.children.empty()) out.push_back(&n);
    for (auto& c : n.children) collect_leaves(c, out);
}

// the family parameter drives every variable of the sign-point degree
std::optional<FlexibleFamily> verify_family(const AlgebraPtr& alg, const TopFunctional& phi, const Element& vol,
                                            const LeafData& L, std::size_t sign,
                                            const std::function<std::string(SymbolId)>& name) {
    const Polynomial& p = L.per_sign[sign];
    auto vars = p.variables();
    if (vars.empty()) return std::nullopt;
    std::map<SymbolId, Polynomial> all_t;
    for (auto v : vars) all_t[v] = Polynomial::variable(0);
    Polynomial in_t = p.substitute(all_t);
    if (in_t.is_constant()) return std::nullopt;
    FlexibleFamily fam;
    std::string along;
    for (auto v : vars) along += (along.empty() ? "" : ", ") + name(v);
    fam.expression = p.str(name) + " with " + along + " = t, i.e. " +
                     in_t.str([](SymbolId) { return std::string("t"); });
    std::vector<Rational> degs;
    for (long t : {2L, 3L}) {
        std::map<SymbolId, Rational> params;
        for (auto v : vars) params[v] = t;
        auto inst = instantiate(L, sign, params);
        if (!inst) return std::nullopt;
        auto chk = verify_morphism(alg, inst->first, phi, vol);
        if (!chk.valid || chk.degree != in_t.evaluate({{0, Rational(t)}})) return std::nullopt;
        fam.instances.emplace_back(Integer(t), chk.degree);
        fam.morphisms.push_back(std::move(inst->first));
        degs.push_back(chk.degree);
    }
    if (abs(degs[0]) == abs(degs[1])) return std::nullopt;
    return fam;
}

}  // namespace

DegreeSpectrumVerdict degree_spectrum(const AlgebraPtr& alg, const VolumeForm& vol, const SpectrumOptions& opts) {
    DegreeSpectrumVerdict out;
    auto ansatz = std::make_shared<EndoAnsatz>(generic_ansatz(*alg));
    out.ansatz = ansatz;
    out.tree.decision = "root";
    if (ansatz->unknown_count() > opts.max_unknowns) {
        out.tree.outcome = CaseNode::Outcome::Unresolved;
        out.reason = "ansatz has " + std::to_string(ansatz->unknown_count()) + " unknowns, cap is " +
                     std::to_string(opts.max_unknowns);
        out.tree.note = out.reason;
        for (auto& c : extract_constraints(*alg, *ansatz)) {
            if (out.residual.size() >= 50) {
                out.residual.push_back("...");
                break;
            }
            out.residual.push_back(c.poly.str(ansatz->symbols) + " = 0");
        }
        return out;
    }
    TopFunctional phi = make_top_functional(alg, vol.representative);
    Explorer ex(alg, ansatz, phi, vol.representative, opts);
    out.tree = ex.run();

    auto name = [&](SymbolId v) {
        if (v < ansatz->symbols.size()) return ansatz->symbols.name(v);
        return "t" + std::to_string(v - ansatz->symbols.size() + 1);
    };

    std::vector<const CaseNode*> leaves;
    collect_leaves(out.tree, leaves);
    bool unresolved = false;
    std::set<std::string> seen;
    std::vector<std::pair<const LeafData*, std::size_t>> family_sources;
    for (auto* n : leaves) {
        switch (n->outcome) {
            case CaseNode::Outcome::Unresolved:
                unresolved = true;
                if (out.reason.empty()) out.reason = n->note;
                for (auto& r : n->residual) out.residual.push_back(r);
                break;
            case CaseNode::Outcome::ZeroDegree: out.values.insert(0); break;
            case CaseNode::Outcome::Solved:
                for (std::size_t i = 0; i < n->leaf->per_sign.size(); ++i) {
                    auto d = make_expression(n->leaf->per_sign[i], name);
                    if (d.constant) {
                        out.values.insert(d.value.constant_value());
                    } else {
                        family_sources.emplace_back(n->leaf.get(), i);
                        if (seen.insert(d.text).second) out.families.push_back(std::move(d));
                    }
                }
                break;
            default: break;
        }
    }
    if (unresolved) {
        out.kind = Verdict::Inconclusive;
        return out;
    }
    if (out.families.empty()) {
        bool small = true;
        for (auto& v : out.values)
            if (v != 0 && v != 1 && v != -1) small = false;
        out.kind = small ? Verdict::Inflexible : Verdict::Inconclusive;
        if (!small) out.reason = "finite spectrum with values outside {0, 1, -1}";
        return out;
    }
    for (auto& [L, i] : family_sources) {
        out.family = verify_family(alg, phi, vol.representative, *L, i, name);
        if (out.family) break;
    }
    bool nonneg = true;
    for (auto& d : out.families) nonneg &= d.nonnegative;
    for (auto& v : out.values) nonneg &= sgn(v) >= 0;
    if (nonneg) {
        out.kind = Verdict::NoOrientationReversal;
    } else if (out.family) {
        out.kind = Verdict::Flexible;
    } else {
        out.kind = Verdict::Inconclusive;
        out.reason = "degree families without sign certificate or verified instances";
    }
    return out;
}

std::vector<SampledMorphism> sample_morphisms(const AlgebraPtr& alg, const DegreeSpectrumVerdict& v,
                                              std::mt19937_64& rng, std::size_t count, long height) {
    (void)alg;
    std::vector<const CaseNode*> leaves, solved;
    collect_leaves(v.tree, leaves);
    for (auto* n : leaves)
        if (n->outcome == CaseNode::Outcome::Solved && n->leaf) solved.push_back(n);
    std::vector<SampledMorphism> out;
    if (solved.empty()) return out;
    std::uniform_int_distribution<long> coef(-height, height), pos(1, height);
    for (std::size_t k = 0; k < count; ++k) {
        const LeafData& L = *solved[rng() % solved.size()]->leaf;
        std::size_t sign = rng() % L.signs.size();
        std::map<SymbolId, Rational> params;
        for (auto s : L.survivors) {
            long x = coef(rng);
            while (L.ctx.is_nonzero(s) && x == 0) x = coef(rng);
            params[s] = x;
        }
        if (L.msol)
            for (std::size_t j = 0; j < L.msol->parameters(); ++j)
                params[static_cast<SymbolId>(L.nsym + j)] = make_rational(pos(rng), pos(rng));
        auto inst = instantiate(L, sign, params);
        if (inst) out.push_back({std::move(inst->first), inst->second});
    }
    return out;
}

}  // namespace rht
