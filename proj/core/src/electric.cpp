#include "fdyadic/electric.hpp"

#include "fdyadic/errors.hpp"

#include <Eigen/Sparse>
#include <Eigen/IterativeLinearSolvers>

#include <algorithm>
#include <stdexcept>

namespace fdyadic {

namespace {

using MaybeR = std::optional<BigRational>;  // nullopt = open circuit

/// Combine child resistances one level up: every child contributes a branch
/// of one unit resistor in series with its own resistance; branches add in
/// parallel. No finite branch means an open circuit.
MaybeR combine_children(const std::vector<MaybeR>& child_r) {
    BigRational conductance = 0;
    bool any = false;
    for (const MaybeR& r : child_r) {
        if (!r) continue;
        conductance += BigRational(1) / (1 + *r);
        any = true;
    }
    if (!any) return std::nullopt;
    return BigRational(1) / conductance;
}

MaybeR tree_resistance(const RootedTree& t, uint32_t v, int remaining) {
    if (remaining == 0) return BigRational(0);
    std::vector<MaybeR> child_r;
    child_r.reserve(t.child_count(v));
    for (size_t i = 0; i < t.child_count(v); ++i)
        child_r.push_back(tree_resistance(t, t.child(v, i), remaining - 1));
    return combine_children(child_r);
}

MaybeR typed_resistance(const TypeRules& rules, int type, int remaining,
                        std::vector<std::vector<MaybeR>>& memo,
                        std::vector<std::vector<bool>>& known) {
    if (remaining == 0) return BigRational(0);
    if (known[type][remaining]) return memo[type][remaining];
    std::vector<MaybeR> child_r;
    for (int ct : rules.children_of_type[type])
        child_r.push_back(typed_resistance(rules, ct, remaining - 1, memo, known));
    MaybeR r = combine_children(child_r);
    memo[type][remaining] = r;
    known[type][remaining] = true;
    return r;
}

BigRational require_finite(const MaybeR& r, int n) {
    if (!r)
        throw VerificationError("no path from the root reaches level " + std::to_string(n) +
                                "; resistance is infinite");
    return *r;
}

}  // namespace

BigRational resistance_to_level(const RootedTree& t, int n) {
    if (n < 0 || n > t.max_depth)
        throw std::invalid_argument("resistance level exceeds built tree depth");
    if (n == 0) return 0;
    return require_finite(tree_resistance(t, t.root(), n), n);
}

BigRational resistance_to_level(const TypeRules& rules, int n) {
    if (n < 0) throw std::invalid_argument("resistance level must be nonnegative");
    if (n == 0) return 0;
    std::vector<std::vector<MaybeR>> memo(rules.type_count(),
                                          std::vector<MaybeR>(n + 1));
    std::vector<std::vector<bool>> known(rules.type_count(), std::vector<bool>(n + 1, false));
    return require_finite(typed_resistance(rules, rules.root_type, n, memo, known), n);
}

std::vector<BigRational> resistance_profile(const RootedTree& t, int horizon) {
    if (horizon < 1 || horizon > t.max_depth)
        throw std::invalid_argument("horizon exceeds built tree depth");
    std::vector<BigRational> out;
    out.reserve(horizon);
    for (int n = 1; n <= horizon; ++n) out.push_back(resistance_to_level(t, n));
    return out;
}

namespace {

// Outward rounding onto the grid 2^-bits; inputs are nonnegative here.
BigRational dyadic_floor(const BigRational& x, unsigned bits) {
    BigInt q = (numerator(x) << bits) / denominator(x);
    return BigRational(q, BigInt(1) << bits);
}

BigRational dyadic_ceil(const BigRational& x, unsigned bits) {
    BigInt scaled = numerator(x) << bits;
    BigInt q = scaled / denominator(x);
    if (q * denominator(x) != scaled) ++q;
    return BigRational(q, BigInt(1) << bits);
}

/// One exact application of the per-type level recursion to a value vector.
std::vector<BigRational> recursion_step(const TypeRules& rules,
                                        const std::vector<BigRational>& u) {
    std::vector<BigRational> out(u.size());
    for (int t = 0; t < rules.type_count(); ++t) {
        BigRational conductance = 0;
        for (int ct : rules.children_of_type[t]) conductance += BigRational(1) / (1 + u[ct]);
        if (conductance == 0)
            throw VerificationError("type " + std::to_string(t) + " has no children");
        out[t] = BigRational(1) / conductance;
    }
    return out;
}

/// Interval image of the recursion: the map is monotone increasing in every
/// child value, so the endpoint images bracket it; rounding outward keeps the
/// endpoints on the dyadic grid (reduced exact fractions would grow like
/// phi^n digits).
std::vector<RationalInterval> interval_step(const TypeRules& rules,
                                            const std::vector<RationalInterval>& u,
                                            unsigned bits) {
    std::vector<BigRational> los(u.size()), his(u.size());
    for (size_t i = 0; i < u.size(); ++i) {
        los[i] = u[i].lo;
        his[i] = u[i].hi;
    }
    auto flo = recursion_step(rules, los);
    auto fhi = recursion_step(rules, his);
    std::vector<RationalInterval> out(u.size());
    for (size_t i = 0; i < u.size(); ++i)
        out[i] = {dyadic_floor(flo[i], bits), dyadic_ceil(fhi[i], bits)};
    return out;
}

std::vector<std::vector<RationalInterval>> interval_profile_all_types(const TypeRules& rules,
                                                                      int horizon,
                                                                      unsigned bits) {
    std::vector<std::vector<RationalInterval>> levels;
    std::vector<RationalInterval> state(rules.type_count(), RationalInterval{0, 0});
    for (int n = 1; n <= horizon; ++n) {
        state = interval_step(rules, state, bits);
        levels.push_back(state);
    }
    return levels;
}

}  // namespace

std::vector<RationalInterval> resistance_profile(const TypeRules& rules, int horizon,
                                                 unsigned precision_bits) {
    if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
    auto levels = interval_profile_all_types(rules, horizon, precision_bits);
    std::vector<RationalInterval> out;
    out.reserve(horizon);
    for (const auto& level : levels) out.push_back(level[rules.root_type]);
    return out;
}

// ---------------------------------------------------------------------------
// Capacity
// ---------------------------------------------------------------------------

namespace {

constexpr unsigned kCapacityBits = 192;

bool leq_componentwise(const std::vector<BigRational>& a, const std::vector<BigRational>& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

void fill_common(CapacityReport& rep, int horizon) {
    rep.monotone_increasing = true;
    for (int i = 1; i < horizon; ++i)
        if (!(rep.resistance[i].lo > rep.resistance[i - 1].hi)) rep.monotone_increasing = false;
}

void fill_capacity_bounds(CapacityReport& rep) {
    if (rep.verdict == CapacityReport::Verdict::Recurrent) {
        rep.capacity_lower = rep.capacity_upper = 0;
        rep.escape_lower = rep.escape_upper = 0;
        return;
    }
    rep.capacity_lower = rep.certified ? BigRational(1) / rep.limit_upper : BigRational(0);
    rep.capacity_upper = BigRational(1) / rep.limit_lower;
    rep.escape_lower = rep.capacity_lower / rep.root_degree;
    rep.escape_upper = rep.capacity_upper / rep.root_degree;
}

bool looks_divergent(const std::vector<RationalInterval>& r) {
    // Increments that never contract signal R_n growing without bound.
    double first = r[1].mid() - r[0].mid();
    double last = r[r.size() - 1].mid() - r[r.size() - 2].mid();
    return last * 2 > first;
}

bool is_fibonacci_rules(const TypeRules& r) {
    return r.children_of_type == std::vector<std::vector<int>>{{0, 1}, {0}} && r.root_type == 0;
}

int m_ary_arity(const TypeRules& r) {
    if (r.type_count() != 1 || r.root_type != 0) return 0;
    for (int ct : r.children_of_type[0])
        if (ct != 0) return 0;
    return static_cast<int>(r.children_of_type[0].size());
}

}  // namespace

CapacityReport capacity_report(const TypeRules& rules, int horizon) {
    if (horizon < 2) throw std::invalid_argument("capacity horizon must be at least 2");
    CapacityReport rep;
    auto levels = interval_profile_all_types(rules, horizon, kCapacityBits);
    rep.resistance.reserve(horizon);
    for (const auto& level : levels) rep.resistance.push_back(level[rules.root_type]);
    rep.root_degree = static_cast<int>(rules.children_of_type[rules.root_type].size());
    fill_common(rep, horizon);

    // Transience certificate: find u with F(u) <= u componentwise, where F is
    // the one-level resistance recursion. F is monotone, so the iterates
    // F^h(u) stay >= R_infinity while the grounded iterates R_h = F^h(0)
    // increase towards it; the two sides form a rigorous enclosure. The
    // candidate u comes from the observed profile; the defining inequality is
    // verified in exact arithmetic.
    const int types = rules.type_count();
    std::vector<BigRational> u(types);
    for (int t = 0; t < types; ++t) u[t] = dyadic_ceil(levels.back()[t].hi * 2 + 2, 16);
    bool have_certificate = leq_componentwise(recursion_step(rules, u), u);
    for (int tries = 0; tries < 48 && !have_certificate; ++tries) {
        for (BigRational& x : u) x = x * 2 + 1;
        have_certificate = leq_componentwise(recursion_step(rules, u), u);
    }

    if (have_certificate) {
        std::vector<RationalInterval> upper(types);
        for (int t = 0; t < types; ++t) upper[t] = {u[t], u[t]};
        for (int i = 0; i < horizon + 48; ++i) upper = interval_step(rules, upper, kCapacityBits);
        rep.verdict = CapacityReport::Verdict::Transient;
        rep.certified = true;
        rep.limit_lower = rep.resistance.back().lo;
        rep.limit_upper = upper[rules.root_type].hi;
        if (rep.limit_upper < rep.limit_lower)
            throw VerificationError("resistance enclosure inverted; internal error");
    } else {
        rep.verdict = looks_divergent(rep.resistance) ? CapacityReport::Verdict::Recurrent
                                                      : CapacityReport::Verdict::Inconclusive;
        rep.limit_lower = rep.resistance.back().lo;
        rep.limit_upper = 0;
    }

    if (rep.verdict == CapacityReport::Verdict::Transient) {
        if (is_fibonacci_rules(rules)) {
            rep.limit_square = BigRational(2);
            if (!(rep.limit_lower * rep.limit_lower < 2 && 2 < rep.limit_upper * rep.limit_upper))
                throw VerificationError("enclosure does not bracket the sqrt(2) fixed point");
        } else if (int m = m_ary_arity(rules); m >= 2) {
            rep.limit_exact = BigRational(1, m - 1);
            if (!(rep.limit_lower <= *rep.limit_exact && *rep.limit_exact <= rep.limit_upper))
                throw VerificationError("enclosure does not bracket the 1/(m-1) fixed point");
        }
    }
    fill_capacity_bounds(rep);
    return rep;
}

CapacityReport capacity_report(const RootedTree& t, int horizon) {
    if (horizon < 2) throw std::invalid_argument("capacity horizon must be at least 2");
    CapacityReport rep;
    for (const BigRational& r : resistance_profile(t, horizon))
        rep.resistance.push_back(RationalInterval{r, r});
    rep.root_degree = static_cast<int>(t.child_count(t.root()));
    fill_common(rep, horizon);
    rep.verdict = looks_divergent(rep.resistance) ? CapacityReport::Verdict::Recurrent
                                                  : CapacityReport::Verdict::Inconclusive;
    rep.limit_lower = rep.resistance.back().lo;
    rep.limit_upper = 0;
    fill_capacity_bounds(rep);
    return rep;
}

// ---------------------------------------------------------------------------
// Growth conditions
// ---------------------------------------------------------------------------

namespace {

CapacityBoundConstants constants_from_counts(const std::vector<std::vector<BigInt>>& root_counts,
                                             const std::vector<std::vector<BigInt>>& all_counts,
                                             const GoldenNumber& q, int horizon) {
    if (!(q > GoldenNumber(1))) throw std::invalid_argument("q must exceed 1");
    if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
    CapacityBoundConstants out;
    out.q = q;
    out.horizon = horizon;

    std::vector<GoldenNumber> qinv_pow(horizon + 1, GoldenNumber(1));
    GoldenNumber qinv = q.inverse();
    for (int n = 1; n <= horizon; ++n) qinv_pow[n] = qinv_pow[n - 1] * qinv;

    bool have_c = false;
    for (const auto& counts : root_counts) {
        for (int n = 0; n <= horizon; ++n) {
            if (counts[n] == 0)
                throw VerificationError("root count vanishes at depth " + std::to_string(n) +
                                        "; constant c would be zero");
            GoldenNumber ratio = GoldenNumber(counts[n]) * qinv_pow[n];
            if (!have_c || ratio < out.c) {
                out.c = ratio;
                out.c_argmin = n;
                have_c = true;
            }
        }
    }
    bool have_C = false;
    for (const auto& counts : all_counts) {
        for (int n = 0; n <= horizon; ++n) {
            GoldenNumber ratio = GoldenNumber(counts[n]) * qinv_pow[n];
            if (!have_C || ratio > out.big_c) {
                out.big_c = ratio;
                out.big_c_argmax = n;
                have_C = true;
            }
        }
    }
    if (!have_c || !have_C) throw std::invalid_argument("no counts available over the horizon");
    out.bound = out.c * (q - GoldenNumber(1)) / out.big_c;

    // Re-verify both growth conditions over the horizon.
    out.conditions_hold = true;
    GoldenNumber qpow(1);
    for (int n = 0; n <= horizon; ++n) {
        for (const auto& counts : all_counts)
            if (GoldenNumber(counts[n]) > out.big_c * qpow) out.conditions_hold = false;
        for (const auto& counts : root_counts)
            if (out.c * qpow > GoldenNumber(counts[n])) out.conditions_hold = false;
        qpow = qpow * q;
    }
    return out;
}

}  // namespace

CapacityBoundConstants capacity_bound_constants(const TypeRules& rules, const GoldenNumber& q,
                                                int horizon) {
    const int types = rules.type_count();
    std::vector<std::vector<BigInt>> gd(types, std::vector<BigInt>(horizon + 1, BigInt(0)));
    for (int t = 0; t < types; ++t) gd[t][0] = 1;
    for (int n = 1; n <= horizon; ++n)
        for (int t = 0; t < types; ++t)
            for (int ct : rules.children_of_type[t]) gd[t][n] += gd[ct][n - 1];

    // Restrict to the types reachable from the root.
    std::vector<bool> reach(types, false);
    std::vector<int> stack{rules.root_type};
    reach[rules.root_type] = true;
    while (!stack.empty()) {
        int t = stack.back();
        stack.pop_back();
        for (int ct : rules.children_of_type[t])
            if (!reach[ct]) {
                reach[ct] = true;
                stack.push_back(ct);
            }
    }
    std::vector<std::vector<BigInt>> all_counts;
    for (int t = 0; t < types; ++t)
        if (reach[t]) all_counts.push_back(gd[t]);
    return constants_from_counts({gd[rules.root_type]}, all_counts, q, horizon);
}

CapacityBoundConstants capacity_bound_constants(const RootedTree& t, const GoldenNumber& q,
                                                int horizon) {
    if (horizon > t.max_depth)
        throw std::invalid_argument("horizon exceeds built tree depth");
    std::vector<std::vector<BigInt>> all_counts;
    std::vector<std::vector<BigInt>> root_counts;
    for (uint32_t v = 0; v < t.size(); ++v) {
        if (t.depth[v] + horizon > t.max_depth) continue;
        auto levels = t.descendant_level_counts(v, horizon);
        std::vector<BigInt> counts(levels.begin(), levels.end());
        if (v == t.root()) root_counts.push_back(counts);
        all_counts.push_back(std::move(counts));
    }
    if (root_counts.empty())
        throw std::invalid_argument("root cone does not reach the horizon");
    return constants_from_counts(root_counts, all_counts, q, horizon);
}

// ---------------------------------------------------------------------------
// Networks and the iterative Dirichlet solver
// ---------------------------------------------------------------------------

Network network_from_ball(const Ball& ball, uint32_t source, int ground_sphere) {
    if (ground_sphere < 1 || ground_sphere > ball.radius())
        throw std::invalid_argument("ground sphere outside built radius");
    if (source >= ball.size() || ball.dist(source) >= ground_sphere)
        throw std::invalid_argument("source must lie strictly inside the grounded sphere");
    Network net;
    net.node_count = ball.sphere_range(ground_sphere).first;  // vertices with dist < g
    net.source = source;
    for (uint32_t v = 0; v < net.node_count; ++v) {
        for (const auto& e : ball.children(v)) {
            uint32_t target = e.to < net.node_count ? e.to : Network::kGround;
            net.edges.push_back({v, target, static_cast<double>(e.mult)});
        }
    }
    for (const auto& [u, v] : ball.horizontal_edges())
        if (u < net.node_count && v < net.node_count) net.edges.push_back({u, v, 1.0});
    return net;
}

Network network_from_tree(const RootedTree& t, int ground_depth) {
    if (ground_depth < 1 || ground_depth > t.max_depth)
        throw std::invalid_argument("ground depth outside built tree");
    Network net;
    net.source = 0;
    std::vector<uint32_t> node_id(t.size(), Network::kGround);
    uint32_t next = 0;
    for (uint32_t v = 0; v < t.size(); ++v)
        if (t.depth[v] < ground_depth) node_id[v] = next++;
    net.node_count = next;
    for (uint32_t v = 1; v < t.size(); ++v) {
        if (t.depth[v] > ground_depth) continue;
        uint32_t p = static_cast<uint32_t>(t.parent[v]);
        if (node_id[p] == Network::kGround) continue;
        net.edges.push_back({node_id[p], node_id[v], 1.0});
    }
    return net;
}

DirichletSolution dirichlet_solve(const Network& net, double tolerance, int max_iterations) {
    const uint32_t n = net.node_count;
    if (net.source >= n) throw std::invalid_argument("source node outside network");

    // Unknowns: all nodes except the source (potential pinned to 1); the
    // ground node is pinned to 0 and eliminated into the right-hand side.
    std::vector<int> unknown_id(n, -1);
    int m = 0;
    for (uint32_t v = 0; v < n; ++v)
        if (v != net.source) unknown_id[v] = m++;

    std::vector<double> diag(n, 0.0);
    std::vector<Eigen::Triplet<double>> trips;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (const auto& e : net.edges) {
        if (e.v == Network::kGround) {
            diag[e.u] += e.conductance;
            continue;
        }
        diag[e.u] += e.conductance;
        diag[e.v] += e.conductance;
        int iu = unknown_id[e.u], iv = unknown_id[e.v];
        if (iu >= 0 && iv >= 0) {
            trips.emplace_back(iu, iv, -e.conductance);
            trips.emplace_back(iv, iu, -e.conductance);
        } else if (iu >= 0) {
            rhs[iu] += e.conductance;  // neighbor is the source at potential 1
        } else if (iv >= 0) {
            rhs[iv] += e.conductance;
        }
    }
    DirichletSolution sol;
    sol.potential.assign(n, 0.0);
    sol.potential[net.source] = 1.0;

    if (m > 0) {
        for (uint32_t v = 0; v < n; ++v)
            if (unknown_id[v] >= 0) trips.emplace_back(unknown_id[v], unknown_id[v], diag[v]);
        Eigen::SparseMatrix<double> lap(m, m);
        lap.setFromTriplets(trips.begin(), trips.end());
        Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
        cg.setTolerance(tolerance);
        cg.setMaxIterations(max_iterations);
        cg.compute(lap);
        Eigen::VectorXd x = cg.solve(rhs);
        if (cg.info() != Eigen::Success)
            throw std::runtime_error("dirichlet solve did not converge: residual " +
                                     std::to_string(cg.error()) + " after " +
                                     std::to_string(cg.iterations()) + " iterations");
        sol.iterations = static_cast<int>(cg.iterations());
        sol.residual = cg.error();
        for (uint32_t v = 0; v < n; ++v)
            if (unknown_id[v] >= 0) sol.potential[v] = x[unknown_id[v]];
    }

    double energy = 0;
    for (const auto& e : net.edges) {
        double fu = sol.potential[e.u];
        double fv = e.v == Network::kGround ? 0.0 : sol.potential[e.v];
        energy += e.conductance * (fu - fv) * (fu - fv);
    }
    sol.energy = energy;
    return sol;
}

// ---------------------------------------------------------------------------
// Exact Dirichlet on trees
// ---------------------------------------------------------------------------

std::vector<BigRational> tree_dirichlet_exact(
    const RootedTree& t, const std::vector<std::optional<BigRational>>& boundary,
    const std::vector<BigRational>& conductance_to_parent) {
    const size_t n = t.size();
    if (boundary.size() != n) throw std::invalid_argument("boundary size mismatch");
    auto cond = [&](uint32_t v) -> BigRational {
        return conductance_to_parent.empty() ? BigRational(1) : conductance_to_parent[v];
    };

    // Upward pass: express f(v) = alpha[v] * f(parent) + beta[v]. Children
    // have larger indices than parents (BFS order), so a reverse sweep works.
    std::vector<BigRational> alpha(n), beta(n);
    for (uint32_t v = static_cast<uint32_t>(n); v-- > 0;) {
        if (boundary[v]) {
            alpha[v] = 0;
            beta[v] = *boundary[v];
            continue;
        }
        BigRational denom = v == 0 ? BigRational(0) : cond(v);
        BigRational num_beta = 0;
        for (size_t i = 0; i < t.child_count(v); ++i) {
            uint32_t c = t.child(v, i);
            denom += cond(c) * (1 - alpha[c]);
            num_beta += cond(c) * beta[c];
        }
        if (v == 0) {
            if (denom == 0)
                throw std::invalid_argument("tree Dirichlet problem has no boundary data");
            alpha[0] = 0;
            beta[0] = num_beta / denom;
        } else {
            alpha[v] = cond(v) / denom;
            beta[v] = num_beta / denom;
        }
    }

    std::vector<BigRational> f(n);
    for (uint32_t v = 0; v < n; ++v) {
        if (v == 0) f[0] = beta[0];
        else f[v] = alpha[v] * f[static_cast<uint32_t>(t.parent[v])] + beta[v];
    }
    return f;
}

}  // namespace fdyadic
