#pragma once

// Verification suites shared by the command-line tool and the acceptance run.

#include "blowup/blowcx.hpp"
#include "blowup/budget.hpp"
#include "blowup/dof.hpp"
#include "blowup/hiord.hpp"
#include "blowup/identities.hpp"
#include "blowup/mcoracle.hpp"
#include "blowup/mesh.hpp"
#include "blowup/mesh_samples.hpp"
#include "blowup/parallel.hpp"
#include "blowup/reference_tables.hpp"
#include "blowup/serialize.hpp"
#include "blowup/shadow.hpp"

#include <json.hpp>

#include <atomic>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace blowup {

struct SuiteResult {
    explicit SuiteResult(std::string n) : name(std::move(n)) {}

    std::string name;
    bool pass = true;
    bool complete = true;  // false when a budget cut the suite short
    nlohmann::json results = nlohmann::json::object();
    std::string summary;
};

namespace detail {

inline std::vector<ShadowCache> per_thread_caches() { return std::vector<ShadowCache>(thread_count()); }

inline double exact_at(const RationalFn& f, const std::map<Vertex, Rational>& rates) {
    std::vector<Rational> x(rates.rbegin()->first + 1, Rational(0));
    for (const auto& [v, r] : rates) x[v] = r;
    return to_double(f.evaluate(x));
}

inline nlohmann::json rates_json(const std::map<Vertex, Rational>& rates) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [v, r] : rates) j[std::to_string(v)] = r.get_str();
    return j;
}

inline std::string counts_label(const std::map<Vertex, unsigned>& c) {
    std::string s;
    for (const auto& [v, n] : c) s += (s.empty() ? "" : ",") + std::to_string(n);
    return "(" + s + ")";
}

}  // namespace detail

// Representative closed forms against the computed basis, one global sign each.
inline SuiteResult table_check(int n) {
    SuiteResult r{"table"};
    const VertexSet V = VertexSet::range(static_cast<Vertex>(n + 1));
    auto entries = nlohmann::json::array();
    std::size_t matched = 0;
    auto table = tabulated_shadow_forms(n);
    for (const auto& t : table) {
        Flag F = Flag::parse(t.flag);
        RationalForm psi = shadow_form(F);
        int sign = sign_match(psi, t.form);
        bool exact = sign != 0;
        if (!sign) {
            if (equal_on_simplex(psi, t.form, V)) sign = 1;
            else if (equal_on_simplex(psi, -t.form, V)) sign = -1;
        }
        if (sign) ++matched;
        else r.pass = false;
        entries.push_back({{"flag", F.to_string()}, {"shorthand", t.flag}, {"k", t.k}, {"sign", sign},
                           {"identical", exact}, {"computed", psi.to_string()}});
    }
    r.results["n"] = n;
    r.results["entries"] = entries;
    r.results["matched"] = matched;
    r.summary = "table n=" + std::to_string(n) + ": " + std::to_string(matched) + "/" + std::to_string(table.size()) +
                " entries reproduced";
    return r;
}

inline SuiteResult partition_of_unity(int n) {
    SuiteResult r{"partition-of-unity"};
    const VertexSet V = VertexSet::range(static_cast<Vertex>(n + 1));
    RationalForm sum(0);
    auto flags = enumerate_flags(V, 0);
    for (const auto& F : flags) sum += shadow_form(F);
    bool exact = sum == RationalForm::scalar(RationalFn(1));
    r.pass = exact || equal_on_simplex(sum, RationalForm::scalar(RationalFn(1)), V);
    r.results = {{"n", n}, {"flags", flags.size()}, {"identical", exact}, {"holds", r.pass}};
    r.summary = "partition of unity n=" + std::to_string(n) + ": sum of " + std::to_string(flags.size()) + " scalars " +
                (r.pass ? "is 1" : "is not 1");
    return r;
}

// Psi_G(psi_F) for all flags of degree k, rows evaluated in parallel.
inline SuiteResult unisolvence(int n, int k, const Deadline& deadline, bool with_matrices) {
    SuiteResult r{"unisolvence"};
    const VertexSet V = VertexSet::range(static_cast<Vertex>(n + 1));
    auto per_k = nlohmann::json::array();
    std::size_t done = 0, total = 0;
    for (int kk = (k < 0 ? 0 : k); kk <= (k < 0 ? n : k); ++kk) {
        auto flags = enumerate_flags(V, kk);
        total += flags.size();
        std::vector<RationalForm> forms(flags.size());
        parallel_for(flags.size(), [&](std::size_t i, unsigned) { forms[i] = shadow_form(flags[i]); });
        std::vector<std::vector<Rational>> M(flags.size(), std::vector<Rational>(flags.size(), Rational(0)));
        std::vector<char> row_done(flags.size(), 0);
        parallel_for(flags.size(), [&](std::size_t i, unsigned) {
            if (deadline.expired()) return;
            for (std::size_t j = 0; j < flags.size(); ++j) M[i][j] = dof_evaluate(flags[i], forms[j]);
            row_done[i] = 1;
        });
        std::size_t rows = 0, off = 0, bad_diag = 0;
        for (std::size_t i = 0; i < flags.size(); ++i) {
            if (!row_done[i]) continue;
            ++rows;
            for (std::size_t j = 0; j < flags.size(); ++j) {
                if (i == j && M[i][j] != 1) ++bad_diag;
                if (i != j && sgn(M[i][j]) != 0) ++off;
            }
        }
        done += rows;
        bool complete = rows == flags.size();
        bool identity = bad_diag == 0 && off == 0;
        if (!identity) r.pass = false;
        if (!complete) r.complete = false;
        nlohmann::json entry = {{"k", kk},           {"size", flags.size()}, {"rows_checked", rows},
                                {"identity", identity && complete}, {"off_diagonal_nonzero", off},
                                {"diagonal_mismatch", bad_diag}};
        if (with_matrices) {
            auto labels = nlohmann::json::array();
            for (const auto& F : flags) labels.push_back(F.to_string());
            auto rowsj = nlohmann::json::array();
            for (std::size_t i = 0; i < flags.size(); ++i) {
                auto row = nlohmann::json::array();
                for (std::size_t j = 0; j < flags.size(); ++j) row.push_back(row_done[i] ? M[i][j].get_str() : "?");
                rowsj.push_back(row);
            }
            entry["flags"] = labels;
            entry["matrix"] = rowsj;
        }
        per_k.push_back(entry);
        if (deadline.expired()) break;
    }
    r.results = {{"n", n}, {"degrees", per_k}, {"rows_checked", done}, {"rows_total", total}};
    r.summary = "unisolvence n=" + std::to_string(n) + ": " + std::to_string(done) + "/" + std::to_string(total) +
                " rows checked, " + (r.pass ? "identity" : "NOT identity") + (r.complete ? "" : " (budget reached)");
    return r;
}

// d psi_F as a signed sum of coarsenings, and the induced d d = 0.
inline SuiteResult d_check(int n, const Deadline& deadline) {
    SuiteResult r{"d-check"};
    const VertexSet V = VertexSet::range(static_cast<Vertex>(n + 1));
    std::vector<Flag> flags;
    for (int k = 0; k <= n; ++k)
        for (auto& F : enumerate_flags(V, k)) flags.push_back(std::move(F));
    std::vector<std::vector<SignedFlag>> dec(flags.size());
    std::vector<std::string> error(flags.size());
    std::vector<char> checked(flags.size(), 0);
    auto caches = detail::per_thread_caches();
    parallel_for(flags.size(), [&](std::size_t i, unsigned w) {
        if (deadline.expired()) return;
        try {
            dec[i] = d_decomposition(flags[i], caches[w]);
        } catch (const DecompositionFailed& e) {
            error[i] = e.what();
        }
        checked[i] = 1;
    });
    std::map<Flag, std::size_t> index;
    for (std::size_t i = 0; i < flags.size(); ++i) index[flags[i]] = i;
    auto failures = nlohmann::json::array();
    std::size_t count = 0, dd_failures = 0;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (!checked[i]) {
            r.complete = false;
            continue;
        }
        ++count;
        if (!error[i].empty()) {
            r.pass = false;
            failures.push_back({{"flag", flags[i].to_string()}, {"error", error[i]}});
            continue;
        }
        std::map<Flag, int> dd;
        bool known = true;
        for (const auto& g : dec[i]) {
            std::size_t j = index.at(g.flag);
            if (!checked[j] || !error[j].empty()) {
                known = false;
                break;
            }
            for (const auto& h : dec[j]) dd[h.flag] += g.sign * h.sign;
        }
        if (!known) continue;
        for (const auto& [H, c] : dd)
            if (c != 0) {
                ++dd_failures;
                r.pass = false;
                failures.push_back({{"flag", flags[i].to_string()}, {"error", "dd nonzero at " + H.to_string()}});
            }
    }
    r.results = {{"n", n}, {"flags_checked", count}, {"flags_total", flags.size()}, {"dd_zero", dd_failures == 0},
                 {"failures", failures}};
    r.summary = "d-check n=" + std::to_string(n) + ": " + std::to_string(count) + "/" + std::to_string(flags.size()) +
                " flags, " + std::to_string(failures.size()) + " failures" + (r.complete ? "" : " (budget reached)");
    return r;
}

inline SuiteResult whitney_check(int n, const Deadline& deadline) {
    SuiteResult r{"whitney-check"};
    const VertexSet V = VertexSet::range(static_cast<Vertex>(n + 1));
    std::vector<VertexSet> subsets;
    for (unsigned mask = 1; mask < (1u << V.size()); ++mask) {
        std::vector<Vertex> w;
        for (Vertex v : V)
            if (mask & (1u << v)) w.push_back(v);
        subsets.emplace_back(std::move(w));
    }
    std::sort(subsets.begin(), subsets.end(), [](const VertexSet& a, const VertexSet& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    std::vector<nlohmann::json> rows(subsets.size());
    std::vector<char> ok(subsets.size(), 0), checked(subsets.size(), 0);
    auto caches = detail::per_thread_caches();
    parallel_for(subsets.size(), [&](std::size_t i, unsigned w) {
        if (deadline.expired()) return;
        const auto& W = subsets[i];
        nlohmann::json row = {{"W", W.label()}};
        try {
            auto flags = whitney_containment(W, V, caches[w]);
            Integer expect = factorial(static_cast<unsigned>(V.size() - W.size()));
            row["flags"] = flags.size();
            ok[i] = Integer(static_cast<unsigned long>(flags.size())) == expect;
        } catch (const IdentityFailed& e) {
            row["error"] = e.what();
        }
        row["holds"] = static_cast<bool>(ok[i]);
        rows[i] = row;
        checked[i] = 1;
    });
    auto out = nlohmann::json::array();
    std::size_t count = 0;
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        if (!checked[i]) {
            r.complete = false;
            continue;
        }
        ++count;
        if (!ok[i]) r.pass = false;
        out.push_back(rows[i]);
    }
    // psi_012 + psi_021 = lambda_0 on the triangle
    const VertexSet T = VertexSet::range(3);
    RationalForm lhs = shadow_form(Flag::parse("012")) + shadow_form(Flag::parse("021"));
    bool displayed = equal_on_simplex(lhs, RationalForm::scalar(RationalFn::var(0)), T);
    if (!displayed) r.pass = false;
    r.results = {{"n", n}, {"subsets", out}, {"checked", count}, {"total", subsets.size()},
                 {"psi012_plus_psi021_is_lambda0", displayed}};
    r.summary = "whitney-check n=" + std::to_string(n) + ": " + std::to_string(count) + "/" +
                std::to_string(subsets.size()) + " subsets" + (r.pass ? " hold" : " FAIL") +
                (displayed ? "" : ", displayed identity fails");
    return r;
}

inline SuiteResult local_cohomology(int n, const Deadline& deadline) {
    SuiteResult r{"cohomology-local"};
    const VertexSet V = VertexSet::range(static_cast<Vertex>(n + 1));
    try {
        BlowupComplex cx = build_blowup_complex(V, deadline);
        std::vector<std::size_t> expected_f;
        for (int k = 0; k <= n; ++k) {
            unsigned blocks = static_cast<unsigned>(n + 1 - k);
            Integer c = factorial(blocks) * stirling2(static_cast<unsigned>(n + 1), blocks);
            expected_f.push_back(c.get_ui());
        }
        auto betti = betti_numbers(cx);
        std::vector<std::size_t> expected_b(static_cast<std::size_t>(n + 1), 0);
        expected_b[0] = 1;
        bool dd = coboundary_squares_to_zero(cx);
        bool support = support_matches_coarsening(cx);
        nlohmann::json iso = nullptr;
        if (n <= 3) iso = verify_cochain_isomorphism(cx, deadline);
        r.pass = betti == expected_b && cx.f_vector() == expected_f && dd && support && (iso.is_null() || iso.get<bool>());
        r.results = {{"n", n},           {"f_vector", cx.f_vector()}, {"f_vector_expected", expected_f},
                     {"betti", betti},   {"dd_zero", dd},             {"support_is_coarsening", support},
                     {"cochain_isomorphism", iso}};
        std::ostringstream s;
        s << "local cohomology n=" << n << ": betti (";
        for (std::size_t i = 0; i < betti.size(); ++i) s << (i ? "," : "") << betti[i];
        s << "), f-vector (";
        for (std::size_t i = 0; i < cx.f_vector().size(); ++i) s << (i ? "," : "") << cx.f_vector()[i];
        s << ")";
        r.summary = s.str();
    } catch (const BudgetExceeded& e) {
        r.complete = false;
        r.results = {{"n", n}, {"budget", e.what()}};
        r.summary = "local cohomology n=" + std::to_string(n) + ": budget reached";
    } catch (const DecompositionFailed& e) {
        r.pass = false;
        r.results = {{"n", n}, {"error", e.what()}};
        r.summary = std::string("local cohomology: ") + e.what();
    }
    return r;
}

struct HigherOrderChecks {
    bool containment = true;
    bool vanishing = true;
    bool independence = true;
};

inline SuiteResult higher_order(int n, unsigned r_deg, const HigherOrderChecks& checks, const Deadline& deadline) {
    SuiteResult r{"higher-order"};
    const VertexSet V = VertexSet::range(static_cast<Vertex>(n + 1));
    auto cs = enumerate_experiments(V, r_deg);
    auto rows = nlohmann::json::array();
    RationalFn total;
    for (const auto& c : cs) {
        total = total + c.probability;
        rows.push_back({{"flag", c.flag.to_string()},
                        {"shorthand", c.flag.shorthand()},
                        {"sequence", c.sequence.to_string()},
                        {"probability", c.probability.to_string()}});
    }
    r.results["n"] = n;
    r.results["r"] = r_deg;
    r.results["candidates"] = rows;
    r.results["count"] = cs.size();
    bool sums = total == RationalFn(1);
    r.results["sum_is_one"] = sums;
    if (!sums) r.pass = false;
    std::string note;
    if (n == 2 && r_deg == 3) {
        auto table = nlohmann::json::array();
        std::size_t matched = 0;
        for (const auto& row : tabulated_higher_order()) {
            bool ok = false;
            for (const auto& c : cs)
                if (c.sequence.to_string() == row.sequence && c.flag.shorthand() == row.flag && c.probability == row.value)
                    ok = true;
            matched += ok;
            table.push_back({{"sequence", row.sequence}, {"flag", row.flag}, {"matches", ok}});
        }
        r.results["table"] = table;
        r.results["expected_count"] = 19;
        if (matched != table.size() || cs.size() != 19) r.pass = false;
        note += ", table rows " + std::to_string(matched) + "/" + std::to_string(table.size());
    }
    if (checks.containment) {
        try {
            auto groups = pr_containment(V, r_deg);
            auto g = nlohmann::json::array();
            for (const auto& row : groups)
                g.push_back({{"first_round", detail::counts_label(row.first_round)}, {"sum", row.sum.to_string()}});
            r.results["containment"] = {{"holds", true}, {"groups", g}};
            note += ", containment ok";
        } catch (const IdentityFailed& e) {
            r.pass = false;
            r.results["containment"] = {{"holds", false}, {"error", e.what()}};
            note += ", containment FAILS";
        }
    }
    if (checks.vanishing && !deadline.expired()) {
        try {
            VanishingSummary s = face_vanishing_census(V, r_deg);
            r.results["vanishing"] = {{"pairs", s.pairs},
                                      {"nonzero", s.nonzero},
                                      {"violations", s.violations},
                                      {"zero_on_refined_faces", s.converse_gaps}};
            if (s.violations) r.pass = false;
            note += ", vanishing " + std::to_string(s.pairs - s.violations) + "/" + std::to_string(s.pairs);
        } catch (const DivergentLimit& e) {
            r.pass = false;
            r.results["vanishing"] = {{"error", e.what()}};
        }
    } else if (checks.vanishing) {
        r.complete = false;
    }
    if (checks.independence && !deadline.expired()) {
        std::size_t rank = independence_rank(cs);
        r.results["independence"] = {{"rank", rank}, {"count", cs.size()}, {"independent", rank == cs.size()}};
        note += ", rank " + std::to_string(rank) + "/" + std::to_string(cs.size());
    } else if (checks.independence) {
        r.complete = false;
    }
    r.summary = "higher-order n=" + std::to_string(n) + " r=" + std::to_string(r_deg) + ": " +
                std::to_string(cs.size()) + " candidates" + note;
    return r;
}

enum class McTarget { PF, Higher, Dof };

struct McPolicy {
    std::size_t rate_vectors = 5;
    double sigmas = 3.0;
    double max_escalation_fraction = 0.01;
    double face_floor = 1e-4;  // extrapolation bias allowance for face integrals
};

inline SuiteResult mc_verify(McTarget target, int n, unsigned r_deg, std::uint64_t samples, std::uint64_t seed,
                             const Deadline& deadline, const McPolicy& policy = {}) {
    SuiteResult r{"mc-verify"};
    struct Job {
        std::string label;
        std::map<Vertex, Rational> rates;
        double exact;
        std::function<Estimate(const SimulationConfig&)> run;
        double floor;
    };
    std::vector<Job> jobs;
    std::uint64_t rate_seed = seed * 7919 + 17;
    if (target == McTarget::PF) {
        for (int m = 1; m <= n; ++m) {
            VertexSet V = VertexSet::range(static_cast<Vertex>(m + 1));
            for (std::size_t t = 0; t < policy.rate_vectors; ++t) {
                auto rates = random_rates(V, rate_seed++);
                for (int k = 0; k <= m; ++k)
                    for (const auto& F : enumerate_flags(V, k))
                        jobs.push_back({"p_" + F.to_string(), rates, detail::exact_at(poisson_probability(F), rates),
                                        [F](const SimulationConfig& c) { return estimate_pF(F, c); }, 1e-6});
            }
        }
    } else if (target == McTarget::Higher) {
        for (int m = 1; m <= n; ++m) {
            VertexSet V = VertexSet::range(static_cast<Vertex>(m + 1));
            for (unsigned q = 1; q <= r_deg; ++q) {
                auto cs = enumerate_experiments(V, q);
                for (std::size_t t = 0; t < policy.rate_vectors; ++t) {
                    auto rates = random_rates(V, rate_seed++);
                    for (const auto& c : cs)
                        jobs.push_back({c.sequence.to_string(), rates, detail::exact_at(c.probability, rates),
                                        [V, seq = c.sequence](const SimulationConfig& s) {
                                            return estimate_higher(V, seq, s);
                                        },
                                        1e-6});
                }
            }
        }
    } else {
        VertexSet V = VertexSet::range(static_cast<Vertex>(n + 1));
        std::map<Vertex, Rational> rates;
        for (Vertex v : V) rates[v] = 1;
        for (int k = 0; k <= n; ++k) {
            auto flags = enumerate_flags(V, k);
            for (const auto& G : flags)
                for (const auto& F : flags) {
                    auto form = std::make_shared<RationalForm>(shadow_form(F));
                    jobs.push_back({"Psi_" + G.to_string() + "(psi_" + F.to_string() + ")", rates, G == F ? 1.0 : 0.0,
                                    [G, form](const SimulationConfig& c) {
                                        return estimate_face_integral(G, *form, c).extrapolated;
                                    },
                                    policy.face_floor});
                }
        }
    }
    std::size_t done = 0, escalations = 0, misses = 0, unstable = 0;
    double worst = 0;
    auto failures = nlohmann::json::array();
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (deadline.expired()) {
            r.complete = false;
            break;
        }
        const auto& job = jobs[i];
        SimulationConfig cfg;
        cfg.rates = job.rates;
        cfg.samples = samples;
        cfg.seed = seed + 0x9e37ull * i;
        Estimate est;
        bool escalated = false;
        try {
            est = job.run(cfg);
            if (!est.agrees(job.exact, policy.sigmas, job.floor)) {
                escalated = true;
                SimulationConfig big = cfg;
                big.samples = samples * 10;
                big.seed = cfg.seed + 0x5851f42dull;
                est = job.run(big);
            }
        } catch (const ExtrapolationUnstable& e) {
            ++unstable;
            failures.push_back({{"target", job.label}, {"error", e.what()}});
            ++done;
            continue;
        }
        ++done;
        escalations += escalated;
        double z = std::abs(est.mean - job.exact) / std::max(est.standard_error, job.floor);
        worst = std::max(worst, z);
        if (!est.agrees(job.exact, policy.sigmas, job.floor)) {
            ++misses;
            failures.push_back({{"target", job.label},
                                {"rates", detail::rates_json(job.rates)},
                                {"exact", job.exact},
                                {"estimate", est.mean},
                                {"stderr", est.standard_error},
                                {"samples", est.samples}});
        }
    }
    const double frac = done ? static_cast<double>(escalations) / static_cast<double>(done) : 0.0;
    r.pass = misses == 0 && unstable == 0 && frac <= policy.max_escalation_fraction;
    static const char* names[] = {"pF", "higher", "dof"};
    r.results = {{"target", names[static_cast<int>(target)]},
                 {"generator", kGeneratorName},
                 {"pairs", done},
                 {"pairs_total", jobs.size()},
                 {"escalations", escalations},
                 {"escalation_fraction", frac},
                 {"misses_after_escalation", misses},
                 {"unstable", unstable},
                 {"worst_z", worst},
                 {"sigmas", policy.sigmas},
                 {"failures", failures}};
    std::ostringstream s;
    s << "mc-verify " << names[static_cast<int>(target)] << " n<=" << n << ": " << done << "/" << jobs.size()
      << " pairs, " << escalations << " escalated, " << misses << " misses, worst " << worst << " sigma"
      << (r.complete ? "" : " (budget reached)");
    r.summary = s.str();
    return r;
}

inline std::vector<GluingRule> all_rules() {
    return {GluingRule::EdgeIdentified, GluingRule::EdgeConstant, GluingRule::VertexIdentified,
            GluingRule::CellDiscontinuous, GluingRule::General};
}

struct NamedMesh {
    std::string name;
    Triangulation mesh;
    std::vector<std::size_t> reference_betti;  // empty when unknown
};

inline std::vector<NamedMesh> bundled_meshes() {
    std::vector<NamedMesh> out;
    for (const auto& s : sample_meshes()) out.push_back({s.name, Triangulation::from_json(s.document), s.betti});
    return out;
}

inline SuiteResult global_assembly(const std::vector<NamedMesh>& meshes, const std::vector<GluingRule>& rules,
                                   const Deadline& deadline) {
    SuiteResult r{"cohomology-global"};
    auto out = nlohmann::json::array();
    std::size_t runs = 0, general_matches = 0, general_runs = 0;
    for (const auto& m : meshes) {
        const Triangulation& T = m.mesh;
        auto simplicial = simplicial_cohomology(T);
        for (GluingRule rule : rules) {
            if (!rule_applies(rule, T.dimension())) continue;
            if (deadline.expired()) {
                r.complete = false;
                break;
            }
            GlobalComplex G = assemble_complex(T, rule);
            const int n = T.dimension();
            nlohmann::json checks = nlohmann::json::object();
            bool ok = G.dd_zero && G.well_defined;
            checks["dd_zero"] = G.dd_zero;
            checks["well_defined"] = G.well_defined;
            if (n == 2 && rule == GluingRule::VertexIdentified) {
                bool c = G.spaces[0].dimension() == T.faces(0).size();
                checks["dim0_is_vertex_count"] = c;
                ok = ok && c;
            }
            if (n == 2 && rule == GluingRule::CellDiscontinuous) {
                bool c = G.spaces[0].dimension() == 3 * T.cells().size();
                checks["dim0_is_three_per_cell"] = c;
                ok = ok && c;
            }
            if (rule == GluingRule::EdgeIdentified || rule == GluingRule::General) {
                bool c = G.betti[0] == T.connected_components();
                checks["h0_is_components"] = c;
                ok = ok && c;
            }
            nlohmann::json row = {{"mesh", m.name},
                                  {"rule", to_string(rule)},
                                  {"dimension", n},
                                  {"f_vector", T.f_vector()},
                                  {"components", T.connected_components()},
                                  {"dims", G.dims()},
                                  {"betti_blowup", G.betti},
                                  {"betti_simplicial", simplicial},
                                  {"match", G.betti == simplicial},
                                  {"checks", checks},
                                  {"pass", ok}};
            std::set<VertexSet> skipped;
            for (const auto& s : G.spaces) skipped.insert(s.skipped_boundary_faces.begin(), s.skipped_boundary_faces.end());
            if (!skipped.empty()) row["boundary_faces_without_sum_zero"] = skipped.size();
            if (T.mode() == ManifoldMode::None) row["manifold_checks_skipped"] = true;
            if (rule == GluingRule::General) {
                ++general_runs;
                general_matches += G.betti == simplicial;
            }
            if (!ok) r.pass = false;
            ++runs;
            out.push_back(row);
        }
    }
    r.results = {{"runs", out},
                 {"general_rule_matches_simplicial", std::to_string(general_matches) + "/" +
                                                          std::to_string(general_runs)}};
    r.summary = "global assembly: " + std::to_string(runs) + " mesh/rule runs " + (r.pass ? "pass" : "FAIL") +
                ", general rule matches simplicial on " + std::to_string(general_matches) + "/" +
                std::to_string(general_runs) + " meshes" + (r.complete ? "" : " (budget reached)");
    return r;
}

}  // namespace blowup
