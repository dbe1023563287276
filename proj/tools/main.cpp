#include "blowup/suites.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

using namespace blowup;
using nlohmann::json;

namespace {

constexpr const char* kSchema = "blowup-report/1";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Report {
    std::string command;
    json inputs = json::object();
    json results = json::object();
    bool pass = true;
    bool complete = true;
    std::vector<std::string> summary;

    void add(const SuiteResult& s) {
        results[s.name] = s.results;
        pass = pass && s.pass;
        complete = complete && s.complete;
        summary.push_back(s.summary);
    }
};

void require_n(int n, int lo, int hi) {
    if (n < lo || n > hi)
        throw UsageError("--n must be between " + std::to_string(lo) + " and " + std::to_string(hi));
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

std::string latex_basis(int n, const std::vector<Flag>& flags) {
    std::string s = "\\begin{tabular}{lll}\nflag & $k$ & $\\psi_F$ \\\\\n\\hline\n";
    for (const auto& F : flags)
        s += "$" + latex::flag(F) + "$ & " + std::to_string(F.k()) + " & $" + latex::form(shadow_form(F)) + "$ \\\\\n";
    s += "\\end{tabular}\n";
    (void)n;
    return s;
}

void eval_grid(const std::string& path, int n, const std::vector<Flag>& flags, int steps) {
    if (steps < 1) throw UsageError("--eval-grid needs a positive resolution");
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    out << "flag,component";
    for (int i = 0; i <= n; ++i) out << ",l" << i;
    out << ",value\n";
    // interior lattice points of the simplex with spacing 1/steps
    std::vector<std::vector<int>> points;
    std::vector<int> cur(static_cast<std::size_t>(n + 1));
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == n) {
            cur[static_cast<std::size_t>(i)] = left;
            if (left > 0) points.push_back(cur);
            return;
        }
        for (int a = 1; a <= left; ++a) {
            cur[static_cast<std::size_t>(i)] = a;
            rec(i + 1, left - a);
        }
    };
    rec(0, steps);
    for (const auto& F : flags) {
        RationalForm psi = shadow_form(F);
        for (const auto& [w, c] : psi.terms()) {
            std::string comp = "1";
            if (!w.empty()) {
                comp.clear();
                for (Vertex v : w) comp += "dl" + std::to_string(v);
            }
            for (const auto& p : points) {
                std::vector<double> x;
                for (int a : p) x.push_back(static_cast<double>(a) / steps);
                out << '"' << F.to_string() << "\"," << comp;
                for (double v : x) out << ',' << v;
                out << ',' << c.evaluate(std::span<const double>(x)) << '\n';
            }
        }
    }
}

std::vector<GluingRule> parse_rules(const std::string& s) {
    if (s == "all") return all_rules();
    try {
        return {parse_gluing_rule(s)};
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

std::vector<NamedMesh> load_meshes(const std::string& spec) {
    if (spec.empty() || spec == "bundled") return bundled_meshes();
    for (auto& m : bundled_meshes())
        if (m.name == spec) return {m};
    if (!std::filesystem::exists(spec)) throw UsageError("no mesh file or bundled mesh named '" + spec + "'");
    return {NamedMesh{std::filesystem::path(spec).stem().string(), Triangulation::load(spec), {}}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shadow forms on blown-up simplices: bases, degrees of freedom and verification suites"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    int n = 2, k = -1, r = 3, eval_steps = 0;
    double budget = 0;
    std::uint64_t samples = 100000, seed = 1;
    std::string latex_path, mesh, rule = "all", check = "all", target = "pF", dir = "meshes", grid_path, mode;
    bool matrices = false, assert_identity = false, local = false, global = false;

    auto* basis = app.add_subcommand("basis", "Shadow form basis for one simplex");
    basis->add_option("--n", n, "simplex dimension")->required();
    basis->add_option("--k", k, "form degree (default: all)");
    basis->add_option("--latex", latex_path, "write a LaTeX table");
    basis->add_option("--eval-grid", eval_steps, "sample coefficients on a simplex lattice with this many steps");
    basis->add_option("--grid-file", grid_path, "CSV path for --eval-grid");

    auto* dofm = app.add_subcommand("dof-matrix", "Degrees of freedom applied to the basis");
    dofm->add_option("--n", n)->required();
    dofm->add_option("--k", k, "form degree (default: all)");
    dofm->add_flag("--matrices", matrices, "include full matrices");
    dofm->add_flag("--assert-identity", assert_identity, "fail unless every matrix is the identity");
    dofm->add_option("--budget-seconds", budget);

    auto* dch = app.add_subcommand("d-check", "Exterior derivative as a signed sum of coarsenings");
    dch->add_option("--n", n)->required();
    dch->add_option("--budget-seconds", budget);

    auto* wch = app.add_subcommand("whitney-check", "Whitney forms as sums of shadow forms");
    wch->add_option("--n", n)->required();
    wch->add_option("--budget-seconds", budget);

    auto* coh = app.add_subcommand("cohomology", "Local blow-up complex or global assembly on a mesh");
    auto* loc = coh->add_flag("--local", local, "cohomology of one blown-up simplex");
    auto* glo = coh->add_flag("--global", global, "assemble on meshes");
    loc->excludes(glo);
    coh->add_option("mode", mode, "local or global, same as the flags")->check(CLI::IsMember({"local", "global"}));
    coh->add_option("--n", n);
    coh->add_option("--mesh", mesh, "mesh JSON file or bundled mesh name (default: all bundled)");
    coh->add_option("--rule", rule, "gluing rule or 'all'");
    coh->add_option("--budget-seconds", budget);

    auto* hio = app.add_subcommand("higher-order", "Higher-order candidate scalar spaces");
    hio->add_option("--n", n)->required();
    hio->add_option("--r", r)->required();
    hio->add_option("--check", check, "independence|containment|vanishing|all")
        ->check(CLI::IsMember({"independence", "containment", "vanishing", "all", "none"}));
    hio->add_option("--latex", latex_path);
    hio->add_option("--budget-seconds", budget);

    auto* mcv = app.add_subcommand("mc-verify", "Monte Carlo estimates against exact values");
    mcv->add_option("--target", target)->check(CLI::IsMember({"pF", "higher", "dof"}));
    mcv->add_option("--n", n)->required();
    mcv->add_option("--r", r);
    mcv->add_option("--samples", samples);
    mcv->add_option("--seed", seed);
    mcv->add_option("--budget-seconds", budget);

    auto* ems = app.add_subcommand("emit-samples", "Write the bundled meshes as JSON files");
    ems->add_option("--dir", dir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto start = std::chrono::steady_clock::now();
    Report rep;
    rep.command = app.get_subcommands().front()->get_name();
    const Deadline deadline(budget);
    if (budget > 0) rep.inputs["budget_seconds"] = budget;
    if (const char* t = std::getenv("BLOWUP_THREADS")) rep.inputs["threads"] = t;

    try {
        if (*basis) {
            require_n(n, 1, 5);
            if (k >= 0 && k > n) throw UsageError("--k must be at most --n");
            rep.inputs["n"] = n;
            if (k >= 0) rep.inputs["k"] = k;
            const VertexSet V = VertexSet::range(static_cast<Vertex>(n + 1));
            std::vector<Flag> flags;
            for (int kk = (k < 0 ? 0 : k); kk <= (k < 0 ? n : k); ++kk)
                for (auto& F : enumerate_flags(V, kk)) flags.push_back(std::move(F));
            json entries = json::array();
            for (const auto& F : flags) {
                auto el = shadow_element(F);
                entries.push_back({{"flag", F.to_string()},
                                   {"shorthand", F.shorthand()},
                                   {"k", F.k()},
                                   {"probability", el.probability.to_string()},
                                   {"form", to_json(el.form)},
                                   {"text", el.form.to_string()}});
            }
            rep.results["count"] = flags.size();
            rep.results["basis"] = entries;
            rep.summary.push_back("basis n=" + std::to_string(n) + ": " + std::to_string(flags.size()) + " forms");
            if (n == 2 || n == 3) rep.add(table_check(n));
            if (k <= 0) rep.add(partition_of_unity(n));
            if (!latex_path.empty()) {
                write_file(latex_path, latex_basis(n, flags));
                rep.results["latex"] = latex_path;
            }
            if (eval_steps > 0) {
                if (grid_path.empty()) grid_path = "basis_n" + std::to_string(n) + "_grid.csv";
                eval_grid(grid_path, n, flags, eval_steps);
                rep.results["grid"] = grid_path;
            }
        } else if (*dofm) {
            require_n(n, 1, 5);
            if (k > n) throw UsageError("--k must be at most --n");
            rep.inputs["n"] = n;
            if (k >= 0) rep.inputs["k"] = k;
            rep.inputs["assert_identity"] = assert_identity;
            SuiteResult s = unisolvence(n, k, deadline, matrices);
            if (!assert_identity) {
                s.results["asserted"] = false;
                s.pass = true;
            }
            rep.add(s);
        } else if (*dch) {
            require_n(n, 1, 5);
            rep.inputs["n"] = n;
            rep.add(d_check(n, deadline));
        } else if (*wch) {
            require_n(n, 1, 5);
            rep.inputs["n"] = n;
            rep.add(whitney_check(n, deadline));
        } else if (*coh) {
            if ((mode == "local" && global) || (mode == "global" && local))
                throw UsageError("cohomology: mode " + mode + " conflicts with the flag given");
            local = local || mode == "local";
            global = global || mode == "global";
            if (!local && !global) throw UsageError("cohomology needs --local or --global");
            if (local) {
                require_n(n, 1, 5);
                rep.inputs = {{"mode", "local"}, {"n", n}};
                rep.add(local_cohomology(n, deadline));
            } else {
                rep.inputs["mode"] = "global";
                rep.inputs["mesh"] = mesh.empty() ? "bundled" : mesh;
                rep.inputs["rule"] = rule;
                auto meshes = load_meshes(mesh);
                auto rules = parse_rules(rule);
                if (rules.size() == 1)
                    for (const auto& m : meshes)
                        if (!rule_applies(rules[0], m.mesh.dimension()))
                            throw UsageError("rule " + rule + " needs a 2D mesh; " + m.name + " has dimension " +
                                             std::to_string(m.mesh.dimension()));
                rep.add(global_assembly(meshes, rules, deadline));
            }
        } else if (*hio) {
            require_n(n, 1, 4);
            if (r < 1 || r > 8) throw UsageError("--r must be between 1 and 8");
            rep.inputs = {{"n", n}, {"r", r}, {"check", check}};
            HigherOrderChecks checks;
            checks.containment = check == "all" || check == "containment";
            checks.vanishing = check == "all" || check == "vanishing";
            checks.independence = check == "all" || check == "independence";
            SuiteResult s = higher_order(n, static_cast<unsigned>(r), checks, deadline);
            if (!latex_path.empty()) {
                std::string t = "\\begin{tabular}{lll}\nflag & sequence & probability \\\\\n\\hline\n";
                for (const auto& c : enumerate_experiments(VertexSet::range(static_cast<Vertex>(n + 1)),
                                                           static_cast<unsigned>(r)))
                    t += "$" + latex::flag(c.flag) + "$ & $" + c.sequence.to_string() + "$ & $" +
                         latex::fn(c.probability) + "$ \\\\\n";
                t += "\\end{tabular}\n";
                write_file(latex_path, t);
                s.results["latex"] = latex_path;
            }
            rep.add(s);
        } else if (*mcv) {
            if (samples < 1) throw UsageError("--samples must be positive");
            require_n(n, 1, target == "dof" ? 3 : 4);
            if (r < 1 || r > 5) throw UsageError("--r must be between 1 and 5");
            McTarget t = target == "pF" ? McTarget::PF : target == "higher" ? McTarget::Higher : McTarget::Dof;
            rep.inputs = {{"target", target}, {"n", n}, {"samples", samples}, {"seed", seed}};
            if (t == McTarget::Higher) rep.inputs["r"] = r;
            rep.add(mc_verify(t, n, static_cast<unsigned>(r), samples, seed, deadline));
        } else if (*ems) {
            rep.inputs["dir"] = dir;
            std::filesystem::create_directories(dir);
            json written = json::array();
            for (const auto& s : sample_meshes()) {
                std::string path = (std::filesystem::path(dir) / (s.name + ".json")).string();
                write_file(path, s.document.dump(2) + "\n");
                written.push_back(path);
            }
            rep.results["files"] = written;
            rep.summary.push_back("wrote " + std::to_string(written.size()) + " meshes to " + dir);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const MeshError& e) {
        std::cerr << "mesh error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        rep.pass = false;
        rep.results["error"] = e.what();
        rep.summary.push_back(std::string("error: ") + e.what());
    }

    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    json out = {{"schema", kSchema},       {"command", rep.command}, {"inputs", rep.inputs},
                {"results", rep.results},  {"pass", rep.pass},       {"complete", rep.complete},
                {"timing_ms", std::round(ms * 1000) / 1000}};
    std::cout << out.dump(2) << "\n";
    for (const auto& s : rep.summary) std::cerr << s << "\n";
    std::cerr << (rep.pass ? "PASS" : "FAIL") << (rep.complete ? "" : " (partial)") << "\n";
    return rep.pass ? 0 : 1;
}
