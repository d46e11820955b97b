#include <chrono>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ringforge/ringforge.hpp"

using namespace ringforge;
using json = nlohmann::ordered_json;

namespace {

enum Exit { ok = 0, validation_failure = 1, parse_failure = 2, budget_or_infeasible = 3 };

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

// "0.25", "1/4" or "1" as an exact rational.
Ratio parse_ratio(const std::string& s) {
    try {
        auto slash = s.find('/');
        if (slash != std::string::npos) return Ratio(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
        auto dot = s.find('.');
        if (dot == std::string::npos) return Ratio(std::stoll(s));
        std::string frac = s.substr(dot + 1);
        if (frac.size() > 12) throw ParseError("too many decimals in '" + s + "'");
        cost_t den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        cost_t whole = dot == 0 ? 0 : std::stoll(s.substr(0, dot));
        return Ratio(whole * den + (frac.empty() ? 0 : std::stoll(frac)), den);
    } catch (const std::logic_error&) {
        throw ParseError("invalid number '" + s + "'");
    }
}

std::string ratio_str(const Ratio& r) {
    std::ostringstream os;
    if (r.denominator() == 1) os << r.numerator();
    else os << r.numerator() << "/" << r.denominator();
    return os.str();
}

// Costs in input units: the loader scales fractional costs to integers.
std::string unscaled(cost_t c, cost_t scale) { return ratio_str(Ratio(c, scale)); }

bool is_cactus_text(const std::string& text) {
    std::istringstream is(text);
    std::string word;
    while (is >> word) {
        if (word[0] == '#') {
            std::getline(is, word);
            continue;
        }
        return word == "cactus";
    }
    return false;
}

struct Problem {
    Instance ring;
    std::optional<CactusInstance> cactus;
    UnfoldMap map;
};

Problem load_problem(const std::string& path) {
    std::string text = read_file(path);
    Problem p;
    if (is_cactus_text(text)) {
        p.cactus = load_cactus(text);
        auto [ring, map] = unfold_cactus(*p.cactus);
        p.ring = std::move(ring);
        p.map = std::move(map);
    } else {
        p.ring = load_instance(text);
    }
    return p;
}

// Link ids in the input file's numbering.
std::vector<int> to_input_ids(const Problem& p, const std::vector<int>& ring_ids) {
    if (!p.cactus) return ring_ids;
    auto back = map_solution_back(p.ring, p.map, ring_ids);
    if (!is_wcap_solution(*p.cactus, back)) throw ValidationError("mapped solution is not a cactus solution");
    return back;
}

json links_json(const Instance& inst, const std::vector<int>& ids) {
    json arr = json::array();
    for (int id : ids) {
        const Link& l = inst.links[id];
        arr.push_back({{"id", id}, {"u", l.u}, {"v", l.v}, {"cost", unscaled(l.cost, inst.scale)}});
    }
    return arr;
}

json arcs_json(const Instance& inst, const DirectedSolution& f) {
    json arr = json::array();
    for (const auto& d : f)
        arr.push_back({{"tail", d.tail}, {"head", d.head}, {"origin", d.origin}, {"cost", unscaled(d.cost, inst.scale)}});
    return arr;
}

void emit_json(const json& j, const std::string& path) { write_file(path, j.dump(2) + "\n"); }

SolveReport run_algorithm(const Instance& inst, const std::string& algo, Ratio eps, const SolveOptions& opt) {
    if (algo == "two-approx") return two_approx(inst);
    if (algo == "greedy") return relative_greedy(inst, eps, opt);
    if (algo == "local") return local_search(inst, eps, opt);
    throw std::invalid_argument("unknown algorithm " + algo);
}

// Reads `directed` then `arc <tail> <head> <origin>` lines; costs come from the origin link.
DirectedSolution load_directed(const std::string& path, const Instance& inst) {
    std::istringstream in(read_file(path));
    std::string line;
    int line_no = 0;
    bool header = false;
    DirectedSolution f;
    while (std::getline(in, line)) {
        ++line_no;
        auto tok = detail::tokens_of(line);
        if (tok.empty()) continue;
        auto where = "line " + std::to_string(line_no) + ": ";
        if (!header) {
            if (tok.size() != 1 || tok[0] != "directed") throw ParseError(where + "expected 'directed'");
            header = true;
            continue;
        }
        if (tok.size() != 4 || tok[0] != "arc") throw ParseError(where + "expected 'arc <tail> <head> <origin>'");
        int t = static_cast<int>(detail::parse_int(tok[1], line_no));
        int h = static_cast<int>(detail::parse_int(tok[2], line_no));
        int o = static_cast<int>(detail::parse_int(tok[3], line_no));
        if (o < 0 || o >= inst.num_links()) throw ParseError(where + "origin out of range");
        DirectedLink d{t, h, o, inst.links[o].cost};
        if (!is_shadow(inst.links[o], d)) throw ParseError(where + "arc is not a shadow of its origin");
        f.push_back(d);
    }
    if (!header) throw ParseError("missing 'directed' header");
    return f;
}

struct BenchRow {
    std::uint64_t seed = 0;
    int n = 0, m = 0;
    cost_t opt = 0, two = 0, greedy = 0, local = 0;
    int greedy_iters = 0, local_iters = 0;
};

BenchRow bench_one(std::uint64_t seed, int n, int m, cost_t max_cost, Ratio eps_greedy, Ratio eps_local,
                   const OracleBudget& budget) {
    Instance inst = gen_instance(n, m, max_cost, seed);
    BenchRow r;
    r.seed = seed;
    r.n = n;
    r.m = m;
    r.opt = exact_opt(inst, budget).cost;
    r.two = two_approx(inst).cost;
    auto g = relative_greedy(inst, eps_greedy);
    auto l = local_search(inst, eps_local);
    r.greedy = g.cost;
    r.greedy_iters = g.iterations;
    r.local = l.cost;
    r.local_iters = l.iterations;
    return r;
}

std::string ratio_cell(cost_t c, cost_t opt) {
    if (opt == 0) return c == 0 ? "1" : "inf";
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(6);
    os << static_cast<double>(c) / static_cast<double>(opt);
    return os.str();
}

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& s) {
    auto dots = s.find("..");
    try {
        if (dots == std::string::npos) {
            auto v = std::stoull(s);
            return {v, v};
        }
        return {std::stoull(s.substr(0, dots)), std::stoull(s.substr(dots + 2))};
    } catch (const std::logic_error&) {
        throw ParseError("invalid seed range '" + s + "'");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted ring and cactus augmentation solver"};
    app.require_subcommand(1);

    std::string input, output, report_path, solution_path, directed_path, algo = "local", eps_str = "1/2";
    int alpha = 0, n = 6, m = 8;
    cost_t max_cost = 10;
    std::uint64_t seed = 1;
    bool check = false, trace = false, no_timing = false, with_opt = false, ratio_mode = false;

    auto* solve = app.add_subcommand("solve", "Approximate a ring or cactus instance");
    solve->add_option("input", input, "Instance file")->required();
    solve->add_option("--algo", algo, "two-approx, greedy or local")
        ->check(CLI::IsMember({"two-approx", "greedy", "local"}));
    solve->add_option("--eps", eps_str, "Accuracy parameter, decimal or fraction");
    solve->add_option("--alpha", alpha, "Override the thinness bound");
    solve->add_option("-o,--output", output, "Solution file");
    solve->add_option("--report", report_path, "JSON report file ('-' for stdout)");
    solve->add_flag("--check", check, "Check invariants after every step");
    solve->add_flag("--trace", trace, "Include the per-iteration trace in the report");
    solve->add_flag("--with-opt", with_opt, "Also run the exact oracle and report the ratio");
    solve->add_flag("--no-timing", no_timing, "Omit wall time from the report");

    auto* exact = app.add_subcommand("exact", "Exact optimum by enumeration");
    exact->add_option("input", input, "Instance file")->required();
    exact->add_option("-o,--output", output, "Solution file");
    exact->add_option("--report", report_path, "JSON report file ('-' for stdout)");

    auto* validate = app.add_subcommand("validate", "Check a solution file against an instance");
    validate->add_option("input", input, "Instance file")->required();
    validate->add_option("solution", solution_path, "Solution file")->required();

    auto* decomp = app.add_subcommand("decompose", "Split a solution into thin components");
    decomp->add_option("input", input, "Instance file")->required();
    decomp->add_option("--solution", solution_path, "Solution to decompose (default: exact optimum)");
    decomp->add_option("--eps", eps_str, "Accuracy parameter");
    decomp->add_option("--report", report_path, "JSON report file ('-' for stdout)");

    auto* comp = app.add_subcommand("component", "Best thin component against the initial directed solution");
    comp->add_option("input", input, "Instance file")->required();
    comp->add_option("--alpha", alpha, "Thinness bound")->required();
    comp->add_flag("--ratio", ratio_mode, "Minimize cost over dropped cost instead");
    comp->add_option("--report", report_path, "JSON report file ('-' for stdout)");

    auto* verify = app.add_subcommand("verify-structure", "Check a directed solution's structure");
    verify->add_option("input", input, "Instance file")->required();
    verify->add_option("--directed", directed_path, "Directed solution (default: the initial one)");

    auto* gen = app.add_subcommand("gen", "Random feasible ring instance");
    gen->add_option("--n", n, "Ring size")->required();
    gen->add_option("--m", m, "Number of links")->required();
    gen->add_option("--max-cost", max_cost, "Largest link cost");
    gen->add_option("--seed", seed, "Random seed");
    gen->add_option("-o,--output", output, "Instance file");

    std::string seeds = "1..20", eps_greedy_str = "1/4";
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    auto* bench = app.add_subcommand("bench", "Compare solvers with the exact optimum on random instances");
    bench->add_option("--seeds", seeds, "Seed range a..b");
    bench->add_option("--n", n, "Ring size");
    bench->add_option("--m", m, "Number of links");
    bench->add_option("--max-cost", max_cost, "Largest link cost");
    bench->add_option("--eps-greedy", eps_greedy_str, "Greedy accuracy parameter");
    bench->add_option("--eps", eps_str, "Local search accuracy parameter");
    bench->add_option("--jobs", jobs, "Parallel workers");
    bench->add_option("-o,--output", output, "CSV file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? ok : parse_failure;
    }

    try {
        const OracleBudget budget = OracleBudget::from_env();
        Ratio eps = parse_ratio(eps_str);

        if (*solve) {
            Problem p = load_problem(input);
            SolveOptions opt{check, alpha};
            auto start = std::chrono::steady_clock::now();
            SolveReport rep = run_algorithm(p.ring, algo, eps, opt);
            double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            if (!is_wrap_solution(p.ring, rep.solution)) throw ValidationError("solver output is not a solution");
            auto ids = to_input_ids(p, rep.solution);
            json j;
            j["schema"] = 1;
            j["algorithm"] = rep.algorithm;
            j["input"] = p.cactus ? "cactus" : "ring";
            j["cost"] = unscaled(rep.cost, p.ring.scale);
            if (with_opt) {
                cost_t o = exact_opt(p.ring, budget).cost;
                j["opt"] = unscaled(o, p.ring.scale);
                j["ratio"] = o == 0 ? (rep.cost == 0 ? "1" : "inf") : ratio_str(Ratio(rep.cost, o));
            }
            j["eps"] = ratio_str(rep.eps);
            j["alpha"] = {{"nominal", rep.alpha_nominal}, {"used", rep.alpha_used}, {"capped", rep.alpha_capped}};
            j["iterations"] = rep.iterations;
            j["initial_cost"] = unscaled(rep.initial_cost, p.ring.scale);
            j["solution"] = ids;
            j["warnings"] = rep.warnings;
            if (trace) {
                json t = json::array();
                for (const auto& it : rep.trace)
                    t.push_back({{"component", it.component},
                                 {"component_cost", unscaled(it.component_cost, p.ring.scale)},
                                 {"dropped", arcs_json(p.ring, it.dropped)},
                                 {"drop_cost", unscaled(it.drop_cost, p.ring.scale)},
                                 {"ratio", ratio_str(it.ratio)},
                                 {"potential2_before", it.potential2_before},
                                 {"potential2_after", it.potential2_after},
                                 {"gain2", it.gain2}});
                j["trace"] = t;
            }
            if (!no_timing) j["wall_time_ms"] = ms;
            for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
            if (!output.empty()) write_file(output, save_solution(ids));
            emit_json(j, report_path.empty() ? "-" : report_path);
            return ok;
        }

        if (*exact) {
            Problem p = load_problem(input);
            auto r = exact_opt(p.ring, budget);
            auto ids = to_input_ids(p, r.links);
            if (!output.empty()) write_file(output, save_solution(ids));
            json j{{"schema", 1}, {"algorithm", "exact"}, {"cost", unscaled(r.cost, p.ring.scale)}, {"solution", ids}};
            emit_json(j, report_path.empty() ? "-" : report_path);
            return ok;
        }

        if (*validate) {
            Problem p = load_problem(input);
            std::istringstream in(read_file(solution_path));
            if (p.cactus) {
                Instance as_ids;
                as_ids.links = p.cactus->links;
                auto ids = load_solution(in, as_ids);
                bool good = is_wcap_solution(*p.cactus, ids);
                std::cout << (good ? "valid" : "invalid") << " cost " << total_cost(*p.cactus, ids) << "\n";
                return good ? ok : validation_failure;
            }
            auto ids = load_solution(in, p.ring);
            bool good = is_wrap_solution(p.ring, ids);
            std::cout << (good ? "valid" : "invalid") << " cost " << unscaled(total_cost(p.ring, ids), p.ring.scale)
                      << "\n";
            return good ? ok : validation_failure;
        }

        if (*decomp) {
            Problem p = load_problem(input);
            if (p.cactus) throw ParseError("decompose takes ring instances");
            std::vector<int> s;
            if (solution_path.empty()) s = exact_opt(p.ring, budget).links;
            else {
                std::istringstream in(read_file(solution_path));
                s = load_solution(in, p.ring);
            }
            if (!is_wrap_solution(p.ring, s)) throw ValidationError("solution to decompose is infeasible");
            DirectedSolution f0 = initial_directed(p.ring);
            auto dec = decompose(p.ring, s, f0, eps);
            json fs = json::array();
            for (const auto& x : dec.festoons) fs.push_back({{"links", x.order}, {"interval", {x.lo, x.hi}}});
            json arcs = json::array();
            for (const auto& a : dec.graph.arcs)
                arcs.push_back({{"from", a.from}, {"to", a.to}, {"vertex", a.owner}, {"label", a.label}});
            json removed = json::array();
            for (int i : dec.removed) removed.push_back(i);
            json j{{"schema", 1},
                   {"eps", ratio_str(eps)},
                   {"q", dec.q},
                   {"thinness", dec.thinness_bound},
                   {"festoons", fs},
                   {"dependency_arcs", arcs},
                   {"class_cost", dec.class_cost},
                   {"chosen_class", dec.chosen_class},
                   {"f0", arcs_json(p.ring, f0)},
                   {"removed", removed},
                   {"components", dec.components}};
            emit_json(j, report_path.empty() ? "-" : report_path);
            return ok;
        }

        if (*comp) {
            Problem p = load_problem(input);
            if (p.cactus) throw ParseError("component takes ring instances");
            DirectedSolution f0 = initial_directed(p.ring);
            json j{{"schema", 1}, {"alpha", alpha}, {"f0", arcs_json(p.ring, f0)}};
            if (ratio_mode) {
                std::vector<int> sub(f0.size());
                std::iota(sub.begin(), sub.end(), 0);
                auto r = find_min_ratio_component(p.ring, f0, sub, alpha);
                j["component"] = links_json(p.ring, r.k);
                j["ratio"] = ratio_str(r.ratio);
                j["dp_calls"] = r.dp_calls;
            } else {
                std::vector<cost_t> ct;
                for (const auto& d : f0) ct.push_back(d.cost);
                auto r = find_best_drop_component(p.ring, f0, ct, alpha);
                j["component"] = links_json(p.ring, r.k);
                j["value"] = unscaled(r.value, p.ring.scale);
            }
            emit_json(j, report_path.empty() ? "-" : report_path);
            return ok;
        }

        if (*verify) {
            Problem p = load_problem(input);
            if (p.cactus) throw ParseError("verify-structure takes ring instances");
            DirectedSolution f = directed_path.empty() ? initial_directed(p.ring) : load_directed(directed_path, p.ring);
            bool solution = is_directed_solution(p.ring, f);
            bool non_short = solution && is_non_shortenable(p.ring, f);
            auto rep = verify_structure(p.ring, f);
            json j{{"schema", 1},
                   {"directed_solution", solution},
                   {"non_shortenable", non_short},
                   {"arborescence", rep.arborescence},
                   {"planar", rep.planar},
                   {"distinct_directions", rep.distinct_directions},
                   {"message", rep.message}};
            emit_json(j, "-");
            return solution && rep.ok() ? ok : validation_failure;
        }

        if (*gen) {
            write_file(output, save_instance(gen_instance(n, m, max_cost, seed)));
            return ok;
        }

        if (*bench) {
            auto [first, last] = parse_range(seeds);
            if (last < first) throw ParseError("empty seed range");
            Ratio eps_greedy = parse_ratio(eps_greedy_str);
            std::vector<BenchRow> rows(last - first + 1);
            std::atomic<std::uint64_t> next{0};
            std::vector<std::future<void>> workers;
            for (unsigned w = 0; w < std::max(1u, jobs); ++w)
                workers.push_back(std::async(std::launch::async, [&] {
                    for (std::uint64_t i; (i = next++) < rows.size();)
                        rows[i] = bench_one(first + i, n, m, max_cost, eps_greedy, eps, budget);
                }));
            for (auto& w : workers) w.get();
            std::ostringstream os;
            os << "seed,n,m,opt,two_approx,greedy,local,ratio_two_approx,ratio_greedy,ratio_local,greedy_iterations,"
                  "local_iterations\n";
            for (const auto& r : rows)
                os << r.seed << "," << r.n << "," << r.m << "," << r.opt << "," << r.two << "," << r.greedy << ","
                   << r.local << "," << ratio_cell(r.two, r.opt) << "," << ratio_cell(r.greedy, r.opt) << ","
                   << ratio_cell(r.local, r.opt) << "," << r.greedy_iters << "," << r.local_iters << "\n";
            write_file(output, os.str());
            return ok;
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return parse_failure;
    } catch (const BudgetError& e) {
        std::cerr << e.what() << "\n";
        return budget_or_infeasible;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return budget_or_infeasible;
    } catch (const ValidationError& e) {
        std::cerr << "validation failed: " << e.what() << "\n";
        return validation_failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return validation_failure;
    }
    return ok;
}
