// Command-line surface: single-statistic runs with JSON output, the
// reduction generator, and a corpus runner producing CSV.

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "degpat/degpat.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace degpat;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitTimeout = 3;
constexpr int kExitMemoryCap = 4;

struct CommonOpts {
    std::string input;
    double timeout_s = 0.0; // 0 = none unless explicitly passed
    bool timeout_set = false;
    std::int64_t max_mem_mb = 0;
    std::string format = "edgelist";
};

std::string network_name(const std::string& path) {
    fs::path p(path);
    std::string stem = p.stem().string();
    return stem.empty() ? p.filename().string() : stem;
}

LoadResult load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open input file: " + path);
    return load_edge_list(in);
}

void configure_budget(RunBudget& b, const CommonOpts& o) {
    if (o.timeout_set) b.set_deadline_after(o.timeout_s);
    if (o.max_mem_mb > 0) b.set_memory_cap_bytes(static_cast<std::uint64_t>(o.max_mem_mb) << 20);
}

json label_array(const std::vector<std::string>& labels, const std::vector<VertexId>& vs) {
    json arr = json::array();
    for (VertexId v : vs) arr.push_back(labels[v]);
    return arr;
}

json witness_json(const std::vector<std::string>& labels, const VcResult& r) {
    json arr = json::array();
    for (const auto& [mask, w] : r.witnesses) {
        std::vector<VertexId> subset;
        for (std::size_t i = 0; i < r.shattered_set.size(); ++i)
            if ((mask >> i) & 1u) subset.push_back(r.shattered_set[i]);
        arr.push_back({{"subset", label_array(labels, subset)}, {"witness", labels[w]}});
    }
    return arr;
}

int emit(const json& j, int code) {
    std::cout << j.dump() << "\n";
    return code;
}

// Runs fn under the budget and fills status / exit code uniformly.
template <typename F>
int run_guarded(json& record, const CommonOpts& opts, F&& fn) {
    RunBudget budget;
    configure_budget(budget, opts);
    auto t0 = std::chrono::steady_clock::now();
    try {
        fn(budget, record);
        record["status"] = "ok";
        record["ms"] = static_cast<std::int64_t>(
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
        return emit(record, kExitOk);
    } catch (const TimeoutError&) {
        record["status"] = "timeout";
        return emit(record, kExitTimeout);
    } catch (const MemoryCapError&) {
        record["status"] = "memory-cap";
        return emit(record, kExitMemoryCap);
    }
}

json base_record(const std::string& input, const LoadResult& lr, std::uint32_t degeneracy,
                 const std::string& stat) {
    return json{{"schema", 1},
                {"network", network_name(input)},
                {"n", lr.graph.num_vertices()},
                {"m", lr.graph.num_edges()},
                {"degeneracy", degeneracy},
                {"stat", stat}};
}

Pattern resolve_pattern(const std::string& spec) {
    if (spec.rfind("builtin:", 0) == 0) return parse_builtin_pattern(spec.substr(8));
    std::ifstream in(spec);
    if (!in) throw ParseError(0, "cannot open pattern file: " + spec);
    json j;
    in >> j;
    return pattern_from_json(j);
}

// ---- corpus runner ------------------------------------------------------

struct CorpusOpts {
    std::string dir;
    std::string out_csv;
    double timeout_s = 0.0;
    bool timeout_set = false;
    std::int64_t max_mem_mb = 0;
    unsigned jobs = 1;
    bool stable = false;
    std::uint32_t biclique_s = 2, biclique_t = 2, comatching_t = 2;
};

struct CsvRow {
    std::string network, n, m, degeneracy, stat, value, ms, status;
    std::string line() const {
        return network + "," + n + "," + m + "," + degeneracy + "," + stat + "," + value + "," +
               ms + "," + status;
    }
};

std::vector<CsvRow> run_network(const fs::path& file, const CorpusOpts& opts) {
    std::vector<CsvRow> rows;
    std::string name = network_name(file.string());
    LoadResult lr;
    try {
        lr = load_network(file.string());
    } catch (const std::exception&) {
        rows.push_back({name, "", "", "", "load", "", "", "error"});
        return rows;
    }
    OrderedGraph og = degeneracy_order(lr.graph);
    std::string n = std::to_string(lr.graph.num_vertices());
    std::string m = std::to_string(lr.graph.num_edges());
    std::string d = std::to_string(og.degeneracy());

    struct Stat {
        std::string name;
        std::function<std::string(RunBudget&)> run;
    };
    std::vector<Stat> stats = {
        {"vcdim", [&](RunBudget& b) { return std::to_string(vc_exact(lr.graph, &b).vc); }},
        {"biclique",
         [&](RunBudget& b) {
             return count_bicliques(lr.graph, opts.biclique_s, opts.biclique_t, &b).count.str();
         }},
        {"comatching",
         [&](RunBudget& b) { return count_comatchings(lr.graph, opts.comatching_t, &b).count.str(); }},
        {"ladder", [&](RunBudget& b) { return std::to_string(ladder_approx(lr.graph, &b).k); }},
    };

    for (const auto& st : stats) {
        RunBudget budget;
        if (opts.timeout_set) budget.set_deadline_after(opts.timeout_s);
        if (opts.max_mem_mb > 0)
            budget.set_memory_cap_bytes(static_cast<std::uint64_t>(opts.max_mem_mb) << 20);
        auto t0 = std::chrono::steady_clock::now();
        CsvRow row{name, n, m, d, st.name, "", "", ""};
        try {
            budget.check();
            row.value = st.run(budget);
            row.status = "ok";
            auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                          .count();
            row.ms = opts.stable ? "0" : std::to_string(static_cast<std::int64_t>(ms));
        } catch (const TimeoutError&) {
            row.status = "timeout";
            row.ms = opts.stable ? "0" : "";
        } catch (const MemoryCapError&) {
            row.status = "memory-cap";
            row.ms = opts.stable ? "0" : "";
        } catch (const std::exception&) {
            row.status = "error";
            row.ms = opts.stable ? "0" : "";
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

int run_corpus(const CorpusOpts& opts) {
    std::vector<fs::path> files;
    if (!opts.dir.empty()) {
        if (!fs::exists(opts.dir)) {
            std::cerr << "corpus directory does not exist: " << opts.dir << "\n";
            return kExitParse;
        }
        for (const auto& e : fs::directory_iterator(opts.dir))
            if (e.is_regular_file()) files.push_back(e.path());
        std::sort(files.begin(), files.end());
    }

    std::vector<std::vector<CsvRow>> blocks(files.size());
    std::atomic<std::size_t> next{0};
    unsigned jobs = std::max(1u, opts.jobs);
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= files.size()) return;
            blocks[i] = run_network(files[i], opts);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::ostringstream csv;
    csv << "network,n,m,degeneracy,stat,value,ms,status\n";
    std::map<std::string, std::size_t> completed;
    for (const char* s : {"vcdim", "biclique", "comatching", "ladder"}) completed[s] = 0;
    for (const auto& block : blocks)
        for (const auto& row : block) {
            csv << row.line() << "\n";
            if (row.status == "ok") ++completed[row.stat];
        }
    for (const char* s : {"vcdim", "biclique", "comatching", "ladder"})
        csv << "summary,,,," << s << "," << completed[s] << ",,summary\n";

    if (opts.out_csv.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(opts.out_csv);
        if (!out) {
            std::cerr << "cannot write csv: " << opts.out_csv << "\n";
            return 1;
        }
        out << csv.str();
    }
    return kExitOk;
}

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_input = true) {
    auto* in = cmd->add_option("--input", o.input, "edge-list file");
    if (needs_input) in->required();
    cmd->add_option("--timeout", o.timeout_s, "wall-clock budget in seconds")
        ->check(CLI::NonNegativeNumber)
        ->each([&o](const std::string&) { o.timeout_set = true; });
    cmd->add_option("--max-mem-mb", o.max_mem_mb, "cooperative memory cap in MiB");
    cmd->add_option("--format", o.format, "input format (only 'edgelist')")
        ->check(CLI::IsMember({"edgelist"}));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bipartite pattern statistics for degenerate graphs"};
    app.require_subcommand(1);

    CommonOpts stats_o, vc_o, bic_o, com_o, lad_o, pat_o;

    auto* cmd_stats = app.add_subcommand("stats", "vertex/edge/degeneracy summary");
    add_common(cmd_stats, stats_o);

    auto* cmd_vc = app.add_subcommand("vcdim", "VC-dimension of the neighborhood set system");
    add_common(cmd_vc, vc_o);
    bool vc_exact_flag = false, vc_linear_flag = false;
    double vc_eps = 0.0;
    cmd_vc->add_flag("--exact", vc_exact_flag, "exact computation (default)");
    auto* eps_opt = cmd_vc->add_option("--approx", vc_eps, "epsilon-approximation, eps in (0,1]");
    cmd_vc->add_flag("--linear", vc_linear_flag, "single-vertex-pool approximation");

    auto* cmd_bic = app.add_subcommand("biclique", "count or decide K_{s,t} patterns");
    add_common(cmd_bic, bic_o);
    std::uint32_t bic_s = 2, bic_t = 2;
    std::string bic_mode = "count";
    cmd_bic->add_option("--s", bic_s, "larger side (s >= t)");
    cmd_bic->add_option("--t", bic_t, "smaller side");
    cmd_bic->add_option("--mode", bic_mode)->check(CLI::IsMember({"count", "decide"}));

    auto* cmd_com = app.add_subcommand("comatching", "count or decide co-matching patterns");
    add_common(cmd_com, com_o);
    std::uint32_t com_t = 2;
    std::string com_mode = "count";
    cmd_com->add_option("--t", com_t, "matching size (t >= 2)");
    cmd_com->add_option("--mode", com_mode)->check(CLI::IsMember({"count", "decide"}));

    auto* cmd_lad = app.add_subcommand("ladder", "factor-2 ladder index approximation");
    add_common(cmd_lad, lad_o);

    auto* cmd_pat = app.add_subcommand("pattern", "general bipartite pattern counting");
    add_common(cmd_pat, pat_o);
    std::string pat_spec, pat_mode = "count";
    cmd_pat->add_option("--pattern", pat_spec, "pattern file or builtin:<name:args>")->required();
    cmd_pat->add_option("--mode", pat_mode)->check(CLI::IsMember({"count", "decide"}));

    auto* cmd_red = app.add_subcommand("genreduction", "clique-to-VC reduction instance");
    std::string red_host, red_out;
    std::uint32_t red_k = 3;
    cmd_red->add_option("--host", red_host, "host graph edge list")->required();
    cmd_red->add_option("--k", red_k, "clique size (3..20)");
    cmd_red->add_option("--out", red_out, "output edge list")->required();

    auto* cmd_cor = app.add_subcommand("corpus", "run all statistics over a directory");
    CorpusOpts cor;
    cmd_cor->add_option("--dir", cor.dir, "directory of edge-list files")->required();
    cmd_cor->add_option("--timeout", cor.timeout_s, "per-task budget in seconds")
        ->check(CLI::NonNegativeNumber)
        ->each([&cor](const std::string&) { cor.timeout_set = true; });
    cmd_cor->add_option("--jobs", cor.jobs, "concurrent networks");
    cmd_cor->add_option("--out", cor.out_csv, "CSV output path (stdout when absent)");
    cmd_cor->add_option("--max-mem-mb", cor.max_mem_mb, "cooperative memory cap in MiB");
    cmd_cor->add_flag("--stable", cor.stable, "reproducible output: zero the ms column");
    cmd_cor->add_option("--s", cor.biclique_s, "biclique s");
    cmd_cor->add_option("--t", cor.biclique_t, "biclique t and co-matching t")
        ->each([&cor](const std::string& v) { cor.comatching_t = std::stoul(v); });

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_stats->parsed()) {
            LoadResult lr = load_network(stats_o.input);
            OrderedGraph og = degeneracy_order(lr.graph);
            json rec = base_record(stats_o.input, lr, og.degeneracy(), "stats");
            rec["dropped_duplicate_edges"] = lr.dropped_duplicate_edges;
            rec["dropped_self_loops"] = lr.dropped_self_loops;
            return run_guarded(rec, stats_o, [&](RunBudget&, json&) {});
        }

        if (cmd_vc->parsed()) {
            LoadResult lr = load_network(vc_o.input);
            OrderedGraph og = degeneracy_order(lr.graph);
            std::string stat = vc_linear_flag ? "vcdim_linear"
                               : (eps_opt->count() ? "vcdim_approx" : "vcdim_exact");
            json rec = base_record(vc_o.input, lr, og.degeneracy(), stat);
            return run_guarded(rec, vc_o, [&](RunBudget& b, json& r) {
                VcResult res;
                if (vc_linear_flag)
                    res = vc_approx_linear(lr.graph, &b);
                else if (eps_opt->count())
                    res = vc_approx(lr.graph, vc_eps, &b);
                else
                    res = vc_exact(lr.graph, &b);
                r["value"] = res.vc;
                r["vc"] = res.vc;
                r["shattered_set"] = label_array(lr.labels, res.shattered_set);
                r["witnesses"] = witness_json(lr.labels, res);
                if (stat == "vcdim_approx") r["epsilon"] = res.epsilon;
            });
        }

        if (cmd_bic->parsed()) {
            LoadResult lr = load_network(bic_o.input);
            OrderedGraph og = degeneracy_order(lr.graph);
            json rec = base_record(bic_o.input, lr, og.degeneracy(), "biclique");
            rec["s"] = bic_s;
            rec["t"] = bic_t;
            return run_guarded(rec, bic_o, [&](RunBudget& b, json& r) {
                auto res = count_bicliques(lr.graph, bic_s, bic_t, &b);
                if (bic_mode == "decide")
                    r["value"] = res.count > 0;
                else
                    r["value"] = res.count.str();
                r["candidates_examined"] = res.candidates_examined;
            });
        }

        if (cmd_com->parsed()) {
            LoadResult lr = load_network(com_o.input);
            OrderedGraph og = degeneracy_order(lr.graph);
            json rec = base_record(com_o.input, lr, og.degeneracy(), "comatching");
            rec["t"] = com_t;
            return run_guarded(rec, com_o, [&](RunBudget& b, json& r) {
                auto res = count_comatchings(lr.graph, com_t, &b);
                if (com_mode == "decide")
                    r["value"] = res.count > 0;
                else
                    r["value"] = res.count.str();
                r["candidates_examined"] = res.candidates_examined;
            });
        }

        if (cmd_lad->parsed()) {
            LoadResult lr = load_network(lad_o.input);
            OrderedGraph og = degeneracy_order(lr.graph);
            json rec = base_record(lad_o.input, lr, og.degeneracy(), "ladder");
            return run_guarded(rec, lad_o, [&](RunBudget& b, json& r) {
                auto res = ladder_approx(lr.graph, &b);
                r["value"] = res.k;
                json levels = json::array();
                for (const auto& lv : res.levels) {
                    std::vector<VertexId> subset;
                    for (std::size_t i = 0; i < res.universe.size(); ++i)
                        if ((lv.mask >> i) & 1u) subset.push_back(res.universe[i]);
                    levels.push_back({{"subset", label_array(lr.labels, subset)},
                                      {"witness", lr.labels[lv.witness]}});
                }
                auto emb = ladder_embedding(res);
                r["certificate"] = {{"universe", label_array(lr.labels, res.universe)},
                                    {"levels", levels},
                                    {"a_side", label_array(lr.labels, emb.a_side)},
                                    {"b_side", label_array(lr.labels, emb.b_side)}};
            });
        }

        if (cmd_pat->parsed()) {
            LoadResult lr = load_network(pat_o.input);
            OrderedGraph og = degeneracy_order(lr.graph);
            Pattern p = resolve_pattern(pat_spec);
            json rec = base_record(pat_o.input, lr, og.degeneracy(), "pattern");
            rec["pattern"] = pattern_to_json(p);
            return run_guarded(rec, pat_o, [&](RunBudget& b, json& r) {
                if (pat_mode == "decide") {
                    r["value"] = decide_pattern(lr.graph, p, &b);
                } else {
                    auto res = count_pattern(lr.graph, p, &b);
                    r["value"] = res.count.str();
                    r["candidates_examined"] = res.candidates_examined;
                }
            });
        }

        if (cmd_red->parsed()) {
            LoadResult host = load_network(red_host);
            auto red = clique_reduction(host.graph, red_k);
            std::ofstream out(red_out);
            if (!out) {
                std::cerr << "cannot write: " << red_out << "\n";
                return 1;
            }
            out << "# clique reduction of " << network_name(red_host) << " with k=" << red_k << "\n";
            std::vector<VertexId> isolated;
            for (VertexId v = 0; v < red.graph.num_vertices(); ++v)
                if (red.graph.degree(v) == 0) isolated.push_back(v);
            if (!isolated.empty()) {
                out << "# isolated vertices (not expressible as edges):";
                for (VertexId v : isolated) out << " " << red.labels[v];
                out << "\n";
            }
            for (VertexId v = 0; v < red.graph.num_vertices(); ++v)
                for (VertexId u : red.graph.neighbors(v))
                    if (u > v) out << red.labels[v] << " " << red.labels[u] << "\n";
            json rec{{"schema", 1},
                     {"stat", "genreduction"},
                     {"host", network_name(red_host)},
                     {"k", red_k},
                     {"n", red.graph.num_vertices()},
                     {"m", red.graph.num_edges()},
                     {"isolated", isolated.size()},
                     {"out", red_out},
                     {"status", "ok"}};
            return emit(rec, kExitOk);
        }

        if (cmd_cor->parsed()) return run_corpus(cor);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
