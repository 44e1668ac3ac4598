#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "test_support.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace testsupport;

namespace {

struct RunOutput {
    int exit_code;
    std::string stdout_text;
};

RunOutput run_cli(const std::string& args) {
    std::string cmd = std::string(DEGPAT_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), got);
    int status = pclose(pipe);
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, out};
}

fs::path scratch_dir() {
    fs::path d = fs::temp_directory_path() / "degpat_cli_tests";
    fs::create_directories(d);
    return d;
}

fs::path write_graph(const std::string& name, const Graph& g) {
    fs::path p = scratch_dir() / name;
    std::ofstream out(p);
    for (VertexId v = 0; v < g.num_vertices(); ++v)
        for (VertexId u : g.neighbors(v))
            if (u > v) out << v << " " << u << "\n";
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("stats subcommand") {
    fs::path p3 = write_graph("p3.txt", path(3));
    auto r = run_cli("stats --input " + p3.string());
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.stdout_text);
    CHECK(j["schema"] == 1);
    CHECK(j["n"] == 3);
    CHECK(j["m"] == 2);
    CHECK(j["degeneracy"] == 1);
    CHECK(j["status"] == "ok");
}

TEST_CASE("vcdim subcommand on the shattered fixture") {
    fs::path f = write_graph("sh2.txt", make_shattered(2).to_graph());
    auto r = run_cli("vcdim --exact --input " + f.string());
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.stdout_text);
    CHECK(j["value"] == 2);
    CHECK(j["shattered_set"].size() == 2);
    CHECK(j["witnesses"].size() == 4);

    auto r2 = run_cli("vcdim --linear --input " + f.string());
    REQUIRE(r2.exit_code == 0);
    CHECK(json::parse(r2.stdout_text)["stat"] == "vcdim_linear");

    auto r3 = run_cli("vcdim --approx 0.5 --input " + f.string());
    REQUIRE(r3.exit_code == 0);
    CHECK(json::parse(r3.stdout_text)["stat"] == "vcdim_approx");
}

TEST_CASE("ladder subcommand certificate") {
    fs::path f = write_graph("l6.txt", ladder_graph(6));
    auto r = run_cli("ladder --input " + f.string());
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.stdout_text);
    int k = j["value"];
    CHECK(k >= 3);
    CHECK(j["certificate"]["levels"].size() == static_cast<std::size_t>(k) + 1);
    CHECK(j["certificate"]["a_side"].size() == static_cast<std::size_t>(k));
}

TEST_CASE("biclique / comatching / pattern subcommands") {
    fs::path f = write_graph("k33.txt", complete_bipartite(3, 3));
    auto r = run_cli("biclique --s 2 --t 2 --input " + f.string());
    REQUIRE(r.exit_code == 0);
    CHECK(json::parse(r.stdout_text)["value"] == "18");

    auto rd = run_cli("biclique --s 2 --t 2 --mode decide --input " + f.string());
    CHECK(json::parse(rd.stdout_text)["value"] == true);

    auto rc = run_cli("comatching --t 2 --input " + f.string());
    REQUIRE(rc.exit_code == 0);
    CHECK(json::parse(rc.stdout_text)["value"] ==
          std::to_string(oracle_pattern_count(complete_bipartite(3, 3), make_comatching(2))));

    auto rp = run_cli("pattern --pattern builtin:biclique:2,2 --input " + f.string());
    REQUIRE(rp.exit_code == 0);
    CHECK(json::parse(rp.stdout_text)["value"] == "18");

    // pattern file input; K33 has no ladder (red pairs cannot be realized)
    fs::path pf = scratch_dir() / "pat.json";
    {
        std::ofstream out(pf);
        out << pattern_to_json(make_ladder(2)).dump();
    }
    auto rf = run_cli("pattern --pattern " + pf.string() + " --mode decide --input " + f.string());
    REQUIRE(rf.exit_code == 0);
    CHECK(json::parse(rf.stdout_text)["value"] == false);
    fs::path lg = write_graph("l3.txt", ladder_graph(3));
    auto rl = run_cli("pattern --pattern " + pf.string() + " --mode decide --input " + lg.string());
    REQUIRE(rl.exit_code == 0);
    CHECK(json::parse(rl.stdout_text)["value"] == true);
}

TEST_CASE("exit codes") {
    fs::path bad = scratch_dir() / "bad.txt";
    {
        std::ofstream out(bad);
        out << "1 2\nonly_one_token\n";
    }
    CHECK(run_cli("stats --input " + bad.string()).exit_code == 2);
    CHECK(run_cli("stats --input /nonexistent/file").exit_code == 2);

    fs::path pet = write_graph("pet.txt", petersen());
    CHECK(run_cli("vcdim --exact --timeout 0 --input " + pet.string()).exit_code == 3);
}

TEST_CASE("genreduction writes a loadable instance") {
    fs::path host = write_graph("k3.txt", complete(3));
    fs::path out = scratch_dir() / "red.txt";
    auto r = run_cli("genreduction --host " + host.string() + " --k 3 --out " + out.string());
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.stdout_text);
    CHECK(j["status"] == "ok");
    CHECK(j["isolated"] == 1);

    std::ifstream in(out);
    auto lr = load_edge_list(in);
    // w0 is isolated and lost in the edge list; vc is unaffected
    CHECK(lr.graph.num_vertices() + 1 == j["n"]);
    CHECK(vc_exact(lr.graph).vc == 3);
}

TEST_CASE("corpus runner") {
    fs::path dir = scratch_dir() / "corpus";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream(dir / "a_path.txt") << "0 1\n1 2\n";
        std::ofstream(dir / "b_cycle.txt") << "0 1\n1 2\n2 3\n3 0\n";
        std::ofstream(dir / "c_star.txt") << "c l1\nc l2\nc l3\n";
    }
    fs::path csv1 = scratch_dir() / "out1.csv";
    fs::path csv2 = scratch_dir() / "out2.csv";

    SECTION("empty directory gives a header-only body plus summaries") {
        fs::path empty = scratch_dir() / "empty";
        fs::create_directories(empty);
        fs::path csv = scratch_dir() / "empty.csv";
        REQUIRE(run_cli("corpus --dir " + empty.string() + " --out " + csv.string()).exit_code == 0);
        std::string text = slurp(csv);
        CHECK(text.rfind("network,n,m,degeneracy,stat,value,ms,status\n", 0) == 0);
        CHECK(text.find("summary,,,,vcdim,0,,summary") != std::string::npos);
    }

    SECTION("three fixtures produce 12 ok rows") {
        REQUIRE(run_cli("corpus --dir " + dir.string() + " --timeout 60 --out " + csv1.string())
                    .exit_code == 0);
        std::string text = slurp(csv1);
        std::size_t ok_rows = 0, pos = 0;
        while ((pos = text.find(",ok\n", pos)) != std::string::npos) {
            ++ok_rows;
            pos += 4;
        }
        CHECK(ok_rows == 12);
        CHECK(text.find("summary,,,,vcdim,3,,summary") != std::string::npos);
        CHECK(text.find("summary,,,,ladder,3,,summary") != std::string::npos);
    }

    SECTION("timeout 0 forces every row to time out") {
        REQUIRE(run_cli("corpus --dir " + dir.string() + " --timeout 0 --out " + csv1.string())
                    .exit_code == 0);
        std::string text = slurp(csv1);
        CHECK(text.find(",ok\n") == std::string::npos);
        std::size_t to_rows = 0, pos = 0;
        while ((pos = text.find(",timeout\n", pos)) != std::string::npos) {
            ++to_rows;
            pos += 9;
        }
        CHECK(to_rows == 12);
    }

    SECTION("stable output is byte-identical across runs and job counts") {
        REQUIRE(run_cli("corpus --stable --jobs 1 --dir " + dir.string() + " --out " +
                        csv1.string()).exit_code == 0);
        REQUIRE(run_cli("corpus --stable --jobs 1 --dir " + dir.string() + " --out " +
                        csv2.string()).exit_code == 0);
        CHECK(slurp(csv1) == slurp(csv2));
        REQUIRE(run_cli("corpus --stable --jobs 3 --dir " + dir.string() + " --out " +
                        csv2.string()).exit_code == 0);
        CHECK(slurp(csv1) == slurp(csv2));
    }

    SECTION("unreadable files produce an error row and the run continues") {
        fs::path dir2 = scratch_dir() / "corpus2";
        fs::remove_all(dir2);
        fs::create_directories(dir2);
        std::ofstream(dir2 / "good.txt") << "0 1\n";
        std::ofstream(dir2 / "broken.txt") << "0 1 2 3\n";
        REQUIRE(run_cli("corpus --dir " + dir2.string() + " --timeout 60 --out " + csv1.string())
                    .exit_code == 0);
        std::string text = slurp(csv1);
        CHECK(text.find("broken,,,,load,,,error") != std::string::npos);
        CHECK(text.find("good,2,1,1,vcdim,1,") != std::string::npos);
    }
}
