#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "fixture_util.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    std::string command = std::string(ULPA_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    char buffer[4096];
    while (size_t n = fread(buffer, 1, sizeof buffer, pipe)) result.output.append(buffer, n);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string fx(const std::string& name) { return ulpa::testing::fixture_path(name); }

}  // namespace

TEST_CASE("negative verdicts exit 1 and carry witnesses") {
    RunResult r = run_cli("ug condition-l " + fx("FIX-A.json"));
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("witness: e2") != std::string::npos);

    RunResult ok = run_cli("ug condition-l " + fx("FIX-C.json"));
    CHECK(ok.exit_code == 0);
}

TEST_CASE("equality verdict annotates the regime") {
    RunResult r = run_cli("alg equal " + fx("FIX-B.json") + " \"p({v0})\" \"s(e1)\" --bound 4");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("equal: yes") != std::string::npos);
    CHECK(r.output.find("Condition (L) fails") != std::string::npos);

    RunResult ne = run_cli("alg equal " + fx("FIX-D.json") + " \"s(e)\" \"p({u})\"");
    CHECK(ne.exit_code == 1);
    CHECK(ne.output.find("witness: (w, w)") != std::string::npos);
}

TEST_CASE("branching irreducibility names the class") {
    RunResult r = run_cli("bs irreducible " + fx("FIX-F.json") + " --ring Q");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("isomorphic to class SinkClass(w)") != std::string::npos);
}

TEST_CASE("input errors exit 2 with a position or message") {
    RunResult missing = run_cli("ug validate /nonexistent/file.json");
    CHECK(missing.exit_code == 2);

    std::string bad = "/tmp/ulpa_bad.json";
    {
        std::ofstream out(bad);
        out << "{ not json";
    }
    RunResult malformed = run_cli("ug validate " + bad);
    CHECK(malformed.exit_code == 2);
    CHECK(malformed.output.find("byte") != std::string::npos);

    RunResult syntax = run_cli("alg reduce " + fx("FIX-A.json") + " \"s(e1\"");
    CHECK(syntax.exit_code == 2);
    CHECK(syntax.output.find("position") != std::string::npos);

    RunResult unknown = run_cli("frobnicate");
    CHECK(unknown.exit_code == 2);
}

TEST_CASE("reports are byte-identical across runs") {
    for (const std::string& args :
         {"paths enum " + fx("FIX-A.json") + " --bound 3",
          "alg reduce " + fx("FIX-B.json") + " \"s(e)*t(e) + p({v0})\"",
          "rep restrict " + fx("FIX-D.json") + " \"SinkClass(w)\"",
          "acceptance --seed 3 --fixtures " + std::string(ULPA_FIXTURES_DIR),
          "bs morphism " + fx("FIX-G.json") + " --json"}) {
        RunResult first = run_cli(args);
        RunResult second = run_cli(args);
        CHECK(first.exit_code == second.exit_code);
        CHECK(first.output == second.output);
    }
}

TEST_CASE("json reports parse and carry the same verdicts") {
    RunResult r = run_cli("ug condition-l " + fx("FIX-B.json") + " --json");
    CHECK(r.exit_code == 1);
    auto j = ulpa::json::parse(r.output);
    CHECK(j.at("satisfied") == "no");
    CHECK(j.at("witness") == "e1");
}

TEST_CASE("basis assignment files drive the permutative check") {
    // induce the FIX-F representation to a file, then test with an explicit
    // basis assignment
    RunResult induced = run_cli("bs induce " + fx("FIX-F.json"));
    REQUIRE(induced.exit_code == 0);
    std::string rep_path = "/tmp/ulpa_cli_rep.json";
    {
        std::ofstream out(rep_path);
        out << induced.output;
    }
    std::string basis_path = "/tmp/ulpa_cli_basis.json";
    {
        std::ofstream out(basis_path);
        out << R"({"B": {"e": [["0", "1"]], "w": [["1", "0"]]}})";
    }
    RunResult with_basis = run_cli("perm permutative " + rep_path + " --basis " + basis_path);
    CHECK(with_basis.exit_code == 0);
    CHECK(with_basis.output.find("permutative: yes") != std::string::npos);

    std::string scaled_path = "/tmp/ulpa_cli_basis_scaled.json";
    {
        std::ofstream out(scaled_path);
        out << R"({"B": {"e": [["0", "2"]], "w": [["1", "0"]]}})";
    }
    RunResult scaled = run_cli("perm permutative " + rep_path + " --basis " + scaled_path);
    CHECK(scaled.exit_code == 1);

    RunResult irr = run_cli("perm irreducible " + rep_path);
    CHECK(irr.exit_code == 0);
    CHECK(irr.output.find("SinkClass(w)") != std::string::npos);
}

TEST_CASE("acceptance subcommand prints one line per criterion") {
    RunResult r = run_cli("acceptance --seed 0 --fixtures " + std::string(ULPA_FIXTURES_DIR));
    CHECK(r.exit_code == 0);
    int lines = 0;
    size_t pos = 0;
    while ((pos = r.output.find("criterion ", pos)) != std::string::npos) {
        ++lines;
        ++pos;
    }
    CHECK(lines == 10);
    CHECK(r.output.find("10/10 criteria passed") != std::string::npos);

    RunResult seeded = run_cli("acceptance --seed 7 --fixtures " + std::string(ULPA_FIXTURES_DIR));
    CHECK(seeded.exit_code == 0);
}

TEST_CASE("tampered fixtures fail the acceptance suite with a named criterion") {
    // copy fixtures, break FIX-F's bijection
    std::string dir = "/tmp/ulpa_tampered_fixtures";
    std::string cmd = "rm -rf " + dir + " && cp -r " + std::string(ULPA_FIXTURES_DIR) + " " + dir;
    REQUIRE(std::system(cmd.c_str()) == 0);
    {
        std::ofstream out(dir + "/FIX-F.json");
        out << R"({"ultragraph": "FIX-D.json", "n": 2, "D": {"w": [0], "u": [1]},
                   "R": {"e": [0, 1]}, "f": {"e": [[0, 1]]}})";
    }
    RunResult r = run_cli("acceptance --seed 0 --fixtures " + dir);
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("FAIL  criterion 8") != std::string::npos);
}
