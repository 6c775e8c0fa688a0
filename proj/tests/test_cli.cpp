// End-to-end smoke tests for the command-line binary: run it as a child
// process against files in a scratch directory and check output, exit codes
// and byte-reproducibility.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(PROMESH_CLI_PATH) + " " + args + " 2>&1";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe)) r.output.append(buf, n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "promesh_cli_test";
    fs::create_directories(dir);
    return dir;
}

std::string write_file(const std::string& name, const std::string& content) {
    const fs::path p = scratch_dir() / name;
    std::ofstream out(p);
    out << content;
    return p.string();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("analyze prints the quality summary") {
    const std::string mesh = write_file("tri.mesh", "2 3 1\n0 0\n1 0\n0 1\n0 1 2\n");
    RunResult r = run_cli("analyze " + mesh);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("C_Xi=0.25") != std::string::npos);
    CHECK(r.output.find("Theta=2") != std::string::npos);
}

TEST_CASE("analyze emits json and csv together") {
    const std::string mesh = write_file("tri2.mesh", "2 3 1\n0 0\n1 0\n0 1\n0 1 2\n");
    const std::string jpath = (scratch_dir() / "q.json").string();
    const std::string cpath = (scratch_dir() / "q.csv").string();
    RunResult r = run_cli("analyze " + mesh + " --json " + jpath + " --csv " + cpath);
    CHECK(r.exit_code == 0);
    CHECK(read_file(jpath).find("\"theta\":2") != std::string::npos);
    CHECK(read_file(cpath).find("delta") != std::string::npos);
}

TEST_CASE("missing or malformed input exits 2") {
    CHECK(run_cli("analyze /nonexistent/mesh.txt").exit_code == 2);
    const std::string bad = write_file("bad.mesh", "2 3 1\n0 0\nnot numbers\n");
    CHECK(run_cli("analyze " + bad).exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
}

TEST_CASE("delaunay triangulates a point file and reports protection") {
    const std::string pts = write_file("square.pts", "2 4\n0 0\n1 0\n1 1\n0 1\n");
    RunResult r = run_cli("delaunay " + pts + " --protection");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("delta=0") != std::string::npos);

    // round trip: triangulate to a file, analyze it
    const std::string out = (scratch_dir() / "square.mesh").string();
    RunResult w = run_cli("delaunay " + pts + " --out " + out);
    CHECK(w.exit_code == 0);
    CHECK(run_cli("analyze " + out).exit_code == 0);
    // input file untouched
    CHECK(read_file(pts) == "2 4\n0 0\n1 0\n1 1\n0 1\n");
}

TEST_CASE("delaunay refuses degenerate input") {
    const std::string pts = write_file("line.pts", "2 3\n0 0\n1 0\n2 0\n");
    CHECK(run_cli("delaunay " + pts).exit_code == 2);
}

TEST_CASE("coxeter patch generation") {
    RunResult r = run_cli("coxeter --dim 2 --scale 0.5 --box-lo 0 --box-hi 2");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("delta=") != std::string::npos);
    CHECK(r.output.find("delta=0 ") == std::string::npos);  // protected, delta > 0
}

TEST_CASE("interp and fem verbs") {
    std::ostringstream grid;  // 4x4 structured grid, built inline
    grid << "2 25 32\n";
    for (int y = 0; y <= 4; ++y)
        for (int x = 0; x <= 4; ++x) grid << 0.25 * x << ' ' << 0.25 * y << '\n';
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) {
            const int v = 5 * y + x;
            grid << v << ' ' << v + 1 << ' ' << v + 6 << '\n';
            grid << v << ' ' << v + 5 << ' ' << v + 6 << '\n';
        }
    const std::string mesh = write_file("grid.mesh", grid.str());
    RunResult ri = run_cli("interp " + mesh + " --field sine-product --degree 1");
    CHECK(ri.exit_code == 0);
    CHECK(ri.output.find("grad_interp_error=") != std::string::npos);

    RunResult rf = run_cli("fem " + mesh + " --case sine-product");
    CHECK(rf.exit_code == 0);
    CHECK(rf.output.find("h1_error=") != std::string::npos);
}

TEST_CASE("verify runs a config and is byte-reproducible") {
    const std::string cfg = write_file(
        "cfg.json",
        "{\"seed\":5,\"dims\":[2],\"levels\":[10],\"fields\":[\"sine-product\"],"
        "\"degrees\":[1]}");
    const std::string j1 = (scratch_dir() / "suite1.json").string();
    const std::string j2 = (scratch_dir() / "suite2.json").string();
    RunResult a = run_cli("verify " + cfg + " --json " + j1);
    CHECK(a.exit_code == 0);
    CHECK(a.output.find("pass=true") != std::string::npos);
    RunResult b = run_cli("verify " + cfg + " --seed 5 --json " + j2);
    CHECK(b.exit_code == 0);
    CHECK(read_file(j1) == read_file(j2));
    CHECK(!read_file(j1).empty());
}

TEST_CASE("verify exits 1 on forced failure and 2 on bad config") {
    const std::string cfg = write_file(
        "cfg_bad_cint.json",
        "{\"seed\":5,\"dims\":[2],\"levels\":[10],\"fields\":[\"sine-product\"],"
        "\"degrees\":[1],\"c_int\":1e-6}");
    CHECK(run_cli("verify " + cfg).exit_code == 1);
    const std::string mal = write_file("cfg_malformed.json", "{not json");
    CHECK(run_cli("verify " + mal).exit_code == 2);
}
