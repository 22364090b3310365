#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

fs::path scratch() {
    const fs::path p = fs::temp_directory_path() / "juliadim_cli_test";
    fs::create_directories(p);
    return p;
}

Run run(const std::string& args) {
    const std::string cmd = std::string(JULIADIM_CLI) + " " + args + " 2>&1";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) cells.push_back(c);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("dim command") {
    const Run r = run("dim --delta 1 --level 10");
    CHECK(r.code == 0);
    CHECK(r.out.find("dim 1.0000000000") != std::string::npos);
    const Run h = run("dim --delta 0.5 --level 12");
    CHECK(h.code == 0);
    const double d = std::stod(h.out.substr(h.out.find("dim ") + 4));
    CHECK(d > 1.0);
    CHECK(d < 1.3);
    CHECK(run("dim --delta 0.5x").code == 2);
    CHECK(run("dim --delta 0.5 --level abc").code == 2);
    CHECK(run("dim --delta 3").code == 3);
    CHECK(run("nosuchcommand").code == 2);
}

TEST_CASE("theta0 command") {
    const Run r = run("theta0 --d0 1.08 --d0-err 0.005");
    CHECK(r.code == 0);
    const double t = std::stod(r.out.substr(r.out.find("theta0 ") + 7));
    CHECK(t >= 1.15);
    CHECK(t <= 1.45);
    const Run bad = run("theta0 --d0 1.6");
    CHECK(bad.code == 3);
    CHECK(bad.out.find("INVALID_DIMENSION") != std::string::npos);
}

TEST_CASE("omega CSV, manifest and replay") {
    const fs::path dir = scratch();
    const fs::path csv = dir / "omega.csv", man = dir / "omega.json", again = dir / "omega2.csv";
    const Run r = run("omega --d0 1.08 --out " + csv.string() + " --json " + man.string());
    REQUIRE(r.code == 0);
    const std::string text = slurp(csv);
    CHECK(text.find('\r') == std::string::npos);
    const auto rows = parse_csv(text);
    REQUIRE(rows.size() == 122);
    CHECK(rows[0] == std::vector<std::string>{"theta", "omega", "err", "flag"});
    bool crossing = false;
    for (std::size_t i = 2; i < rows.size(); ++i) {
        const double t0 = std::stod(rows[i - 1][0]), t1 = std::stod(rows[i][0]);
        const double w0 = std::stod(rows[i - 1][1]), w1 = std::stod(rows[i][1]);
        if (t0 >= 1.2 && t1 <= 1.4 && w0 < 0 && w1 > 0) crossing = true;
        if (std::abs(t1) < 1e-12) CHECK(w1 < 0);
    }
    CHECK(crossing);

    const auto m = nlohmann::json::parse(slurp(man));
    CHECK(m["command"] == "omega");
    CHECK(m["params"]["d0"] == "1.08");
    CHECK(m["outputs"].size() == 1);
    CHECK(m.contains("duration_ms"));
    CHECK(m.contains("version"));

    CHECK(run("--replay " + man.string() + " --out " + again.string()).code == 0);
    CHECK(slurp(again) == text);
}

TEST_CASE("config file values are overridden by flags") {
    const fs::path dir = scratch();
    const fs::path cfg = dir / "omega.cfg", csv = dir / "cfg.csv";
    {
        std::ofstream f(cfg);
        f << "# window\ntheta_min = -1\ntheta_max=1\nstep=0.5\nd0=1.1\n";
    }
    REQUIRE(run("omega --config " + cfg.string() + " --step 0.25 --out " + csv.string()).code == 0);
    const auto rows = parse_csv(slurp(csv));
    CHECK(rows.size() == 10);
    CHECK(std::stod(rows[1][0]) == -1.0);
    {
        std::ofstream f(cfg);
        f << "no_such_key=3\n";
    }
    CHECK(run("omega --config " + cfg.string()).code == 2);
}

TEST_CASE("ray CSV reproduces its own ratio column") {
    const fs::path csv = scratch() / "ray.csv";
    REQUIRE(run("ray --level 10 --d0 1.08 --t-start 0.2 --t-end 0.1 --points 2 --out " + csv.string()).code == 0);
    const auto rows = parse_csv(slurp(csv));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0][0] == "t");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double t = std::stod(rows[i][0]), d0 = std::stod(rows[i][2]);
        const double deriv = std::stod(rows[i][6]), ratio = std::stod(rows[i][8]);
        CHECK(deriv / std::pow(t, 2 * d0 - 2) == ratio);
        CHECK(ratio < 0);
    }
    CHECK(run("ray --alpha 2").code == 2);
}

TEST_CASE("mandelbrot and verify commands") {
    const fs::path csv = scratch() / "mb.csv";
    REQUIRE(run("mandelbrot --nx 9 --ny 5 --max-iter 300 --threads 2 --out " + csv.string()).code == 0);
    const auto rows = parse_csv(slurp(csv));
    REQUIRE(rows.size() == 46);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][2] == rows[rows.size() - i][2]);
    const Run v = run("verify --suite appendix");
    CHECK(v.code == 0);
    CHECK(v.out.find("FAIL") == std::string::npos);
    CHECK(run("verify --suite nonsense").code == 2);
}

TEST_CASE("convexity command") {
    const Run r = run("convexity --level 10 --points 5 --json -");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"convex\": true") != std::string::npos);
}
