#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef SDW_CLI_PATH
#error "SDW_CLI_PATH must point at the sdw binary"
#endif

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string out, err;
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch() {
    fs::path d = fs::temp_directory_path() / "sdw_cli_test";
    fs::create_directories(d);
    return d;
}

RunResult run_cli(const std::string& args) {
    fs::path d = scratch();
    fs::path so = d / "stdout.txt", se = d / "stderr.txt";
    std::string cmd = std::string(SDW_CLI_PATH) + " " + args + " >" + so.string() +
                      " 2>" + se.string();
    int status = std::system(cmd.c_str());
    RunResult r;
#ifdef _WIN32
    r.code = status;
#else
    r.code = WEXITSTATUS(status);
#endif
    r.out = slurp(so);
    r.err = slurp(se);
    return r;
}

} // namespace

TEST_CASE("entropy run emits a parseable artifact") {
    fs::path out = scratch() / "entropy.csv";
    RunResult r = run_cli("entropy --shift.kind beta --shift.beta golden --nmax 12 --out " +
                          out.string());
    REQUIRE(r.code == 0);
    std::string text = slurp(out);
    CHECK(text.rfind("# tool=sdw 1.0\n", 0) == 0);
    CHECK(text.find("# cmd=entropy\n") != std::string::npos);
    CHECK(text.find("# shift.beta=golden\n") != std::string::npos);
    CHECK(text.find("# nmax=12\n") != std::string::npos);
    CHECK(text.find("n,count,rate,lower,upper\n") != std::string::npos);
    CHECK(text.find("# method=") != std::string::npos);
    // The resolved header is itself a valid config for the same run.
    std::stringstream ss(text);
    std::string line, cfg;
    while (std::getline(ss, line)) {
        if (line.rfind("# tool=", 0) == 0) continue;
        if (line.rfind("# ", 0) != 0) break; // header ends at the first data row
        cfg += line.substr(2) + "\n";
    }
    fs::path cfg_path = scratch() / "roundtrip.cfg";
    {
        std::ofstream f(cfg_path);
        f << cfg;
    }
    fs::path out2 = scratch() / "entropy2.csv";
    RunResult r2 = run_cli("--config " + cfg_path.string() + " --out " + out2.string());
    REQUIRE(r2.code == 0);
    // Identical apart from the out= header line.
    auto strip_out = [](std::string t) {
        std::stringstream in(t);
        std::string l, kept;
        while (std::getline(in, l))
            if (l.rfind("# out=", 0) != 0) kept += l + "\n";
        return kept;
    };
    CHECK(strip_out(text) == strip_out(slurp(out2)));
}

TEST_CASE("flags win over the config file") {
    fs::path cfg_path = scratch() / "base.cfg";
    {
        std::ofstream f(cfg_path);
        f << "cmd=entropy\n"
             "# a comment line\n"
             "shift.kind=full\n"
             "shift.m=2\n"
             "nmax=6\n";
    }
    RunResult r = run_cli("--config " + cfg_path.string() + " --nmax=4");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# nmax=4\n") != std::string::npos);
    CHECK(r.out.find("\n4,16,") != std::string::npos);
    CHECK(r.out.find("\n5,") == std::string::npos);
}

TEST_CASE("config errors exit 2 with a JSON record") {
    SUBCASE("beta below 1") {
        RunResult r = run_cli("entropy --shift.kind beta --shift.beta 0.5");
        CHECK(r.code == 2);
        CHECK(r.err.find("\"error\":\"config\"") != std::string::npos);
    }
    SUBCASE("unknown key") {
        RunResult r = run_cli("entropy --shift.kind full --bogus 3");
        CHECK(r.code == 2);
        CHECK(r.err.find("bogus") != std::string::npos);
    }
    SUBCASE("unknown key in a config file reports its line") {
        fs::path cfg_path = scratch() / "bad.cfg";
        {
            std::ofstream f(cfg_path);
            f << "cmd=entropy\nmystery=1\n";
        }
        RunResult r = run_cli("--config " + cfg_path.string());
        CHECK(r.code == 2);
        CHECK(r.err.find("line 2") != std::string::npos);
    }
    SUBCASE("missing command") {
        RunResult r = run_cli("--nmax 5");
        CHECK(r.code == 2);
    }
}

TEST_CASE("infeasible runs exit 5") {
    RunResult r = run_cli("dimension --shift.kind full --shift.m 2 "
                          "--potential.const log2 --nmax 2");
    CHECK(r.code == 5);
    CHECK(r.err.find("\"error\":\"infeasible\"") != std::string::npos);
}

TEST_CASE("enumeration caps exit 4") {
    // The full shift is counted in closed form, so force a real enumeration.
    RunResult r = run_cli("entropy --shift.kind sft --shift.forbid 11 --nmax 20 --cap 1000");
    CHECK(r.code == 4);
    CHECK(r.err.find("\"error\":\"cap\"") != std::string::npos);
}

TEST_CASE("construct runs are reproducible byte for byte") {
    fs::path a = scratch() / "tower_a.csv", b = scratch() / "tower_b.csv";
    std::string args = "construct --shift.kind full --shift.m 2 "
                       "--h 0.25*log2 --seed 7 --length 600 --out ";
    REQUIRE(run_cli(args + a.string()).code == 0);
    REQUIRE(run_cli(args + b.string()).code == 0);
    auto strip_out = [](const std::string& t) {
        std::stringstream in(t);
        std::string l, kept;
        while (std::getline(in, l))
            if (l.rfind("# out=", 0) != 0) kept += l + "\n";
        return kept;
    };
    std::string ta = strip_out(slurp(a)), tb = strip_out(slurp(b));
    CHECK(ta == tb);
    CHECK(ta.find("l1,4\n") != std::string::npos);
    CHECK(ta.find("n1,15\n") != std::string::npos);

    fs::path c = scratch() / "tower_c.csv";
    std::string other = "construct --shift.kind full --shift.m 2 "
                        "--h 0.25*log2 --seed 8 --length 600 --out " + c.string();
    REQUIRE(run_cli(other).code == 0);
    CHECK(strip_out(slurp(c)) != ta);
}

TEST_CASE("beta digit helper") {
    RunResult r = run_cli("beta.digits --shift.beta integer:3 --x 1/3 --n 4");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("digits,1000\n") != std::string::npos);
}
