#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef HFM_CLI_PATH
#error "HFM_CLI_PATH must point at the hfm binary"
#endif

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string out_path = "cli_test_stdout.tmp";
    std::string cmd = std::string("\"") + HFM_CLI_PATH + "\" " + args + " > " + out_path +
                      " 2> cli_test_stderr.tmp";
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    std::ifstream in(out_path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    std::remove(out_path.c_str());
    std::remove("cli_test_stderr.tmp");
    return r;
}

}  // namespace

TEST_CASE("count subcommand emits the documented CSV") {
    auto r = run_cli("count --instance z --subset hfree --h 2 --x 100");
    CHECK(r.exit_code == 0);
    // golden bytes: schema drift must be deliberate
    CHECK(r.out == "# hfm-csv 1\nx,subset,statistic,value\n100,hfree,count,61\n");
}

TEST_CASE("alpha subcommand") {
    auto r2 = run_cli("alpha --h 2");
    CHECK(r2.exit_code == 0);
    CHECK(r2.out.find("phi_2 = 1") != std::string::npos);

    auto r3 = run_cli("alpha --h 3");
    CHECK(r3.exit_code == 0);
    CHECK(r3.out.find("3,9,-1") != std::string::npos);
    CHECK(r3.out.find("3,14,1") != std::string::npos);

    auto rc = run_cli("alpha --h 3 --corrupt-alpha");
    CHECK(rc.exit_code == 2);  // reserved for mathematical cross-check failures
}

TEST_CASE("validation errors exit with 1") {
    CHECK(run_cli("count --instance z --subset nonsense --x 10").exit_code == 1);
    CHECK(run_cli("count --no-such-flag").exit_code == 1);
    CHECK(run_cli("count --instance z --subset hfree --h 1 --x 10").exit_code == 1);
    CHECK(run_cli("verify --instance z --checkpoints 1e3").exit_code == 1);  // --theorem required
    CHECK(run_cli("count --instance no_such_file.txt --x 10").exit_code == 1);
}

TEST_CASE("verify subcommand produces a residual table") {
    auto r = run_cli("verify --theorem hfull-count --instance z --h 2 --checkpoints 1e3,1e4");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("x,exact,predicted,residual,normalized\n") != std::string::npos);
    int data_rows = 0;
    std::istringstream lines(r.out);
    std::string line;
    while (std::getline(lines, line))
        if (!line.empty() && line[0] != '#' && line[0] != 'x') ++data_rows;
    CHECK(data_rows == 2);
}

TEST_CASE("identical configs give byte-identical output across workers") {
    std::string base =
        "moments --instance z --subset hfree --h 2 --k 2 --checkpoints 1e4,1e5 --workers ";
    auto r1 = run_cli(base + "1");
    auto r4 = run_cli(base + "4");
    auto r16 = run_cli(base + "16");
    CHECK(r1.exit_code == 0);
    CHECK(r1.out == r4.out);
    CHECK(r1.out == r16.out);
}

TEST_CASE("synthetic instance file through the CLI") {
    {
        std::ofstream f("cli_synth.txt");
        f << "q 2\nkappa 1.0\ntheta 0.0\nd 1 1\n";
    }
    auto r = run_cli("count --instance cli_synth.txt --subset all --checkpoints d3");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("3,all,count,4\n") != std::string::npos);
    std::remove("cli_synth.txt");
}

TEST_CASE("--out writes the same bytes as stdout") {
    auto direct = run_cli("count --instance z --subset hfull --h 2 --checkpoints 1e2,1e4");
    auto filed = run_cli(
        "count --instance z --subset hfull --h 2 --checkpoints 1e2,1e4 --out cli_out.tmp");
    CHECK(filed.exit_code == 0);
    std::ifstream in("cli_out.tmp", std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == direct.out);
    std::remove("cli_out.tmp");
}
