// End-to-end checks of the command-line front end: exit-status contract,
// parse errors, report determinism. Runs the real binary.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
    if (ok) {
        std::printf("[PASS] %s\n", what.c_str());
    } else {
        std::printf("[FAIL] %s\n", what.c_str());
        ++failures;
    }
}

std::string cli() { return ISOQ_CLI_PATH; }

int run(const std::string& args) {
    std::string cmd = cli() + " " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string run_capture(const std::string& args, int* exit_code = nullptr) {
    std::string cmd = cli() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {};
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    int rc = pclose(pipe);
    if (exit_code) *exit_code = WEXITSTATUS(rc);
    return out;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main() {
    const std::string dir = "/tmp/isoq_cli_tests";
    std::system(("mkdir -p " + dir).c_str());
    const std::string ball_file = dir + "/ball.json";
    write_file(ball_file, R"({"dim": 2, "body": {"type": "ball", "center": [0,0], "radius": 1}})");

    // measure: raw summary of the unit-radius ball
    int code = 0;
    std::string out = run_capture("measure --input " + ball_file + " --no-timestamp", &code);
    expect(code == 0, "measure exits 0");
    expect(out.find("3.14159") != std::string::npos, "measure reports volume pi");
    expect(out.find("6.28318") != std::string::npos, "measure reports perimeter 2 pi");
    expect(out.find("\"diameter\": 2.0") != std::string::npos, "measure reports diameter 2");
    expect(out.find("\"method\": \"exact\"") != std::string::npos, "measure reports exact method");

    // asymmetry on the ball: all zero
    out = run_capture("asymmetry --input " + ball_file + " --no-timestamp", &code);
    expect(code == 0, "asymmetry exits 0");
    expect(out.find("\"deficit\": 0.0") != std::string::npos, "ball deficit is zero");
    expect(out.find("\"lambda0\": 0.0") != std::string::npos, "ball lambda0 is zero");

    // constants
    out = run_capture("constants --n 2 --cf 1 --no-timestamp", &code);
    expect(code == 0, "constants exits 0");
    expect(out.find("6.05992486") != std::string::npos, "constants reports c3");

    // symmetrize
    out = run_capture("symmetrize --input " + ball_file + " --cf 1 --no-timestamp", &code);
    expect(code == 0, "symmetrize exits 0");
    expect(out.find("symmetric_fixed_point") != std::string::npos,
           "ball symmetrization is a fixed point");

    // usage errors exit 1
    expect(run("measure") == 1, "missing required flag exits 1");
    expect(run("measure --input " + dir + "/missing.json") == 1, "missing file exits 1");
    write_file(dir + "/bad.json", "{\"dim\": 2, \"body\": {\"type\": \"ball\"");
    expect(run("measure --input " + dir + "/bad.json") == 1, "parse error exits 1");
    expect(run("verify --seed 1 --cf 0 --count 1") == 1, "non-positive cf exits 1");
    write_file(dir + "/unknown_field.json",
               R"({"dim": 2, "body": {"type": "ball", "center": [0,0], "radius": 1, "x": 1}})");
    expect(run("measure --input " + dir + "/unknown_field.json") == 1,
           "unknown field exits 1");

    // verify exits 0 on a passing corpus and writes parseable reports
    expect(run("verify --family perturbed_ball --count 3 --seed 7 --cf 1 --output " + dir +
               "/rep.json --no-timestamp") == 0,
           "verify exits 0 on a passing corpus");
    std::string rep = read_file(dir + "/rep.json");
    expect(rep.find("\"all_passed\": true") != std::string::npos, "verify report records success");

    // sweep: slope near 1/4 in the plane
    out = run_capture("sweep --n 2 --eps 1e-1:1e-4:log:8 --format csv", &code);
    expect(code == 0, "sweep exits 0");
    expect(out.find("fitted_slope,0.239") != std::string::npos, "sweep slope close to 1/4");

    // exit 2 when checks fail: a vanishing isoperimetric constant makes the
    // main bound unsatisfiable on any asymmetric item
    expect(run("verify --family perturbed_ball --count 2 --seed 3 --cf 1e-12") == 2,
           "verify exits 2 on failing checks");

    // --format both writes the document and the flat table
    expect(run("verify --family two_ball --count 2 --seed 4 --cf 1 --no-timestamp "
               "--format both --output " +
               dir + "/both") == 0,
           "verify --format both exits 0");
    expect(read_file(dir + "/both.json").find("\"reports\"") != std::string::npos,
           "--format both writes the json document");
    expect(read_file(dir + "/both.csv").rfind("item_id,check,lhs,rhs,slack,pass", 0) == 0,
           "--format both writes the csv table");

    // byte determinism: --workers 1 vs --workers 8 with suppressed timestamps
    std::string base = "verify --family perturbed_ball --count 4 --seed 11 --cf 1 --no-timestamp";
    expect(run(base + " --workers 1 --output " + dir + "/w1.json") == 0, "verify workers=1");
    expect(run(base + " --workers 8 --output " + dir + "/w8.json") == 0, "verify workers=8");
    expect(read_file(dir + "/w1.json") == read_file(dir + "/w8.json"),
           "verify reports are byte-identical across worker counts");

    // rerunning a command reproduces identical bytes
    expect(run(base + " --workers 8 --output " + dir + "/w8b.json") == 0, "verify rerun");
    expect(read_file(dir + "/w8.json") == read_file(dir + "/w8b.json"),
           "verify reruns reproduce identical bytes");

    if (failures == 0) {
        std::printf("cli tests: all passed\n");
        return 0;
    }
    std::printf("cli tests: %d failed\n", failures);
    return 1;
}
