#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

// End-to-end tests driving the installed binary through a shell. The path is
// injected at compile time so the tests work from any build directory.

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

int run_cli(const std::string& args, std::string* out = nullptr, std::string* err = nullptr) {
  const std::string cmd = std::string("\"") + MCURV_CLI_PATH + "\" " + args +
                          " > cli_stdout.txt 2> cli_stderr.txt";
  const int rc = std::system(cmd.c_str());
  if (out) *out = slurp("cli_stdout.txt");
  if (err) *err = slurp("cli_stderr.txt");
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

struct Fixtures {
  Fixtures() {
    write_file("cli_equilateral.json",
               R"({"type":"euclidean","dim":2,)"
               R"("points":[[0,0],[1,0],[0.5,0.8660254037844386]]})");
    write_file("cli_circle3.json",
               R"({"type":"circle","circumference":1.0,)"
               R"("points":[0.0,0.3333333333333333,0.6666666666666666]})");
    write_file("cli_345.json", R"({"type":"finite","matrix":[[0,3,4],[3,0,5],[4,5,0]]})");
    write_file("cli_broken.json", R"({"type":"finite","matrix":[[0,1,3],[1,0,1],[3,1,0]]})");
    write_file("cli_nonsquare.json", R"({"type":"finite","matrix":[[0,1],[1,0],[0,0,0]]})");
  }
  ~Fixtures() {
    for (const char* f : {"cli_equilateral.json", "cli_circle3.json", "cli_345.json",
                          "cli_broken.json", "cli_nonsquare.json", "cli_stdout.txt",
                          "cli_stderr.txt"})
      std::remove(f);
  }
};

}  // namespace

TEST_CASE("cli") {
  Fixtures fx;

  SUBCASE("validate accepts a genuine metric") {
    std::string out;
    CHECK(run_cli("validate --input cli_equilateral.json", &out) == 0);
    auto j = nlohmann::json::parse(out);
    CHECK(j["ok"] == true);
    CHECK(j["violations"].empty());
  }

  SUBCASE("validate reports triangle violations and fails") {
    std::string out;
    CHECK(run_cli("validate --input cli_broken.json", &out) == 1);
    auto j = nlohmann::json::parse(out);
    CHECK(j["ok"] == false);
    REQUIRE_FALSE(j["violations"].empty());
    CHECK(j["violations"][0]["kind"] == "triangle");
  }

  SUBCASE("validate rejects ragged matrices") {
    std::string err;
    CHECK(run_cli("validate --input cli_nonsquare.json", nullptr, &err) == 1);
    CHECK(err.find("NonSquareInput") != std::string::npos);
  }

  SUBCASE("rho on the equilateral triple") {
    std::string out;
    CHECK(run_cli("rho --input cli_equilateral.json --triple 0,1,2", &out) == 0);
    auto j = nlohmann::json::parse(out);
    CHECK(j["rho"].get<double>() == doctest::Approx(1.1547005383792517).epsilon(1e-9));
    CHECK(j["attained"] == true);
  }

  SUBCASE("rho falls back to the sample on bare matrices") {
    std::string out;
    CHECK(run_cli("rho --input cli_345.json --triple 0,1,2", &out) == 0);
    auto j = nlohmann::json::parse(out);
    CHECK(j["rho"].get<double>() == 1.5);
  }

  SUBCASE("persist writes the barcode") {
    std::string out;
    CHECK(run_cli("persist --input cli_circle3.json --flavor cech --output cli_bc.csv",
                  &out) == 0);
    auto j = nlohmann::json::parse(out);
    CHECK(j["flavor"] == "cech");
    CHECK(j["pairs"] == 4);
    CHECK(j["essential"] == 1);
    CHECK(j["zero_length"] == 0);
    const std::string bc = slurp("cli_bc.csv");
    CHECK(bc.find("dim,birth,death") == 0);
    CHECK(bc.find("1,0.16666666666666669,0.33333333333333331") != std::string::npos);

    CHECK(run_cli("persist --input cli_circle3.json --flavor vr --output cli_bc_vr.csv",
                  &out) == 0);
    auto jv = nlohmann::json::parse(out);
    CHECK(jv["zero_length"] == 1);
    const std::string bcv = slurp("cli_bc_vr.csv");
    CHECK(bcv.find("1,0.16666666666666669,0.16666666666666669") != std::string::npos);

    std::remove("cli_bc.csv");
    std::remove("cli_bc_vr.csv");
  }

  SUBCASE("filtration dump round trips to the same barcode") {
    CHECK(run_cli("persist --input cli_circle3.json --dump-filtration cli_filt.csv "
                  "--output cli_bc_a.csv") == 0);
    CHECK(run_cli("persist --from-filtration cli_filt.csv --output cli_bc_b.csv") == 0);
    CHECK(slurp("cli_bc_a.csv") == slurp("cli_bc_b.csv"));
    std::remove("cli_filt.csv");
    std::remove("cli_bc_a.csv");
    std::remove("cli_bc_b.csv");
  }

  SUBCASE("profile emits deterministic artifacts") {
    const std::string args =
        "profile --input cli_equilateral.json --n-triples 0 --output %CSV --svg %SVG";
    auto subst = [&](std::string s, const std::string& c, const std::string& v) {
      s.replace(s.find("%CSV"), 4, c);
      s.replace(s.find("%SVG"), 4, v);
      return s;
    };
    std::string out;
    CHECK(run_cli(subst(args, "cli_p1.csv", "cli_p1.svg"), &out) == 0);
    auto j = nlohmann::json::parse(out);
    CHECK(j["records"] == 1);
    CHECK(j["degenerate_skipped"] == 0);
    CHECK(run_cli(subst(args, "cli_p2.csv", "cli_p2.svg")) == 0);
    CHECK(slurp("cli_p1.csv") == slurp("cli_p2.csv"));
    CHECK(slurp("cli_p1.svg") == slurp("cli_p2.svg"));
    CHECK(slurp("cli_p1.csv").find("i,j,k,") == 0);
    CHECK(slurp("cli_p1.svg").find("<svg") != std::string::npos);
    for (const char* f : {"cli_p1.csv", "cli_p1.svg", "cli_p2.csv", "cli_p2.svg"})
      std::remove(f);
  }

  SUBCASE("extremal lands on the distance function") {
    std::string out;
    CHECK(run_cli("extremal --input cli_345.json --start constant:10", &out) == 0);
    auto j = nlohmann::json::parse(out);
    CHECK(j["converged"] == true);
    CHECK(j["extremal"] == true);
    REQUIRE(j["radii"].size() == 3);
    CHECK(j["radii"][0].get<double>() == 0.0);
    CHECK(j["radii"][1].get<double>() == 3.0);
    CHECK(j["radii"][2].get<double>() == 4.0);
  }

  SUBCASE("expansion stays in the plane band") {
    std::string out;
    CHECK(run_cli("expansion --input cli_equilateral.json --arity 3 --tuples 5", &out) == 0);
    auto j = nlohmann::json::parse(out);
    const double mu = j["mu_hat"].get<double>();
    CHECK(mu >= 1.0);
    CHECK(mu <= 1.16);
  }

  SUBCASE("inclusions verdict tracks mu") {
    std::string out;
    CHECK(run_cli("inclusions --input cli_equilateral.json --mu 1.16", &out) == 0);
    auto ok = nlohmann::json::parse(out);
    CHECK(ok["ok"] == true);
    CHECK(ok["compared"] == 7);

    CHECK(run_cli("inclusions --input cli_equilateral.json --mu 1.0 --tol 0", &out) == 1);
    auto bad = nlohmann::json::parse(out);
    CHECK(bad["ok"] == false);
    REQUIRE_FALSE(bad["violations"].empty());
    CHECK(bad["violations"][0]["simplex"] == nlohmann::json({0, 1, 2}));
  }

  SUBCASE("domain errors exit 1 with the code on stderr") {
    std::string err;
    CHECK(run_cli("rho --input cli_equilateral.json --triple 0,1", nullptr, &err) == 1);
    CHECK(err.find("ParseError") != std::string::npos);
    CHECK(run_cli("persist --output cli_x.csv", nullptr, &err) == 1);
    CHECK(err.find("ParseError") != std::string::npos);
    CHECK(run_cli("rho --input cli_missing.json --triple 0,1,2", nullptr, &err) == 1);
  }

  SUBCASE("usage errors exit 2") {
    CHECK(run_cli("") == 2);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("rho --input cli_equilateral.json") == 2);  // missing required --triple
    CHECK(run_cli("validate --input cli_equilateral.json --no-such-flag") == 2);
  }

  SUBCASE("help exits 0 and documents defaults") {
    std::string out;
    CHECK(run_cli("--help", &out) == 0);
    CHECK(out.find("Subcommands") != std::string::npos);
    CHECK(run_cli("validate --help", &out) == 0);
    CHECK(out.find("default") != std::string::npos);
    CHECK(run_cli("persist --help", &out) == 0);
    CHECK(out.find("--flavor") != std::string::npos);
  }
}
