#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "starinv/report.hpp"

using namespace starinv;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

std::string fixture(const std::string& name) { return std::string(STARINV_FIXTURES) + "/" + name; }

Run run(const std::string& args) {
  const std::string cmd = std::string(STARINV_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string value_of(const RunReport& r, const std::string& key) {
  for (const auto& [k, v] : r.result)
    if (k == key) return v;
  FAIL("missing result key " << key);
  return {};
}

std::string temp_file(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("starinv_cli_" + name);
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs with --emit machine, expects `code`, and checks the report round-trips.
RunReport machine(const std::string& args, int code = 0) {
  Run r = run(args + " --emit machine");
  REQUIRE_MESSAGE(r.code == code, args);
  RunReport rep = parse_machine(r.out);
  CHECK(emit_machine(rep) == r.out);
  return rep;
}

}  // namespace

TEST_CASE("invariants") {
  const RunReport r = machine("invariants " + fixture("m23.fda"));
  CHECK(r.command == "invariants");
  REQUIRE(r.inputs.size() == 1);
  CHECK(r.inputs[0].sha256 == content_hash(slurp(fixture("m23.fda"))));
  CHECK(value_of(r, "k0") == "rank=2 cone=1,0;0,1 unit=2,3");
  CHECK(value_of(r, "k1") == "0");
  CHECK(value_of(r, "rc") == "0");
  CHECK(value_of(r, "cu") == "nbar: 2\nunit: 2 3");
  CHECK(value_of(r, "stable_rank_le_1") == "TRUE(exact)");
  CHECK(value_of(r, "real_rank_le_0") == "TRUE(exact)");
  CHECK(r.verdict == "OK");
  CHECK_FALSE(r.wall_ms.has_value());
  CHECK(machine("invariants " + fixture("m23.fda") + " --timing").wall_ms.has_value());
  CHECK(run("invariants " + fixture("m23.fda")).out.find("verdict: OK") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run("").code == 1);
  CHECK(run("frobnicate").code == 1);
  CHECK(run("invariants").code == 1);
  CHECK(run("invariants " + fixture("does_not_exist.fda")).code == 1);
  CHECK(run("invariants " + fixture("m2.fda") + " --emit xml").code == 1);
  CHECK(run("invariants " + fixture("m2.fda") + " --max-n 0").code == 1);
  CHECK(run("iso frob " + fixture("m2.fda") + " " + fixture("m2.fda")).code == 1);
  CHECK(run("invariants " + fixture("bad.fda")).code == 2);
  CHECK(run("invariants " + fixture("invalid.fda")).code == 3);
  CHECK(run("iso group " + temp_file("bad.grp", "rank=2 cone=1,0\n") + " " + fixture("z2_23.grp")).code == 2);
  CHECK(run("iso group " + temp_file("nounit.grp", "rank=2 cone=1,0;0,1 unit=0,1\n") + " " + fixture("z2_23.grp"))
            .code == 3);
  CHECK(run("iso cu " + temp_file("broken.cup", "elements: 2\nplus: 0 1 1 1\nleq: (0,1)\nll: (0,0) (0,1)\n") + " " +
            fixture("chain3.cup"))
            .code == 3);
  const std::string bare = temp_file("bare.cup", "nbar: 1\n");
  CHECK(run("iso cu " + bare + " " + bare + " --pointed").code == 3);
  CHECK(run("eval " + fixture("open.clf") + " --on " + fixture("c.fda")).code == 3);
  CHECK(run("eval " + fixture("sigma3.clf") + " --on " + fixture("m2.fda") + " --s0").code == 2);
  CHECK(run("eval " + fixture("open.clf")).code == 1);
  CHECK(run("eval " + fixture("open.clf") + " --on " + fixture("m2.fda") + " --assign y=1").code == 1);
  CHECK(run("eval " + fixture("open.clf") + " --on " + fixture("m2.fda") + " --assign 'x0=1,a;0,0'").code == 2);
  CHECK(run("eval " + fixture("open.clf") + " --on " + fixture("m2.fda") + " --assign x0=1").code == 3);
  CHECK(run("radius " + fixture("bad.fda")).code == 2);
  // UNKNOWN only changes the exit code under --strict.
  CHECK(run("iso cu " + fixture("rc_perf.cup") + " " + fixture("rc_perf.cup") + " --budget 1").code == 0);
  const RunReport unknown =
      machine("iso cu " + fixture("rc_perf.cup") + " " + fixture("rc_perf.cup") + " --budget 1 --strict", 4);
  CHECK(unknown.verdict == "UNKNOWN");
}

TEST_CASE("iso") {
  const RunReport ell = machine("iso ell " + fixture("m23.fda") + " " + fixture("m32.fda"));
  CHECK(ell.verdict == "ISO");
  CHECK(value_of(ell, "k0_witness") == "0,1;1,0");
  CHECK(machine("iso ell " + fixture("m23.fda") + " " + fixture("m3.fda")).verdict == "NOT_ISO");
  CHECK(machine("iso cu " + fixture("rc_perf.cup") + " " + fixture("rc_perf.cup")).verdict == "EQUIVALENT");
  const RunReport split = machine("iso cu " + fixture("nbar1.cup") + " " + fixture("nbar2.cup") + " --strict");
  CHECK(split.verdict == "INEQUIVALENT");
  CHECK(value_of(split, "invariant").find("totally ordered") != std::string::npos);
  CHECK(machine("iso cu " + fixture("nbar2.cup") + " " + fixture("nbar23.cup")).verdict == "EQUIVALENT");
  CHECK(machine("iso cu " + fixture("nbar2.cup") + " " + fixture("nbar23.cup") + " --pointed").verdict ==
        "INEQUIVALENT");
  const RunReport group = machine("iso group " + fixture("z2_23.grp") + " " + fixture("z2_32.grp"));
  CHECK(group.verdict == "ISO");
  CHECK(group.config == KeyValues{{"budget", "10000"}});
  CHECK(machine("iso group " + fixture("z2_23.grp") + " " + fixture("z2_11.grp")).verdict == "NOT_ISO");
}

TEST_CASE("eval") {
  const RunReport idem = machine("eval " + fixture("idempotent.clf") + " --on " + fixture("c.fda"));
  CHECK(std::abs(std::stod(value_of(idem, "idem.value")) - 2.0) <= 0.01);
  CHECK(value_of(idem, "idem.certificate") == "lower");
  CHECK(idem.inputs.size() == 2);

  const std::string seeded = "eval " + fixture("sigma3.clf") + " --on " + fixture("m2.fda") + " --seed 7 --emit machine";
  const Run a = run(seeded), b = run(seeded);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("config.seed=7\n") != std::string::npos);

  const RunReport open = machine("eval " + fixture("open.clf") + " --on " + fixture("m2.fda") +
                                 " --assign 'x0=1+i,0;0,-1/2i'");
  CHECK(std::stod(value_of(open, "defect.value")) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(value_of(open, "defect.certificate") == "exact");
  const RunReport multi = machine("eval " + fixture("open.clf") + " --on " + fixture("m23.fda") +
                                  " --assign 'x0=1,0;0,0|0,0,0;0,1,0;0,0,0'");
  CHECK(std::stod(value_of(multi, "defect.value")) == 0.0);
}

TEST_CASE("radius") {
  const RunReport r = machine("radius " + fixture("rc_perf.cup"));
  CHECK(value_of(r, "rc") == "2");
  CHECK(value_of(r, "rc_completion") == "2");
  CHECK(value_of(r, "witness") == "m=2 n=1");
  CHECK(r.verdict == "EXACT");
  const RunReport n = machine("radius " + fixture("nbar23.cup") + " --depth 4 --max-n 64");
  CHECK(value_of(n, "rc") == "0");
  CHECK(value_of(n, "rc_completion") == "0");
}
