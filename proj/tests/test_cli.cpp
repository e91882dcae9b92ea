#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct Run {
  int rc = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string path = std::string(ESP_TMP_DIR) + "/cli_out.txt";
  std::string cmd = std::string(ESP_BIN) + " " + args + " > " + path + " 2>&1";
  int st = std::system(cmd.c_str());
  Run r;
  r.rc = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  r.out = ss.str();
  return r;
}

std::string ex(const std::string& name) { return std::string(ESP_EXAMPLES_DIR) + "/" + name; }

bool has(const Run& r, const std::string& s) { return r.out.find(s) != std::string::npos; }

}  // namespace

TEST_CASE("cli-verify-tables-pass-and-deterministic") {
  Run a = run("--seed 7 verify-tables --n-max 2 --trials 2");
  CHECK(a.rc == 0);
  CHECK(has(a, "verify-tables: PASS"));
  Run b = run("--seed 7 verify-tables --n-max 2 --trials 2 --threads 1");
  CHECK(a.out == b.out);
}

TEST_CASE("cli-printed-tables-fail") {
  Run r = run("verify-tables --n-max 2 --printed");
  CHECK(r.rc == 1);
  CHECK(has(r, "FAIL"));
}

TEST_CASE("cli-corrupt-entry-caught") {
  Run r = run("verify-tables --n-max 2 --corrupt bracket-AB-eq");
  CHECK(r.rc == 1);
  CHECK(has(r, "bindings="));
  CHECK(run("verify-tables --corrupt no-such-entry").rc == 2);
}

TEST_CASE("cli-even-modulus-rejected") {
  Run r = run("--ring zmod:4 verify-tables");
  CHECK(r.rc == 2);
  CHECK(has(r, "EvenModulus"));
  CHECK(run("--ring zmod:30 decompose --in " + ex("word_z15.txt")).rc == 2);
}

TEST_CASE("cli-decompose-and-report") {
  const std::string out = std::string(ESP_TMP_DIR) + "/cli_dec.txt";
  const std::string rep = std::string(ESP_TMP_DIR) + "/cli_rep.jsonl";
  Run r = run("--out " + rep + " decompose --in " + ex("word_z15.txt") + " --output " + out);
  CHECK(r.rc == 0);
  CHECK(run("--n 2 --ring zmod:15 decompose --in " + out).rc == 0);
  Run rp = run("report --in " + rep);
  CHECK(rp.rc == 0);
  CHECK(has(rp, "PASS"));
}

TEST_CASE("cli-parse-errors") {
  const std::string bad = std::string(ESP_TMP_DIR) + "/cli_bad.txt";
  std::ofstream(bad) << "A 2 1\nQ 2 3\n";
  Run r = run("decompose --in " + bad);
  CHECK(r.rc == 2);
  CHECK(has(r, "line 2"));
  CHECK(run("no-such-command").rc == 2);
  CHECK(run("decompose --in /nonexistent/file").rc == 2);
}

TEST_CASE("cli-conj-dilate") {
  Run c = run("--ring loc:poly:q:t:s=t --n 3 conj --X A --i 2 --a 1+t --k 1 --Y D --j 2 --m 3 --x 2");
  CHECK(c.rc == 0);
  Run d = run("--ring poly:q:t dilate --s t --in " + ex("dilate_alpha.txt"));
  CHECK(d.rc == 0);
  CHECK(has(d, "m = 1"));
}

TEST_CASE("cli-patch-normality") {
  CHECK(run("patch --cover " + ex("cover_z15.txt") + " --alpha " + ex("patch_alpha_z15.txt") + " --locals " +
            ex("patch_local_s2.txt") + " " + ex("patch_local_s7.txt"))
            .rc == 0);
  Run n = run("normality-demo --gamma " + ex("gamma_z15.txt") + " --h " + ex("h_z15.txt") + " --cover " +
              ex("cover_z15.txt"));
  CHECK(n.rc == 0);
  const std::string bad = std::string(ESP_TMP_DIR) + "/cli_cover.txt";
  std::ofstream(bad) << "s=2 c=1 b=2 N=1\ns=7 c=1 b=7 N=1\n";
  Run nc = run("normality-demo --gamma " + ex("gamma_z15.txt") + " --h " + ex("h_z15.txt") + " --cover " + bad);
  CHECK(nc.rc == 2);
  CHECK(has(nc, "CoverNotComaximal"));
}

TEST_CASE("cli-rules") {
  Run r = run("rules --n-max 6");
  CHECK(r.rc == 0);
  CHECK(has(r, "3 5 1 1 1"));
}
