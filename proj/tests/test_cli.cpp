// End-to-end checks of the command line tool: exit codes, file round trips,
// determinism of outputs. Runs the real binary (path injected by CMake).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
  if (!ok) {
    ++failures;
    std::cerr << "FAIL: " << what << "\n";
  }
}

int run(const std::string& args) {
  std::string cmd = std::string(MUBFORGE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

int run_capture(const std::string& args, const std::string& outfile) {
  std::string cmd = std::string(MUBFORGE_CLI_PATH) + " " + args + " > " + outfile + " 2>/dev/null";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json load(const std::string& path) { return json::parse(slurp(path)); }

}  // namespace

int main() {
  const std::string tmp = "cli_tmp";
  std::system(("rm -rf " + tmp + " && mkdir -p " + tmp).c_str());

  // catalog: human and machine form; all families present
  check(run("catalog") == 0, "catalog exits 0");
  check(run_capture("catalog --json", tmp + "/cat.json") == 0, "catalog --json exits 0");
  {
    json cat = load(tmp + "/cat.json");
    std::vector<std::string> names;
    for (auto& e : cat) names.push_back(e.at("name").get<std::string>());
    for (const char* want : {"field", "albert", "bkla", "dickson", "knuth", "cohen-ganley", "thas-payne",
                             "ganley", "penttila-williams", "suzuki", "bblp", "coulter-matthews",
                             "pseudo-planar"}) {
      bool found = false;
      for (auto& n : names)
        if (n.rfind(want, 0) == 0) found = true;
      check(found, std::string("catalog lists ") + want);
    }
    // machine-readable form round-trips
    check(json::parse(cat.dump()) == cat, "catalog json round trip");
  }

  // build mub: 10 bases at q = 9, pass, file written
  check(run("build mub --family field --q 9 -o " + tmp + "/f9.json --report " + tmp + "/f9rep.json") == 0,
        "build mub field q=9 exits 0");
  {
    json ms = load(tmp + "/f9.json");
    check(ms.at("bases").size() == 10, "field q=9 has 10 bases");
    json rep = load(tmp + "/f9rep.json");
    check(rep.at("passed").get<bool>(), "field q=9 report passed");
    check(rep.at("mode") == "exact", "field q=9 verified exactly");
  }

  // determinism: identical run config gives byte-identical outputs
  check(run("build mub --family field --q 9 --seed 0 -o " + tmp + "/f9a.json --report " + tmp + "/f9arep.json") == 0,
        "rebuild run 1");
  check(run("build mub --family field --q 9 --seed 0 -o " + tmp + "/f9b.json --report " + tmp + "/f9brep.json") == 0,
        "rebuild run 2");
  check(slurp(tmp + "/f9a.json") == slurp(tmp + "/f9b.json"), "mub output byte-identical");
  check(slurp(tmp + "/f9arep.json") == slurp(tmp + "/f9brep.json"), "report byte-identical");

  // verify round trip
  check(run("verify " + tmp + "/f9.json") == 0, "verify exported set exits 0");

  // verification failure: perturb one exponent
  {
    json ms = load(tmp + "/f9.json");
    int e = ms["bases"][1]["table"][0][1].get<int>();
    ms["bases"][1]["table"][0][1] = (e + 1) % ms["m"].get<int>();
    std::ofstream(tmp + "/f9bad.json") << ms.dump(1);
    check(run("verify " + tmp + "/f9bad.json") == 1, "perturbed set fails with exit 1");
  }

  // malformed input: exit 2
  std::ofstream(tmp + "/broken.json") << "{ not json";
  check(run("verify " + tmp + "/broken.json") == 2, "malformed file exits 2");
  std::ofstream(tmp + "/notype.json") << "{}";
  check(run("verify " + tmp + "/notype.json") == 2, "missing type exits 2");
  check(run("build mub --family nonsense --q 9") == 2, "unknown family exits 2");
  check(run("build mub --family dickson --q 9") == 2, "commutative F+F family directs to partner, exit 2");
  check(run("build mub --family albert --q 9") == 2, "albert q=9 violates the degree constraint");

  // spread build + verify round trip
  check(run("build spread --family suzuki --q 8 -o " + tmp + "/suz.json --report " + tmp + "/suzrep.json") == 0,
        "build spread suzuki q=8 exits 0");
  {
    json rep = load(tmp + "/suzrep.json");
    check(rep.at("telemetry").at("members").get<int>() == 65, "suzuki spread has 65 members");
    check(rep.at("passed").get<bool>(), "suzuki spread report passed");
  }
  check(run("verify " + tmp + "/suz.json") == 0, "verify suzuki spread exits 0");

  // presemifield build, dual, and catalog agreement
  check(run("build presemifield --family albert --q 27 -o " + tmp + "/alb.json") == 0,
        "build presemifield albert q=27");
  check(run("dual " + tmp + "/alb.json -o " + tmp + "/alb_dual.json") == 0, "dual of albert");
  check(run("verify " + tmp + "/alb_dual.json") == 0, "dual passes the axioms");

  // the dual must act like the cataloged symplectic partner: the MUB sets
  // built from the two paths compare identical
  check(run("build mub --family albert --q 27 -o " + tmp + "/m_planar.json") == 0, "albert planar-path mub");
  check(run("build mub --family albert-symplectic --q 27 -o " + tmp + "/m_symp.json") == 0,
        "albert symplectic-path mub");
  check(run("compare " + tmp + "/m_planar.json " + tmp + "/m_symp.json") == 0, "paths compare identical");

  // a genuinely different pair exits 1
  {
    json ms = load(tmp + "/f9.json");
    ms["bases"][1]["table"][0][1] = (ms["bases"][1]["table"][0][1].get<int>() + 1) % ms["m"].get<int>();
    ms["bases"][1]["table"][0][2] = (ms["bases"][1]["table"][0][2].get<int>() + 2) % ms["m"].get<int>();
    std::ofstream(tmp + "/f9mut.json") << ms.dump(1);
    check(run("compare " + tmp + "/f9.json " + tmp + "/f9mut.json") == 1, "different sets exit 1");
  }

  // csv export
  check(run("export " + tmp + "/f9.json -o " + tmp + "/f9.csv") == 0, "csv export exits 0");
  check(slurp(tmp + "/f9.csv").rfind("# dense complex MUB export", 0) == 0, "csv carries the float disclaimer");

  // bblp with --full per the documented flow
  check(run("build mub --family bblp --q 27 --full --report " + tmp + "/bblp.json") == 0,
        "build mub bblp q=27 --full exits 0");
  {
    json rep = load(tmp + "/bblp.json");
    check(rep.at("telemetry").at("bases").get<int>() == 28, "bblp has 28 bases");
  }

  // modulus override is honored and recorded
  check(run("build presemifield --family field --q 8 --modulus 1,1,0,1 -o " + tmp + "/f8.json") == 0,
        "explicit modulus accepted");
  {
    json s = load(tmp + "/f8.json");
    check(s.at("field").at("modulus") == json::array({1, 1, 0, 1}), "modulus recorded");
  }
  check(run("build presemifield --family field --q 8 --modulus 1,0,0,1") == 2, "reducible modulus exits 2");

  if (failures == 0) std::cout << "cli: all checks passed\n";
  return failures == 0 ? 0 : 1;
}
