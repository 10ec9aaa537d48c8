// Compares command reports against stored JSON. ELCOMP_UPDATE_GOLDEN=1 rewrites them.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "elcomp/problem_file.hpp"
#include "elcomp/report.hpp"

using namespace elcomp;

namespace {

constexpr double kRel = 1e-9;
constexpr double kAbs = 1e-12;

struct Case {
  std::string name;
  std::string command;
  CommandArgs args;
};

CommandArgs parse_args(const std::vector<std::string>& words) {
  CommandArgs a;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const std::string& w = words[i];
    auto next = [&]() -> const std::string& {
      if (i + 1 >= words.size()) throw std::runtime_error("missing value after " + w);
      return words[++i];
    };
    if (w == "--sub") {
      a.sub = next();
    } else if (w == "--super") {
      a.super = next();
    } else if (w == "--component") {
      a.component = std::stoul(next());
    } else if (w == "--cooperative") {
      a.cooperative = true;
    } else if (w == "--gauge") {
      a.gauge = true;
    } else if (w == "--builtin") {
      a.builtin = true;
    } else if (w == "--probe") {
      a.probe = std::stoul(next());
    } else if (w == "--seed") {
      a.seed = std::stoull(next());
    } else if (w == "--mode") {
      a.certify.mode = parse_mode(next());
    } else if (w.rfind("--", 0) == 0) {
      throw std::runtime_error("unknown option " + w);
    } else {
      a.problem = w;
    }
  }
  return a;
}

std::vector<Case> read_cases(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<Case> out;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<std::string> words;
    for (std::string w; ss >> w;) words.push_back(w);
    if (words.empty()) continue;
    if (words.size() < 3) throw std::runtime_error("case needs: name command problem [options]");
    out.push_back({words[0], words[1], parse_args({words.begin() + 2, words.end()})});
  }
  return out;
}

// Numbers compare with a relative tolerance; everything else exactly.
void compare(const Json& got, const Json& want, const std::string& path, std::vector<std::string>& diffs) {
  if (got.is_number() && want.is_number()) {
    const double a = got.get<double>(), b = want.get<double>();
    if (std::abs(a - b) > kAbs + kRel * std::max(std::abs(a), std::abs(b))) {
      diffs.push_back(path + ": " + format_double(a) + " != " + format_double(b));
    }
    return;
  }
  if (got.type() != want.type()) {
    diffs.push_back(path + ": type differs");
    return;
  }
  if (got.is_object()) {
    for (auto it = want.begin(); it != want.end(); ++it) {
      if (!got.contains(it.key())) {
        diffs.push_back(path + "/" + it.key() + ": missing");
      } else {
        compare(got[it.key()], it.value(), path + "/" + it.key(), diffs);
      }
    }
    for (auto it = got.begin(); it != got.end(); ++it)
      if (!want.contains(it.key())) diffs.push_back(path + "/" + it.key() + ": unexpected");
  } else if (got.is_array()) {
    if (got.size() != want.size()) {
      diffs.push_back(path + ": length " + std::to_string(got.size()) + " != " + std::to_string(want.size()));
      return;
    }
    for (std::size_t i = 0; i < got.size(); ++i) compare(got[i], want[i], path + "/" + std::to_string(i), diffs);
  } else if (got != want) {
    diffs.push_back(path + ": " + got.dump() + " != " + want.dump());
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: golden_check CASES\n");
    return 2;
  }
  const std::string cases_path = argv[1];
  const std::string dir = cases_path.substr(0, cases_path.find_last_of('/') + 1);
  const char* update_env = std::getenv("ELCOMP_UPDATE_GOLDEN");
  const bool update = update_env && std::string(update_env) == "1";

  int failed = 0;
  try {
    for (const auto& c : read_cases(cases_path)) {
      const CommandResult r = run_command(c.command, c.args);
      Json report = r.report;
      report.erase("timings");
      report["exit_code"] = r.exit_code;
      const std::string file = dir + c.name + ".json";
      if (update) {
        write_file(file, report.dump(2) + "\n");
        std::printf("updated %s\n", file.c_str());
        continue;
      }
      std::vector<std::string> diffs;
      try {
        compare(report, Json::parse(read_file(file)), "", diffs);
      } catch (const std::exception& e) {
        diffs.push_back(e.what());
      }
      std::printf("%s %s\n", diffs.empty() ? "ok  " : "FAIL", c.name.c_str());
      for (std::size_t i = 0; i < diffs.size() && i < 20; ++i) std::printf("    %s\n", diffs[i].c_str());
      if (!diffs.empty()) ++failed;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "golden_check: %s\n", e.what());
    return 2;
  }
  return failed ? 1 : 0;
}
