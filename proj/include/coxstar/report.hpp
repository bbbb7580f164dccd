#pragma once

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace coxstar {

using Json = nlohmann::ordered_json;

inline std::string fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Machine- and human-readable command report. Failures empty iff the
/// command exits 0; output is byte-deterministic for fixed inputs/seed.
struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;  // file -> digest
  Json results = Json::object();
  std::vector<std::pair<std::string, std::string>> failures;  // check id -> witness

  void add_input(const std::string& path, std::string_view bytes) {
    inputs.push_back({path, fnv1a64(bytes)});
  }
  void fail(const std::string& check, const std::string& witness) {
    failures.push_back({check, witness});
  }
  bool ok() const { return failures.empty(); }

  Json to_json() const {
    Json j;
    j["command"] = command;
    j["inputs"] = Json::object();
    for (auto& [p, d] : inputs) j["inputs"][p] = d;
    j["results"] = results;
    j["failures"] = Json::array();
    for (auto& [c, w] : failures) j["failures"].push_back({{"check", c}, {"witness", w}});
    return j;
  }

  void print_text(std::ostream& os) const {
    print_tree(os, results, 0);
    for (auto& [c, w] : failures) os << "FAIL " << c << ": " << w << "\n";
  }

 private:
  static void print_tree(std::ostream& os, const Json& j, int depth) {
    std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    if (j.is_object()) {
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.value().is_object() || (it.value().is_array() && !it.value().empty() &&
                                       (it.value()[0].is_object() || it.value()[0].is_array()))) {
          os << pad << it.key() << ":\n";
          print_tree(os, it.value(), depth + 1);
        } else {
          os << pad << it.key() << ": " << scalar(it.value()) << "\n";
        }
      }
    } else if (j.is_array()) {
      for (const auto& v : j) {
        if (v.is_object() || v.is_array()) {
          os << pad << "-\n";
          print_tree(os, v, depth + 1);
        } else {
          os << pad << "- " << scalar(v) << "\n";
        }
      }
    } else {
      os << pad << scalar(j) << "\n";
    }
  }
  static std::string scalar(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  }
};

}  // namespace coxstar
