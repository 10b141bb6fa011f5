#include "humangen/prompting.hpp"

#include <fstream>
#include <iostream>
#include <stdexcept>

namespace hgen {

const char* to_string(Gender g) { return g == Gender::man ? "man" : "woman"; }

std::string render_prompt(const PromptSpec& spec) {
  if (spec.action.empty()) throw std::invalid_argument("prompt: empty action");
  if (spec.environment.empty()) throw std::invalid_argument("prompt: empty environment");
  std::string out = "A ";
  out += to_string(spec.gender);
  out += ' ';
  out += spec.action;
  out += ' ';
  out += spec.environment;
  return out;
}

std::vector<std::string> default_negative(const std::vector<std::string>& extras) {
  std::vector<std::string> out = {"ugly", "extra limbs", "poorly drawn face",
                                  "poorly drawn hands", "poorly drawn feet"};
  out.insert(out.end(), extras.begin(), extras.end());
  return out;
}

EnvironmentTable EnvironmentTable::defaults() {
  EnvironmentTable t;
  t.indoor = {"at the mall",   "at the library", "at the office", "at a cafe",
              "in the gym",    "in the kitchen", "in the living room"};
  t.outdoor = {"at the park",  "in the park",    "in the pool",   "at the beach",
               "on the street", "in the garden", "on a hiking trail"};
  return t;
}

std::vector<std::string> EnvironmentTable::load_list(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("prompt table: cannot open " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.pop_back();
    std::size_t start = 0;
    while (start < line.size() && (line[start] == ' ' || line[start] == '\t')) ++start;
    if (start < line.size()) out.push_back(line.substr(start));
  }
  return out;
}

std::string pick_environment(Rng& rng, bool indoor, const EnvironmentTable& table,
                             TextGenClient* client) {
  if (client) {
    try {
      std::string env = client->environment(indoor);
      if (!env.empty()) return env;
    } catch (const std::exception& e) {
      std::cerr << "[humangen][warn] environment client failed (" << e.what()
                << "); falling back to table\n";
    }
  }
  const auto& list = indoor ? table.indoor : table.outdoor;
  if (list.empty()) throw std::runtime_error("prompt: empty environment table");
  return list[rng.index(list.size())];
}

std::vector<std::string> default_actions() {
  return {"standing",       "walking",  "running",  "sitting",  "stretching",
          "dancing",        "swimming", "shopping", "studying", "working",
          "playing soccer", "chatting"};
}

}  // namespace hgen
