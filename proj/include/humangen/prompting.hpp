#pragma once

#include <optional>
#include <string>
#include <vector>

#include "humangen/rng.hpp"

namespace hgen {

enum class Gender { man, woman };

const char* to_string(Gender g);

struct PromptSpec {
  Gender gender = Gender::man;
  std::string action;
  std::string environment;
  std::vector<std::string> negative;
};

/// "A {gender} {action} {environment}" with single spaces. Throws on an
/// empty action or environment.
std::string render_prompt(const PromptSpec& spec);

/// The stock negative prompts, order-stable, plus any configured extras.
std::vector<std::string> default_negative(const std::vector<std::string>& extras = {});

/// Environment phrases partitioned by scene type. Files are UTF-8, one entry
/// per line, '#' comments.
struct EnvironmentTable {
  std::vector<std::string> indoor;
  std::vector<std::string> outdoor;

  static EnvironmentTable defaults();
  static std::vector<std::string> load_list(const std::string& path);
};

/// Optional delegate for externally generated environment text.
class TextGenClient {
 public:
  virtual ~TextGenClient() = default;
  virtual std::string environment(bool indoor) = 0;
};

/// Uniform deterministic pick from the table, or the external client when
/// one is configured (falling back to the table with a warning on failure).
std::string pick_environment(Rng& rng, bool indoor, const EnvironmentTable& table,
                             TextGenClient* client = nullptr);

/// Action phrases; file format as for environments.
std::vector<std::string> default_actions();

}  // namespace hgen
