// Helpers for driving the failover_lab binary from the tests.
#pragma once

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace cli {

struct RunResult {
  int exit_code;
  std::string out;
};

inline RunResult run(const std::string& args) {
  const std::string cmd = std::string("\"") + FAILOVER_LAB_BIN + "\" " + args +
                          " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  std::string out;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    out.append(buf.data(), got);
  int status = pclose(pipe);
  int code = -1;
  if (WIFEXITED(status)) code = WEXITSTATUS(status);
  return RunResult{code, std::move(out)};
}

// stdout with the trailing wall-clock line removed: everything else must be
// a pure function of the inputs
inline std::string strip_duration(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line))
    if (line.rfind("duration_ms:", 0) != 0) out += line + "\n";
  return out;
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Minimal JSON-Schema checker for the subset the shipped schema uses:
// type, required, properties, items, enum, additionalProperties.
inline bool schema_ok(const nlohmann::json& schema, const nlohmann::json& value,
                      std::string& why) {
  using nlohmann::json;
  if (schema.contains("type")) {
    const std::string type = schema.at("type").get<std::string>();
    const bool match =
        (type == "object" && value.is_object()) ||
        (type == "array" && value.is_array()) ||
        (type == "string" && value.is_string()) ||
        (type == "number" && value.is_number()) ||
        (type == "integer" && value.is_number_integer()) ||
        (type == "boolean" && value.is_boolean()) ||
        (type == "null" && value.is_null());
    if (!match) {
      why = "expected type " + type;
      return false;
    }
  }
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& allowed : schema.at("enum"))
      if (allowed == value) found = true;
    if (!found) {
      why = "value not in enum";
      return false;
    }
  }
  if (value.is_object()) {
    if (schema.contains("required"))
      for (const auto& name : schema.at("required"))
        if (!value.contains(name.get<std::string>())) {
          why = "missing required field " + name.get<std::string>();
          return false;
        }
    if (schema.contains("properties")) {
      for (auto it = schema.at("properties").begin();
           it != schema.at("properties").end(); ++it) {
        if (!value.contains(it.key())) continue;
        if (!schema_ok(it.value(), value.at(it.key()), why)) {
          why = it.key() + ": " + why;
          return false;
        }
      }
      if (schema.contains("additionalProperties") &&
          schema.at("additionalProperties") == false) {
        for (auto it = value.begin(); it != value.end(); ++it)
          if (!schema.at("properties").contains(it.key())) {
            why = "unexpected field " + it.key();
            return false;
          }
      }
    }
  }
  if (value.is_array() && schema.contains("items"))
    for (const auto& element : value)
      if (!schema_ok(schema.at("items"), element, why)) return false;
  return true;
}

}  // namespace cli
