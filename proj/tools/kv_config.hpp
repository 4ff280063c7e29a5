#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qkin_cli {

// Plain key = value configuration text: one pair per line, '#' comments,
// blank lines ignored.  Keys mirror the long option names without dashes.
using KeyValueMap = std::map<std::string, std::string>;

inline std::string trim(const std::string& s) {
  std::size_t a = 0;
  while (a < s.size() && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  std::size_t b = s.size();
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline KeyValueMap parse_kv_text(const std::string& text) {
  KeyValueMap map;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               " is not of the form key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::runtime_error("config line " + std::to_string(line_no) + " has an empty key");
    }
    map[key] = value;
  }
  return map;
}

inline KeyValueMap parse_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_kv_text(buffer.str());
}

inline std::string serialize_kv(const KeyValueMap& map) {
  std::ostringstream out;
  for (const auto& [key, value] : map) out << key << " = " << value << "\n";
  return out.str();
}

}  // namespace qkin_cli
