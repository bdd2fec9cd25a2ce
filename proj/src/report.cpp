#include "starinv/report.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cstdio>
#include <sstream>

#include "scanner.hpp"
#include "starinv/errors.hpp"

namespace starinv {

std::string content_hash(std::string_view source) {
  const std::string norm = detail::normalize_source(source);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(norm.data(), norm.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

namespace {

std::string escape(std::string_view v) {
  std::string out;
  for (char c : v) {
    if (c == '\\')
      out += "\\\\";
    else if (c == '\n')
      out += "\\n";
    else
      out += c;
  }
  return out;
}

std::string unescape(std::string_view v, int line) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != '\\') {
      out += v[i];
      continue;
    }
    if (i + 1 == v.size()) throw ParseError(line, static_cast<int>(i) + 1, "dangling escape");
    char n = v[++i];
    if (n == 'n')
      out += '\n';
    else if (n == '\\')
      out += '\\';
    else
      throw ParseError(line, static_cast<int>(i), "unknown escape");
  }
  return out;
}

std::string format_ms(double ms) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", ms);
  return buf;
}

}  // namespace

std::string emit_machine(const RunReport& r) {
  std::ostringstream out;
  out << "command=" << escape(r.command) << "\n";
  for (std::size_t i = 0; i < r.inputs.size(); ++i) {
    out << "input." << i << ".path=" << escape(r.inputs[i].path) << "\n";
    out << "input." << i << ".sha256=" << r.inputs[i].sha256 << "\n";
  }
  for (const auto& [k, v] : r.config) out << "config." << k << "=" << escape(v) << "\n";
  for (const auto& [k, v] : r.result) out << "result." << k << "=" << escape(v) << "\n";
  out << "verdict=" << escape(r.verdict) << "\n";
  if (r.wall_ms) out << "wall_ms=" << format_ms(*r.wall_ms) << "\n";
  return out.str();
}

RunReport parse_machine(std::string_view text) {
  RunReport r;
  bool have_command = false, have_verdict = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos || eq == 0) throw ParseError(line_no, 1, "expected key=value");
    const std::string key(line.substr(0, eq));
    const std::string value = unescape(line.substr(eq + 1), line_no);
    auto starts = [&](std::string_view p) { return key.rfind(p, 0) == 0; };
    if (key == "command") {
      r.command = value;
      have_command = true;
    } else if (key == "verdict") {
      r.verdict = value;
      have_verdict = true;
    } else if (key == "wall_ms") {
      try {
        r.wall_ms = std::stod(value);
      } catch (const std::exception&) {
        throw ParseError(line_no, static_cast<int>(eq) + 2, "bad wall time");
      }
    } else if (starts("config.")) {
      r.config.emplace_back(key.substr(7), value);
    } else if (starts("result.")) {
      r.result.emplace_back(key.substr(7), value);
    } else if (starts("input.")) {
      const std::size_t dot = key.find('.', 6);
      if (dot == std::string::npos) throw ParseError(line_no, 1, "bad input key");
      std::size_t idx = 0;
      auto [p, ec] = std::from_chars(key.data() + 6, key.data() + dot, idx);
      if (ec != std::errc() || p != key.data() + dot) throw ParseError(line_no, 7, "bad input index");
      if (idx > r.inputs.size()) throw ParseError(line_no, 7, "input indices out of order");
      if (idx == r.inputs.size()) r.inputs.emplace_back();
      const std::string field = key.substr(dot + 1);
      if (field == "path")
        r.inputs[idx].path = value;
      else if (field == "sha256")
        r.inputs[idx].sha256 = value;
      else
        throw ParseError(line_no, static_cast<int>(dot) + 2, "unknown input field '" + field + "'");
    } else {
      throw ParseError(line_no, 1, "unknown key '" + key + "'");
    }
  }
  if (!have_command) throw ParseError(1, 1, "missing command");
  if (!have_verdict) throw ParseError(line_no > 0 ? line_no : 1, 1, "missing verdict");
  return r;
}

std::string emit_human(const RunReport& r) {
  std::ostringstream out;
  out << r.command << "\n";
  for (const auto& in : r.inputs) out << "  input  " << in.path << "  (sha256 " << in.sha256.substr(0, 16) << ")\n";
  for (const auto& [k, v] : r.result) {
    out << "  " << k << ":";
    if (v.find('\n') != std::string::npos) {
      std::istringstream lines(v);
      std::string l;
      out << "\n";
      while (std::getline(lines, l)) out << "    " << l << "\n";
    } else {
      out << " " << v << "\n";
    }
  }
  out << "verdict: " << r.verdict << "\n";
  if (r.wall_ms) out << "wall time: " << format_ms(*r.wall_ms) << " ms\n";
  return out.str();
}

}  // namespace starinv
