#include "tracelab/report.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace tracelab {

std::string format_double_17(double d) {
  if (std::isnan(d)) return "null";
  if (std::isinf(d)) return d > 0 ? "1e999" : "-1e999";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

Json& Json::set(const std::string& key, Json value) {
  auto* obj = std::get_if<Object>(&v_);
  if (!obj) throw std::logic_error("Json::set on a non-object");
  for (auto& [k, v] : *obj) {
    if (k == key) {
      v = std::move(value);
      return *this;
    }
  }
  obj->emplace_back(key, std::move(value));
  return *this;
}

Json& Json::push(Json value) {
  auto* arr = std::get_if<Array>(&v_);
  if (!arr) throw std::logic_error("Json::push on a non-array");
  arr->push_back(std::move(value));
  return *this;
}

namespace {

void escape_to(std::string& out, const std::string& s) {
  out += '"';
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void newline_indent(std::string& out, int indent, int depth) {
  if (indent <= 0) return;
  out += '\n';
  out.append(static_cast<std::size_t>(indent * depth), ' ');
}

}  // namespace

void Json::dump_to(std::string& out, int indent, int depth) const {
  if (std::holds_alternative<std::nullptr_t>(v_)) {
    out += "null";
  } else if (const auto* b = std::get_if<bool>(&v_)) {
    out += *b ? "true" : "false";
  } else if (const auto* d = std::get_if<double>(&v_)) {
    out += format_double_17(*d);
  } else if (const auto* i = std::get_if<std::int64_t>(&v_)) {
    out += std::to_string(*i);
  } else if (const auto* u = std::get_if<std::uint64_t>(&v_)) {
    out += std::to_string(*u);
  } else if (const auto* s = std::get_if<std::string>(&v_)) {
    escape_to(out, *s);
  } else if (const auto* obj = std::get_if<Object>(&v_)) {
    if (obj->empty()) {
      out += "{}";
      return;
    }
    out += '{';
    bool first = true;
    for (const auto& [k, v] : *obj) {
      if (!first) out += ',';
      first = false;
      newline_indent(out, indent, depth + 1);
      escape_to(out, k);
      out += indent > 0 ? ": " : ":";
      v.dump_to(out, indent, depth + 1);
    }
    newline_indent(out, indent, depth);
    out += '}';
  } else if (const auto* arr = std::get_if<Array>(&v_)) {
    if (arr->empty()) {
      out += "[]";
      return;
    }
    out += '[';
    bool first = true;
    for (const auto& v : *arr) {
      if (!first) out += ',';
      first = false;
      newline_indent(out, indent, depth + 1);
      v.dump_to(out, indent, depth + 1);
    }
    newline_indent(out, indent, depth);
    out += ']';
  }
}

std::string Json::dump(int indent) const {
  std::string out;
  dump_to(out, indent, 0);
  return out;
}

}  // namespace tracelab
