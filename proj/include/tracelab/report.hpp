#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace tracelab {

// Insertion-ordered JSON document.  All floating-point fields are printed
// with 17 significant digits so reports round-trip losslessly and re-runs
// compare byte for byte.
class Json {
 public:
  using Object = std::vector<std::pair<std::string, Json>>;
  using Array = std::vector<Json>;

  Json() : v_(nullptr) {}
  Json(std::nullptr_t) : v_(nullptr) {}
  Json(bool b) : v_(b) {}
  Json(double d) : v_(d) {}
  Json(int i) : v_(static_cast<std::int64_t>(i)) {}
  Json(std::int64_t i) : v_(i) {}
  Json(std::uint64_t u) : v_(u) {}
  Json(const char* s) : v_(std::string(s)) {}
  Json(std::string s) : v_(std::move(s)) {}
  Json(Object o) : v_(std::move(o)) {}
  Json(Array a) : v_(std::move(a)) {}

  static Json object() { return Json(Object{}); }
  static Json array() { return Json(Array{}); }

  Json& set(const std::string& key, Json value);
  Json& push(Json value);

  std::string dump(int indent = 0) const;

 private:
  void dump_to(std::string& out, int indent, int depth) const;
  std::variant<std::nullptr_t, bool, double, std::int64_t, std::uint64_t,
               std::string, Object, Array>
      v_;
};

std::string format_double_17(double d);

}  // namespace tracelab
