#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace radial {

// Fixed-format float rendering: 17 significant digits, '.' decimal separator
// regardless of locale. Non-finite values render as "inf"/"-inf"/"nan".
std::string format_sig17(double v);

// Minimal JSON document builder with deterministic output: object keys are
// emitted in sorted order and all floats go through format_sig17 (a
// shortest-round-trip serializer would not give byte-stable 17-digit output).
// Non-finite doubles are emitted as strings.
class Json {
 public:
  Json() : value_(nullptr) {}

  static Json object() {
    Json j;
    j.value_ = Object{};
    return j;
  }
  static Json array() {
    Json j;
    j.value_ = Array{};
    return j;
  }
  Json(bool b) : value_(b) {}
  Json(double v) : value_(v) {}
  Json(int v) : value_(static_cast<long long>(v)) {}
  Json(long long v) : value_(v) {}
  Json(std::size_t v) : value_(static_cast<long long>(v)) {}
  Json(const char* s) : value_(std::string(s)) {}
  Json(std::string s) : value_(std::move(s)) {}

  Json& set(const std::string& key, Json v);
  Json& push(Json v);

  std::string dump(int indent = 2) const;

 private:
  struct Object {
    std::map<std::string, Json> members;
  };
  struct Array {
    std::vector<Json> items;
  };
  void write(std::string& out, int indent, int depth) const;
  std::variant<std::nullptr_t, bool, long long, double, std::string, Object, Array> value_;
};

// CSV assembly: header + rows, '\n' line endings, floats via format_sig17.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}
  void row(const std::vector<double>& values);
  void row_text(const std::vector<std::string>& cells);
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::string> lines_;
};

}  // namespace radial
