#include "radial/report.hpp"

#include <cmath>
#include <cstdio>

#include "radial/errors.hpp"

namespace radial {

std::string format_sig17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  std::string s(buf);
  for (char& c : s)
    if (c == ',') c = '.';  // locale-proof decimal separator
  return s;
}

Json& Json::set(const std::string& key, Json v) {
  if (!std::holds_alternative<Object>(value_)) throw Error("Json::set on a non-object");
  std::get<Object>(value_).members.insert_or_assign(key, std::move(v));
  return *this;
}

Json& Json::push(Json v) {
  if (!std::holds_alternative<Array>(value_)) throw Error("Json::push on a non-array");
  std::get<Array>(value_).items.push_back(std::move(v));
  return *this;
}

namespace {

void write_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

}  // namespace

void Json::write(std::string& out, int indent, int depth) const {
  const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  const std::string pad_close(static_cast<std::size_t>(indent) * depth, ' ');
  const char* nl = indent > 0 ? "\n" : "";

  if (std::holds_alternative<std::nullptr_t>(value_)) {
    out += "null";
  } else if (std::holds_alternative<bool>(value_)) {
    out += std::get<bool>(value_) ? "true" : "false";
  } else if (std::holds_alternative<long long>(value_)) {
    out += std::to_string(std::get<long long>(value_));
  } else if (std::holds_alternative<double>(value_)) {
    const double v = std::get<double>(value_);
    if (std::isfinite(v))
      out += format_sig17(v);
    else
      write_escaped(out, format_sig17(v));
  } else if (std::holds_alternative<std::string>(value_)) {
    write_escaped(out, std::get<std::string>(value_));
  } else if (std::holds_alternative<Object>(value_)) {
    const auto& members = std::get<Object>(value_).members;
    if (members.empty()) {
      out += "{}";
      return;
    }
    out += "{";
    out += nl;
    std::size_t i = 0;
    for (const auto& [key, val] : members) {
      out += pad;
      write_escaped(out, key);
      out += indent > 0 ? ": " : ":";
      val.write(out, indent, depth + 1);
      if (++i != members.size()) out += ",";
      out += nl;
    }
    out += pad_close;
    out += "}";
  } else {
    const auto& items = std::get<Array>(value_).items;
    if (items.empty()) {
      out += "[]";
      return;
    }
    out += "[";
    out += nl;
    for (std::size_t i = 0; i < items.size(); ++i) {
      out += pad;
      items[i].write(out, indent, depth + 1);
      if (i + 1 != items.size()) out += ",";
      out += nl;
    }
    out += pad_close;
    out += "]";
  }
}

std::string Json::dump(int indent) const {
  std::string out;
  write(out, indent, 0);
  return out;
}

void Csv::row(const std::vector<double>& values) {
  std::string line;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line += ",";
    line += format_sig17(values[i]);
  }
  lines_.push_back(std::move(line));
}

void Csv::row_text(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ",";
    line += cells[i];
  }
  lines_.push_back(std::move(line));
}

std::string Csv::str() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) out += ",";
    out += header_[i];
  }
  out += "\n";
  for (const auto& line : lines_) {
    out += line;
    out += "\n";
  }
  return out;
}

}  // namespace radial
