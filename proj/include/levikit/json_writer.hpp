#pragma once

#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "levikit/common.hpp"

namespace levikit {

/// Minimal ordered JSON document: keys serialize in insertion order and
/// floats with 17 significant digits, so reports round-trip and repeated
/// runs are byte-identical. Non-finite doubles are rejected; sentinels are
/// passed as strings by the callers.
class Json {
public:
  using Array = std::vector<Json>;
  using Object = std::vector<std::pair<std::string, Json>>;

  Json() : value_(nullptr) {}
  Json(std::nullptr_t) : value_(nullptr) {}
  Json(bool b) : value_(b) {}
  Json(int v) : value_(static_cast<std::int64_t>(v)) {}
  Json(std::int64_t v) : value_(v) {}
  Json(std::uint64_t v) : value_(static_cast<std::int64_t>(v)) {}
  Json(double v) : value_(v) {}
  Json(const char* s) : value_(std::string(s)) {}
  Json(std::string s) : value_(std::move(s)) {}
  Json(Array a) : value_(std::move(a)) {}
  Json(Object o) : value_(std::move(o)) {}

  static Json object() { return Json(Object{}); }
  static Json array() { return Json(Array{}); }

  Json& set(const std::string& key, Json v) {
    auto& o = std::get<Object>(value_);
    o.emplace_back(key, std::move(v));
    return *this;
  }

  Json& push(Json v) {
    std::get<Array>(value_).push_back(std::move(v));
    return *this;
  }

  std::string dump(int indent = 0) const {
    std::string out;
    write(out, indent, 0);
    if (indent > 0) out += '\n';
    return out;
  }

private:
  static std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
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
    return out;
  }

  void write(std::string& out, int indent, int depth) const {
    auto pad = [&](int d) {
      if (indent > 0) {
        out += '\n';
        out.append(static_cast<size_t>(indent) * d, ' ');
      }
    };
    if (std::holds_alternative<std::nullptr_t>(value_)) {
      out += "null";
    } else if (std::holds_alternative<bool>(value_)) {
      out += std::get<bool>(value_) ? "true" : "false";
    } else if (std::holds_alternative<std::int64_t>(value_)) {
      out += std::to_string(std::get<std::int64_t>(value_));
    } else if (std::holds_alternative<double>(value_)) {
      double v = std::get<double>(value_);
      if (!std::isfinite(v)) throw NumericError("Json: non-finite number; use a sentinel string");
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out += buf;
    } else if (std::holds_alternative<std::string>(value_)) {
      out += '"';
      out += escape(std::get<std::string>(value_));
      out += '"';
    } else if (std::holds_alternative<Array>(value_)) {
      const auto& a = std::get<Array>(value_);
      if (a.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      for (size_t i = 0; i < a.size(); ++i) {
        if (i) out += ',';
        pad(depth + 1);
        a[i].write(out, indent, depth + 1);
      }
      pad(depth);
      out += ']';
    } else {
      const auto& o = std::get<Object>(value_);
      if (o.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      for (size_t i = 0; i < o.size(); ++i) {
        if (i) out += ',';
        pad(depth + 1);
        out += '"';
        out += escape(o[i].first);
        out += "\":";
        if (indent > 0) out += ' ';
        o[i].second.write(out, indent, depth + 1);
      }
      pad(depth);
      out += '}';
    }
  }

  std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, Array, Object> value_;
};

}  // namespace levikit
