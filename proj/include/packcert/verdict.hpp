#pragma once

#include <string>

namespace packcert {

struct Verdict {
  bool pass = false;
  std::string detail;

  static Verdict ok(std::string detail = {}) { return {true, std::move(detail)}; }
  static Verdict fail(std::string detail) { return {false, std::move(detail)}; }

  explicit operator bool() const { return pass; }
};

}  // namespace packcert
