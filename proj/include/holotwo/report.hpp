#pragma once

#include <string>
#include <vector>

namespace holotwo {

// One named residual check. `anchor` is an opaque stable id for report
// consumers; `name` says what was checked in plain words.
struct CheckItem {
  std::string name;
  std::string anchor;
  double residual = 0.0;
  double tol = 0.0;
  long count = 0;  // how many instances/tuples were folded into the residual
  bool pass = false;

  static CheckItem make(const std::string& name, const std::string& anchor, double residual,
                        double tol, long count = 1) {
    CheckItem c;
    c.name = name;
    c.anchor = anchor;
    c.residual = residual;
    c.tol = tol;
    c.count = count;
    c.pass = residual <= tol;
    return c;
  }
};

struct Report {
  std::string suite;
  std::vector<CheckItem> items;

  void add(CheckItem c) { items.push_back(std::move(c)); }
  void merge(const Report& other) {
    for (const auto& c : other.items) items.push_back(c);
  }
  bool all_pass() const {
    for (const auto& c : items)
      if (!c.pass) return false;
    return true;
  }
  double worst() const {
    double w = 0.0;
    for (const auto& c : items) w = std::max(w, c.residual);
    return w;
  }
};

}  // namespace holotwo
