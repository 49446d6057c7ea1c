#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace wellvoice {

/// Named, ordered real vector. `names` and `values` always have equal length.
struct FeatureVector {
  std::vector<std::string> names;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  void push(std::string name, double value) {
    names.push_back(std::move(name));
    values.push_back(value);
  }
  void append(const FeatureVector& other, const std::string& prefix = "");
};

}  // namespace wellvoice
