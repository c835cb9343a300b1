#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace cap {

/// Path from the root through binary nodes; each step is 1 (left) or 2 (right).
/// The empty path is the root position ε.
class Position {
 public:
  Position() = default;
  Position(std::initializer_list<std::uint8_t> steps) : steps_(steps) {}
  explicit Position(std::vector<std::uint8_t> steps) : steps_(std::move(steps)) {}

  bool isRoot() const { return steps_.empty(); }
  std::size_t length() const { return steps_.size(); }
  std::uint8_t operator[](std::size_t i) const { return steps_[i]; }
  const std::vector<std::uint8_t>& steps() const { return steps_; }

  Position child(std::uint8_t step) const {
    Position p = *this;
    p.steps_.push_back(step);
    return p;
  }
  Position concat(const Position& suffix) const {
    Position p = *this;
    p.steps_.insert(p.steps_.end(), suffix.steps_.begin(), suffix.steps_.end());
    return p;
  }
  bool isPrefixOf(const Position& other) const {
    return steps_.size() <= other.steps_.size() &&
           std::equal(steps_.begin(), steps_.end(), other.steps_.begin());
  }

  // "ε" for the root, otherwise the digits, e.g. "12".
  std::string toString() const {
    if (steps_.empty()) return "ε";
    std::string s;
    for (auto step : steps_) s.push_back(static_cast<char>('0' + step));
    return s;
  }

  friend auto operator<=>(const Position&, const Position&) = default;
  friend bool operator==(const Position&, const Position&) = default;

 private:
  std::vector<std::uint8_t> steps_;
};

}  // namespace cap
