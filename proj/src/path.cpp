#include "chessboard/path.hpp"

#include <stdexcept>

namespace chessboard {

Path::Path(std::vector<Dir> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) throw std::invalid_argument("path must have at least one step");
}

Path Path::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty path string");
  std::vector<Dir> steps;
  steps.reserve(text.size());
  for (char c : text) {
    if (c == '+') {
      steps.push_back(Dir::plus);
    } else if (c == '-') {
      steps.push_back(Dir::minus);
    } else {
      throw std::invalid_argument(std::string("bad path character '") + c + "'");
    }
  }
  return Path(std::move(steps));
}

std::string Path::str() const {
  std::string s;
  s.reserve(steps_.size());
  for (Dir d : steps_) s.push_back(d == Dir::plus ? '+' : '-');
  return s;
}

std::int64_t corner_count(std::span<const Dir> steps) {
  std::int64_t r = 0;
  for (std::size_t k = 1; k < steps.size(); ++k)
    if (steps[k] != steps[k - 1]) ++r;
  return r;
}

LegSeq to_legs(std::span<const Dir> steps) {
  LegSeq legs;
  for (Dir d : steps) {
    if (!legs.empty() && legs.back().dir == d) {
      ++legs.back().len;
    } else {
      legs.push_back({d, 1});
    }
  }
  return legs;
}

Path from_legs(const LegSeq& legs) {
  if (legs.empty()) throw std::invalid_argument("empty leg sequence");
  std::vector<Dir> steps;
  for (std::size_t i = 0; i < legs.size(); ++i) {
    if (legs[i].len <= 0) throw std::invalid_argument("leg length must be positive");
    if (i > 0 && legs[i].dir == legs[i - 1].dir)
      throw std::invalid_argument("adjacent legs must alternate direction");
    steps.insert(steps.end(), static_cast<std::size_t>(legs[i].len), legs[i].dir);
  }
  return Path(std::move(steps));
}

std::vector<Site> positions(const Path& p) {
  std::vector<Site> out;
  out.reserve(p.size() + 1);
  Site s{0, 0};
  out.push_back(s);
  for (Dir d : p.steps()) {
    s.x += sign(d);
    s.t += 1;
    out.push_back(s);
  }
  return out;
}

Site end_site(std::span<const Dir> steps) {
  Site s{0, 0};
  for (Dir d : steps) {
    s.x += sign(d);
    s.t += 1;
  }
  return s;
}

}  // namespace chessboard
