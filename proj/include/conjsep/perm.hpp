// perm.hpp -- permutations of {0..k-1} with one-line cycle notation (1-based).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conjsep/error.hpp"

namespace conjsep {

class Perm {
 public:
  Perm() = default;
  explicit Perm(std::vector<uint8_t> images) : img_(std::move(images)) {}
  static Perm identity(int degree);

  int degree() const { return static_cast<int>(img_.size()); }
  int apply(int x) const { return img_[static_cast<size_t>(x)]; }
  bool is_identity() const;

  // apply *this, then o.
  Perm operator*(const Perm& o) const;
  Perm inverse() const;

  bool operator==(const Perm& o) const { return img_ == o.img_; }
  bool operator!=(const Perm& o) const { return img_ != o.img_; }
  bool operator<(const Perm& o) const { return img_ < o.img_; }

  const std::vector<uint8_t>& images() const { return img_; }

  // "(1 2)(3 4)"; identity prints as "()".
  std::string cycle_str() const;
  static Perm parse_cycles(const std::string& s, int degree);

 private:
  std::vector<uint8_t> img_;
};

struct PermHash {
  size_t operator()(const Perm& p) const;
};

}  // namespace conjsep
