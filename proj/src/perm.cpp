#include "conjsep/perm.hpp"

#include <cctype>
#include <sstream>

namespace conjsep {

Perm Perm::identity(int degree) {
  std::vector<uint8_t> v(static_cast<size_t>(degree));
  for (int i = 0; i < degree; ++i) v[static_cast<size_t>(i)] = static_cast<uint8_t>(i);
  return Perm(std::move(v));
}

bool Perm::is_identity() const {
  for (int i = 0; i < degree(); ++i)
    if (apply(i) != i) return false;
  return true;
}

Perm Perm::operator*(const Perm& o) const {
  std::vector<uint8_t> v(img_.size());
  for (size_t i = 0; i < img_.size(); ++i) v[i] = o.img_[img_[i]];
  return Perm(std::move(v));
}

Perm Perm::inverse() const {
  std::vector<uint8_t> v(img_.size());
  for (size_t i = 0; i < img_.size(); ++i) v[img_[i]] = static_cast<uint8_t>(i);
  return Perm(std::move(v));
}

std::string Perm::cycle_str() const {
  std::vector<bool> seen(img_.size(), false);
  std::string out;
  for (int i = 0; i < degree(); ++i) {
    if (seen[static_cast<size_t>(i)] || apply(i) == i) continue;
    out.push_back('(');
    int j = i;
    bool first = true;
    while (!seen[static_cast<size_t>(j)]) {
      seen[static_cast<size_t>(j)] = true;
      if (!first) out.push_back(' ');
      out += std::to_string(j + 1);
      first = false;
      j = apply(j);
    }
    out.push_back(')');
  }
  if (out.empty()) out = "()";
  return out;
}

Perm Perm::parse_cycles(const std::string& s, int degree) {
  Perm p = Perm::identity(degree);
  std::vector<uint8_t> img = p.images();
  size_t i = 0;
  auto skip_ws = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  skip_ws();
  while (i < s.size()) {
    if (s[i] != '(') throw input_error("expected '(' in cycle notation");
    ++i;
    std::vector<int> cyc;
    skip_ws();
    while (i < s.size() && s[i] != ')') {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) throw input_error("expected digit in cycle");
      int v = 0;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        v = v * 10 + (s[i] - '0');
        ++i;
      }
      if (v < 1 || v > degree) throw input_error("cycle point out of range");
      cyc.push_back(v - 1);
      skip_ws();
    }
    if (i >= s.size()) throw input_error("unterminated cycle");
    ++i;  // ')'
    for (size_t k = 0; k < cyc.size(); ++k) {
      const int from = cyc[k];
      const int to = cyc[(k + 1) % cyc.size()];
      img[static_cast<size_t>(from)] = static_cast<uint8_t>(to);
    }
    skip_ws();
  }
  return Perm(std::move(img));
}

size_t PermHash::operator()(const Perm& p) const {
  size_t h = 1469598103934665603ull;
  for (uint8_t x : p.images()) {
    h ^= x;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace conjsep
