#include "pachner/perm.hpp"

#include <algorithm>

namespace pachner {

namespace {

std::array<Perm, 24> make_all_perms() {
  std::array<Perm, 24> all{};
  std::array<int, 4> v{0, 1, 2, 3};
  int i = 0;
  do {
    all[i++] = Perm(v[0], v[1], v[2], v[3]);
  } while (std::next_permutation(v.begin(), v.end()));
  return all;
}

const std::array<Perm, 24>& all_perms() {
  static const std::array<Perm, 24> all = make_all_perms();
  return all;
}

}  // namespace

bool Perm::parse(const std::string& text, Perm& out) {
  if (text.size() != 4) return false;
  Perm p;
  for (int i = 0; i < 4; ++i) {
    if (text[i] < '0' || text[i] > '3') return false;
    p.image_[i] = static_cast<std::uint8_t>(text[i] - '0');
  }
  if (!p.is_valid()) return false;
  out = p;
  return true;
}

Perm Perm::from_index(int i) { return all_perms().at(i); }

int Perm::index() const {
  // Lehmer code over the 4 images.
  int code = 0;
  int fact[4] = {6, 2, 1, 1};
  for (int i = 0; i < 4; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < 4; ++j)
      if (image_[j] < image_[i]) ++smaller;
    code += smaller * fact[i];
  }
  return code;
}

std::string Perm::str() const {
  std::string s(4, '0');
  for (int i = 0; i < 4; ++i) s[i] = static_cast<char>('0' + image_[i]);
  return s;
}

Perm edge_ordering(int k) {
  int a = kEdgeVertices[k][0], b = kEdgeVertices[k][1];
  int rest[2];
  int n = 0;
  for (int v = 0; v < 4; ++v)
    if (v != a && v != b) rest[n++] = v;
  return Perm(a, b, rest[0], rest[1]);
}

}  // namespace pachner
