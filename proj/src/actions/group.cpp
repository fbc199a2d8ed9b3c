#include "actions/group.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "core/types.hpp"

namespace incl {

FiniteGroup::FiniteGroup(std::vector<std::vector<int>> table, std::vector<std::string> labels)
    : table_(std::move(table)), labels_(std::move(labels)) {}

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<int>> table, std::vector<std::string> labels) {
  const int n = static_cast<int>(table.size());
  if (n == 0) fail(ErrorKind::InvalidArgument, "group: empty multiplication table");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n) fail(ErrorKind::InvalidArgument, "group: table is not square");
    for (int x : row)
      if (x < 0 || x >= n) fail(ErrorKind::InvalidArgument, "group: table entry out of range");
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          fail(ErrorKind::InvalidArgument, "group: multiplication is not associative");

  int unit = -1;
  for (int e = 0; e < n && unit < 0; ++e) {
    bool ok = true;
    for (int g = 0; g < n && ok; ++g) ok = table[e][g] == g && table[g][e] == g;
    if (ok) unit = e;
  }
  if (unit < 0) fail(ErrorKind::InvalidArgument, "group: no unit element");

  std::vector<int> inverse(n, -1);
  for (int g = 0; g < n; ++g) {
    for (int h = 0; h < n; ++h) {
      if (table[g][h] == unit && table[h][g] == unit) {
        inverse[g] = h;
        break;
      }
    }
    if (inverse[g] < 0) fail(ErrorKind::InvalidArgument, "group: element without inverse");
  }

  if (labels.empty()) {
    for (int g = 0; g < n; ++g) labels.push_back(std::to_string(g));
  } else if (static_cast<int>(labels.size()) != n) {
    fail(ErrorKind::InvalidArgument, "group: one label per element required");
  }
  FiniteGroup out(std::move(table), std::move(labels));
  out.unit_ = unit;
  out.inverse_ = std::move(inverse);
  return out;
}

FiniteGroup FiniteGroup::cyclic(int n) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "group: cyclic order must be positive");
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) table[a][b] = (a + b) % n;
  return from_table(std::move(table));
}

FiniteGroup FiniteGroup::symmetric(int n) {
  if (n < 1 || n > 5) fail(ErrorKind::InvalidArgument, "group: symmetric degree must be in 1..5");
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));

  const int order = static_cast<int>(perms.size());
  auto index_of = [&](const std::vector<int>& q) {
    return static_cast<int>(std::lower_bound(perms.begin(), perms.end(), q) - perms.begin());
  };
  std::vector<std::vector<int>> table(order, std::vector<int>(order));
  std::vector<int> composed(n);
  for (int a = 0; a < order; ++a) {
    for (int b = 0; b < order; ++b) {
      for (int x = 0; x < n; ++x) composed[x] = perms[a][perms[b][x]];
      table[a][b] = index_of(composed);
    }
  }
  std::vector<std::string> labels;
  for (const auto& q : perms) {
    std::string s = "[";
    for (int x = 0; x < n; ++x) s += (x ? "," : "") + std::to_string(q[x]);
    labels.push_back(s + "]");
  }
  return from_table(std::move(table), std::move(labels));
}

int FiniteGroup::find(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  return it == labels_.end() ? -1 : static_cast<int>(it - labels_.begin());
}

bool FiniteGroup::is_subgroup(std::span<const int> elements) const {
  const std::set<int> s(elements.begin(), elements.end());
  if (s.size() != elements.size() || s.empty()) return false;
  for (int g : s)
    if (g < 0 || g >= order()) return false;
  if (!s.count(unit_)) return false;
  for (int a : s)
    for (int b : s)
      if (!s.count(table_[a][b])) return false;
  return true;
}

std::vector<std::vector<int>> FiniteGroup::right_cosets(std::span<const int> subgroup) const {
  if (!is_subgroup(subgroup)) fail(ErrorKind::InvalidArgument, "group: not a subgroup");
  std::vector<std::vector<int>> out;
  std::vector<bool> seen(order(), false);
  for (int x = 0; x < order(); ++x) {
    if (seen[x]) continue;
    std::vector<int> coset;
    for (int h : subgroup) coset.push_back(table_[h][x]);
    std::sort(coset.begin(), coset.end());
    for (int g : coset) seen[g] = true;
    out.push_back(std::move(coset));
  }
  return out;
}

}  // namespace incl
