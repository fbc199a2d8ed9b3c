#pragma once

#include <span>
#include <string>
#include <vector>

namespace incl {

/// A finite group given by its multiplication table on {0, ..., order-1}.
class FiniteGroup {
 public:
  /// Validates closure, associativity, unit and inverses; throws InvalidArgument.
  static FiniteGroup from_table(std::vector<std::vector<int>> table, std::vector<std::string> labels = {});
  static FiniteGroup cyclic(int n);
  /// Permutations of {0, ..., n-1} in lexicographic order, (gh)(x) = g(h(x)).
  static FiniteGroup symmetric(int n);

  int order() const { return static_cast<int>(table_.size()); }
  int multiply(int g, int h) const { return table_[g][h]; }
  int unit() const { return unit_; }
  int inverse(int g) const { return inverse_[g]; }
  const std::vector<std::vector<int>>& table() const { return table_; }
  const std::vector<std::string>& labels() const { return labels_; }
  /// Index of the element with the given label, -1 when absent.
  int find(const std::string& label) const;

  /// True when `elements` (without repetition) is closed under products and contains the unit.
  bool is_subgroup(std::span<const int> elements) const;
  /// Right cosets Hx, each sorted, ordered by smallest member.
  std::vector<std::vector<int>> right_cosets(std::span<const int> subgroup) const;

 private:
  FiniteGroup(std::vector<std::vector<int>> table, std::vector<std::string> labels);

  std::vector<std::vector<int>> table_;
  std::vector<std::string> labels_;
  std::vector<int> inverse_;
  int unit_ = 0;
};

}  // namespace incl
