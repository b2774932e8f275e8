#pragma once

#include <map>
#include <string>
#include <vector>

namespace churnscope {

/// Token multiset: token text -> occurrence count.
using TokenBag = std::map<std::string, int>;

TokenBag make_bag(const std::vector<std::string>& tokens);

/// Multiset intersection size: sum over tokens of min(count_a, count_b).
long long bag_intersection(const TokenBag& a, const TokenBag& b);

/// Multiset difference a - b: per-token max(0, count_a - count_b), zero
/// entries dropped.
TokenBag bag_difference(const TokenBag& a, const TokenBag& b);

long long bag_size(const TokenBag& b);

/// Dice coefficient over token multisets: 2*|A ∩ B| / (|A| + |B|).
/// Two empty bags are identical, so that pair scores 1.0.
double dice_coefficient(const TokenBag& a, const TokenBag& b);
double dice_coefficient(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// Fraction of `needle` tokens (with multiplicity) present in `haystack`:
/// |needle ∩ haystack| / |needle|. An empty needle is contained nowhere (0).
double containment(const TokenBag& needle, const TokenBag& haystack);
double containment(const std::vector<std::string>& needle,
                   const std::vector<std::string>& haystack);

}  // namespace churnscope
