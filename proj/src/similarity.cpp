#include "churnscope/similarity.hpp"

namespace churnscope {

TokenBag make_bag(const std::vector<std::string>& tokens) {
    TokenBag bag;
    for (const auto& t : tokens) ++bag[t];
    return bag;
}

long long bag_intersection(const TokenBag& a, const TokenBag& b) {
    // Walk both sorted maps in lockstep; iterate the smaller via find would
    // also work, but the merge keeps it linear in both.
    long long total = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (ia->first < ib->first) ++ia;
        else if (ib->first < ia->first) ++ib;
        else {
            total += std::min(ia->second, ib->second);
            ++ia;
            ++ib;
        }
    }
    return total;
}

TokenBag bag_difference(const TokenBag& a, const TokenBag& b) {
    TokenBag out;
    for (const auto& [tok, count] : a) {
        auto it = b.find(tok);
        int remaining = count - (it == b.end() ? 0 : it->second);
        if (remaining > 0) out[tok] = remaining;
    }
    return out;
}

long long bag_size(const TokenBag& b) {
    long long n = 0;
    for (const auto& [_, c] : b) n += c;
    return n;
}

double dice_coefficient(const TokenBag& a, const TokenBag& b) {
    long long denom = bag_size(a) + bag_size(b);
    if (denom == 0) return 1.0;  // both empty: identical
    return 2.0 * static_cast<double>(bag_intersection(a, b)) / static_cast<double>(denom);
}

double dice_coefficient(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    return dice_coefficient(make_bag(a), make_bag(b));
}

double containment(const TokenBag& needle, const TokenBag& haystack) {
    long long n = bag_size(needle);
    if (n == 0) return 0.0;
    return static_cast<double>(bag_intersection(needle, haystack)) / static_cast<double>(n);
}

double containment(const std::vector<std::string>& needle,
                   const std::vector<std::string>& haystack) {
    return containment(make_bag(needle), make_bag(haystack));
}

}  // namespace churnscope
