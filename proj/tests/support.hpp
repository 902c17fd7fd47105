#pragma once

// Shared helpers for randomized policy tests: tree generation bounded by
// depth/leaf budgets, and direct boolean evaluation as a second route next
// to the LSSS satisfiability check.

#include "xdpre/policy.hpp"
#include "xdpre/rng.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

namespace testsupport {

inline std::vector<std::string> attribute_pool() {
    return {"Doctor", "Professor", "Researcher", "Student",
            "Engineer", "Manager", "Builder", "Inspector"};
}

inline std::size_t pick(xdpre::Rng& rng, std::size_t lo, std::size_t hi) {
    return lo + rng() % (hi - lo + 1);
}

// Random monotone tree over the pool: depth <= 3, at most max_leaves leaves.
// Gates take 2..4 children with a random threshold; every child is owed at
// least one leaf of the shared budget, so the cap holds exactly.
inline xdpre::policy::PolicyNode random_tree(xdpre::Rng& rng, std::size_t depth,
                                             std::size_t& leaf_budget) {
    const auto pool = attribute_pool();
    if (depth == 0 || leaf_budget <= 1 || pick(rng, 0, 3) == 0) {
        if (leaf_budget > 0) leaf_budget -= 1;
        return xdpre::policy::leaf(pool[rng() % pool.size()]);
    }
    std::size_t width = std::min(pick(rng, 2, 4), leaf_budget);
    std::vector<xdpre::policy::PolicyNode> children;
    for (std::size_t i = 0; i < width; ++i) {
        std::size_t reserved = width - 1 - i;
        std::size_t sub = leaf_budget > reserved ? leaf_budget - reserved : 1;
        std::size_t before = sub;
        children.push_back(random_tree(rng, depth - 1, sub));
        std::size_t used = before - sub;
        leaf_budget = leaf_budget > used ? leaf_budget - used : 0;
    }
    auto t = std::uint32_t(pick(rng, 1, children.size()));
    return xdpre::policy::gate(t, std::move(children));
}

inline xdpre::policy::PolicyNode random_policy(xdpre::Rng& rng, std::size_t max_leaves = 8) {
    std::size_t budget = std::max<std::size_t>(2, pick(rng, 2, max_leaves));
    std::size_t width = std::min(pick(rng, 2, 3), budget);
    std::vector<xdpre::policy::PolicyNode> children;
    for (std::size_t i = 0; i < width; ++i) {
        std::size_t reserved = width - 1 - i;
        std::size_t sub = budget > reserved ? budget - reserved : 1;
        std::size_t before = sub;
        children.push_back(random_tree(rng, 2, sub));
        std::size_t used = before - sub;
        budget = budget > used ? budget - used : 0;
    }
    auto t = std::uint32_t(pick(rng, 1, children.size()));
    return xdpre::policy::gate(t, std::move(children));
}

// Direct recursive evaluation of the tree, independent of the matrix route.
inline bool tree_satisfied(const xdpre::policy::PolicyNode& node,
                           const std::set<std::string>& attrs) {
    if (node.is_leaf()) return attrs.count(node.name) != 0;
    std::uint32_t hits = 0;
    for (const auto& child : node.children) hits += tree_satisfied(child, attrs);
    return hits >= node.threshold;
}

inline std::set<std::string> random_subset(xdpre::Rng& rng) {
    std::set<std::string> out;
    for (const auto& a : attribute_pool())
        if (rng() % 2) out.insert(a);
    return out;
}

inline std::set<std::string> leaf_names(const xdpre::policy::PolicyNode& node) {
    if (node.is_leaf()) return {node.name};
    std::set<std::string> out;
    for (const auto& child : node.children) {
        auto sub = leaf_names(child);
        out.insert(sub.begin(), sub.end());
    }
    return out;
}

}  // namespace testsupport
