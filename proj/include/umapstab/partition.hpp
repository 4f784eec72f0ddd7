#pragma once

#include <algorithm>
#include <vector>

#include "umapstab/errors.hpp"

namespace umapstab {

/// Union-find whose canonical representative is always the least element of
/// its set, so partitions derived from it are deterministic under the total
/// order of the ground set.
class DisjointSets {
public:
    explicit DisjointSets(int n) : parent_(n) {
        for (int i = 0; i < n; ++i) parent_[i] = i;
    }

    int find(int x) const {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    /// Returns true if the two sets were distinct and got merged.  The
    /// surviving root is the smaller of the two roots.
    bool unite(int a, int b) {
        int ra = find(a), rb = find(b);
        if (ra == rb) return false;
        if (rb < ra) std::swap(ra, rb);
        parent_[rb] = ra;
        return true;
    }

    int size() const { return static_cast<int>(parent_.size()); }

private:
    mutable std::vector<int> parent_;
};

/// A partition of {0, ..., n-1} in canonical form: every block is sorted
/// ascending and blocks are ordered by their least member, which doubles as
/// the block representative.
struct Partition {
    std::vector<std::vector<int>> blocks;
    std::vector<int> block_of;  // element -> index into blocks

    int ground_size() const { return static_cast<int>(block_of.size()); }

    int representative(int element) const { return blocks[block_of[element]][0]; }

    bool same_block(int a, int b) const { return block_of[a] == block_of[b]; }

    static Partition discrete(int n) {
        DisjointSets ds(n);
        return from_disjoint_sets(ds);
    }

    static Partition from_disjoint_sets(const DisjointSets& ds) {
        const int n = ds.size();
        Partition p;
        p.block_of.assign(n, -1);
        std::vector<int> root_block(n, -1);
        for (int i = 0; i < n; ++i) {
            int r = ds.find(i);
            if (root_block[r] < 0) {
                root_block[r] = static_cast<int>(p.blocks.size());
                p.blocks.emplace_back();
            }
            p.block_of[i] = root_block[r];
            p.blocks[root_block[r]].push_back(i);
        }
        // roots are visited in ascending order, so blocks are already ordered
        // by least member and each block is ascending
        return p;
    }
};

inline bool operator==(const Partition& a, const Partition& b) { return a.blocks == b.blocks; }
inline bool operator!=(const Partition& a, const Partition& b) { return !(a == b); }

/// Every block of `fine` is contained in a single block of `coarse`.
inline bool refines(const Partition& fine, const Partition& coarse) {
    if (fine.ground_size() != coarse.ground_size()) return false;
    for (const auto& block : fine.blocks) {
        for (std::size_t i = 1; i < block.size(); ++i)
            if (!coarse.same_block(block[0], block[i])) return false;
    }
    return true;
}

/// Restriction of a partition to a subset of the ground set, reindexed to
/// positions within `subset` (which must be sorted ascending).
inline Partition restrict_partition(const Partition& p, const std::vector<int>& subset) {
    const int m = static_cast<int>(subset.size());
    DisjointSets ds(m);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (p.same_block(subset[i], subset[j])) ds.unite(i, j);
    return Partition::from_disjoint_sets(ds);
}

}  // namespace umapstab
