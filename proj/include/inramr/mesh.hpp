#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "inramr/inr.hpp"
#include "inramr/matrix.hpp"
#include "inramr/rng.hpp"

namespace inramr {

/// Elements live on dyadic coordinates; exactly representable up to this depth.
inline constexpr int kMaxMeshLevel = 40;

/// Per-axis vertex index at kMaxMeshLevel resolution. Exact integer identity
/// stands in for exact coordinate equality. Unused axes stay zero.
using VertexKey = std::array<std::uint64_t, 4>;

struct VertexKeyHash {
    std::size_t operator()(const VertexKey& k) const {
        std::uint64_t h = 0x6a09e667f3bcc909ull;
        for (std::uint64_t v : k) h = rng::fold_key(h, v);
        return static_cast<std::size_t>(h);
    }
};

using VertexValues = std::unordered_map<VertexKey, double, VertexKeyHash>;

struct Element {
    std::array<std::uint64_t, 4> coord{};  // cell index per axis at `level`
    int level = 0;
    int first_child = -1;  // pool index of child 0; -1 marks a leaf
    bool done_refining = false;

    bool is_leaf() const { return first_child < 0; }
};

/// Adaptive 2^d-tree over an axis-aligned box. Leaves tile the domain exactly.
/// Mutation (refine) is single-threaded; all read-only queries are safe
/// concurrently between mutation phases.
class MeshTree {
public:
    explicit MeshTree(DomainBox box);

    int dim() const { return box_.dim(); }
    int n_children() const { return 1 << dim(); }
    const DomainBox& box() const { return box_; }
    long leaf_count() const { return leaf_count_; }
    std::size_t node_count() const { return nodes_.size(); }
    const Element& node(int idx) const { return nodes_[idx]; }

    /// Leaves in pre-order (children visited in child-index order).
    std::vector<int> leaves() const;

    /// Split a leaf into 2^d congruent children, one level deeper.
    void refine(int idx);

    void mark_done(int idx);

    void element_box(int idx, double* lo, double* hi) const;
    /// Physical coordinate of dyadic index v (at kMaxMeshLevel) on an axis.
    /// Exact at both domain endpoints.
    double axis_coord(int axis, std::uint64_t v) const;
    VertexKey corner_key(int idx, unsigned corner) const;
    void point_coords(const VertexKey& key, double* out) const;

    /// Stable stream key for per-element RNG; a function of (level, coords).
    std::uint64_t element_rng_key(int idx) const;

    /// Leaf whose closed box contains x; face ties resolve to the leaf with
    /// lexicographically smallest lo. Throws ContractError outside the domain.
    int locate(const double* x) const;

private:
    DomainBox box_;
    std::vector<Element> nodes_;
    long leaf_count_ = 1;
};

struct VertexSet {
    std::vector<VertexKey> keys;               // lexicographic
    std::vector<int> leaf_ids;                 // pre-order leaves
    std::vector<std::array<int, 16>> corners;  // corners[l][c] indexes keys

    long dofs() const { return static_cast<long>(keys.size()); }
};

/// All distinct leaf corners, deduplicated by exact dyadic identity.
VertexSet unique_vertices(const MeshTree& mesh);

/// Multilinear interpolation of vertex data at x.
double interpolate(const MeshTree& mesh, const VertexValues& values, const double* x);

/// n uniform draws inside a leaf from the counter-based stream keyed by
/// (seed, element, purpose).
Matrix sample_uniform(const MeshTree& mesh, int leaf, int n, std::uint64_t seed, rng::Purpose purpose);

}  // namespace inramr
