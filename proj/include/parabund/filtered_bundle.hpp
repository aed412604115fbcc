// include/parabund/filtered_bundle.hpp - isomorphism-class calculus of filtered bundles on (disk, 0).
//
// A filtered bundle is stored as its canonical weights w_i in (-1, 0], one per
// canonical generator v_i, so that the lattice at index a is generated by
// z^{ceil(w_i - a)} v_i. Generator order is kept (sections are addressed by
// it); equality and hashing treat the weights as a multiset.

#pragma once

#include "parabund/weights.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace parabund {

class FilteredBundle {
public:
    /// Canonicalizes each raw weight c to c - ceil(c). Throws CalculusError on an empty list.
    static FilteredBundle from_weights(const std::vector<Weight>& raw);

    std::size_t rank() const { return weights_.size(); }
    const std::vector<Weight>& weights() const { return weights_; }

    /// Multiset equality.
    friend bool operator==(const FilteredBundle& lhs, const FilteredBundle& rhs);

private:
    explicit FilteredBundle(std::vector<Weight> w) : weights_(std::move(w)) {}
    std::vector<Weight> weights_;
};

/// Jumping weights of the lattice at index a: { w_i - ceil(w_i - a) }, all in (a-1, a].
std::vector<Weight> par(const FilteredBundle& fb, const Weight& a);

/// Exact gamma invariant of the lattice at index a (sum of par).
Weight gamma(const FilteredBundle& fb, const Weight& a);

/// m_i = ceil(w_i - a); z^{m_i} v_i is a frame of the lattice at a.
std::vector<BigInt> frame_exponents(const FilteredBundle& fb, const Weight& a);

struct Jump {
    Weight weight;
    std::size_t multiplicity = 0;
    friend bool operator==(const Jump&, const Jump&) = default;
};

/// Points of the union of w_i + Z inside (lo, hi], ascending, grouped.
std::vector<Jump> jump_set(const FilteredBundle& fb, const Weight& lo, const Weight& hi);

struct Determinant {
    FilteredBundle bundle;  // rank one
    Weight lattice_index;   // sum of canonical weights, before renormalizing
};

Determinant det(const FilteredBundle& fb);

FilteredBundle dual(const FilteredBundle& fb);

struct DualEpsilon {
    Weight epsilon;
    std::vector<Weight> dual_par;  // par(dual(fb), 1 - a - epsilon), generator order
};

/// Concrete witness for (P_a E)^dual = P_{1-a-eps}(E^dual): epsilon is half the
/// smallest positive distance from 1 - a to the jump set of the dual.
DualEpsilon dual_epsilon(const FilteredBundle& fb, const Weight& a);

/// Pairs are ordered row-major (i over fb1, j over fb2), matching Kronecker products.
FilteredBundle tensor(const FilteredBundle& fb1, const FilteredBundle& fb2);

FilteredBundle hom(const FilteredBundle& fb1, const FilteredBundle& fb2);

/// m_{ij,a} = floor(b_i + a - c_j): P_a Hom is spanned by v_i^dual (x) z^{-m_{ij,a}} w_j.
std::vector<std::vector<BigInt>> hom_exponents(const FilteredBundle& fb1, const FilteredBundle& fb2, const Weight& a);

/// Pullback along w -> w^m. Throws CalculusError for m < 1.
FilteredBundle cyclic_pullback(const FilteredBundle& fb, long long m);

/// Order of vanishing of each coordinate of a section in the canonical frame;
/// nullopt marks a zero coordinate.
using SectionCoordinates = std::vector<std::optional<BigInt>>;

/// max_i (w_i - k_i) over nonzero coordinates; nullopt stands for -infinity (zero section).
std::optional<Weight> section_degree(const FilteredBundle& fb, const SectionCoordinates& s);

/// Whether d can be the degree list of a compatible frame of the lattice at a.
bool is_compatible_frame(const FilteredBundle& fb, const Weight& a, const std::vector<Weight>& d);

} // namespace parabund
