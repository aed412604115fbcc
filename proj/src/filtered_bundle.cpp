#include "parabund/filtered_bundle.hpp"

#include "parabund/errors.hpp"

#include <algorithm>

namespace parabund {

namespace {

Weight canonical(const Weight& c) { return c - Weight(ceil_q(c)); }

} // namespace

FilteredBundle FilteredBundle::from_weights(const std::vector<Weight>& raw) {
    if (raw.empty()) {
        throw CalculusError("rank zero");
    }
    std::vector<Weight> w;
    w.reserve(raw.size());
    for (const auto& c : raw) w.push_back(canonical(c));
    return FilteredBundle(std::move(w));
}

bool operator==(const FilteredBundle& lhs, const FilteredBundle& rhs) {
    return sorted(lhs.weights_) == sorted(rhs.weights_);
}

std::vector<Weight> par(const FilteredBundle& fb, const Weight& a) {
    std::vector<Weight> out;
    out.reserve(fb.rank());
    for (const auto& w : fb.weights()) out.push_back(reduce_to_window(w, a).reduced);
    return out;
}

Weight gamma(const FilteredBundle& fb, const Weight& a) { return sum(par(fb, a)); }

std::vector<BigInt> frame_exponents(const FilteredBundle& fb, const Weight& a) {
    std::vector<BigInt> out;
    out.reserve(fb.rank());
    for (const auto& w : fb.weights()) out.push_back(ceil_q(w - a));
    return out;
}

std::vector<Jump> jump_set(const FilteredBundle& fb, const Weight& lo, const Weight& hi) {
    if (!(lo < hi)) {
        throw CalculusError("jump_set needs lo < hi");
    }
    std::vector<Weight> points;
    for (const auto& w : fb.weights()) {
        // Smallest translate above lo is w + ceil(lo - w) or one more when it lands on lo.
        Weight p = w + Weight(ceil_q(lo - w));
        if (p == lo) p += Weight(1);
        for (; p <= hi; p += Weight(1)) points.push_back(p);
    }
    std::sort(points.begin(), points.end());
    std::vector<Jump> out;
    for (const auto& p : points) {
        if (!out.empty() && out.back().weight == p) {
            ++out.back().multiplicity;
        } else {
            out.push_back({p, 1});
        }
    }
    return out;
}

Determinant det(const FilteredBundle& fb) {
    Weight index = sum(fb.weights());
    return {FilteredBundle::from_weights({index}), index};
}

FilteredBundle dual(const FilteredBundle& fb) {
    std::vector<Weight> neg;
    neg.reserve(fb.rank());
    for (const auto& w : fb.weights()) neg.push_back(-w);
    return FilteredBundle::from_weights(neg);
}

DualEpsilon dual_epsilon(const FilteredBundle& fb, const Weight& a) {
    const FilteredBundle d = dual(fb);
    const Weight x = Weight(1) - a;
    // Distance from x to u + Z is min(frac, 1 - frac); zero distances are skipped.
    Weight gap(1);
    for (const auto& u : d.weights()) {
        const Weight t = x - u;
        const Weight frac = t - Weight(floor_q(t));
        if (frac == Weight(0)) continue;
        gap = std::min({gap, frac, Weight(1) - frac});
    }
    Weight eps = gap / Weight(2);
    return {eps, par(d, x - eps)};
}

FilteredBundle tensor(const FilteredBundle& fb1, const FilteredBundle& fb2) {
    std::vector<Weight> w;
    w.reserve(fb1.rank() * fb2.rank());
    for (const auto& b : fb1.weights()) {
        for (const auto& c : fb2.weights()) w.push_back(b + c);
    }
    return FilteredBundle::from_weights(w);
}

FilteredBundle hom(const FilteredBundle& fb1, const FilteredBundle& fb2) { return tensor(dual(fb1), fb2); }

std::vector<std::vector<BigInt>> hom_exponents(const FilteredBundle& fb1, const FilteredBundle& fb2, const Weight& a) {
    std::vector<std::vector<BigInt>> m(fb1.rank());
    for (std::size_t i = 0; i < fb1.rank(); ++i) {
        m[i].reserve(fb2.rank());
        for (const auto& c : fb2.weights()) m[i].push_back(floor_q(fb1.weights()[i] + a - c));
    }
    return m;
}

FilteredBundle cyclic_pullback(const FilteredBundle& fb, long long m) {
    if (m < 1) {
        throw CalculusError("cyclic cover degree must be positive, got " + std::to_string(m));
    }
    std::vector<Weight> w;
    w.reserve(fb.rank());
    for (const auto& b : fb.weights()) w.push_back(Weight(m) * b);
    return FilteredBundle::from_weights(w);
}

std::optional<Weight> section_degree(const FilteredBundle& fb, const SectionCoordinates& s) {
    if (s.size() != fb.rank()) {
        throw CalculusError("section has " + std::to_string(s.size()) + " coordinates, bundle rank is " +
                            std::to_string(fb.rank()));
    }
    std::optional<Weight> best;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!s[i]) continue;
        Weight d = fb.weights()[i] - Weight(*s[i]);
        if (!best || *best < d) best = std::move(d);
    }
    return best;
}

bool is_compatible_frame(const FilteredBundle& fb, const Weight& a, const std::vector<Weight>& d) {
    if (d.size() != fb.rank()) return false;
    if (sum(d) != gamma(fb, a)) return false;
    if (!std::all_of(d.begin(), d.end(), [&](const Weight& x) { return in_window(x, a); })) return false;
    return sorted(d) == sorted(par(fb, a));
}

} // namespace parabund
