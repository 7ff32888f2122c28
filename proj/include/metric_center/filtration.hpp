#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "metric_center/exact_line.hpp"
#include "metric_center/grid_region.hpp"

namespace metric_center {

/// p(a) = d(a, ∂_Y A) on a subset of the line, with the values where the
/// topology of its sublevel sets can change.
struct LineFiltration {
    IntervalSet subset, ambient, boundary;
    std::vector<Rational> thresholds;  // sorted, distinct, starts at 0
};

LineFiltration filtration_line(const IntervalSet& A, const IntervalSet& Y);
/// P_α = {a ∈ A : p(a) ≤ α}.
IntervalSet sublevel(const LineFiltration& F, const ExactExt& alpha);
/// Number of pieces.
std::size_t betti0(const IntervalSet& S);

/// p over the occupied cells of a grid (distance to the inner boundary).
struct GridFiltration {
    GridRegion region;
    std::vector<double> p;           // per cell, +inf on unoccupied cells
    std::vector<double> thresholds;  // distinct values over occupied cells
};

GridFiltration filtration_grid(const GridRegion& G);
Mask sublevel(const GridFiltration& F, double alpha);
/// Face-adjacent components.
std::size_t betti0(const GridRegion& G, const Mask& S);
/// Bounded 8-connected components of the complement of a 2D mask; the
/// outside of the box counts as complement. Throws unless dim = 2.
std::size_t betti1_planar(const GridRegion& G, const Mask& S);

template <typename S>
struct FiltrationRow {
    S alpha;
    std::size_t betti0 = 0;
    std::optional<std::size_t> betti1;  // planar grids only
    ExtReal<S> measure;                 // length or area of P_α
};

template <typename S>
struct ConjectureReport {
    int dimension = 1;
    std::size_t betti_subset = 0;  // β_{n−1}(A)
    std::size_t betti_center = 0;  // β₀(Cent(A))
    std::size_t target = 0;        // their sum
    ExtReal<S> radius;
    std::vector<FiltrationRow<S>> rows;  // every scanned α, ascending
    std::vector<S> matches;              // α < rad(A) with β_{n−1}(P_α) = target
    std::optional<S> alpha_star;         // smallest positive match, else 0 if it matches
    bool center_excluded = true;         // Cent(A) ∩ P_α = ∅ for every checked α
    std::size_t exclusion_checked = 0;
    bool nested = true;
    std::vector<std::string> notes;

    std::string verdict() const { return matches.empty() ? "absent" : "exists"; }
};

/// Scans α at every threshold and midpoint between thresholds (plus one
/// value above the last when rad is infinite). Throws on zero radius.
ConjectureReport<Rational> conjecture_scan(const IntervalSet& A, const IntervalSet& Y);

/// Scans α at every distinct value of p; dim 1 uses β₀, dim 2 uses β₁.
/// Center exclusion is checked for α < rad − τ with the center band τ = 2h.
ConjectureReport<double> conjecture_scan(const GridRegion& G);

}  // namespace metric_center
