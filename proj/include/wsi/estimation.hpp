#pragma once

#include <ostream>
#include <span>
#include <vector>

#include "wsi/weighted_string.hpp"

namespace wsi {

// pi[i-1] is the end of the longest property-respecting interval starting at i.
using PropertyArray = std::vector<Pos>;

class EstimationFamily {
public:
    EstimationFamily(Threshold t, Pos n, std::vector<Text> strings,
                     std::vector<PropertyArray> properties);

    const Threshold& threshold() const { return threshold_; }
    Pos length() const { return n_; }
    std::size_t size() const { return strings_.size(); }
    // 0-based slot index.
    const Text& string(std::size_t j) const { return strings_.at(j); }
    const PropertyArray& property(std::size_t j) const { return properties_.at(j); }

    // Start of the longest property-respecting factor of S_j ending at e
    // (e + 1 when S_j[e..e] is not covered).
    Pos context_start(std::size_t j, Pos e) const;

private:
    Threshold threshold_;
    Pos n_;
    std::vector<Text> strings_;
    std::vector<PropertyArray> properties_;
};

EstimationFamily build_estimation(const WeightedString& x, const Threshold& t);

std::vector<Pos> occ_with_property(std::span<const Letter> s, const PropertyArray& pi,
                                   std::span<const Letter> pattern);

// Throws std::out_of_range unless 1 <= i <= n - |P| + 1.
std::size_t count(const EstimationFamily& f, std::span<const Letter> pattern, Pos i);

// One line per string: S_j, a tab, then the pi_j values.
void dump_estimation(std::ostream& out, const EstimationFamily& f, const Alphabet& alphabet);

}  // namespace wsi
