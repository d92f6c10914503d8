#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "wsi/weighted_string.hpp"

namespace wsi {

enum class GenKind { uniform, snp_like, rssi_like };

std::optional<GenKind> parse_gen_kind(std::string_view name);
std::string gen_kind_name(GenKind kind);

struct GenConfig {
    GenKind kind = GenKind::uniform;
    Pos n = 1000;
    std::size_t sigma = 4;
    // Percentage of uncertain positions; exactly round(n * delta / 100) of them.
    double delta = 10;
    std::uint64_t seed = 1;
};

// uniform: uncertain rows give every letter positive mass.
// snp_like: uncertain rows are biallelic with a dominant major letter.
// rssi_like: a slowly drifting level, uncertain rows spread over nearby levels.
// Throws std::invalid_argument on bad parameters.
WeightedString generate(const GenConfig& config);

}  // namespace wsi
