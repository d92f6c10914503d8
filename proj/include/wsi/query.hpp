#pragma once

#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "wsi/index.hpp"

namespace wsi {

enum class QueryMode { grid, verify, array };

// Pattern shorter than ell, or a grid query against an index built without one.
class QueryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class VerifySource { automatic, retained_x, records };

struct Verdict {
    bool valid = false;
    double log_prob = kNegInf;
    // False when the records rule the candidate out without a probability.
    bool exact = true;
};

struct Candidate {
    Pos start;
    Verdict verdict;
};

struct QueryStats {
    std::size_t candidates = 0;  // leaves or grid points hit
    std::size_t points = 0;      // grid points reported (grid mode)
    std::size_t verified = 0;    // distinct starts checked
    std::size_t rejected = 0;    // verified starts that failed
    bool unknown_letter = false;
};

struct QueryResult {
    std::vector<Pos> positions;  // ascending, distinct
    QueryStats stats;
    std::vector<Candidate> examined;  // ascending by start
};

// Decides one candidate start. automatic uses X when the index kept it.
Verdict verify_candidate(const Index& index, std::span<const Letter> pattern, Pos start,
                         VerifySource source = VerifySource::automatic);

QueryResult query_grid(const Index& index, std::span<const Letter> pattern,
                       VerifySource source = VerifySource::automatic);
QueryResult query_verify(const Index& index, std::span<const Letter> pattern,
                         VerifySource source = VerifySource::automatic);
QueryResult query_array(const Index& index, std::span<const Letter> pattern,
                        VerifySource source = VerifySource::automatic);
QueryResult query(const Index& index, std::span<const Letter> pattern, QueryMode mode,
                  VerifySource source = VerifySource::automatic);
// Encodes with the index alphabet first; unknown symbols give an empty result
// with stats.unknown_letter set.
QueryResult query(const Index& index, std::string_view pattern, QueryMode mode,
                  VerifySource source = VerifySource::automatic);

}  // namespace wsi
