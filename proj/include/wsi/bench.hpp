#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsi/generate.hpp"
#include "wsi/query.hpp"

namespace wsi {

// Spec files are INI-like:
//
//   [dataset rand4]
//   kind = uniform        # or snp-like, rssi-like; or file = path.wstr
//   n = 10000
//   sigma = 4
//   delta = 100
//   seed = 1
//
//   [grid trend-ell]
//   dataset = rand4
//   z = 16
//   ell = 16, 32, 64, 128
//   path = se, naive
//   queries = 100
//   seed = 3
//
// Every grid expands to the product of its z, ell and path lists. Seeds are
// required in both kinds of section.
struct BenchDataset {
    std::string name;
    std::string file;  // empty: generated from gen
    GenConfig gen;
};

struct BenchGrid {
    std::string name;
    std::string dataset;
    std::vector<double> z;
    std::vector<Pos> ell;
    std::vector<BuildPath> paths{BuildPath::space_efficient};
    Pos k = 0;
    KmerOrder order = KmerOrder::fingerprint;
    std::uint64_t seed = 0;
    std::size_t queries = 100;
    QueryMode mode = QueryMode::verify;
    bool retain_x = false;
    bool with_grid = true;
};

struct BenchSpec {
    std::vector<BenchDataset> datasets;
    std::vector<BenchGrid> grids;
};

class BenchSpecError : public std::runtime_error {
public:
    BenchSpecError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

BenchSpec parse_bench_spec(std::istream& in);

struct BenchRow {
    std::string grid;
    std::string dataset;
    Pos n = 0;
    std::size_t sigma = 0;
    double z = 0;
    Pos ell = 0;
    Pos k = 0;
    std::string path;
    std::string status;  // ok, fallback, or failed: reason
    std::size_t index_bytes = 0;
    std::size_t tree_nodes = 0;
    std::size_t leaves = 0;
    std::size_t grid_points = 0;
    std::size_t peak_live_path_nodes = 0;
    std::size_t family_letters = 0;
    double build_ms = 0;
    std::size_t queries = 0;
    double query_mean_us = 0;
    double query_median_us = 0;
    double candidates_per_query = 0;
};

// Runs every cell in spec order. deterministic zeroes the timing columns so
// repeated runs give identical CSV.
std::vector<BenchRow> run_bench(const BenchSpec& spec, bool deterministic = false);

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace wsi
