#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "wsi/bench.hpp"
#include "wsi/binary_io.hpp"
#include "wsi/generate.hpp"
#include "wsi/query.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kDataError = 2;
constexpr int kInternal = 3;
constexpr int kFallback = 4;

// Input problems the user can fix, as opposed to library bugs.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::ifstream open_in(const std::string& path, bool binary = false) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) {
        throw DataError("cannot open " + path);
    }
    return in;
}

std::ofstream open_out(const std::string& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) {
        throw DataError("cannot write " + path);
    }
    return out;
}

struct BuildArgs {
    std::string input;
    std::string output;
    double z = 0;
    wsi::Pos ell = 0;
    wsi::Pos k = 0;
    wsi::KmerOrder order = wsi::KmerOrder::fingerprint;
    std::uint64_t seed = wsi::kDefaultSeed;
    wsi::BuildPath path = wsi::BuildPath::space_efficient;
    bool retain_x = false;
    bool no_grid = false;
};

int cmd_build(const BuildArgs& a) {
    auto in = open_in(a.input);
    const wsi::WeightedString x = wsi::parse_weighted_string(in);
    wsi::BuildConfig c;
    c.z = a.z;
    c.ell = a.ell;
    c.k = a.k;
    c.order = a.order;
    c.seed = a.seed;
    c.path = a.path;
    c.retain_x = a.retain_x;
    c.with_grid = !a.no_grid;
    wsi::BuildReport report;
    const wsi::Index idx = wsi::Index::build(x, c, &report);
    auto out = open_out(a.output, true);
    idx.save(out);
    if (!out.flush()) {
        throw DataError("failed writing " + a.output);
    }
    std::cerr << "n=" << x.length() << " k=" << idx.scheme().k()
              << " leaves=" << idx.tree(wsi::Direction::forward).leaf_count() << "+"
              << idx.tree(wsi::Direction::backward).leaf_count() << " points=" << idx.grid().size()
              << "\n";
    if (report.fallback) {
        std::cerr << "warning: floor(log2 z) = " << idx.threshold().max_mismatches()
                  << " exceeds ell = " << c.ell
                  << "; the sampling guarantee does not hold for this configuration\n";
        return kFallback;
    }
    return kOk;
}

struct QueryArgs {
    std::string index;
    std::string patterns;
    wsi::QueryMode mode = wsi::QueryMode::verify;
    bool stats = false;
    wsi::Pos ell = 0;
    wsi::Pos k = 0;
    std::string order;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

wsi::Index load_index(const std::string& path) {
    auto in = open_in(path, true);
    return wsi::Index::load(in);
}

int cmd_query(const QueryArgs& a) {
    const wsi::Index idx = load_index(a.index);
    if (a.ell || a.k || !a.order.empty() || a.seed_given) {
        const wsi::MinimizerScheme& s = idx.scheme();
        wsi::KmerOrder order = s.order();
        if (!a.order.empty()) {
            order = a.order == "fingerprint" ? wsi::KmerOrder::fingerprint
                                             : wsi::KmerOrder::lexicographic;
        }
        const wsi::MinimizerScheme expected(a.ell ? a.ell : s.ell(), a.k ? a.k : s.k(), order,
                                            a.seed_given ? a.seed : s.seed(), s.sigma());
        idx.require_scheme(expected);
    }
    auto in = open_in(a.patterns);
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        ++number;
        std::cout << number << '\t';
        try {
            const wsi::QueryResult r = wsi::query(idx, std::string_view(line), a.mode);
            std::cout << r.positions.size() << '\t';
            for (std::size_t t = 0; t < r.positions.size(); ++t) {
                std::cout << (t ? " " : "") << r.positions[t];
            }
            if (r.stats.unknown_letter) {
                std::cout << "\twarning=unknown-letter";
            }
            if (a.stats) {
                std::cout << "\tcandidates=" << r.stats.candidates << " points=" << r.stats.points
                          << " verified=" << r.stats.verified << " rejected=" << r.stats.rejected;
            }
        } catch (const wsi::QueryError& e) {
            std::cout << "error\t" << e.what();
        }
        std::cout << '\n';
    }
    return kOk;
}

int cmd_info(const std::string& path) {
    const wsi::Index idx = load_index(path);
    const auto& s = idx.scheme();
    std::cout << "n\t" << idx.length() << "\nsigma\t" << idx.alphabet().size() << "\nz\t"
              << idx.threshold().z() << "\nell\t" << s.ell() << "\nk\t" << s.k() << "\norder\t"
              << (s.order() == wsi::KmerOrder::fingerprint ? "fingerprint" : "lexicographic")
              << "\nseed\t" << s.seed() << "\nretain_x\t" << idx.has_x() << "\ngrid\t"
              << idx.has_grid() << "\nfallback\t" << idx.fallback() << "\nforward_leaves\t"
              << idx.tree(wsi::Direction::forward).leaf_count() << "\nbackward_leaves\t"
              << idx.tree(wsi::Direction::backward).leaf_count() << "\nanchors\t"
              << idx.anchor_count() << "\ngrid_points\t" << idx.grid().size() << "\n";
    return kOk;
}

int cmd_bench(const std::string& spec_path, const std::string& output, bool deterministic) {
    auto in = open_in(spec_path);
    const wsi::BenchSpec spec = wsi::parse_bench_spec(in);
    const auto rows = wsi::run_bench(spec, deterministic);
    if (output.empty() || output == "-") {
        wsi::write_bench_csv(std::cout, rows);
    } else {
        auto out = open_out(output);
        wsi::write_bench_csv(out, rows);
    }
    return kOk;
}

int cmd_gen(const wsi::GenConfig& c, const std::string& output) {
    const wsi::WeightedString x = wsi::generate(c);
    if (output.empty() || output == "-") {
        wsi::write_weighted_string(std::cout, x);
    } else {
        auto out = open_out(output);
        wsi::write_weighted_string(out, x);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Index a weighted string and report the valid occurrences of patterns."};
    app.require_subcommand(1);

    const std::map<std::string, wsi::KmerOrder> orders{
        {"fingerprint", wsi::KmerOrder::fingerprint},
        {"lexicographic", wsi::KmerOrder::lexicographic}};
    const std::map<std::string, wsi::BuildPath> paths{{"se", wsi::BuildPath::space_efficient},
                                                       {"naive", wsi::BuildPath::naive}};
    const std::map<std::string, wsi::QueryMode> modes{{"grid", wsi::QueryMode::grid},
                                                       {"verify", wsi::QueryMode::verify},
                                                       {"array", wsi::QueryMode::array}};

    BuildArgs b;
    auto* build = app.add_subcommand("build", "Build an index file from a .wstr input");
    build->add_option("--z", b.z, "Threshold parameter; occurrences need probability >= 1/z")
        ->required()
        ->check(CLI::Range(1.0, 1e9));
    build->add_option("--ell", b.ell, "Minimum pattern length")->required()->check(CLI::PositiveNumber);
    build->add_option("--k", b.k, "k-mer length (0 picks a default)")->check(CLI::NonNegativeNumber);
    build->add_option("--order", b.order, "k-mer order")
        ->transform(CLI::CheckedTransformer(orders, CLI::ignore_case));
    build->add_option("--seed", b.seed, "Fingerprint seed");
    build->add_option("--path", b.path, "Construction path")
        ->transform(CLI::CheckedTransformer(paths, CLI::ignore_case));
    build->add_flag("--retain-x", b.retain_x, "Store the probabilities for direct verification");
    build->add_flag("--no-grid", b.no_grid, "Skip the grid (grid queries become unavailable)");
    build->add_option("-o,--output", b.output, "Index file")->required();
    build->add_option("input", b.input, "Input .wstr file")->required();

    QueryArgs q;
    auto* qry = app.add_subcommand("query", "Answer one query per line of a pattern file");
    qry->add_option("--mode", q.mode, "Query path")
        ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
    qry->add_flag("--stats", q.stats, "Append candidate statistics");
    qry->add_option("--ell", q.ell, "Expected ell; load fails if the index differs");
    qry->add_option("--k", q.k, "Expected k");
    qry->add_option("--order", q.order, "Expected k-mer order")
        ->check(CLI::IsMember({"fingerprint", "lexicographic"}));
    auto* seed_opt = qry->add_option("--seed", q.seed, "Expected seed");
    qry->add_option("index", q.index, "Index file")->required();
    qry->add_option("patterns", q.patterns, "Pattern file")->required();

    std::string info_path;
    auto* info = app.add_subcommand("info", "Print the header of an index file");
    info->add_option("index", info_path, "Index file")->required();

    std::string spec_path;
    std::string bench_out;
    bool deterministic = false;
    auto* bench = app.add_subcommand("bench", "Run a benchmark spec and write CSV");
    bench->add_option("spec", spec_path, "Spec file")->required();
    bench->add_option("-o,--output", bench_out, "CSV file (default stdout)");
    bench->add_flag("--deterministic", deterministic, "Zero the timing columns");

    wsi::GenConfig g;
    std::string kind = "uniform";
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "Write a synthetic weighted string");
    gen->add_option("--kind", kind, "uniform, snp-like or rssi-like")
        ->check(CLI::IsMember({"uniform", "snp-like", "rssi-like"}));
    gen->add_option("--n", g.n, "Length")->required();
    gen->add_option("--sigma", g.sigma, "Alphabet size")->required();
    gen->add_option("--delta", g.delta, "Percentage of uncertain positions")->required();
    gen->add_option("--seed", g.seed, "Random seed")->required();
    gen->add_option("-o,--output", gen_out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*build) {
            return cmd_build(b);
        }
        if (*qry) {
            q.seed_given = seed_opt->count() > 0;
            return cmd_query(q);
        }
        if (*info) {
            return cmd_info(info_path);
        }
        if (*bench) {
            return cmd_bench(spec_path, bench_out, deterministic);
        }
        if (*gen) {
            g.kind = *wsi::parse_gen_kind(kind);
            return cmd_gen(g, gen_out);
        }
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const wsi::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const wsi::io::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const wsi::SchemeMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const wsi::BenchSpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kUsage;
}
