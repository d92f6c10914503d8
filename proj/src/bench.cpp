#include "wsi/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace wsi {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream in(v);
    std::string item;
    while (std::getline(in, item, ',')) {
        out.push_back(trim(item));
    }
    return out;
}

template <class T>
T parse_number(const std::string& s, std::size_t line) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw BenchSpecError(line, "not a number: '" + s + "'");
    }
    return v;
}

bool parse_bool(const std::string& s, std::size_t line) {
    if (s == "true" || s == "1") {
        return true;
    }
    if (s == "false" || s == "0") {
        return false;
    }
    throw BenchSpecError(line, "not a boolean: '" + s + "'");
}

BuildPath parse_path(const std::string& s, std::size_t line) {
    if (s == "se") {
        return BuildPath::space_efficient;
    }
    if (s == "naive") {
        return BuildPath::naive;
    }
    throw BenchSpecError(line, "path must be se or naive");
}

QueryMode parse_mode(const std::string& s, std::size_t line) {
    if (s == "grid") {
        return QueryMode::grid;
    }
    if (s == "verify") {
        return QueryMode::verify;
    }
    if (s == "array") {
        return QueryMode::array;
    }
    throw BenchSpecError(line, "mode must be grid, verify or array");
}

void set_dataset(BenchDataset& d, const std::string& key, const std::string& value,
                 std::size_t line) {
    if (key == "kind") {
        auto k = parse_gen_kind(value);
        if (!k) {
            throw BenchSpecError(line, "unknown dataset kind '" + value + "'");
        }
        d.gen.kind = *k;
    } else if (key == "file") {
        d.file = value;
    } else if (key == "n") {
        d.gen.n = parse_number<Pos>(value, line);
    } else if (key == "sigma") {
        d.gen.sigma = parse_number<std::size_t>(value, line);
    } else if (key == "delta") {
        d.gen.delta = parse_number<double>(value, line);
    } else if (key == "seed") {
        d.gen.seed = parse_number<std::uint64_t>(value, line);
    } else {
        throw BenchSpecError(line, "unknown dataset key '" + key + "'");
    }
}

void set_grid(BenchGrid& g, const std::string& key, const std::string& value, std::size_t line) {
    if (key == "dataset") {
        g.dataset = value;
    } else if (key == "z") {
        g.z.clear();
        for (const auto& s : split_list(value)) {
            g.z.push_back(parse_number<double>(s, line));
        }
    } else if (key == "ell") {
        g.ell.clear();
        for (const auto& s : split_list(value)) {
            g.ell.push_back(parse_number<Pos>(s, line));
        }
    } else if (key == "path") {
        g.paths.clear();
        for (const auto& s : split_list(value)) {
            g.paths.push_back(parse_path(s, line));
        }
    } else if (key == "k") {
        g.k = parse_number<Pos>(value, line);
    } else if (key == "order") {
        if (value != "fingerprint" && value != "lexicographic") {
            throw BenchSpecError(line, "order must be fingerprint or lexicographic");
        }
        g.order = value == "fingerprint" ? KmerOrder::fingerprint : KmerOrder::lexicographic;
    } else if (key == "seed") {
        g.seed = parse_number<std::uint64_t>(value, line);
    } else if (key == "queries") {
        g.queries = parse_number<std::size_t>(value, line);
    } else if (key == "mode") {
        g.mode = parse_mode(value, line);
    } else if (key == "retain_x") {
        g.retain_x = parse_bool(value, line);
    } else if (key == "grid") {
        g.with_grid = parse_bool(value, line);
    } else {
        throw BenchSpecError(line, "unknown grid key '" + key + "'");
    }
}

std::string path_name(BuildPath p) { return p == BuildPath::naive ? "naive" : "se"; }

// Half of the patterns follow the rows of a random window, half are uniform.
std::vector<Text> bench_patterns(const WeightedString& x, Pos ell, std::size_t count,
                                 std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Text> out;
    const Pos n = x.length();
    if (n < ell) {
        return out;
    }
    for (std::size_t q = 0; q < count; ++q) {
        const Pos m = std::min(n, ell + static_cast<Pos>(rng() % static_cast<std::uint64_t>(ell + 1)));
        Text p;
        if (q % 2 == 0) {
            const Pos start = 1 + static_cast<Pos>(rng() % static_cast<std::uint64_t>(n - m + 1));
            for (Pos t = 0; t < m; ++t) {
                auto row = x.row_probs(start + t);
                double r = u(rng);
                std::size_t a = 0;
                while (a + 1 < row.size() && r >= row[a]) {
                    r -= row[a];
                    ++a;
                }
                p.push_back(static_cast<Letter>(a));
            }
        } else {
            for (Pos t = 0; t < m; ++t) {
                p.push_back(static_cast<Letter>(rng() % x.sigma()));
            }
        }
        out.push_back(std::move(p));
    }
    return out;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

BenchRow run_cell(const BenchGrid& g, const std::string& dataset, const WeightedString& x, double z,
                  Pos ell, BuildPath path, bool deterministic) {
    BenchRow row;
    row.grid = g.name;
    row.dataset = dataset;
    row.n = x.length();
    row.sigma = x.sigma();
    row.z = z;
    row.ell = ell;
    row.path = path_name(path);
    try {
        BuildConfig c;
        c.z = z;
        c.ell = ell;
        c.k = g.k;
        c.order = g.order;
        c.seed = g.seed;
        c.path = path;
        c.retain_x = g.retain_x;
        c.with_grid = g.with_grid;
        BuildReport report;
        const auto t0 = std::chrono::steady_clock::now();
        const Index idx = Index::build(x, c, &report);
        row.build_ms = elapsed_ms(t0);
        row.k = idx.scheme().k();
        row.status = report.fallback ? "fallback" : "ok";
        row.index_bytes = idx.serialize().size();
        row.tree_nodes = idx.tree(Direction::forward).node_count() +
                         idx.tree(Direction::backward).node_count();
        row.leaves = idx.tree(Direction::forward).leaf_count() +
                     idx.tree(Direction::backward).leaf_count();
        row.grid_points = idx.grid().size();
        row.peak_live_path_nodes =
            std::max(report.forward.peak_live_path_nodes, report.backward.peak_live_path_nodes);
        row.family_letters = report.family_letters;

        const auto patterns = bench_patterns(x, ell, g.queries, g.seed);
        std::vector<double> times;
        std::size_t candidates = 0;
        for (const Text& p : patterns) {
            const auto q0 = std::chrono::steady_clock::now();
            const QueryResult r = query(idx, p, g.mode);
            times.push_back(elapsed_ms(q0) * 1000.0);
            candidates += r.stats.candidates;
        }
        row.queries = patterns.size();
        if (!patterns.empty()) {
            double sum = 0;
            for (double t : times) {
                sum += t;
            }
            row.query_mean_us = sum / static_cast<double>(times.size());
            std::sort(times.begin(), times.end());
            row.query_median_us = times[times.size() / 2];
            row.candidates_per_query =
                static_cast<double>(candidates) / static_cast<double>(patterns.size());
        }
    } catch (const std::exception& e) {
        row.status = std::string("failed: ") + e.what();
    }
    if (deterministic) {
        row.build_ms = row.query_mean_us = row.query_median_us = 0;
    }
    return row;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') {
            out += '"';
        }
        out += ch;
    }
    return out + "\"";
}

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(6);
    out << v;
    return out.str();
}

}  // namespace

BenchSpecError::BenchSpecError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

BenchSpec parse_bench_spec(std::istream& in) {
    BenchSpec spec;
    enum class Section { none, dataset, grid } section = Section::none;
    std::vector<std::size_t> header_lines_d;
    std::vector<std::size_t> header_lines_g;
    std::vector<bool> seeded_d;
    std::vector<bool> seeded_g;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(raw.substr(0, raw.find('#')));
        if (s.empty()) {
            continue;
        }
        if (s.front() == '[') {
            if (s.back() != ']') {
                throw BenchSpecError(line, "unterminated section header");
            }
            std::istringstream head(s.substr(1, s.size() - 2));
            std::string kind;
            std::string name;
            head >> kind >> name;
            if (name.empty()) {
                throw BenchSpecError(line, "section needs a name");
            }
            if (kind == "dataset") {
                section = Section::dataset;
                spec.datasets.push_back({name, "", {}});
                header_lines_d.push_back(line);
                seeded_d.push_back(false);
            } else if (kind == "grid") {
                section = Section::grid;
                BenchGrid g;
                g.name = name;
                spec.grids.push_back(g);
                header_lines_g.push_back(line);
                seeded_g.push_back(false);
            } else {
                throw BenchSpecError(line, "unknown section kind '" + kind + "'");
            }
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw BenchSpecError(line, "expected key = value");
        }
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (section == Section::dataset) {
            set_dataset(spec.datasets.back(), key, value, line);
            if (key == "seed") {
                seeded_d.back() = true;
            }
        } else if (section == Section::grid) {
            set_grid(spec.grids.back(), key, value, line);
            if (key == "seed") {
                seeded_g.back() = true;
            }
        } else {
            throw BenchSpecError(line, "key outside of a section");
        }
    }
    for (std::size_t d = 0; d < spec.datasets.size(); ++d) {
        if (!seeded_d[d] && spec.datasets[d].file.empty()) {
            throw BenchSpecError(header_lines_d[d], "dataset without a seed");
        }
    }
    for (std::size_t g = 0; g < spec.grids.size(); ++g) {
        const BenchGrid& grid = spec.grids[g];
        if (!seeded_g[g]) {
            throw BenchSpecError(header_lines_g[g], "grid without a seed");
        }
        if (grid.z.empty() || grid.ell.empty() || grid.paths.empty()) {
            throw BenchSpecError(header_lines_g[g], "grid needs z, ell and path values");
        }
        const bool known = std::any_of(spec.datasets.begin(), spec.datasets.end(),
                                       [&](const BenchDataset& d) { return d.name == grid.dataset; });
        if (!known) {
            throw BenchSpecError(header_lines_g[g], "unknown dataset '" + grid.dataset + "'");
        }
    }
    return spec;
}

std::vector<BenchRow> run_bench(const BenchSpec& spec, bool deterministic) {
    std::map<std::string, WeightedString> data;
    std::map<std::string, std::string> data_errors;
    for (const BenchDataset& d : spec.datasets) {
        try {
            if (d.file.empty()) {
                data.emplace(d.name, generate(d.gen));
            } else {
                std::ifstream in(d.file);
                if (!in) {
                    throw std::runtime_error("cannot open " + d.file);
                }
                data.emplace(d.name, parse_weighted_string(in));
            }
        } catch (const std::exception& e) {
            data_errors[d.name] = e.what();
        }
    }
    std::vector<BenchRow> rows;
    for (const BenchGrid& g : spec.grids) {
        for (double z : g.z) {
            for (Pos ell : g.ell) {
                for (BuildPath path : g.paths) {
                    auto it = data.find(g.dataset);
                    if (it == data.end()) {
                        BenchRow row;
                        row.grid = g.name;
                        row.dataset = g.dataset;
                        row.z = z;
                        row.ell = ell;
                        row.path = path_name(path);
                        row.status = "failed: " + data_errors[g.dataset];
                        rows.push_back(row);
                        continue;
                    }
                    rows.push_back(run_cell(g, g.dataset, it->second, z, ell, path, deterministic));
                }
            }
        }
    }
    return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << "grid,dataset,n,sigma,z,ell,k,path,status,index_bytes,tree_nodes,leaves,grid_points,"
           "peak_live_path_nodes,family_letters,build_ms,queries,query_mean_us,query_median_us,"
           "candidates_per_query\n";
    for (const BenchRow& r : rows) {
        out << csv_field(r.grid) << ',' << csv_field(r.dataset) << ',' << r.n << ',' << r.sigma << ','
            << fmt(r.z) << ',' << r.ell << ',' << r.k << ',' << r.path << ',' << csv_field(r.status)
            << ',' << r.index_bytes << ',' << r.tree_nodes << ',' << r.leaves << ','
            << r.grid_points << ',' << r.peak_live_path_nodes << ',' << r.family_letters << ','
            << fmt(r.build_ms) << ',' << r.queries << ',' << fmt(r.query_mean_us) << ','
            << fmt(r.query_median_us) << ',' << fmt(r.candidates_per_query) << '\n';
    }
}

}  // namespace wsi
