#include "wsi/estimation.hpp"

#include <algorithm>
#include <stdexcept>

namespace wsi {

EstimationFamily::EstimationFamily(Threshold t, Pos n, std::vector<Text> strings,
                                   std::vector<PropertyArray> properties)
    : threshold_(t), n_(n), strings_(std::move(strings)), properties_(std::move(properties)) {
    if (strings_.size() != properties_.size()) {
        throw std::invalid_argument("strings and property arrays differ in count");
    }
    for (std::size_t j = 0; j < strings_.size(); ++j) {
        if (static_cast<Pos>(strings_[j].size()) != n_ ||
            static_cast<Pos>(properties_[j].size()) != n_) {
            throw std::invalid_argument("estimation string of wrong length");
        }
    }
}

Pos EstimationFamily::context_start(std::size_t j, Pos e) const {
    const PropertyArray& pi = properties_.at(j);
    auto it = std::lower_bound(pi.begin(), pi.end(), e);
    const auto i = static_cast<Pos>(it - pi.begin()) + 1;
    return std::min(i, e + 1);
}

namespace {

// Builds the family one position at a time. Every slot j keeps L_j, the start
// of its longest property-respecting factor ending at e - 1, and the positions
// in [L_j, e - 1] where S_j leaves the heavy string. At position e the slots
// are arranged in a trie of reversed contexts; a node at start s holding the
// string V must send exactly floor(P(V alpha) z) of its slots to letter alpha
// with a new start <= s. Nodes are settled bottom-up, so deeper nodes claim
// slots first and shallower ones top up from the slots left unassigned below.
class EstimationBuilder {
public:
    EstimationBuilder(const WeightedString& x, const Threshold& t)
        : x_(x), t_(t), h_(x), n_(x.length()), z_(t.floor_z()) {
        strings_.assign(z_, Text(static_cast<std::size_t>(n_)));
        pi_.assign(z_, PropertyArray(static_cast<std::size_t>(n_)));
        start_.assign(z_, 1);
        diffs_.assign(z_, {});
        cursor_.assign(z_, 0);
        letter_.assign(z_, 0);
        new_start_.assign(z_, 0);
        order_.reserve(x.sigma());
    }

    EstimationFamily run() {
        for (Pos e = 1; e <= n_; ++e) {
            step(e);
        }
        for (std::size_t j = 0; j < z_; ++j) {
            for (Pos i = start_[j]; i <= n_; ++i) {
                pi_[j][static_cast<std::size_t>(i - 1)] = n_;
            }
        }
        return EstimationFamily(t_, n_, std::move(strings_), std::move(pi_));
    }

private:
    struct Result {
        std::vector<std::size_t> pool;
        std::vector<std::size_t> assigned;  // per letter
    };

    void step(Pos e) {
        e_ = e;
        order_.clear();
        const Letter heavy = h_.heavy(e);
        order_.push_back(heavy);
        for (std::size_t a = 0; a < x_.sigma(); ++a) {
            if (a != heavy) {
                order_.push_back(static_cast<Letter>(a));
            }
        }
        std::vector<std::size_t> all(z_);
        for (std::size_t j = 0; j < z_; ++j) {
            all[j] = j;
            cursor_[j] = diffs_[j].size();
        }
        Result root = settle(all, e, 0.0);
        for (std::size_t j : root.pool) {
            letter_[j] = heavy;
            new_start_[j] = e + 1;
        }
        for (std::size_t j = 0; j < z_; ++j) {
            strings_[j][static_cast<std::size_t>(e - 1)] = letter_[j];
            for (Pos i = start_[j]; i < new_start_[j]; ++i) {
                pi_[j][static_cast<std::size_t>(i - 1)] = e - 1;
            }
            start_[j] = new_start_[j];
            auto& d = diffs_[j];
            d.erase(d.begin(), std::lower_bound(d.begin(), d.end(), start_[j]));
            if (letter_[j] != heavy && start_[j] <= e) {
                d.push_back(e);
            }
        }
    }

    // All slots in group agree on S[s..e-1] and have L_j <= s; lp is the log
    // probability of that context.
    Result settle(const std::vector<std::size_t>& group, Pos s, double lp) {
        // Below s the slots stay together along heavy letters until the
        // deepest position where one of them ends or leaves the heavy string.
        Pos event = 0;
        for (std::size_t j : group) {
            auto& c = cursor_[j];
            const auto& d = diffs_[j];
            while (c > 0 && d[c - 1] >= s) {
                --c;
            }
            event = std::max(event, start_[j] - 1);
            if (c > 0) {
                event = std::max(event, d[c - 1]);
            }
        }

        Result out;
        out.assigned.assign(x_.sigma(), 0);
        const double chain_lp = lp + h_.range_log(event + 1, s - 1);

        if (event >= 1) {
            std::vector<std::size_t> deeper;
            for (std::size_t j : group) {
                if (start_[j] <= event) {
                    deeper.push_back(j);
                } else {
                    out.pool.push_back(j);
                }
            }
            std::stable_sort(deeper.begin(), deeper.end(), [&](std::size_t a, std::size_t b) {
                return letter_at(a, event) < letter_at(b, event);
            });
            for (std::size_t lo = 0; lo < deeper.size();) {
                std::size_t hi = lo;
                const Letter b = letter_at(deeper[lo], event);
                while (hi < deeper.size() && letter_at(deeper[hi], event) == b) {
                    ++hi;
                }
                std::vector<std::size_t> child(deeper.begin() + static_cast<std::ptrdiff_t>(lo),
                                               deeper.begin() + static_cast<std::ptrdiff_t>(hi));
                Result r = settle(child, event, chain_lp + x_.log_prob(event, b));
                out.pool.insert(out.pool.end(), r.pool.begin(), r.pool.end());
                for (std::size_t a = 0; a < x_.sigma(); ++a) {
                    out.assigned[a] += r.assigned[a];
                }
                lo = hi;
            }
            std::sort(out.pool.begin(), out.pool.end());
        } else {
            out.pool = group;
        }

        // Chain nodes s' in [event + 1, s], deepest first; lp at s' is
        // lp + range_log(s', s - 1), so targets only grow towards s.
        std::size_t taken = 0;
        for (Letter a : order_) {
            const double la = x_.log_prob(e_, a);
            if (la == kNegInf) {
                continue;
            }
            auto target = [&](Pos sp) { return t_.count_of(lp + h_.range_log(sp, s - 1) + la); };
            const std::size_t top = target(s);
            for (std::size_t unit = out.assigned[a] + 1; unit <= top; ++unit) {
                if (taken == out.pool.size()) {
                    break;
                }
                Pos lo = event + 1;
                Pos hi = s;
                while (lo < hi) {
                    const Pos mid = lo + (hi - lo) / 2;
                    if (target(mid) >= unit) {
                        hi = mid;
                    } else {
                        lo = mid + 1;
                    }
                }
                const std::size_t j = out.pool[taken++];
                letter_[j] = a;
                new_start_[j] = lo;
                ++out.assigned[a];
            }
        }
        out.pool.erase(out.pool.begin(), out.pool.begin() + static_cast<std::ptrdiff_t>(taken));
        return out;
    }

    Letter letter_at(std::size_t j, Pos i) const {
        return strings_[j][static_cast<std::size_t>(i - 1)];
    }

    const WeightedString& x_;
    Threshold t_;
    HeavyContext h_;
    Pos n_;
    std::size_t z_;
    Pos e_ = 0;
    std::vector<Letter> order_;
    std::vector<Text> strings_;
    std::vector<PropertyArray> pi_;
    std::vector<Pos> start_;
    std::vector<std::vector<Pos>> diffs_;
    std::vector<std::size_t> cursor_;
    std::vector<Letter> letter_;
    std::vector<Pos> new_start_;
};

}  // namespace

EstimationFamily build_estimation(const WeightedString& x, const Threshold& t) {
    return EstimationBuilder(x, t).run();
}

std::vector<Pos> occ_with_property(std::span<const Letter> s, const PropertyArray& pi,
                                   std::span<const Letter> pattern) {
    std::vector<Pos> out;
    const std::size_t m = pattern.size();
    if (m == 0 || m > s.size()) {
        return out;
    }
    for (std::size_t i = 0; i + m <= s.size(); ++i) {
        if (static_cast<std::size_t>(pi[i]) < i + m) {
            continue;
        }
        if (std::equal(pattern.begin(), pattern.end(), s.begin() + static_cast<std::ptrdiff_t>(i))) {
            out.push_back(static_cast<Pos>(i + 1));
        }
    }
    return out;
}

std::size_t count(const EstimationFamily& f, std::span<const Letter> pattern, Pos i) {
    const auto m = static_cast<Pos>(pattern.size());
    if (i < 1 || i + m - 1 > f.length()) {
        throw std::out_of_range("count: position outside the string");
    }
    std::size_t c = 0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        const Text& s = f.string(j);
        if (f.property(j)[static_cast<std::size_t>(i - 1)] < i + m - 1) {
            continue;
        }
        if (std::equal(pattern.begin(), pattern.end(), s.begin() + (i - 1))) {
            ++c;
        }
    }
    return c;
}

void dump_estimation(std::ostream& out, const EstimationFamily& f, const Alphabet& alphabet) {
    for (std::size_t j = 0; j < f.size(); ++j) {
        out << alphabet.decode(f.string(j)) << '\t';
        const auto& pi = f.property(j);
        for (std::size_t i = 0; i < pi.size(); ++i) {
            out << (i ? " " : "") << pi[i];
        }
        out << '\n';
    }
}

}  // namespace wsi
