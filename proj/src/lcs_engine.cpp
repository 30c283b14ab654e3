#include "dnabot/lcs_engine.hpp"

#include "dnabot/error.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

namespace dnabot {

namespace detail {

namespace {

std::vector<std::int32_t> suffix_array_naive(std::span<const std::int32_t> s) {
    std::vector<std::int32_t> sa(s.size());
    std::iota(sa.begin(), sa.end(), 0);
    std::sort(sa.begin(), sa.end(), [&](std::int32_t a, std::int32_t b) {
        return std::lexicographical_compare(s.begin() + a, s.end(), s.begin() + b, s.end());
    });
    return sa;
}

}  // namespace

// Induced sorting (Nong, Zhang & Chan). The end of the string acts as an implicit
// terminator smaller than every symbol.
std::vector<std::int32_t> suffix_array_sais(std::span<const std::int32_t> s, std::int32_t upper) {
    const auto n = static_cast<std::int32_t>(s.size());
    if (n < 16) return suffix_array_naive(s);

    std::vector<std::int32_t> sa(n);
    std::vector<std::uint8_t> is_s(n, 0);
    for (std::int32_t i = n - 2; i >= 0; --i) {
        is_s[i] = (s[i] == s[i + 1]) ? is_s[i + 1] : static_cast<std::uint8_t>(s[i] < s[i + 1]);
    }

    // sum_l[c]: first slot of bucket c; sum_s[c]: first S-type slot of bucket c.
    std::vector<std::int32_t> sum_l(upper + 2, 0), sum_s(upper + 2, 0);
    for (std::int32_t i = 0; i < n; ++i) {
        if (!is_s[i]) {
            ++sum_s[s[i]];
        } else {
            ++sum_l[s[i] + 1];
        }
    }
    for (std::int32_t c = 0; c <= upper; ++c) {
        sum_s[c] += sum_l[c];
        if (c < upper) sum_l[c + 1] += sum_s[c];
    }

    std::vector<std::int32_t> buf(upper + 2);
    auto induce = [&](const std::vector<std::int32_t>& lms) {
        std::fill(sa.begin(), sa.end(), -1);
        std::copy(sum_s.begin(), sum_s.end(), buf.begin());
        for (std::int32_t d : lms) {
            if (d == n) continue;
            sa[buf[s[d]]++] = d;
        }
        std::copy(sum_l.begin(), sum_l.end(), buf.begin());
        sa[buf[s[n - 1]]++] = n - 1;
        for (std::int32_t i = 0; i < n; ++i) {
            const std::int32_t v = sa[i];
            if (v >= 1 && !is_s[v - 1]) sa[buf[s[v - 1]]++] = v - 1;
        }
        std::copy(sum_l.begin(), sum_l.end(), buf.begin());
        for (std::int32_t i = n - 1; i >= 0; --i) {
            const std::int32_t v = sa[i];
            if (v >= 1 && is_s[v - 1]) sa[--buf[s[v - 1] + 1]] = v - 1;
        }
    };

    std::vector<std::int32_t> lms_map(n + 1, -1);
    std::vector<std::int32_t> lms;
    for (std::int32_t i = 1; i < n; ++i) {
        if (!is_s[i - 1] && is_s[i]) {
            lms_map[i] = static_cast<std::int32_t>(lms.size());
            lms.push_back(i);
        }
    }
    const auto m = static_cast<std::int32_t>(lms.size());

    induce(lms);

    if (m > 0) {
        std::vector<std::int32_t> sorted_lms;
        sorted_lms.reserve(m);
        for (std::int32_t v : sa) {
            if (lms_map[v] != -1) sorted_lms.push_back(v);
        }

        // Name LMS substrings; equal substrings share a name.
        std::vector<std::int32_t> reduced(m);
        std::int32_t name = 0;
        reduced[lms_map[sorted_lms[0]]] = 0;
        for (std::int32_t i = 1; i < m; ++i) {
            std::int32_t l = sorted_lms[i - 1];
            std::int32_t r = sorted_lms[i];
            const std::int32_t end_l = (lms_map[l] + 1 < m) ? lms[lms_map[l] + 1] : n;
            const std::int32_t end_r = (lms_map[r] + 1 < m) ? lms[lms_map[r] + 1] : n;
            bool same = true;
            if (end_l - l != end_r - r) {
                same = false;
            } else {
                while (l < end_l && s[l] == s[r]) {
                    ++l;
                    ++r;
                }
                if (l == n || s[l] != s[r]) same = false;
            }
            if (!same) ++name;
            reduced[lms_map[sorted_lms[i]]] = name;
        }

        const auto reduced_sa = suffix_array_sais(reduced, name);
        for (std::int32_t i = 0; i < m; ++i) sorted_lms[i] = lms[reduced_sa[i]];
        induce(sorted_lms);
    }
    return sa;
}

std::vector<std::int32_t> lcp_kasai(std::span<const std::int32_t> s, std::span<const std::int32_t> sa) {
    const auto n = static_cast<std::int32_t>(s.size());
    std::vector<std::int32_t> rank(n), lcp(n, 0);
    for (std::int32_t i = 0; i < n; ++i) rank[sa[i]] = i;
    std::int32_t h = 0;
    for (std::int32_t i = 0; i < n; ++i) {
        if (rank[i] == 0) {
            h = 0;
            continue;
        }
        const std::int32_t j = sa[rank[i] - 1];
        while (i + h < n && j + h < n && s[i + h] == s[j + h]) ++h;
        lcp[rank[i]] = h;
        if (h > 0) --h;
    }
    return lcp;
}

}  // namespace detail

// ============ CorpusIndex ============

CorpusIndex::CorpusIndex(std::span<const std::string> documents) {
    if (documents.empty()) throw InputError("cannot index an empty corpus");
    const std::size_t n_docs = documents.size();
    std::size_t total = n_docs;
    for (const auto& d : documents) total += d.size();
    if (total == n_docs) throw InputError("cannot index a corpus of empty sequences");
    if (total + 256 >= static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
        throw InputError("corpus too large for 32-bit suffix array");
    }

    text_.reserve(total);
    doc_.reserve(total);
    doc_start_.reserve(n_docs);
    doc_length_.reserve(n_docs);
    for (std::size_t d = 0; d < n_docs; ++d) {
        doc_start_.push_back(text_.size());
        doc_length_.push_back(documents[d].size());
        for (char c : documents[d]) {
            text_.push_back(static_cast<Symbol>(n_docs + static_cast<unsigned char>(c)));
            doc_.push_back(static_cast<std::int32_t>(d));
        }
        text_.push_back(static_cast<Symbol>(d));
        doc_.push_back(static_cast<std::int32_t>(d));
    }

    sa_ = detail::suffix_array_sais(text_, static_cast<std::int32_t>(n_docs + 255));
    lcp_ = detail::lcp_kasai(text_, sa_);
}

std::string CorpusIndex::substring(std::size_t pos, std::size_t length) const {
    std::string out(length, '\0');
    const auto n = static_cast<Symbol>(num_docs());
    for (std::size_t i = 0; i < length; ++i) {
        out[i] = static_cast<char>(static_cast<unsigned char>(text_[pos + i] - n));
    }
    return out;
}

CorpusIndex build_index(std::span<const DnaSequence> sequences) {
    std::vector<std::string> docs;
    docs.reserve(sequences.size());
    for (const auto& s : sequences) docs.push_back(s.sequence);
    return CorpusIndex(docs);
}

std::vector<std::size_t> LcsCurve::lengths() const {
    std::vector<std::size_t> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.length);
    return out;
}

// ============ LCP-interval scan ============

namespace {

/// Best lcp-interval seen for one distinct-document count.
struct IntervalPick {
    std::int32_t length = -1;  // -1: none
    std::int32_t first_pos = std::numeric_limits<std::int32_t>::max();
    std::int32_t lb = 0;
    std::int32_t rb = -1;

    bool valid() const { return length >= 0; }
    // Longer wins; equal length: leftmost earliest occurrence wins.
    bool beats(const IntervalPick& other) const {
        if (length != other.length) return length > other.length;
        return first_pos < other.first_pos;
    }
};

/**
 * Bottom-up traversal of the lcp-interval tree over the non-sentinel suffixes.
 * The number of distinct documents of an interval is its leaf count minus the
 * pairs (previous same-document leaf, leaf) whose lowest common interval lies
 * inside it; each such pair is charged to the deepest open interval whose left
 * bound covers the previous leaf. Returns picks indexed by exact distinct count.
 */
std::vector<IntervalPick> best_interval_per_doc_count(const CorpusIndex& index) {
    const auto& sa = index.suffix_array();
    const auto& lcp = index.lcp_array();
    const auto& doc = index.doc_array();
    const auto n_docs = static_cast<std::int32_t>(index.num_docs());
    const auto m = static_cast<std::int32_t>(index.text_size());

    std::vector<IntervalPick> best(n_docs + 1);

    struct Open {
        std::int32_t lcp;
        std::int32_t lb;
        std::int32_t duplicates;
        std::int32_t first_pos;
    };
    constexpr auto kNoPos = std::numeric_limits<std::int32_t>::max();

    auto report = [&](const Open& node, std::int32_t rb) {
        if (node.lcp == 0) return;
        const std::int32_t count = (rb - node.lb + 1) - node.duplicates;
        const IntervalPick pick{node.lcp, node.first_pos, node.lb, rb};
        if (pick.beats(best[count])) best[count] = pick;
    };
    auto absorb = [](Open& parent, const Open& child) {
        parent.duplicates += child.duplicates;
        parent.first_pos = std::min(parent.first_pos, child.first_pos);
    };

    std::vector<Open> stack;
    stack.push_back({0, n_docs, 0, kNoPos});
    std::vector<std::int32_t> last_leaf(n_docs, -1);

    // Sentinel suffixes occupy sa[0 .. n_docs).
    for (std::int32_t i = n_docs; i < m; ++i) {
        if (i > n_docs) {
            const std::int32_t h = lcp[i];
            if (h > stack.back().lcp) stack.push_back({h, i - 1, 0, kNoPos});
            stack.back().first_pos = std::min(stack.back().first_pos, sa[i - 1]);
            while (h < stack.back().lcp) {
                const Open node = stack.back();
                stack.pop_back();
                report(node, i - 1);
                if (h <= stack.back().lcp) {
                    absorb(stack.back(), node);
                } else {
                    stack.push_back({h, node.lb, node.duplicates, node.first_pos});
                }
            }
        }

        const std::int32_t d = doc[sa[i]];
        if (const std::int32_t prev = last_leaf[d]; prev >= 0) {
            auto it = std::upper_bound(stack.begin(), stack.end(), prev,
                                       [](std::int32_t p, const Open& o) { return p < o.lb; });
            (--it)->duplicates += 1;
        }
        last_leaf[d] = i;
    }

    stack.back().first_pos = std::min(stack.back().first_pos, sa[m - 1]);
    while (stack.size() > 1) {
        const Open node = stack.back();
        stack.pop_back();
        report(node, m - 1);
        absorb(stack.back(), node);
    }
    return best;
}

std::vector<std::size_t> docs_of_interval(const CorpusIndex& index, std::int32_t lb, std::int32_t rb) {
    const auto& sa = index.suffix_array();
    const auto& doc = index.doc_array();
    std::vector<std::size_t> docs;
    for (std::int32_t i = lb; i <= rb; ++i) docs.push_back(static_cast<std::size_t>(doc[sa[i]]));
    std::sort(docs.begin(), docs.end());
    docs.erase(std::unique(docs.begin(), docs.end()), docs.end());
    return docs;
}

}  // namespace

LcsCurve lcs_curve(const CorpusIndex& index) {
    const std::size_t n_docs = index.num_docs();
    if (n_docs < 2) throw InputError("LCS curve needs at least 2 sequences");

    const auto best = best_interval_per_doc_count(index);

    std::vector<std::size_t> all_docs(n_docs);
    std::iota(all_docs.begin(), all_docs.end(), std::size_t{0});

    LcsCurve curve;
    curve.points.resize(n_docs - 1);
    std::map<std::pair<std::int32_t, std::int32_t>, std::vector<std::size_t>> doc_cache;
    IntervalPick running;
    for (std::size_t k = n_docs; k >= 2; --k) {
        if (best[k].beats(running)) running = best[k];
        LcsCurvePoint& point = curve.points[k - 2];
        point.k = k;
        if (!running.valid()) {
            point.witness_docs = all_docs;
            continue;
        }
        point.length = static_cast<std::size_t>(running.length);
        point.witness = index.substring(static_cast<std::size_t>(running.first_pos), point.length);
        auto [it, inserted] = doc_cache.try_emplace({running.lb, running.rb});
        if (inserted) it->second = docs_of_interval(index, running.lb, running.rb);
        point.witness_docs = it->second;
    }
    return curve;
}

std::string lcs_of_set(std::span<const std::string> documents) {
    if (documents.empty()) throw InputError("LCS of an empty set is undefined");
    if (documents.size() == 1) return documents.front();
    for (const auto& d : documents) {
        if (d.empty()) return {};
    }
    const CorpusIndex index(documents);
    const auto best = best_interval_per_doc_count(index);
    const IntervalPick& pick = best[documents.size()];
    if (!pick.valid()) return {};
    return index.substring(static_cast<std::size_t>(pick.first_pos), static_cast<std::size_t>(pick.length));
}

std::string lcs_of_set(std::span<const DnaSequence> sequences) {
    std::vector<std::string> docs;
    docs.reserve(sequences.size());
    for (const auto& s : sequences) docs.push_back(s.sequence);
    return lcs_of_set(std::span<const std::string>(docs));
}

std::vector<std::size_t> witness_docs(const CorpusIndex& index, std::string_view pattern) {
    const std::size_t n_docs = index.num_docs();
    if (pattern.empty()) {
        std::vector<std::size_t> all(n_docs);
        std::iota(all.begin(), all.end(), std::size_t{0});
        return all;
    }
    std::vector<CorpusIndex::Symbol> symbols;
    symbols.reserve(pattern.size());
    for (char c : pattern) symbols.push_back(index.symbol_of(c));

    const auto& text = index.text();
    // Every suffix ends in a sentinel, which mismatches any pattern symbol.
    auto compare_prefix = [&](std::int32_t pos) {
        for (std::size_t j = 0; j < symbols.size(); ++j) {
            const auto t = text[pos + j];
            if (t != symbols[j]) return t < symbols[j] ? -1 : 1;
        }
        return 0;
    };
    const auto& sa = index.suffix_array();
    auto first = sa.begin() + static_cast<std::ptrdiff_t>(n_docs);
    auto lo = std::partition_point(first, sa.end(), [&](std::int32_t p) { return compare_prefix(p) < 0; });
    auto hi = std::partition_point(lo, sa.end(), [&](std::int32_t p) { return compare_prefix(p) == 0; });
    if (lo == hi) return {};
    return docs_of_interval(index, static_cast<std::int32_t>(lo - sa.begin()),
                            static_cast<std::int32_t>(hi - sa.begin() - 1));
}

}  // namespace dnabot
