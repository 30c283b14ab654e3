#pragma once

#include "dnabot/dna_codec.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dnabot {

/**
 * Generalized suffix array over a set of documents.
 *
 * The documents are concatenated as d0 #0 d1 #1 ... with one sentinel per
 * document. Sentinel of document i is the integer symbol i, character c maps to
 * N + (unsigned char)c, so sentinels are pairwise distinct and sort below every
 * character. No common prefix of two suffixes can extend over a sentinel.
 *
 * Construction is O(n): SA-IS for the suffix array, Kasai for the LCP array.
 */
class CorpusIndex {
public:
    using Symbol = std::int32_t;

    /// Throws InputError on an empty corpus or when every document is empty.
    explicit CorpusIndex(std::span<const std::string> documents);

    std::size_t num_docs() const { return doc_start_.size(); }
    std::size_t text_size() const { return text_.size(); }

    const std::vector<Symbol>& text() const { return text_; }
    const std::vector<std::int32_t>& suffix_array() const { return sa_; }
    /// lcp_array()[i] = LCP(suffix_array()[i-1], suffix_array()[i]); lcp_array()[0] = 0.
    const std::vector<std::int32_t>& lcp_array() const { return lcp_; }
    /// Document id of each text position (sentinels belong to the document they close).
    const std::vector<std::int32_t>& doc_array() const { return doc_; }

    std::size_t doc_start(std::size_t doc) const { return doc_start_[doc]; }
    std::size_t doc_length(std::size_t doc) const { return doc_length_[doc]; }

    Symbol symbol_of(char c) const {
        return static_cast<Symbol>(num_docs() + static_cast<unsigned char>(c));
    }
    /// Decodes `length` symbols starting at `pos`; the range must not contain a sentinel.
    std::string substring(std::size_t pos, std::size_t length) const;

private:
    std::vector<Symbol> text_;
    std::vector<std::int32_t> sa_;
    std::vector<std::int32_t> lcp_;
    std::vector<std::int32_t> doc_;
    std::vector<std::size_t> doc_start_;
    std::vector<std::size_t> doc_length_;
};

CorpusIndex build_index(std::span<const DnaSequence> sequences);

struct LcsCurvePoint {
    std::size_t k = 0;
    std::size_t length = 0;
    std::string witness;
    std::vector<std::size_t> witness_docs;  // ascending document ids

    bool operator==(const LcsCurvePoint&) const = default;
};

struct LcsCurve {
    std::vector<LcsCurvePoint> points;  // k = 2..N

    /// Point for group size k (2 <= k <= N).
    const LcsCurvePoint& at(std::size_t k) const { return points.at(k - 2); }
    std::vector<std::size_t> lengths() const;

    bool operator==(const LcsCurve&) const = default;
};

/// For every k in 2..N the longest substring shared by at least k documents.
/// Among equal-length candidates the witness whose earliest occurrence in the
/// concatenated text is leftmost wins. Throws InputError when N < 2.
LcsCurve lcs_curve(const CorpusIndex& index);

/// Longest substring common to every document (ties as in lcs_curve). A single
/// document is returned unchanged. Throws InputError on an empty list.
std::string lcs_of_set(std::span<const std::string> documents);
std::string lcs_of_set(std::span<const DnaSequence> sequences);

/// Documents containing `pattern`, ascending. The empty pattern is in every document.
std::vector<std::size_t> witness_docs(const CorpusIndex& index, std::string_view pattern);

namespace detail {

/// Suffix array of `s` with symbols in [0, upper]. Linear time (SA-IS).
std::vector<std::int32_t> suffix_array_sais(std::span<const std::int32_t> s, std::int32_t upper);

/// Kasai et al. LCP array, same convention as CorpusIndex::lcp_array().
std::vector<std::int32_t> lcp_kasai(std::span<const std::int32_t> s,
                                    std::span<const std::int32_t> sa);

}  // namespace detail

}  // namespace dnabot
