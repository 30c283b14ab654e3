#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dnabot {

// ============================================================================
// Domain types
// ============================================================================

/// Kind of a timeline action, identified by the token used in timeline files
/// ("tweet", "retweet", "reply" for the default alphabet).
struct ActionKind {
    std::string token;

    static ActionKind plain_tweet() { return {"tweet"}; }
    static ActionKind retweet() { return {"retweet"}; }
    static ActionKind reply() { return {"reply"}; }

    auto operator<=>(const ActionKind&) const = default;
};

enum class Label { Bot, Genuine };

std::string_view to_string(Label label);
/// Accepts exactly "bot" or "genuine".
std::optional<Label> parse_label(std::string_view token);

/// Injective mapping from action kinds to single DNA characters.
class DnaAlphabet {
public:
    static constexpr std::size_t kMinSize = 2;
    static constexpr std::size_t kMaxSize = 64;
    static constexpr char kReservedSentinel = '$';

    /// Throws ConfigError unless the mapping is injective, every character is a
    /// printable non-space ASCII character other than '$', and 2 <= size <= 64.
    explicit DnaAlphabet(std::vector<std::pair<ActionKind, char>> mapping);

    /// A -> plain tweet, T -> retweet, C -> reply.
    static const DnaAlphabet& standard();

    std::optional<char> encode(const ActionKind& kind) const;
    std::optional<ActionKind> decode(char c) const;
    bool contains(char c) const;

    const std::vector<std::pair<ActionKind, char>>& mapping() const { return mapping_; }
    /// Mapped characters in ascending byte order.
    const std::string& characters() const { return characters_; }
    std::size_t size() const { return mapping_.size(); }

    bool operator==(const DnaAlphabet& other) const { return mapping_ == other.mapping_; }

private:
    std::vector<std::pair<ActionKind, char>> mapping_;
    std::string characters_;
};

struct AccountTimeline {
    std::string account_id;
    std::vector<ActionKind> actions;  // chronological
    std::optional<Label> label;

    bool operator==(const AccountTimeline&) const = default;
};

struct DnaSequence {
    std::string account_id;
    std::string sequence;

    bool operator==(const DnaSequence&) const = default;
};

using LabelMap = std::map<std::string, Label>;

/// Account id -> DNA lookup over a list of sequences.
class DnaTable {
public:
    DnaTable() = default;
    explicit DnaTable(std::span<const DnaSequence> sequences);

    /// Throws InputError for an unknown id.
    const std::string& at(const std::string& account_id) const;
    bool contains(const std::string& account_id) const { return by_id_.contains(account_id); }
    std::size_t size() const { return by_id_.size(); }

private:
    std::map<std::string, std::string> by_id_;
};

// ============================================================================
// Operations
// ============================================================================

/// Parses JSON Lines timelines. Blank lines are skipped. Every action type must be
/// mapped by `alphabet`; duplicate account ids and malformed records throw
/// InputError carrying the 1-based line number.
std::vector<AccountTimeline> parse_timelines(std::istream& in,
                                             const DnaAlphabet& alphabet = DnaAlphabet::standard());

/// Writes timelines as JSON Lines (the inverse of parse_timelines; labels are not written).
void write_timelines(std::ostream& out, std::span<const AccountTimeline> timelines);

DnaSequence encode_timeline(const AccountTimeline& timeline, const DnaAlphabet& alphabet);
std::vector<DnaSequence> encode_timelines(std::span<const AccountTimeline> timelines,
                                          const DnaAlphabet& alphabet);

/// Reads "account_id,label" rows; the header row is optional. When `known_ids` is
/// given, rows naming other accounts are skipped and reported through `warnings`.
LabelMap load_labels(std::istream& in,
                     const std::set<std::string>* known_ids = nullptr,
                     std::vector<std::string>* warnings = nullptr);

void write_labels(std::ostream& out, std::span<const AccountTimeline> timelines);

/// TSV "account_id<TAB>sequence" per line. Characters outside `alphabet` throw InputError.
std::vector<DnaSequence> read_dna_file(std::istream& in,
                                       const DnaAlphabet& alphabet = DnaAlphabet::standard());
void write_dna_file(std::ostream& out, std::span<const DnaSequence> sequences);

struct QuarantineSplit {
    std::vector<DnaSequence> kept;
    std::vector<DnaSequence> quarantined;
};

/// Sequences shorter than `min_length` are quarantined; order is preserved in both lists.
QuarantineSplit split_quarantine(std::span<const DnaSequence> sequences, std::size_t min_length);

}  // namespace dnabot
