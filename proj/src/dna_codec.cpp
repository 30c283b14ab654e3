#include "dnabot/dna_codec.hpp"

#include "dnabot/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <istream>
#include <ostream>
#include <unordered_set>

namespace dnabot {

namespace {

bool is_blank(std::string_view line) {
    return std::all_of(line.begin(), line.end(),
                       [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

std::string_view to_string(Label label) {
    return label == Label::Bot ? "bot" : "genuine";
}

std::optional<Label> parse_label(std::string_view token) {
    if (token == "bot") return Label::Bot;
    if (token == "genuine") return Label::Genuine;
    return std::nullopt;
}

// ============ DnaAlphabet ============

DnaAlphabet::DnaAlphabet(std::vector<std::pair<ActionKind, char>> mapping)
    : mapping_(std::move(mapping)) {
    if (mapping_.size() < kMinSize || mapping_.size() > kMaxSize) {
        throw ConfigError("alphabet size must be between 2 and 64, got " +
                          std::to_string(mapping_.size()));
    }
    std::set<std::string> tokens;
    std::set<char> chars;
    for (const auto& [kind, c] : mapping_) {
        if (kind.token.empty()) throw ConfigError("alphabet: empty action token");
        const auto uc = static_cast<unsigned char>(c);
        if (uc <= 0x20 || uc >= 0x7f || c == kReservedSentinel) {
            throw ConfigError("alphabet: character for '" + kind.token +
                              "' must be printable ASCII and not '$'");
        }
        if (!tokens.insert(kind.token).second) {
            throw ConfigError("alphabet: action '" + kind.token + "' mapped twice");
        }
        if (!chars.insert(c).second) {
            throw ConfigError(std::string("alphabet: character '") + c + "' is not unique");
        }
    }
    characters_.assign(chars.begin(), chars.end());
}

const DnaAlphabet& DnaAlphabet::standard() {
    static const DnaAlphabet alphabet({{ActionKind::plain_tweet(), 'A'},
                                       {ActionKind::retweet(), 'T'},
                                       {ActionKind::reply(), 'C'}});
    return alphabet;
}

std::optional<char> DnaAlphabet::encode(const ActionKind& kind) const {
    for (const auto& [k, c] : mapping_) {
        if (k == kind) return c;
    }
    return std::nullopt;
}

std::optional<ActionKind> DnaAlphabet::decode(char c) const {
    for (const auto& [k, ch] : mapping_) {
        if (ch == c) return k;
    }
    return std::nullopt;
}

bool DnaAlphabet::contains(char c) const {
    return characters_.find(c) != std::string::npos;
}

// ============ Timelines ============

std::vector<AccountTimeline> parse_timelines(std::istream& in, const DnaAlphabet& alphabet) {
    std::vector<AccountTimeline> timelines;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) continue;

        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw InputError(std::string("invalid JSON: ") + e.what(), line_no);
        }
        if (!record.is_object()) throw InputError("record is not a JSON object", line_no);

        auto id_it = record.find("account_id");
        if (id_it == record.end() || !id_it->is_string()) {
            throw InputError("missing string field 'account_id'", line_no);
        }
        AccountTimeline timeline;
        timeline.account_id = id_it->get<std::string>();
        if (timeline.account_id.empty()) throw InputError("empty account_id", line_no);

        auto actions_it = record.find("actions");
        if (actions_it == record.end() || !actions_it->is_array()) {
            throw InputError("missing array field 'actions'", line_no);
        }
        timeline.actions.reserve(actions_it->size());
        for (const auto& action : *actions_it) {
            if (!action.is_object()) throw InputError("action is not an object", line_no);
            auto type_it = action.find("type");
            if (type_it == action.end() || !type_it->is_string()) {
                throw InputError("action without string 'type'", line_no);
            }
            if (auto t = action.find("t"); t != action.end() && !t->is_string()) {
                throw InputError("action timestamp 't' must be a string", line_no);
            }
            ActionKind kind{type_it->get<std::string>()};
            if (!alphabet.encode(kind)) {
                throw InputError("unknown action type '" + kind.token + "'", line_no);
            }
            timeline.actions.push_back(std::move(kind));
        }

        if (!seen.insert(timeline.account_id).second) {
            throw InputError("duplicate account_id '" + timeline.account_id + "'", line_no);
        }
        timelines.push_back(std::move(timeline));
    }
    return timelines;
}

void write_timelines(std::ostream& out, std::span<const AccountTimeline> timelines) {
    for (const auto& timeline : timelines) {
        nlohmann::json actions = nlohmann::json::array();
        for (const auto& action : timeline.actions) {
            actions.push_back({{"type", action.token}});
        }
        nlohmann::json record = {{"account_id", timeline.account_id}, {"actions", std::move(actions)}};
        out << record.dump() << '\n';
    }
}

DnaSequence encode_timeline(const AccountTimeline& timeline, const DnaAlphabet& alphabet) {
    DnaSequence dna{timeline.account_id, {}};
    dna.sequence.reserve(timeline.actions.size());
    for (const auto& action : timeline.actions) {
        auto c = alphabet.encode(action);
        if (!c) {
            throw InputError("account '" + timeline.account_id + "': action type '" + action.token +
                             "' has no mapping in the alphabet");
        }
        dna.sequence.push_back(*c);
    }
    return dna;
}

std::vector<DnaSequence> encode_timelines(std::span<const AccountTimeline> timelines,
                                          const DnaAlphabet& alphabet) {
    std::vector<DnaSequence> out;
    out.reserve(timelines.size());
    for (const auto& t : timelines) out.push_back(encode_timeline(t, alphabet));
    return out;
}

// ============ Labels ============

LabelMap load_labels(std::istream& in, const std::set<std::string>* known_ids,
                     std::vector<std::string>* warnings) {
    LabelMap labels;
    std::string line;
    std::size_t line_no = 0;
    bool first_record = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        const std::string_view row = trim(line);
        if (first_record) {
            first_record = false;
            if (row == "account_id,label") continue;
        }
        const auto comma = row.find(',');
        if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
            throw InputError("expected 'account_id,label'", line_no);
        }
        const std::string id(trim(row.substr(0, comma)));
        const std::string_view token = trim(row.substr(comma + 1));
        if (id.empty()) throw InputError("empty account_id", line_no);
        const auto label = parse_label(token);
        if (!label) throw InputError("unknown label '" + std::string(token) + "'", line_no);

        if (known_ids != nullptr && !known_ids->contains(id)) {
            if (warnings != nullptr) {
                warnings->push_back("labels line " + std::to_string(line_no) + ": account '" + id +
                                    "' not in dataset, skipped");
            }
            continue;
        }
        if (!labels.emplace(id, *label).second) {
            throw InputError("duplicate label for account '" + id + "'", line_no);
        }
    }
    return labels;
}

void write_labels(std::ostream& out, std::span<const AccountTimeline> timelines) {
    out << "account_id,label\n";
    for (const auto& t : timelines) {
        if (t.label) out << t.account_id << ',' << to_string(*t.label) << '\n';
    }
}

// ============ DNA files ============

std::vector<DnaSequence> read_dna_file(std::istream& in, const DnaAlphabet& alphabet) {
    std::vector<DnaSequence> sequences;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
            throw InputError("expected 'account_id<TAB>sequence'", line_no);
        }
        DnaSequence dna{line.substr(0, tab), line.substr(tab + 1)};
        if (dna.account_id.empty()) throw InputError("empty account_id", line_no);
        if (!seen.insert(dna.account_id).second) {
            throw InputError("duplicate account_id '" + dna.account_id + "'", line_no);
        }
        for (char c : dna.sequence) {
            if (!alphabet.contains(c)) {
                throw InputError(std::string("character '") + c + "' is not in the alphabet", line_no);
            }
        }
        sequences.push_back(std::move(dna));
    }
    return sequences;
}

void write_dna_file(std::ostream& out, std::span<const DnaSequence> sequences) {
    for (const auto& dna : sequences) {
        out << dna.account_id << '\t' << dna.sequence << '\n';
    }
}

DnaTable::DnaTable(std::span<const DnaSequence> sequences) {
    for (const auto& dna : sequences) {
        if (!by_id_.emplace(dna.account_id, dna.sequence).second) {
            throw InputError("duplicate account_id '" + dna.account_id + "'");
        }
    }
}

const std::string& DnaTable::at(const std::string& account_id) const {
    auto it = by_id_.find(account_id);
    if (it == by_id_.end()) throw InputError("no DNA sequence for account '" + account_id + "'");
    return it->second;
}

QuarantineSplit split_quarantine(std::span<const DnaSequence> sequences, std::size_t min_length) {
    QuarantineSplit split;
    for (const auto& dna : sequences) {
        (dna.sequence.size() < min_length ? split.quarantined : split.kept).push_back(dna);
    }
    return split;
}

}  // namespace dnabot
