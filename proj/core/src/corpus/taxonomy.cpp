#include "respkit/corpus/taxonomy.hpp"

#include <string>

#include "respkit/util/text.hpp"

namespace respkit {

namespace {

std::string canonical_label(std::string_view s) {
    std::string out;
    for (char ch : text::ascii_lower(text::trim(s))) {
        if (ch == '_' || ch == '-') ch = ' ';
        if (ch == ' ' && (out.empty() || out.back() == ' ')) continue;
        out.push_back(ch);
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

}  // namespace

std::optional<ResponseAction> parse_action(std::string_view label) {
    std::string key = canonical_label(label);
    for (const auto& info : kActionTable) {
        if (canonical_label(info.label) == key) return info.action;
    }
    return std::nullopt;
}

std::string_view to_string(Stance s) {
    switch (s) {
        case Stance::Cooperative: return "Cooperative";
        case Stance::Defensive: return "Defensive";
        case Stance::Hedge: return "Hedge";
        case Stance::Social: return "Social";
        case Stance::Other: return "Other";
    }
    return "Other";
}

std::optional<Stance> parse_stance(std::string_view s) {
    std::string key = canonical_label(s);
    for (Stance st : {Stance::Cooperative, Stance::Defensive, Stance::Hedge, Stance::Social, Stance::Other}) {
        if (canonical_label(to_string(st)) == key) return st;
    }
    return std::nullopt;
}

std::string_view to_string(ItemType t) {
    switch (t) {
        case ItemType::Criticism: return "Criticism";
        case ItemType::Question: return "Question";
        case ItemType::Request: return "Request";
    }
    return "Criticism";
}

std::optional<ItemType> parse_item_type(std::string_view s) {
    std::string key = canonical_label(s);
    if (key == "criticism") return ItemType::Criticism;
    if (key == "question") return ItemType::Question;
    if (key == "request") return ItemType::Request;
    return std::nullopt;
}

}  // namespace respkit
