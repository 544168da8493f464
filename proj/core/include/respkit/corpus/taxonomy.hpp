#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace respkit {

/// Review item types addressed by a response.
enum class ItemType { Criticism, Question, Request };

/// Stance classes that group response actions.
enum class Stance { Cooperative, Defensive, Hedge, Social, Other };

inline constexpr std::size_t kStanceCount = 5;

/// The closed 16-label response action taxonomy.
enum class ResponseAction {
    AnswerQuestion,
    TaskHasBeenDone,
    TaskWillBeDoneInNextVersion,
    AcceptForFutureWork,
    ConcedeCriticism,
    RefuteQuestion,
    RejectCriticism,
    ContradictAssertion,
    RejectRequest,
    MitigateImportanceOfTheQuestion,
    MitigateCriticism,
    Social,
    FollowUpQuestion,
    Structure,
    Summarize,
    Other,
};

inline constexpr std::size_t kActionCount = 16;

struct ActionInfo {
    ResponseAction action;
    std::string_view label;
    Stance stance;
    std::string_view definition;
};

inline constexpr std::array<ActionInfo, kActionCount> kActionTable{{
    {ResponseAction::AnswerQuestion, "answer question", Stance::Cooperative, "answer a question"},
    {ResponseAction::TaskHasBeenDone, "task has been done", Stance::Cooperative,
     "claim that a requested task has been completed"},
    {ResponseAction::TaskWillBeDoneInNextVersion, "task will be done in next version", Stance::Cooperative,
     "claim that a requested task will be completed in resubmission"},
    {ResponseAction::AcceptForFutureWork, "accept for future work", Stance::Cooperative,
     "express approval for a suggestion, but for future work"},
    {ResponseAction::ConcedeCriticism, "concede criticism", Stance::Cooperative, "accept a criticism"},
    {ResponseAction::RefuteQuestion, "refute question", Stance::Defensive, "reject the validity of a question"},
    {ResponseAction::RejectCriticism, "reject criticism", Stance::Defensive, "reject the validity of a criticism"},
    {ResponseAction::ContradictAssertion, "contradict assertion", Stance::Defensive,
     "contradict a statement presented as a fact"},
    {ResponseAction::RejectRequest, "reject request", Stance::Defensive, "reject a request from a reviewer"},
    {ResponseAction::MitigateImportanceOfTheQuestion, "mitigate importance of the question", Stance::Hedge,
     "mitigate the importance of a question"},
    {ResponseAction::MitigateCriticism, "mitigate criticism", Stance::Hedge,
     "mitigate the importance of a criticism"},
    {ResponseAction::Social, "social", Stance::Social, "non-substantive social text"},
    {ResponseAction::FollowUpQuestion, "follow-up question", Stance::Other,
     "clarification question addressed to the reviewer"},
    {ResponseAction::Structure, "structure", Stance::Other, "text used to organize sections of the response"},
    {ResponseAction::Summarize, "summarize", Stance::Other, "summary of the response text"},
    {ResponseAction::Other, "other", Stance::Other, "all other sentences"},
}};

constexpr const ActionInfo& action_info(ResponseAction a) { return kActionTable[static_cast<std::size_t>(a)]; }
constexpr std::string_view to_string(ResponseAction a) { return action_info(a).label; }
constexpr Stance stance_of(ResponseAction a) { return action_info(a).stance; }

/// Case-insensitive lookup. '_', '-' and runs of spaces are treated as one separator,
/// so "follow-up question", "follow_up_question" and "Follow up question" all match.
std::optional<ResponseAction> parse_action(std::string_view label);

std::string_view to_string(Stance s);
std::optional<Stance> parse_stance(std::string_view s);

std::string_view to_string(ItemType t);
std::optional<ItemType> parse_item_type(std::string_view s);

}  // namespace respkit
