// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "trajforge/core.hpp"

namespace trajforge::prompts {

// Bump whenever any text below changes; manifests record it.
inline constexpr std::string_view kAssetVersion = "prompts-v1";

inline constexpr std::string_view kHouseholdRequirements =
    R"(You control an agent inside a simulated home. The first message states a goal; every later message reports what happened after your previous action.
Reply to each message with one step in exactly this form:
Thought: a short note on the situation and what to do next
Action: one action from the list below
Actions:
1. go to {location}
2. take {object} from {location}
3. put {object} in {receptacle}
4. heat {object} with {microwave}
5. cool {object} with {fridge}
6. look
7. inventory
Use names exactly as they appear in observations. An action is only possible where it makes sense: you must be at a location to take something from it or put something in it, and you can hold one object at a time.
The observation "Nothing happens." means your last action had no effect.)";

inline constexpr std::string_view kShoppingRequirements =
    R"(You control a shopper on a small online store. The first message describes the product to buy; every later message shows the page you are on.
Reply to each message with one step in exactly this form:
Thought: a short note on the situation and what to do next
Action: one action
Actions:
search[keywords]   available on every page
click[item id]     open an item listed in the current results
click[buy now]     buy the item whose page is open
click[back]        return to the results
Only the listed actions are possible. Pick keywords that narrow the results to items with the requested attributes, and check the price before buying.
The observation "Nothing happens." means your last action had no effect.)";

inline constexpr std::string_view kScienceRequirements =
    R"(You control an agent carrying out a science experiment in a simulated building with several rooms.
Reply to each message with one step in exactly this form:
Thought: a short note on the situation and what to do next
Action: one action
The observation "Nothing happens." means your last action had no effect.)";

inline std::string_view task_requirements(TaskKind kind) {
  switch (kind) {
    case TaskKind::household: return kHouseholdRequirements;
    case TaskKind::shopping: return kShoppingRequirements;
    case TaskKind::science_stub: return kScienceRequirements;
  }
  return {};
}

// Worked example prepended to the system message in one-shot mode.
inline constexpr std::string_view kHouseholdExample =
    R"(Here is an example.
Task: put the book in the shelf.
Thought: I need to find the book first.
Action: go to desk
Observation: You arrive at the desk. Here you see: a book.
Thought: I found the book at the desk. I should pick it up.
Action: take book from desk
Observation: You pick up the book from the desk.
Thought: Next, I need to put the book in the shelf.
Action: go to shelf
Observation: You arrive at the shelf. Here you see: nothing.
Thought: I am at the shelf with the book. I will put it in.
Action: put book in shelf
Observation: You put the book in the shelf.)";

inline constexpr std::string_view kShoppingExample =
    R"(Here is an example.
Task: Find me a hat item that is black and wool, with price lower than 20.00 dollars.
Thought: I should search for hat items that could match the requirements.
Action: search[hat]
Observation: Results for "hat": [P004] black wool hat $15.00 | [P007] white cotton hat $9.00
Thought: Item P004 looks like it is black and wool within my budget. I will check it.
Action: click[P004]
Observation: [P004] black wool hat | attributes: black, wool | price: $15.00 | Actions: click[buy now], click[back]
Thought: This item satisfies the requirements. I will buy it.
Action: click[buy now])";

inline std::string_view one_shot_example(TaskKind kind) {
  switch (kind) {
    case TaskKind::household: return kHouseholdExample;
    case TaskKind::shopping: return kShoppingExample;
    case TaskKind::science_stub: return {};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Teacher prompt pieces.

inline constexpr std::string_view kTeacherRole =
    R"(You are a strict and experienced teacher supervising an agent that is learning to complete interactive tasks. The agent works step by step: at each step it writes a thought and an action, and the environment returns an observation.
Below you will find the definition and requirements of the agent task, the instruction the agent must complete, the interaction history so far, the thought and action the agent produced at the current step, and the observation the environment returned for it.
Judge whether the current action is correct and reasonable for completing the instruction.
If the action is correct, output only: yes
If the action is incorrect, speak as the agent in the first person and output exactly these four lines:
ERROR: what I did wrong in this step
REASON: why this step was wrong
REFLECTION: what I learned and should keep in mind from now on
ACTION: the single action I should take next to correct the mistake
The ACTION line must be a valid action for the task, written on one line.)";

inline constexpr std::string_view kHouseholdConsiderations =
    R"(Considerations:
1. An object must be taken from the location where it currently is, and the agent must be at that location.
2. If the task asks for a heated or cooled object, the object must be heated with the microwave or cooled with the fridge before it is put in the target receptacle.
3. "Nothing happens." means the action was invalid in the current state.
4. Visiting a location unrelated to the goal object or receptacle is a wasted step.)";

inline constexpr std::string_view kShoppingConsiderations =
    R"(Considerations:
1. Search keywords should target the product category and required attributes.
2. Only click items whose attributes and price satisfy the instruction.
3. Buying an item that misses a required attribute or exceeds the price ceiling is an error.
4. "Nothing happens." means the action was invalid on the current page.)";

inline constexpr std::string_view kScienceConsiderations =
    R"(Considerations:
1. Follow the experimental procedure described in the instruction.
2. "Nothing happens." means the action was invalid in the current state.)";

inline std::string_view teacher_considerations(TaskKind kind) {
  switch (kind) {
    case TaskKind::household: return kHouseholdConsiderations;
    case TaskKind::shopping: return kShoppingConsiderations;
    case TaskKind::science_stub: return kScienceConsiderations;
  }
  return {};
}

// First-person template that turns an error verdict into a correction thought.
inline constexpr std::string_view kCorrectionOpening = "I made a mistake in my last step: ";
inline constexpr std::string_view kCorrectionReason = " The reason is that ";
inline constexpr std::string_view kCorrectionReflection = " On reflection, ";
inline constexpr std::string_view kCorrectionClosing = " I will correct it now.";

}  // namespace trajforge::prompts
