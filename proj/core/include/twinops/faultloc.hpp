#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twinops/topology.hpp"

namespace twinops::faultloc {

/// Ordered WARNING < MINOR < MAJOR < CRITICAL.
enum class Severity { Warning = 0, Minor = 1, Major = 2, Critical = 3 };

std::string_view to_string(Severity s);
/// Canonical upper-case names only; throws InvalidArgument otherwise.
Severity severity_from_name(std::string_view name);

/// Keyword classifier over free alarm text. Case-insensitive, matches whole
/// words/phrases, highest severity wins, unrecognized text is WARNING.
Severity parse_severity(std::string_view text);

struct Alarm {
  std::string element_id;
  std::string text;
  Severity severity = Severity::Warning;
  std::int64_t timestamp_ms = 0;

  bool operator==(const Alarm&) const = default;
};

/// Alarm whose severity is parsed from its text.
Alarm make_alarm(std::string element_id, std::string text, std::int64_t timestamp_ms);

struct RankedElement {
  std::string element_id;
  double score = 0.0;

  bool operator==(const RankedElement&) const = default;
};

struct Explanation {
  std::size_t alarm_index = 0;  // index into the input alarm list
  std::string element_id;       // the alarmed element
  std::string explained_by;     // highest-ranked candidate whose downstream covers it
};

struct LocalizationResult {
  std::string root_cause_id;
  std::vector<RankedElement> ranking;
  std::vector<Explanation> explained;
};

/// Multipliers applied to a candidate's score by its own (highest) severity.
struct SeverityWeights {
  double critical = 1.0;
  double major = 0.75;
  double minor = 0.5;
  double warning = 0.25;

  double of(Severity s) const;
};

/// Emits CRITICAL at `fault_element` and MAJOR at each distinct card element
/// strictly downstream of it on every path through it (path order, then route
/// order). Throws UnknownElement or NotOnAnyPath.
std::vector<Alarm> propagate_fault(const topology::TopologyGraph& graph, std::string_view fault_element);

/// Coverage-based root-cause ranking. Throws EmptyAlarms or UnknownElement.
LocalizationResult localize(const topology::TopologyGraph& graph, std::span<const Alarm> alarms,
                            const SeverityWeights& weights = {});

struct MessagePassingParams {
  int iterations = 3;
  double self_weight = 0.6;
  double neighbor_weight = 0.4;
};

/// Per-element states after message passing, in graph element order.
std::vector<double> message_passing_states(const topology::TopologyGraph& graph, std::span<const Alarm> alarms,
                                           const MessagePassingParams& params);

/// Fixed-weight reverse-signal-flow message passing. Throws EmptyAlarms,
/// UnknownElement, or InvalidArgument when iterations < 1.
LocalizationResult localize_mp(const topology::TopologyGraph& graph, std::span<const Alarm> alarms,
                               const MessagePassingParams& params = {});

}  // namespace twinops::faultloc
