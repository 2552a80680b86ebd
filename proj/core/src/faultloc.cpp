#include "twinops/faultloc.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <limits>
#include <map>
#include <set>

#include "twinops/error.hpp"

namespace twinops::faultloc {

using topology::ElementKind;
using topology::TopologyGraph;

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::Critical: return "CRITICAL";
    case Severity::Major: return "MAJOR";
    case Severity::Minor: return "MINOR";
    case Severity::Warning: return "WARNING";
  }
  return "?";
}

Severity severity_from_name(std::string_view name) {
  for (auto s : {Severity::Critical, Severity::Major, Severity::Minor, Severity::Warning}) {
    if (to_string(s) == name) return s;
  }
  throw Error(Errc::InvalidArgument, "unknown severity '" + std::string(name) + "'");
}

namespace {

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

// True when `phrase` occurs in `text` bounded by non-alphanumerics on both sides.
bool contains_phrase(std::string_view text, std::string_view phrase) {
  for (auto pos = text.find(phrase); pos != std::string_view::npos; pos = text.find(phrase, pos + 1)) {
    const bool left_ok = pos == 0 || !is_word_char(text[pos - 1]);
    const auto end = pos + phrase.size();
    const bool right_ok = end == text.size() || !is_word_char(text[end]);
    if (left_ok && right_ok) return true;
  }
  return false;
}

struct KeywordRule {
  Severity severity;
  std::vector<std::string_view> phrases;
};

const std::vector<KeywordRule>& keyword_table() {
  static const std::vector<KeywordRule> table = {
      {Severity::Critical, {"failure", "loss of signal", "los"}},
      {Severity::Major, {"frame loss", "high ber"}},
      {Severity::Minor, {"degraded"}},
  };
  return table;
}

double severity_level(Severity s) { return (static_cast<int>(s) + 1) / 4.0; }

// Highest severity per alarmed element; validates ids.
std::map<std::string, Severity> alarmed_elements(const TopologyGraph& graph, std::span<const Alarm> alarms) {
  if (alarms.empty()) throw Error(Errc::EmptyAlarms, "localization needs at least one alarm");
  std::map<std::string, Severity> out;
  for (const Alarm& a : alarms) {
    if (!graph.contains(a.element_id)) throw Error(Errc::UnknownElement, "alarm on '" + a.element_id + "'");
    auto [it, inserted] = out.emplace(a.element_id, a.severity);
    if (!inserted) it->second = std::max(it->second, a.severity);
  }
  return out;
}

// {e} plus everything strictly downstream of e on any path through it.
std::set<std::string> closure(const TopologyGraph& graph, const std::string& id) {
  std::set<std::string> out{id};
  for (const auto& occ : graph.occurrences(id)) {
    const auto& route = graph.paths()[occ.path_index].route;
    out.insert(route.begin() + static_cast<std::ptrdiff_t>(occ.position) + 1, route.end());
  }
  return out;
}

std::size_t earliest_position(const TopologyGraph& graph, const std::string& id) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (const auto& occ : graph.occurrences(id)) best = std::min(best, occ.position);
  return best;
}

LocalizationResult finish_ranking(const TopologyGraph& graph, std::span<const Alarm> alarms,
                                  std::vector<RankedElement> ranking) {
  std::map<std::string, std::size_t> position;
  for (const auto& r : ranking) position[r.element_id] = earliest_position(graph, r.element_id);
  std::sort(ranking.begin(), ranking.end(), [&](const RankedElement& a, const RankedElement& b) {
    // Relative tolerance so mathematically equal scores tie under any weight scale.
    if (std::abs(a.score - b.score) > 1e-12 * std::max(std::abs(a.score), std::abs(b.score))) {
      return a.score > b.score;
    }
    const auto pa = position[a.element_id];
    const auto pb = position[b.element_id];
    if (pa != pb) return pa < pb;
    return a.element_id < b.element_id;
  });

  std::vector<std::set<std::string>> closures;
  closures.reserve(ranking.size());
  for (const auto& r : ranking) closures.push_back(closure(graph, r.element_id));

  LocalizationResult result;
  result.root_cause_id = ranking.front().element_id;
  for (std::size_t i = 0; i < alarms.size(); ++i) {
    for (std::size_t c = 0; c < ranking.size(); ++c) {
      if (closures[c].count(alarms[i].element_id)) {
        result.explained.push_back({i, alarms[i].element_id, ranking[c].element_id});
        break;
      }
    }
  }
  result.ranking = std::move(ranking);
  return result;
}

}  // namespace

Severity parse_severity(std::string_view text) {
  std::string lowered(text);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (const auto& rule : keyword_table()) {
    for (auto phrase : rule.phrases) {
      if (contains_phrase(lowered, phrase)) return rule.severity;
    }
  }
  return Severity::Warning;
}

Alarm make_alarm(std::string element_id, std::string text, std::int64_t timestamp_ms) {
  const Severity s = parse_severity(text);
  return {std::move(element_id), std::move(text), s, timestamp_ms};
}

double SeverityWeights::of(Severity s) const {
  switch (s) {
    case Severity::Critical: return critical;
    case Severity::Major: return major;
    case Severity::Minor: return minor;
    case Severity::Warning: return warning;
  }
  return 0.0;
}

std::vector<Alarm> propagate_fault(const TopologyGraph& graph, std::string_view fault_element) {
  const auto& fault = graph.element(fault_element);
  const auto& occurrences = graph.occurrences(fault_element);
  if (occurrences.empty()) throw Error(Errc::NotOnAnyPath, "'" + fault.id + "'");

  std::vector<Alarm> alarms;
  alarms.push_back({fault.id, "Loss of signal - card failure", Severity::Critical, 0});
  std::set<std::string> emitted{fault.id};
  std::int64_t ts = 0;
  for (const auto& occ : occurrences) {
    const auto& route = graph.paths()[occ.path_index].route;
    for (std::size_t k = occ.position + 1; k < route.size(); ++k) {
      const auto& id = route[k];
      if (graph.element(id).kind == ElementKind::FiberSpan) continue;
      if (!emitted.insert(id).second) continue;
      alarms.push_back({id, "Frame loss on line port", Severity::Major, ++ts});
    }
  }
  return alarms;
}

LocalizationResult localize(const TopologyGraph& graph, std::span<const Alarm> alarms,
                            const SeverityWeights& weights) {
  const auto alarmed = alarmed_elements(graph, alarms);
  const auto denominator = static_cast<double>(alarmed.size());

  std::vector<RankedElement> ranking;
  for (const auto& [id, severity] : alarmed) {
    const auto reach = closure(graph, id);
    std::size_t coverage = 0;
    for (const auto& [other, _] : alarmed) coverage += reach.count(other);
    ranking.push_back({id, static_cast<double>(coverage) / denominator * weights.of(severity)});
  }
  return finish_ranking(graph, alarms, std::move(ranking));
}

std::vector<double> message_passing_states(const TopologyGraph& graph, std::span<const Alarm> alarms,
                                           const MessagePassingParams& params) {
  if (params.iterations < 1) throw Error(Errc::InvalidArgument, "message passing needs at least one iteration");
  if (params.self_weight < 0 || params.neighbor_weight < 0 || params.self_weight + params.neighbor_weight > 1.0) {
    throw Error(Errc::InvalidArgument, "message passing weights must be non-negative and sum to at most 1");
  }
  const auto alarmed = alarmed_elements(graph, alarms);
  const auto& elements = graph.elements();
  const std::size_t n = elements.size();

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[elements[i].id] = i;

  std::vector<double> evidence(n, 0.0);
  for (const auto& [id, severity] : alarmed) evidence[index.at(id)] = severity_level(severity);

  // Silent elements (spans never alarm) relay messages unattenuated, so each
  // element listens to the nearest alarmed elements downstream of it.
  auto transparent = [&](std::size_t i) { return evidence[i] == 0.0; };
  std::vector<std::vector<std::size_t>> neighbors(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> stack;
    std::set<std::size_t> visited{i};
    for (const auto& s : graph.successors(elements[i].id)) stack.push_back(index.at(s));
    while (!stack.empty()) {
      const auto j = stack.back();
      stack.pop_back();
      if (!visited.insert(j).second) continue;
      if (transparent(j)) {
        for (const auto& s : graph.successors(elements[j].id)) stack.push_back(index.at(s));
      } else {
        neighbors[i].push_back(j);
      }
    }
  }

  std::vector<double> state = evidence;
  std::vector<double> next(n);
  for (int k = 0; k < params.iterations; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      double incoming = 0.0;
      for (auto j : neighbors[i]) incoming = std::max(incoming, state[j]);
      next[i] = params.self_weight * evidence[i] + params.neighbor_weight * incoming;
    }
    state.swap(next);
  }
  return state;
}

LocalizationResult localize_mp(const TopologyGraph& graph, std::span<const Alarm> alarms,
                               const MessagePassingParams& params) {
  const auto state = message_passing_states(graph, alarms, params);
  const auto alarmed = alarmed_elements(graph, alarms);
  std::vector<RankedElement> ranking;
  const auto& elements = graph.elements();
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (alarmed.count(elements[i].id)) ranking.push_back({elements[i].id, state[i]});
  }
  return finish_ranking(graph, alarms, std::move(ranking));
}

}  // namespace twinops::faultloc
