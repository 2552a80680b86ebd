#include "twinops/twin.hpp"

#include "twinops/error.hpp"

namespace twinops {

LocalizeAlgo parse_localize_algo(std::string_view name) {
  if (name == "coverage" || name == "default") return LocalizeAlgo::Coverage;
  if (name == "mp") return LocalizeAlgo::MessagePassing;
  throw Error(Errc::InvalidArgument, "unknown localization algorithm '" + std::string(name) + "'");
}

faultloc::LocalizationResult run_localization(const topology::TopologyGraph& graph,
                                              std::span<const faultloc::Alarm> alarms, LocalizeAlgo algo,
                                              int iterations) {
  if (algo == LocalizeAlgo::MessagePassing) {
    faultloc::MessagePassingParams params;
    params.iterations = iterations;
    return faultloc::localize_mp(graph, alarms, params);
  }
  return faultloc::localize(graph, alarms);
}

NavAnswer navigate(const Scenario& scenario, const navmap::Grid2D& grid, const NavQuery& query) {
  NavAnswer answer;
  answer.from = query.from;
  int level = 0;
  if (query.target_element) {
    const auto& element = scenario.graph.element(*query.target_element);
    if (!element.shelf) {
      throw Error(Errc::UnknownShelf, "element '" + element.id + "' is not housed in a shelf");
    }
    const auto& info = scenario.shelf_info(*element.shelf);
    answer.to = info.rack_point;
    answer.target_shelf = info.id;
    level = info.level;
  } else if (query.to) {
    answer.to = *query.to;
  } else {
    throw Error(Errc::InvalidArgument, "navigation needs a destination point or target element");
  }
  if (query.shelf_level) level = *query.shelf_level;
  answer.shelf_level = level;

  const navmap::Cell start = grid.cell_at(scenario.point(answer.from));
  const navmap::Cell goal = grid.cell_at(scenario.point(answer.to));
  answer.path = navmap::plan_route(grid, start, goal, level, scenario.navigation.options);
  return answer;
}

CardIdAnswer identify_cards(const Scenario& scenario, const cardid::SyntheticDetector& detector,
                            const CardIdQuery& query, std::span<const faultloc::Alarm> alarms) {
  CardIdAnswer answer;
  answer.arrangements = scenario.arrangements_for_layout(query.layout);
  const cardid::FrameRef frame{query.layout, query.seed};
  if (query.jitter_sigma) {
    cardid::SyntheticDetector adjusted;
    auto layout = detector.layout(query.layout);
    layout.jitter_sigma = *query.jitter_sigma;
    adjusted.add_layout(std::move(layout));
    answer.detections = adjusted.detect(frame);
  } else {
    answer.detections = detector.detect(frame);
  }
  answer.assignment = cardid::match_slots(answer.detections, answer.arrangements, query.match);
  if (!alarms.empty()) answer.localization = faultloc::localize(scenario.graph, alarms);
  answer.overlay = cardid::overlay(answer.assignment, answer.detections, answer.arrangements,
                                   answer.localization ? &*answer.localization : nullptr, alarms);
  return answer;
}

}  // namespace twinops
