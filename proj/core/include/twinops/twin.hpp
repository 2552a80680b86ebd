#pragma once

// Scenario-level workflows shared by the CLI and the edge service.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twinops/scenario.hpp"

namespace twinops {

enum class LocalizeAlgo { Coverage, MessagePassing };

/// Accepts "coverage" (alias "default") and "mp". Throws InvalidArgument.
LocalizeAlgo parse_localize_algo(std::string_view name);

faultloc::LocalizationResult run_localization(const topology::TopologyGraph& graph,
                                              std::span<const faultloc::Alarm> alarms, LocalizeAlgo algo,
                                              int iterations = 3);

struct NavQuery {
  std::string from;
  std::optional<std::string> to;              // named point
  std::optional<std::string> target_element;  // navigate to the rack holding this card
  std::optional<int> shelf_level;             // overrides the level derived from the target
};

struct NavAnswer {
  std::string from;
  std::string to;
  int shelf_level = 0;
  std::optional<std::string> target_shelf;
  navmap::NavPath path;
};

/// Resolves named points (and a target card's rack/shelf level) and plans the
/// route. Throws UnknownPoint, UnknownElement, UnknownShelf and navmap errors.
NavAnswer navigate(const Scenario& scenario, const navmap::Grid2D& grid, const NavQuery& query);

struct CardIdQuery {
  std::string layout;
  std::uint64_t seed = 0;
  std::optional<double> jitter_sigma;
  cardid::MatchOptions match;
};

struct CardIdAnswer {
  std::vector<topology::ShelfArrangement> arrangements;
  std::vector<cardid::Detection> detections;
  cardid::SlotAssignment assignment;
  std::optional<faultloc::LocalizationResult> localization;
  cardid::OverlayReport overlay;
};

/// Synthetic frame -> detections -> slot matching -> localization (when there
/// are alarms) -> colour overlay.
CardIdAnswer identify_cards(const Scenario& scenario, const cardid::SyntheticDetector& detector,
                            const CardIdQuery& query, std::span<const faultloc::Alarm> alarms);

}  // namespace twinops
