#pragma once

#include <iosfwd>
#include <string>

#include "twinops/twin.hpp"

namespace twinops::cli {

/// Fixed-point formatting with `digits` decimals.
std::string fixed(double value, int digits);

void print_localization(std::ostream& out, const faultloc::LocalizationResult& result,
                        std::span<const faultloc::Alarm> alarms);
void print_navigation(std::ostream& out, const NavAnswer& answer, const navmap::Grid2D& grid);
/// Top-down map, north up: '#' blocked, '.' free, '*' route, arrows as
/// direction glyphs, 'S' start and 'F' flag.
void render_route(std::ostream& out, const navmap::Grid2D& grid, const navmap::NavPath& path);
void print_card_id(std::ostream& out, const std::string& layout, const CardIdAnswer& answer);
void print_qos(std::ostream& out, const netqos::LinkSpec& link, const netqos::MeterSpec& meter,
               const netqos::QosReport& report);

}  // namespace twinops::cli
