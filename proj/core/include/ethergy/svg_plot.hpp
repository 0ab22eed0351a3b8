/*
   Copyright 2026 The Ethergy Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <span>
#include <string>
#include <string_view>

#include <ethergy/emissions.hpp>
#include <ethergy/energy.hpp>
#include <ethergy/pipeline.hpp>

namespace ethergy {

enum class Figure { power, efficiency, regions, factors, emissions };

/// Throws ValidationError listing the valid names on an unknown figure.
Figure figure_from_string(std::string_view name);
std::string_view to_string(Figure figure);

/// Renders one figure as a self-contained SVG document. Band figures draw the
/// low..high range as a shaded step polygon (one cell per day) behind the
/// best-estimate line; power and emissions carry a second axis with the
/// annualized equivalent. The regions stackplot needs attributions with their
/// `day` field populated and ignores `daily`.
std::string render_figure(Figure figure, std::span<const DailyEstimate> daily,
                          std::span<const BlockAttribution> attributions,
                          double hours_per_year = kHoursPerYear);

}  // namespace ethergy
