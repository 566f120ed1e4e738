#pragma once

// Text formats for results. CSV numbers are printed with 17 significant
// digits; JSON documents use the shortest representation that round-trips.
//
//   spectrum  re,im,multiplicity,residual,separation,winding_radius
//   grid      re,im,re_delta,im_delta,abs_delta
//   function  x,re_f,im_f

#include <string>

#include "json.hpp"
#include "jumpspec/characteristic.hpp"
#include "jumpspec/resolvent.hpp"
#include "jumpspec/rootfinder.hpp"

namespace jumpspec {

using Json = nlohmann::ordered_json;

std::string format_number(double x);

std::string spectrum_csv(const SpectrumResult& result);
Json eigenvalue_json(const Eigenvalue& e);
Json region_json(const ContourRegion& r);
Json spectrum_json(const SpectrumResult& result);

std::string grid_csv(const GridSample& grid);
Json grid_json(const GridSample& grid);

std::string sampled_csv(const SampledFunction& f);
Json sampled_json(const SampledFunction& f);

/// Reads the function CSV format; a header line is optional, blank lines and
/// lines starting with '#' are skipped. Throws ParseError.
SampledFunction parse_sampled_csv(const std::string& text);

}  // namespace jumpspec
