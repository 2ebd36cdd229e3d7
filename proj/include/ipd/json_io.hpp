#pragma once

#include <string>

#include <json.hpp>

#include "ipd/ballgeom.hpp"
#include "ipd/bounds.hpp"
#include "ipd/density.hpp"
#include "ipd/distances.hpp"
#include "ipd/empirics.hpp"

namespace ipd::json_io {

using nlohmann::json;

json distance_to_json(const distances::DistanceSpec& spec);
distances::DistanceSpec distance_from_json(const json& j);

json density_to_json(const DensitySpec& d);
DensitySpec density_from_json(const json& j);

json to_json(const ballgeom::VolumeEstimate& v);
json to_json(const ballgeom::VolumeBounds& v);
json to_json(const ballgeom::RegularityReport& r);
json to_json(const ballgeom::AhlforsFit& f);
json to_json(const empirics::EcdfTriple& t);
json to_json(const empirics::DiscrepancyReport& d);
json to_json(const empirics::TestResult& r);
json to_json(const bounds::L2Report& r);
json to_json(const bounds::McEstimate& e);
json to_json(const bounds::DeltaKEstimate& e);
json to_json(const bounds::BoundCheck& c);
json to_json(const bounds::RateFit& f);

// Stamps "schema": 1 and writes dump(2) plus trailing newline atomically.
// Keys are emitted sorted, so identical reports are byte-identical files.
void write_report(const std::string& path, json report);

// Parses text as JSON; io_failure on malformed input.
json parse(const std::string& text, const std::string& what);

}  // namespace ipd::json_io
