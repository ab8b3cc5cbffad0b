#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cgm/busemann.hpp"
#include "cgm/experiments.hpp"
#include "cgm/stationary.hpp"
#include "cgm/verification.hpp"
#include "config.hpp"

namespace cgm::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolName = "cgmlab";
inline constexpr const char* kToolVersion = "0.1.0";

Json to_json(const Gate& g);
Json gates_json(const std::vector<Gate>& gates);

Json to_json(const RunConfig& cfg);

Json to_json(const ShapeReport& r);
Json to_json(const FirstStepReport& r);
Json to_json(const MarkovReport& r);
Json to_json(const SourceDensityScan& r);
Json to_json(const MidpointReport& r);
Json to_json(const ArrowStabilityReport& r);
Json to_json(const CoalescenceReport& r);
Json to_json(const SublinearityReport& r);
Json to_json(const MarginalReport& r);
Json to_json(const DualMarginalReport& r);
Json to_json(const CocycleReport& r);
Json to_json(const DownRightLawReport& r);
Json to_json(const OracleEquivalenceReport& r);
Json to_json(const StationaryStructureReport& r);
Json to_json(const StationaryMeanReport& r);
Json to_json(const BusemannIdentityReport& r);
Json to_json(const TreeDualityReport& r);
Json to_json(const CompetitionReport& r);
Json to_json(const OrderingRunReport& r);

// Envelope with config echo, seed and wall-clock stamps. Reruns with the same
// config are byte-identical once the two timestamp fields are dropped.
Json make_manifest(const std::string& command, const RunConfig& cfg, Json data,
                   const std::vector<Gate>& gates, const std::string& started,
                   const std::string& finished);

std::string timestamp_utc();

void write_text(const std::string& path, const std::string& content);

// RFC 4180: fields quoted when they contain comma, quote or newline; CRLF rows.
std::string csv_encode(const std::vector<std::vector<std::string>>& rows);

} // namespace cgm::cli
