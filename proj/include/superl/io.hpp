#pragma once
// Artifact serialization: field files, family specs, reports, run manifests,
// and the flat key=value config format. All JSON is emitted with sorted keys
// and shortest round-trip floats so identical runs are byte-identical; the
// manifest deliberately carries no timestamps.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>

#include "json.hpp"
#include "superl/blowup.hpp"
#include "superl/diagnostics.hpp"
#include "superl/fields.hpp"
#include "superl/solver.hpp"

namespace superl {

inline constexpr const char* kToolVersion = "1.0.0";

nlohmann::json domain_to_json(const Domain& d);
Domain domain_from_json(const nlohmann::json& j);

/// Field file: <path> holds the JSON header (grid descriptor, array table,
/// vanished flag); the samples live in a sidecar named like <path> with a
/// .bin extension — five row-major little-endian f64 arrays
/// (u, psi_re1, psi_im1, psi_re2, psi_im2).
void write_fields(const std::filesystem::path& path, const ScalarField& u,
                  const SpinorField& psi);
std::pair<ScalarField, SpinorField> read_fields(const std::filesystem::path& path);

nlohmann::json family_spec_to_json(const FamilySpec& spec);
FamilySpec family_spec_from_json(const nlohmann::json& j);
FamilySpec load_family_spec(const std::filesystem::path& path);

nlohmann::json to_json(const SolveReport& r);
nlohmann::json to_json(const AuditReport& r);
nlohmann::json to_json(const QuantizationAudit& r);
nlohmann::json to_json(const BMClassification& r);
nlohmann::json to_json(const SingularityReport& r);
nlohmann::json to_json(const FamilyReport& r);

/// Header: n,mass,neck_sup,defect_psi4,defect_e2u,label
std::string audit_csv(const AuditReport& r);
/// Header: index,mass,pohozaev,neck_sup,a_n,label
std::string report_csv(const FamilyReport& r);

/// key=value lines; '#' starts a comment, blank lines are skipped, later
/// assignments win. Throws ConfigError on lines without '='.
std::map<std::string, std::string> parse_config(const std::string& text);
std::map<std::string, std::string> load_config(const std::filesystem::path& path);

/// 64-bit FNV-1a over the sorted "key=value\n" rendering of the config.
std::uint64_t config_hash(const std::map<std::string, std::string>& config);

/// Run manifest: embedded config, its hash, grid shape (null when no grid
/// was built), tool version. No timestamps: reruns must be byte-identical.
nlohmann::json make_manifest(const std::map<std::string, std::string>& config,
                             const Grid* grid);

/// Shortest round-trip decimal rendering (to_chars); used by every CSV.
std::string format_double(double v);

}  // namespace superl
