#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "slelab/estimates.hpp"
#include "slelab/lemma_campaign.hpp"
#include "slelab/spectral.hpp"

namespace slelab {

using Json = nlohmann::json;

inline constexpr std::string_view kVersion = "0.1.0";

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

/// {lemma, clauses: [{id, margin, pass, status}], witness, tol, hypothesis_met}
Json to_json(const LemmaReport& r);
Json to_json(const CampaignResult& r);

/// CSV columns: instance,quantity,value,r,y,grid. y is ';'-separated.
void write_estimate_header(std::ostream& out);
void write_estimate_row(std::ostream& out, const EstimateRecord& rec);
std::string estimates_csv(const std::vector<EstimateRecord>& records);

/// Files staged in memory and written together; nothing touches the disk
/// until commit(), which writes each file to a temporary name and renames it.
class OutputSet {
 public:
  void add(std::string name, std::string contents);
  void add_json(std::string name, const Json& j);
  /// Creates `dir` if needed.
  void commit(const std::filesystem::path& dir) const;
  const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

/// Two-space indented, keys sorted, trailing newline.
std::string dump_json(const Json& j);

}  // namespace slelab
