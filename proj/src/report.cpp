#include "slelab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace slelab {

namespace {

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string status_name(ClauseStatus s) {
  switch (s) {
    case ClauseStatus::kPass: return "pass";
    case ClauseStatus::kFail: return "fail";
    case ClauseStatus::kSkippedDegenerate: return "skipped-degenerate";
  }
  return "unknown";
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

Json to_json(const LemmaReport& r) {
  Json clauses = Json::array();
  for (const Clause& c : r.clauses) {
    clauses.push_back({{"id", c.id},
                       {"margin", c.margin ? finite_or_null(*c.margin) : Json(nullptr)},
                       {"pass", c.passed()},
                       {"status", status_name(c.status)}});
  }
  return {{"lemma", r.lemma},
          {"hypothesis_met", r.hypothesis_met},
          {"clauses", clauses},
          {"witness", r.witness},
          {"tol", r.tol}};
}

Json to_json(const CampaignResult& r) {
  Json tallies = Json::object();
  for (const auto& [key, t] : r.tallies) {
    Json entry = {{"evaluated", t.evaluated},
                  {"violations", t.violations},
                  {"skipped", t.skipped},
                  {"pass", t.violations == 0}};
    if (t.has_worst) {
      entry["worst_relative_margin"] = finite_or_null(t.worst_relative_margin);
      entry["worst_witness"] = t.worst_witness;
    }
    tallies[key] = entry;
  }
  return {{"constraint", r.constraint},
          {"samples", r.samples},
          {"attempts", r.attempts},
          {"seed", r.seed},
          {"lambda2_negative", r.lambda2_negative},
          {"violations", r.violations()},
          {"passed", r.passed()},
          {"clauses", tallies}};
}

void write_estimate_header(std::ostream& out) { out << "instance,quantity,value,r,y,grid\n"; }

void write_estimate_row(std::ostream& out, const EstimateRecord& rec) {
  out << std::setprecision(17);
  out << rec.instance << ',' << rec.quantity << ',' << rec.value << ',';
  if (rec.r) out << *rec.r;
  out << ',';
  for (std::size_t k = 0; k < rec.y.size(); ++k) out << (k ? ";" : "") << rec.y[k];
  out << ',' << rec.grid_points << '\n';
}

std::string estimates_csv(const std::vector<EstimateRecord>& records) {
  std::ostringstream out;
  write_estimate_header(out);
  for (const auto& r : records) write_estimate_row(out, r);
  return out.str();
}

void OutputSet::add(std::string name, std::string contents) {
  files_.emplace_back(std::move(name), std::move(contents));
}

void OutputSet::add_json(std::string name, const Json& j) { add(std::move(name), dump_json(j)); }

void OutputSet::commit(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  for (const auto& [name, contents] : files_) {
    const std::filesystem::path target = dir / name;
    const std::filesystem::path tmp = dir / (name + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + tmp.string());
      out << contents;
      if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace slelab
