#ifndef CLANSIM_RECORDS_HPP
#define CLANSIM_RECORDS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "clansim/config.hpp"
#include "clansim/diagnostics.hpp"
#include "clansim/oracle.hpp"
#include "clansim/sampler.hpp"

namespace clansim {

/// First line of a sample file. Carries the canonical config (threads
/// normalized) so readers can rebuild the model.
std::string sample_header(const RunSpec& spec, const std::string& kind);

/// One JSON object per line with fields, in order: index, model, window,
/// individuals, clan_depth, clan_size, truncated.
std::string sample_record(const WindowSample& s, const RunSpec& spec, const Model& m);

std::string ledger_header(const RunSpec& spec);
std::string ledger_record(const LedgerEntry& e);
std::string ledger_summary_record(const LedgerSummary& s);

/// One line per support point: key, probability, individuals.
std::string law_records(const ExactLaw& law, const RunSpec& spec, const Model& m);

struct SampleRecord {
  std::uint64_t index = 0;
  Configuration configuration;
  double clan_depth = 0.0;
  std::uint64_t clan_size = 0;
  bool truncated = false;
};

struct SampleFile {
  std::string kind;    // "perfect" or "stationary"
  std::string model;
  std::string config;  // canonical config text from the header
  std::vector<SampleRecord> records;
};

/// Throws Error(Io) on malformed input.
SampleFile parse_sample_file(const std::string& text);

/// JSON form of an individual and back.
std::string individual_json(const Individual& g, const Model& m);
Individual individual_from_json(const std::string& json);

}  // namespace clansim

#endif  // CLANSIM_RECORDS_HPP
