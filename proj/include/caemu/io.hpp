#pragma once

#include "caemu/complexity.hpp"
#include "caemu/rulespace.hpp"
#include "caemu/search.hpp"

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace caemu {

// emulator,emulated,k,code_for_0,code_for_1,status
void write_records_csv(std::ostream& os, const std::vector<EmulationRecord>& records);
std::vector<EmulationRecord> read_records_csv(std::istream& is, Family f);
std::string record_csv_line(const EmulationRecord& r);
EmulationRecord parse_record_csv_line(const std::string& line, Family f);

void write_records_json(std::ostream& os, const std::vector<EmulationRecord>& records);
std::vector<EmulationRecord> read_records_json(std::istream& is);

// representative,members,is_linear,wolfram_class
void write_catalog_csv(std::ostream& os, const RuleCatalog& catalog);

// rule,entropy_rate,nc_index,class_label
void write_profiles_csv(std::ostream& os, const std::vector<ComplexityProfile>& profiles);
std::vector<ComplexityProfile> read_profiles_csv(std::istream& is);

// Splits on commas; no quoting is ever needed for our columns.
std::vector<std::string> split_csv(const std::string& line);

std::vector<EmulationRecord> load_records(const std::string& path, Family f);
void save_text(const std::string& path, const std::string& content);

} // namespace caemu
