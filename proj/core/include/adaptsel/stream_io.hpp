#pragma once

#include <string>
#include <vector>

#include "adaptsel/types.hpp"

namespace adaptsel {

// Declaration stream CSV with the fixed header
//   id,week,fob_value,gross_weight,quantity,tariff_code,importer_id,
//   declarant_id,office_id,illicit,revenue
// Doubles are written in shortest round-trip form, so write -> read is an
// identity. read_stream_csv raises DataError (with the offending line
// number) on malformed rows, schema mismatches, non-positive numeric
// fields, or non-contiguous week numbering.
void write_stream_csv(const std::vector<WeekBatch>& stream,
                      const std::string& path);
std::vector<WeekBatch> read_stream_csv(const std::string& path);

}  // namespace adaptsel
