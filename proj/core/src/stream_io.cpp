#include "adaptsel/stream_io.hpp"

#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <limits>
#include <string>
#include <system_error>

#include "adaptsel/errors.hpp"

namespace adaptsel {
namespace {

constexpr const char* kHeader =
    "id,week,fob_value,gross_weight,quantity,tariff_code,importer_id,"
    "declarant_id,office_id,illicit,revenue";

void append_double(std::string& out, double v) {
  std::array<char, 40> buf;
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), res.ptr);
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw DataError("stream csv line " + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& field, std::size_t line_no,
                    const char* name) {
  double v = 0.0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    fail(line_no, std::string("bad ") + name + " value '" + field + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& field, std::size_t line_no,
                        const char* name) {
  std::uint64_t v = 0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    fail(line_no, std::string("bad ") + name + " value '" + field + "'");
  }
  return v;
}

}  // namespace

void write_stream_csv(const std::vector<WeekBatch>& stream,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  std::string buf;
  buf.reserve(1 << 20);
  buf += kHeader;
  buf += '\n';
  for (const WeekBatch& wb : stream) {
    for (const Declaration& d : wb.items) {
      buf += std::to_string(d.id);
      buf += ',';
      buf += std::to_string(wb.week);
      buf += ',';
      append_double(buf, d.fob_value);
      buf += ',';
      append_double(buf, d.gross_weight);
      buf += ',';
      append_double(buf, d.quantity);
      buf += ',';
      buf += d.tariff_code;
      buf += ',';
      buf += d.importer_id;
      buf += ',';
      buf += d.declarant_id;
      buf += ',';
      buf += d.office_id;
      buf += ',';
      buf += d.outcome.evaluation().illicit ? '1' : '0';
      buf += ',';
      append_double(buf, d.outcome.evaluation().revenue);
      buf += '\n';
      if (buf.size() > (1 << 20)) {
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        buf.clear();
      }
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw DataError("write failed for '" + path + "'");
}

std::vector<WeekBatch> read_stream_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw DataError("'" + path + "': no data");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) {
    throw DataError("'" + path + "': unexpected header '" + line +
                    "' (expected '" + kHeader + "')");
  }

  std::vector<WeekBatch> stream;
  std::array<std::string, 11> fields;
  std::size_t line_no = 1;
  bool saw_row = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::size_t start = 0;
    std::size_t nf = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      std::string field = (comma == std::string::npos)
                              ? line.substr(start)
                              : line.substr(start, comma - start);
      if (nf >= fields.size()) fail(line_no, "too many columns");
      fields[nf++] = std::move(field);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (nf != fields.size()) {
      fail(line_no, "expected 11 columns, got " + std::to_string(nf));
    }

    Declaration d;
    d.id = parse_u64(fields[0], line_no, "id");
    std::uint64_t week = parse_u64(fields[1], line_no, "week");
    if (week > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) {
      fail(line_no, "week out of range");
    }
    d.week = static_cast<int>(week);
    d.fob_value = parse_double(fields[2], line_no, "fob_value");
    d.gross_weight = parse_double(fields[3], line_no, "gross_weight");
    d.quantity = parse_double(fields[4], line_no, "quantity");
    d.tariff_code = fields[5];
    d.importer_id = fields[6];
    d.declarant_id = fields[7];
    d.office_id = fields[8];
    if (fields[9] != "0" && fields[9] != "1") {
      fail(line_no, "illicit must be 0 or 1, got '" + fields[9] + "'");
    }
    bool illicit = fields[9] == "1";
    double revenue = parse_double(fields[10], line_no, "revenue");

    if (!(d.fob_value > 0.0)) {
      fail(line_no, "fob_value must be positive for id " +
                        std::to_string(d.id));
    }
    if (!(d.gross_weight > 0.0)) {
      fail(line_no, "gross_weight must be positive for id " +
                        std::to_string(d.id));
    }
    if (!(d.quantity > 0.0)) {
      fail(line_no,
           "quantity must be positive for id " + std::to_string(d.id));
    }
    if (revenue < 0.0) fail(line_no, "revenue must be non-negative");
    if (d.tariff_code.empty() || d.importer_id.empty() ||
        d.declarant_id.empty() || d.office_id.empty()) {
      fail(line_no, "empty token field");
    }
    d.outcome = SealedOutcome({illicit, revenue});

    if (stream.empty()) {
      if (d.week != 0) {
        fail(line_no, "weeks must start at 0, got " + fields[1]);
      }
      stream.push_back({d.week, {}});
    } else if (d.week != stream.back().week) {
      if (d.week != stream.back().week + 1) {
        fail(line_no, "week gap: " + std::to_string(stream.back().week) +
                          " followed by " + fields[1]);
      }
      stream.push_back({d.week, {}});
    }
    stream.back().items.push_back(std::move(d));
    saw_row = true;
  }
  if (!saw_row) throw DataError("'" + path + "': no data");
  return stream;
}

}  // namespace adaptsel
