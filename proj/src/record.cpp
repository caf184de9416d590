#include "soundscape/record.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string_view>
#include <utility>

namespace soundscape {

namespace {

void append_json_string(std::string& out, std::string_view s) {
  out.push_back('"');
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
}

// Shortest decimal representation that parses back to the same double.
void append_double(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

// null for -inf/NaN, setting `flagged` so the caller can attach a quality flag.
void append_double_or_null(std::string& out, double v, bool& flagged) {
  if (std::isfinite(v)) {
    append_double(out, v);
  } else {
    out += "null";
    flagged = true;
  }
}

void append_array(std::string& out, const Eigen::ArrayXd& values, bool& flagged) {
  out.push_back('[');
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (i > 0) out.push_back(',');
    append_double_or_null(out, values[i], flagged);
  }
  out.push_back(']');
}

}  // namespace

std::string to_ndjson(const FileHeader& header) {
  std::string out = R"({"schema":1,"type":"file_header","file":)";
  append_json_string(out, header.source.name);
  out += ",\"start_time\":";
  append_json_string(out, format_iso8601(header.source.start_instant));
  out += ",\"sample_rate\":";
  append_double(out, header.source.sample_rate);
  out += ",\"bit_depth\":" + std::to_string(header.source.bit_depth);
  out += ",\"n_channels\":" + std::to_string(header.source.n_channels);
  out += ",\"n_samples\":" + std::to_string(header.source.n_samples);
  out += ",\"segment_duration\":";
  append_double(out, header.segmentation.segment_duration);
  out += ",\"window_size\":" + std::to_string(header.segmentation.window_size);
  out += ",\"window_overlap\":" + std::to_string(header.segmentation.window_overlap);
  out += ",\"nfft\":" + std::to_string(header.segmentation.nfft);
  out += ",\"window_kind\":";
  append_json_string(out, to_string(header.segmentation.window_kind));
  out += ",\"frequency_step\":";
  append_double(out, header.frequency_step);
  out += ",\"spectrum_bins\":" + std::to_string(header.spectrum_bins);
  if (header.bands) {
    out += ",\"tol_center_hz\":[";
    for (Eigen::Index i = 0; i < header.bands->band_centers.size(); ++i) {
      if (i > 0) out.push_back(',');
      append_double(out, header.bands->band_centers[i]);
    }
    out += "],\"tol_nominal\":[";
    for (std::size_t i = 0; i < header.bands->band_indices.size(); ++i) {
      if (i > 0) out.push_back(',');
      append_json_string(out, nominal_band_label(header.bands->band_indices[i]));
    }
    out += "]";
  }
  out.push_back('}');
  return out;
}

std::string to_ndjson(const MetricRecord& record) {
  bool spl_flag = false, welch_flag = false, tol_flag = false;

  std::string out = R"({"schema":1,"type":"record","file":)";
  append_json_string(out, record.file);
  out += ",\"segment_index\":" + std::to_string(record.segment_index);
  out += ",\"timestamp\":";
  append_json_string(out, format_iso8601(record.timestamp));
  out += ",\"spl_db\":";
  append_double_or_null(out, record.result.spl_db, spl_flag);
  out += ",\"welch\":";
  append_array(out, record.result.welch.values, welch_flag);
  out += ",\"tol\":";
  if (record.result.tol_db) {
    append_array(out, *record.result.tol_db, tol_flag);
  } else {
    out += "null";
  }
  if (spl_flag || welch_flag || tol_flag) {
    out += ",\"quality\":[";
    bool first = true;
    for (const auto& [set, name] : {std::pair{spl_flag, "spl_nonfinite"},
                                    std::pair{welch_flag, "welch_nonfinite"},
                                    std::pair{tol_flag, "tol_nonfinite"}}) {
      if (!set) continue;
      if (!first) out.push_back(',');
      append_json_string(out, name);
      first = false;
    }
    out += "]";
  }
  out.push_back('}');
  return out;
}

void emit_record(const MetricRecord& record, std::ostream& sink) {
  sink << to_ndjson(record) << '\n';
}

std::string csv_column_row(const FileHeader& header) {
  std::string out = "file,segment_index,timestamp,spl_db";
  for (Eigen::Index i = 0; i < header.spectrum_bins; ++i)
    out += ",welch_" + std::to_string(i);
  if (header.bands)
    for (std::size_t i = 0; i < header.bands->size(); ++i)
      out += ",tol_" + std::to_string(i);
  return out;
}

std::string to_csv_row(const MetricRecord& record) {
  std::string out;
  const bool quote = record.file.find_first_of(",\"\n") != std::string::npos;
  if (quote) {
    out.push_back('"');
    for (const char c : record.file) {
      out.push_back(c);
      if (c == '"') out.push_back('"');
    }
    out.push_back('"');
  } else {
    out += record.file;
  }
  out += ',' + std::to_string(record.segment_index);
  out += ',' + format_iso8601(record.timestamp);
  out.push_back(',');
  // Empty cells stand in for non-finite values, mirroring NDJSON's null.
  if (std::isfinite(record.result.spl_db)) append_double(out, record.result.spl_db);
  for (Eigen::Index i = 0; i < record.result.welch.values.size(); ++i) {
    out.push_back(',');
    if (std::isfinite(record.result.welch.values[i]))
      append_double(out, record.result.welch.values[i]);
  }
  if (record.result.tol_db) {
    for (Eigen::Index i = 0; i < record.result.tol_db->size(); ++i) {
      out.push_back(',');
      if (std::isfinite((*record.result.tol_db)[i]))
        append_double(out, (*record.result.tol_db)[i]);
    }
  }
  return out;
}

}  // namespace soundscape
