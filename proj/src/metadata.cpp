#include "soundscape/metadata.hpp"

#include <unordered_set>

#include "soundscape/errors.hpp"

namespace soundscape {

namespace {

// Splits one CSV line into fields. Quoted fields may contain commas and
// doubled quotes; embedded newlines are not supported.
std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  std::size_t i = 0;
  while (true) {
    field.clear();
    if (i < line.size() && line[i] == '"') {
      ++i;
      while (i < line.size()) {
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field.push_back('"');
            i += 2;
          } else {
            ++i;
            break;
          }
        } else {
          field.push_back(line[i++]);
        }
      }
    } else {
      while (i < line.size() && line[i] != ',') field.push_back(line[i++]);
    }
    fields.push_back(field);
    if (i < line.size() && line[i] == ',') {
      ++i;
      continue;
    }
    break;
  }
  return fields;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  // A trailing newline does not introduce an empty last row.
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

}  // namespace

std::vector<AudioFileDescriptor> parse_metadata(std::string_view csv_text) {
  // Tolerate a UTF-8 BOM in front of the header.
  if (csv_text.substr(0, 3) == "\xef\xbb\xbf") csv_text.remove_prefix(3);

  const auto lines = split_lines(csv_text);
  if (lines.empty()) throw MetadataSchemaError("metadata CSV is empty");

  const auto header = split_csv_line(lines[0]);
  std::ptrdiff_t name_col = -1, date_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "filename") name_col = static_cast<std::ptrdiff_t>(i);
    if (header[i] == "start_date") date_col = static_cast<std::ptrdiff_t>(i);
  }
  if (name_col < 0) throw MetadataSchemaError("metadata CSV has no `filename` column");
  if (date_col < 0) throw MetadataSchemaError("metadata CSV has no `start_date` column");

  std::vector<AudioFileDescriptor> out;
  std::unordered_set<std::string> seen;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    if (lines[row].empty()) continue;
    // Physical line number in the file: the header sits on line 1.
    const std::string line_no = std::to_string(row + 1);
    const auto fields = split_csv_line(lines[row]);
    const auto need = static_cast<std::size_t>(std::max(name_col, date_col)) + 1;
    if (fields.size() < need)
      throw MetadataSchemaError("metadata CSV line " + line_no + " has only " +
                                std::to_string(fields.size()) + " columns");
    AudioFileDescriptor d;
    d.name = fields[static_cast<std::size_t>(name_col)];
    if (!seen.insert(d.name).second)
      throw MetadataSchemaError("metadata CSV line " + line_no +
                                " repeats filename \"" + d.name + "\"");
    try {
      d.start_instant = parse_timestamp(fields[static_cast<std::size_t>(date_col)]);
    } catch (const TimestampFormatError& e) {
      throw TimestampFormatError("metadata CSV line " + line_no + " (" + d.name +
                                 "): " + e.what());
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace soundscape
