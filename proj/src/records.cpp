#include "stresslab/records.hpp"

#include <cinttypes>
#include <cstdio>

namespace stresslab {

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void RecordWriter::begin(const std::string& record_type) {
  if (!first_record_) out_ += "\n";
  first_record_ = false;
  out_ += "record=" + record_type + "\n";
}

void RecordWriter::field(const std::string& key, const std::string& value) {
  out_ += key + "=" + value + "\n";
}

void RecordWriter::field(const std::string& key, const char* value) {
  field(key, std::string(value));
}

void RecordWriter::field(const std::string& key, double value) {
  field(key, format_double(value));
}

void RecordWriter::field(const std::string& key, int value) {
  field(key, std::to_string(value));
}

void RecordWriter::field(const std::string& key, std::uint64_t value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%" PRIu64, value);
  field(key, std::string(buf));
}

void RecordWriter::field(const std::string& key, bool value) {
  field(key, std::string(value ? "true" : "false"));
}

}  // namespace stresslab
