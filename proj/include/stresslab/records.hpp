#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace stresslab {

/// Line-delimited key=value output: one group per record, groups separated
/// by a blank line, fields emitted in insertion order. Numbers carry 17
/// significant digits so identical runs diff byte-identically.
class RecordWriter {
 public:
  void begin(const std::string& record_type);
  void field(const std::string& key, const std::string& value);
  void field(const std::string& key, const char* value);
  void field(const std::string& key, double value);
  void field(const std::string& key, int value);
  void field(const std::string& key, std::uint64_t value);
  void field(const std::string& key, bool value);

  const std::string& str() const { return out_; }

 private:
  std::string out_;
  bool first_record_ = true;
};

std::string format_double(double value);

}  // namespace stresslab
