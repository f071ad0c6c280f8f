#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "canmet/types.hpp"

namespace canmet {

/// Doubles rendered with 17 significant digits.
std::string format_g17(double v);

std::uint64_t fnv1a64(const std::string& s);

/// Deterministic run id: hex FNV-1a hash of the canonical parameter echo.
std::string run_id_from(const std::string& canonical_params);

/// Streaming JSON writer with caller-fixed key order; numbers via format_g17.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& k);
    JsonWriter& value(double v);
    JsonWriter& value(int v);
    JsonWriter& value(long long v);
    JsonWriter& value(bool v);
    JsonWriter& value(const char* v);
    JsonWriter& value(const std::string& v);
    JsonWriter& value(cplx v); // {"re": ..., "im": ...}
    const std::string& str() const { return out_; }

private:
    void separate();
    std::string out_;
    std::vector<bool> container_has_items_;
    bool pending_key_ = false;
};

/// CSV with a mandatory header, LF line endings, numbers via format_g17.
class CsvWriter {
public:
    explicit CsvWriter(const std::vector<std::string>& header);
    void row(const std::vector<double>& cells);
    void row_mixed(const std::vector<std::string>& cells);
    const std::string& str() const { return out_; }

private:
    size_t width_;
    std::string out_;
};

void write_text_file(const std::string& path, const std::string& content);

} // namespace canmet
