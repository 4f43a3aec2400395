#pragma once

#include <string>
#include <vector>

#include "spiralq/network.hpp"

namespace spiralq {

enum class FrequencyUnit { Hz, kHz, MHz, GHz };
enum class DataFormat { RI, MA, DB };

double unit_scale(FrequencyUnit unit);
std::string to_string(FrequencyUnit unit);
std::string to_string(DataFormat format);

/// A two-port Touchstone v1 file as read from disk. The network is always S,
/// frequencies already scaled to Hz.
struct TouchstoneRecord {
    TwoPortNetwork network;
    FrequencyUnit unit = FrequencyUnit::GHz;
    DataFormat format = DataFormat::MA;
    std::vector<std::string> comments;  // text after '!' on comment-only lines

    friend bool operator==(const TouchstoneRecord&, const TouchstoneRecord&) = default;
};

/// Parses `.s2p` text: `# <unit> S <RI|MA|DB> R <z>` option line (tokens in
/// any order, case-insensitive, v1 defaults GHz S MA R 50), `!` comments, one
/// data row of 9 numbers per frequency in S11 S21 S12 S22 order. Errors carry
/// the line number.
TouchstoneRecord parse_touchstone(const std::string& text, const std::string& source = {});
TouchstoneRecord load_touchstone(const std::string& path);

struct TouchstoneWriteOptions {
    FrequencyUnit unit = FrequencyUnit::Hz;
    DataFormat format = DataFormat::RI;
    std::vector<std::string> comments;
};

/// Numbers are written in their shortest round-trip form, so RI/Hz output
/// parses back to bit-identical values.
std::string serialize_touchstone(const TwoPortNetwork& s_network, const TouchstoneWriteOptions& options = {});
std::string serialize_touchstone(const TouchstoneRecord& record);

void save_touchstone(const std::string& path, const TwoPortNetwork& s_network,
                     const TouchstoneWriteOptions& options = {});

}  // namespace spiralq
