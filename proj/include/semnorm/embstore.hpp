#pragma once

// Embedding-stream interchange format.
//
// A stream is a header followed by a sequence of word-instance records. Two
// encodings carry identical information:
//
//   binary  "SEMB" | u32 version | u32 dim | str model_id | str corpus_label |
//           u64 record_count | records...
//           record = str word_type | u64 instance_id | str sentence |
//                    dim x f32
//           (all integers and floats little-endian; str = u32 length + UTF-8)
//
//   jsonl   {"version","dim","model_id","corpus_label","record_count"}
//           {"w","id","sent","vec"}   one line per record
//
// Vectors are stored as produced by the embedder, unnormalized.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "semnorm/error.hpp"

namespace semnorm {

inline constexpr std::uint32_t kStreamVersion = 1;

enum class StreamFormat { Binary, Jsonl };

StreamFormat parse_stream_format(const std::string& name);
const char* to_string(StreamFormat format) noexcept;

struct StreamHeader {
    std::uint32_t version = kStreamVersion;
    std::uint32_t dim = 0;
    std::string model_id;
    std::string corpus_label;
    std::uint64_t record_count = 0;

    bool operator==(const StreamHeader&) const = default;
};

struct InstanceRecord {
    std::string word_type;
    std::uint64_t instance_id = 0;
    std::string sentence;
    std::vector<float> vector;

    bool operator==(const InstanceRecord&) const = default;
};

/// Throws Error(Validation) unless the record has a non-empty lowercase word
/// type and a finite, nonzero vector of exactly `dim` components.
void validate_record(const InstanceRecord& record, std::uint32_t dim);

/// Scales `v` to unit Euclidean length in 64-bit arithmetic. The norm is
/// computed after dividing by the largest magnitude so tiny and huge inputs
/// do not under- or overflow.
std::vector<double> normalize(std::span<const double> v);
std::vector<double> normalize(std::span<const float> v);

/// Incremental writer. The header's record_count is written up front and
/// checked against the number of records added when finish() is called.
class StreamWriter {
public:
    StreamWriter(std::ostream& out, StreamHeader header, StreamFormat format);

    void add(const InstanceRecord& record);
    void finish();

    std::uint64_t written() const noexcept { return written_; }

private:
    std::ostream& out_;
    StreamHeader header_;
    StreamFormat format_;
    std::uint64_t written_ = 0;
    std::unordered_set<std::uint64_t> ids_;
    bool finished_ = false;
};

void write_stream(std::ostream& out, const StreamHeader& header,
                  std::span<const InstanceRecord> records, StreamFormat format);

/// Sequential reader; the encoding is detected from the first byte.
class StreamReader {
public:
    explicit StreamReader(std::istream& in);
    StreamReader(StreamReader&&) noexcept;
    StreamReader& operator=(StreamReader&&) noexcept;
    ~StreamReader();

    static StreamReader open(const std::filesystem::path& path);

    const StreamHeader& header() const noexcept { return header_; }
    StreamFormat format() const noexcept { return format_; }

    /// Next record, or nullopt after the last one. Validates each record and
    /// the declared record count.
    std::optional<InstanceRecord> next();

private:
    StreamReader(std::unique_ptr<std::istream> owned);
    void read_header();
    std::optional<InstanceRecord> next_binary();
    std::optional<InstanceRecord> next_jsonl();

    std::unique_ptr<std::istream> owned_;
    std::istream* in_;
    StreamHeader header_;
    StreamFormat format_ = StreamFormat::Binary;
    std::uint64_t offset_ = 0;
    std::uint64_t read_ = 0;
    bool done_ = false;
};

std::pair<StreamHeader, std::vector<InstanceRecord>> read_stream(std::istream& in);

} // namespace semnorm
