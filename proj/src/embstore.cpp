#include "semnorm/embstore.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace semnorm {

namespace {

constexpr std::array<char, 4> kMagic = {'S', 'E', 'M', 'B'};

// Strings and vectors larger than this are treated as corrupt length fields.
constexpr std::uint32_t kMaxStringBytes = 1u << 28;

void put_u32(std::ostream& out, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
    out.write(b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
    out.write(b, 8);
}

void put_str(std::ostream& out, const std::string& s) {
    if (s.size() > kMaxStringBytes) fail(ErrorKind::Validation, "string field too long");
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void write_header_binary(std::ostream& out, const StreamHeader& h) {
    out.write(kMagic.data(), 4);
    put_u32(out, h.version);
    put_u32(out, h.dim);
    put_str(out, h.model_id);
    put_str(out, h.corpus_label);
    put_u64(out, h.record_count);
}

void write_record_binary(std::ostream& out, const InstanceRecord& r) {
    put_str(out, r.word_type);
    put_u64(out, r.instance_id);
    put_str(out, r.sentence);
    for (float f : r.vector) put_u32(out, std::bit_cast<std::uint32_t>(f));
}

std::string dump_line(const nlohmann::ordered_json& j) {
    try {
        return j.dump();
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Validation, std::string("cannot encode as JSON: ") + e.what());
    }
}

void write_header_jsonl(std::ostream& out, const StreamHeader& h) {
    nlohmann::ordered_json j;
    j["version"] = h.version;
    j["dim"] = h.dim;
    j["model_id"] = h.model_id;
    j["corpus_label"] = h.corpus_label;
    j["record_count"] = h.record_count;
    out << dump_line(j) << '\n';
}

void write_record_jsonl(std::ostream& out, const InstanceRecord& r) {
    nlohmann::ordered_json j;
    j["w"] = r.word_type;
    j["id"] = r.instance_id;
    j["sent"] = r.sentence;
    // Widening to double is exact and nlohmann prints doubles round-trip safe,
    // so narrowing back on read restores the original bits.
    auto vec = nlohmann::ordered_json::array();
    for (float f : r.vector) vec.push_back(static_cast<double>(f));
    j["vec"] = std::move(vec);
    out << dump_line(j) << '\n';
}

} // namespace

const char* to_string(DecodeFault fault) noexcept {
    switch (fault) {
    case DecodeFault::BadMagic: return "bad magic";
    case DecodeFault::UnsupportedVersion: return "unsupported version";
    case DecodeFault::Truncated: return "truncated";
    case DecodeFault::CountMismatch: return "record count mismatch";
    case DecodeFault::Malformed: return "malformed";
    }
    return "unknown";
}

DecodeError::DecodeError(DecodeFault fault, std::uint64_t offset, const std::string& detail)
    : Error(ErrorKind::Decode, std::string(to_string(fault)) + " at byte " +
                                   std::to_string(offset) + ": " + detail),
      fault_(fault), offset_(offset) {}

StreamFormat parse_stream_format(const std::string& name) {
    if (name == "binary") return StreamFormat::Binary;
    if (name == "jsonl") return StreamFormat::Jsonl;
    fail(ErrorKind::InvalidArgument, "unknown stream format '" + name + "' (expected binary or jsonl)");
}

const char* to_string(StreamFormat format) noexcept {
    return format == StreamFormat::Binary ? "binary" : "jsonl";
}

void validate_record(const InstanceRecord& record, std::uint32_t dim) {
    if (record.word_type.empty()) fail(ErrorKind::Validation, "empty word type");
    for (unsigned char c : record.word_type) {
        if (std::isupper(c)) {
            fail(ErrorKind::Validation, "word type '" + record.word_type + "' is not lowercase");
        }
    }
    if (record.vector.size() != dim) {
        fail(ErrorKind::Validation,
             "dimension mismatch for '" + record.word_type + "' (id " +
                 std::to_string(record.instance_id) + "): expected " + std::to_string(dim) +
                 ", got " + std::to_string(record.vector.size()));
    }
    bool nonzero = false;
    for (float f : record.vector) {
        if (!std::isfinite(f)) {
            fail(ErrorKind::Validation, "non-finite component in instance " +
                                            std::to_string(record.instance_id));
        }
        nonzero = nonzero || f != 0.0f;
    }
    if (!nonzero) {
        fail(ErrorKind::Validation, "zero vector in instance " + std::to_string(record.instance_id));
    }
}

std::vector<double> normalize(std::span<const double> v) {
    double scale = 0.0;
    for (double x : v) {
        if (!std::isfinite(x)) fail(ErrorKind::Validation, "cannot normalize a non-finite vector");
        scale = std::max(scale, std::abs(x));
    }
    if (scale == 0.0) fail(ErrorKind::Validation, "cannot normalize the zero vector");

    std::vector<double> out(v.size());
    double sq = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = v[i] / scale;
        sq += out[i] * out[i];
    }
    const double norm = std::sqrt(sq);
    for (double& x : out) x /= norm;
    return out;
}

std::vector<double> normalize(std::span<const float> v) {
    std::vector<double> wide(v.begin(), v.end());
    return normalize(std::span<const double>(wide));
}

// ---------------------------------------------------------------------------

StreamWriter::StreamWriter(std::ostream& out, StreamHeader header, StreamFormat format)
    : out_(out), header_(std::move(header)), format_(format) {
    if (header_.version != kStreamVersion) {
        fail(ErrorKind::Validation, "unsupported stream version " + std::to_string(header_.version));
    }
    if (header_.dim == 0) fail(ErrorKind::Validation, "stream dimension must be positive");
    if (format_ == StreamFormat::Binary) {
        write_header_binary(out_, header_);
    } else {
        write_header_jsonl(out_, header_);
    }
}

void StreamWriter::add(const InstanceRecord& record) {
    if (finished_) fail(ErrorKind::InvalidArgument, "stream already finished");
    if (written_ >= header_.record_count) {
        fail(ErrorKind::Validation, "more records than the declared record_count " +
                                        std::to_string(header_.record_count));
    }
    validate_record(record, header_.dim);
    if (!ids_.insert(record.instance_id).second) {
        fail(ErrorKind::Validation, "duplicate instance id " + std::to_string(record.instance_id));
    }
    if (format_ == StreamFormat::Binary) {
        write_record_binary(out_, record);
    } else {
        write_record_jsonl(out_, record);
    }
    ++written_;
}

void StreamWriter::finish() {
    if (finished_) return;
    if (written_ != header_.record_count) {
        fail(ErrorKind::Validation, "record_count is " + std::to_string(header_.record_count) +
                                        " but " + std::to_string(written_) + " records were written");
    }
    out_.flush();
    if (!out_) fail(ErrorKind::Io, "failed writing stream");
    finished_ = true;
}

void write_stream(std::ostream& out, const StreamHeader& header,
                  std::span<const InstanceRecord> records, StreamFormat format) {
    if (header.record_count != records.size()) {
        fail(ErrorKind::Validation, "record_count is " + std::to_string(header.record_count) +
                                        " but " + std::to_string(records.size()) + " records given");
    }
    // Validate everything before emitting a byte.
    for (const auto& r : records) validate_record(r, header.dim);
    StreamWriter writer(out, header, format);
    for (const auto& r : records) writer.add(r);
    writer.finish();
}

// ---------------------------------------------------------------------------

namespace {

class ByteSource {
public:
    ByteSource(std::istream& in, std::uint64_t& offset) : in_(in), offset_(offset) {}

    void read(char* dst, std::size_t n, std::uint64_t field_start, const char* what) {
        in_.read(dst, static_cast<std::streamsize>(n));
        const auto got = static_cast<std::size_t>(in_.gcount());
        offset_ += got;
        if (got != n) {
            throw DecodeError(DecodeFault::Truncated, field_start,
                              std::string("unexpected end of stream in ") + what);
        }
    }

    std::uint32_t u32(const char* what) {
        const auto start = offset_;
        unsigned char b[4];
        read(reinterpret_cast<char*>(b), 4, start, what);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
        return v;
    }

    std::uint64_t u64(const char* what) {
        const auto start = offset_;
        unsigned char b[8];
        read(reinterpret_cast<char*>(b), 8, start, what);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
        return v;
    }

    std::string str(const char* what) {
        const auto start = offset_;
        const std::uint32_t len = u32(what);
        if (len > kMaxStringBytes) {
            throw DecodeError(DecodeFault::Malformed, start,
                              std::string("implausible length ") + std::to_string(len) + " for " + what);
        }
        std::string s(len, '\0');
        read(s.data(), len, start, what);
        return s;
    }

private:
    std::istream& in_;
    std::uint64_t& offset_;
};

template <class Json>
const Json& member(const Json& obj, const char* key, std::uint64_t offset) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw DecodeError(DecodeFault::Malformed, offset, std::string("missing key \"") + key + "\"");
    }
    return *it;
}

} // namespace

StreamReader::StreamReader(std::istream& in) : in_(&in) { read_header(); }

StreamReader::StreamReader(std::unique_ptr<std::istream> owned)
    : owned_(std::move(owned)), in_(owned_.get()) {
    read_header();
}

StreamReader::StreamReader(StreamReader&&) noexcept = default;
StreamReader& StreamReader::operator=(StreamReader&&) noexcept = default;
StreamReader::~StreamReader() = default;

StreamReader StreamReader::open(const std::filesystem::path& path) {
    auto file = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*file) fail(ErrorKind::Io, "cannot open '" + path.string() + "'");
    return StreamReader(std::unique_ptr<std::istream>(std::move(file)));
}

void StreamReader::read_header() {
    const int first = in_->peek();
    if (first == std::char_traits<char>::eof()) {
        throw DecodeError(DecodeFault::Truncated, 0, "empty stream");
    }
    if (first == '{') {
        format_ = StreamFormat::Jsonl;
        std::string line;
        std::getline(*in_, line);
        offset_ += line.size() + (in_->eof() ? 0 : 1);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw DecodeError(DecodeFault::Malformed, 0, std::string("header line: ") + e.what());
        }
        try {
            header_.version = member(j, "version", 0).template get<std::uint32_t>();
            if (header_.version != kStreamVersion) {
                throw DecodeError(DecodeFault::UnsupportedVersion, 0,
                                  "version " + std::to_string(header_.version));
            }
            header_.dim = member(j, "dim", 0).template get<std::uint32_t>();
            header_.model_id = member(j, "model_id", 0).template get<std::string>();
            header_.corpus_label = member(j, "corpus_label", 0).template get<std::string>();
            header_.record_count = member(j, "record_count", 0).template get<std::uint64_t>();
        } catch (const nlohmann::json::exception& e) {
            throw DecodeError(DecodeFault::Malformed, 0, std::string("header field: ") + e.what());
        }
    } else {
        format_ = StreamFormat::Binary;
        ByteSource src(*in_, offset_);
        std::array<char, 4> magic{};
        in_->read(magic.data(), 4);
        offset_ += static_cast<std::uint64_t>(in_->gcount());
        if (in_->gcount() != 4 || magic != kMagic) {
            throw DecodeError(DecodeFault::BadMagic, 0, "not a SEMB or JSONL embedding stream");
        }
        const auto version_at = offset_;
        header_.version = src.u32("version");
        if (header_.version != kStreamVersion) {
            throw DecodeError(DecodeFault::UnsupportedVersion, version_at,
                              "version " + std::to_string(header_.version));
        }
        header_.dim = src.u32("dim");
        header_.model_id = src.str("model_id");
        header_.corpus_label = src.str("corpus_label");
        header_.record_count = src.u64("record_count");
    }
    if (header_.dim == 0) throw DecodeError(DecodeFault::Malformed, 0, "dimension is zero");
}

std::optional<InstanceRecord> StreamReader::next() {
    if (done_) return std::nullopt;
    auto rec = format_ == StreamFormat::Binary ? next_binary() : next_jsonl();
    if (!rec) {
        done_ = true;
        return std::nullopt;
    }
    ++read_;
    return rec;
}

std::optional<InstanceRecord> StreamReader::next_binary() {
    const auto start = offset_;
    if (read_ == header_.record_count) {
        if (in_->peek() != std::char_traits<char>::eof()) {
            throw DecodeError(DecodeFault::CountMismatch, start,
                              "data after the declared " + std::to_string(header_.record_count) +
                                  " records");
        }
        return std::nullopt;
    }
    if (in_->peek() == std::char_traits<char>::eof()) {
        throw DecodeError(DecodeFault::CountMismatch, start,
                          "header declares " + std::to_string(header_.record_count) +
                              " records, stream ends after " + std::to_string(read_));
    }
    ByteSource src(*in_, offset_);
    InstanceRecord r;
    r.word_type = src.str("word_type");
    r.instance_id = src.u64("instance_id");
    r.sentence = src.str("sentence");
    r.vector.resize(header_.dim);
    std::vector<unsigned char> raw(4 * static_cast<std::size_t>(header_.dim));
    src.read(reinterpret_cast<char*>(raw.data()), raw.size(), start, "vector");
    for (std::size_t i = 0; i < header_.dim; ++i) {
        const unsigned char* b = &raw[4 * i];
        const std::uint32_t bits = std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) |
                                   (std::uint32_t(b[2]) << 16) | (std::uint32_t(b[3]) << 24);
        r.vector[i] = std::bit_cast<float>(bits);
    }
    try {
        validate_record(r, header_.dim);
    } catch (const Error& e) {
        throw DecodeError(DecodeFault::Malformed, start, e.what());
    }
    return r;
}

std::optional<InstanceRecord> StreamReader::next_jsonl() {
    std::string line;
    std::uint64_t start = offset_;
    // Blank lines are tolerated (typically a trailing newline).
    while (true) {
        start = offset_;
        if (!std::getline(*in_, line)) {
            if (read_ != header_.record_count) {
                throw DecodeError(DecodeFault::CountMismatch, start,
                                  "header declares " + std::to_string(header_.record_count) +
                                      " records, stream ends after " + std::to_string(read_));
            }
            return std::nullopt;
        }
        offset_ += line.size() + (in_->eof() ? 0 : 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") != std::string::npos) break;
    }
    if (read_ == header_.record_count) {
        throw DecodeError(DecodeFault::CountMismatch, start,
                          "data after the declared " + std::to_string(header_.record_count) +
                              " records");
    }

    InstanceRecord r;
    try {
        const auto j = nlohmann::json::parse(line);
        r.word_type = member(j, "w", start).template get<std::string>();
        r.instance_id = member(j, "id", start).template get<std::uint64_t>();
        r.sentence = member(j, "sent", start).template get<std::string>();
        const auto& vec = member(j, "vec", start);
        if (!vec.is_array()) throw DecodeError(DecodeFault::Malformed, start, "\"vec\" is not an array");
        r.vector.reserve(vec.size());
        for (const auto& x : vec) r.vector.push_back(static_cast<float>(x.template get<double>()));
    } catch (const nlohmann::json::exception& e) {
        // A final line with no newline that fails to parse is most likely cut off.
        const auto fault = in_->eof() ? DecodeFault::Truncated : DecodeFault::Malformed;
        throw DecodeError(fault, start, e.what());
    }
    try {
        validate_record(r, header_.dim);
    } catch (const Error& e) {
        throw DecodeError(DecodeFault::Malformed, start, e.what());
    }
    return r;
}

std::pair<StreamHeader, std::vector<InstanceRecord>> read_stream(std::istream& in) {
    StreamReader reader(in);
    std::vector<InstanceRecord> records;
    records.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(reader.header().record_count, 1u << 20)));
    while (auto r = reader.next()) records.push_back(std::move(*r));
    return {reader.header(), std::move(records)};
}

} // namespace semnorm
