#include "drift/frames.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace drift {

namespace {

void append_double(std::string& out, double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

double parse_double(const char*& p, const char* end, const std::string& where) {
    while (p < end && (*p == ' ' || *p == '\t')) ++p;
    double v = 0;
    auto res = std::from_chars(p, end, v);
    if (res.ec != std::errc{}) throw std::runtime_error("bad number in " + where);
    p = res.ptr;
    return v;
}

std::string read_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return s;
}

void write_file(const std::filesystem::path& file, const std::string& contents) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("short write to " + file.string());
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

double get_f64(const unsigned char* p) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return std::bit_cast<double>(bits);
}

std::string frame_name(int t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%04d.txt", t);
    return buf;
}

}  // namespace

FrameStack make_empty_stack(int T, int N) {
    FrameStack s;
    s.T = T;
    s.N = N;
    s.frames.assign(static_cast<std::size_t>(T), Image(N));
    s.counts.assign(static_cast<std::size_t>(T), 0);
    return s;
}

BinResult bin_localizations(const LocalizationTable& table, int T, int N) {
    if (T < 1 || N < 2) throw std::invalid_argument("bin_localizations: need T >= 1, N >= 2");
    if (table.total_frames < 1)
        throw std::invalid_argument("bin_localizations: table has no frames");
    if (T > table.total_frames)
        throw std::invalid_argument("bin_localizations: more histograms than raw frames");
    if (table.total_frames % T != 0)
        throw std::invalid_argument("bin_localizations: T must divide the raw frame count");

    BinResult result;
    result.stack = make_empty_stack(T, N);
    const std::int64_t Tp = table.total_frames;
    for (const auto& rec : table.records) {
        if (rec.frame < 1 || rec.frame > Tp)
            throw std::invalid_argument("bin_localizations: frame index outside {1..T'}");
        if (!(rec.x1 >= 0.0 && rec.x1 < 1.0 && rec.x2 >= 0.0 && rec.x2 < 1.0)) {
            ++result.rejected;
            continue;
        }
        // ceil(t' T / T'), then to 0-based
        std::int64_t bin = (rec.frame * T + Tp - 1) / Tp - 1;
        int i1 = static_cast<int>(rec.x1 * N);
        int i2 = static_cast<int>(rec.x2 * N);
        result.stack.frames[static_cast<std::size_t>(bin)](i1, i2) += 1.0;
        ++result.stack.counts[static_cast<std::size_t>(bin)];
    }
    return result;
}

Image superimpose(const FrameStack& stack) {
    Image out(stack.N);
    for (const auto& f : stack.frames)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += f[i];
    return out;
}

LocalizationTable read_localization_table(const std::filesystem::path& file) {
    std::string s = read_file(file);
    LocalizationTable table;
    const char* p = s.data();
    const char* end = p + s.size();
    auto next_line = [&](std::string& line) {
        if (p >= end) return false;
        const char* nl = static_cast<const char*>(std::memchr(p, '\n', static_cast<std::size_t>(end - p)));
        const char* stop = nl ? nl : end;
        line.assign(p, stop);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        p = nl ? nl + 1 : end;
        return true;
    };
    std::string line;
    if (!next_line(line) || line != "x1,x2,frame")
        throw std::runtime_error("localization table must start with header x1,x2,frame");
    while (next_line(line)) {
        if (line.empty()) continue;
        const char* q = line.data();
        const char* lend = q + line.size();
        LocalizationRecord rec;
        rec.x1 = parse_double(q, lend, file.string());
        if (q >= lend || *q != ',') throw std::runtime_error("bad row in " + file.string());
        ++q;
        rec.x2 = parse_double(q, lend, file.string());
        if (q >= lend || *q != ',') throw std::runtime_error("bad row in " + file.string());
        ++q;
        auto res = std::from_chars(q, lend, rec.frame);
        if (res.ec != std::errc{}) throw std::runtime_error("bad frame index in " + file.string());
        table.records.push_back(rec);
        table.total_frames = std::max(table.total_frames, rec.frame);
    }
    return table;
}

void write_localization_table(const std::filesystem::path& file, const LocalizationTable& table) {
    std::string out = "x1,x2,frame\n";
    for (const auto& rec : table.records) {
        append_double(out, rec.x1);
        out.push_back(',');
        append_double(out, rec.x2);
        out.push_back(',');
        out += std::to_string(rec.frame);
        out.push_back('\n');
    }
    write_file(file, out);
}

Image read_grid_text(const std::filesystem::path& file) {
    std::string s = read_file(file);
    std::vector<double> values;
    int rows = 0;
    const char* p = s.data();
    const char* end = p + s.size();
    while (p < end) {
        const char* nl = static_cast<const char*>(std::memchr(p, '\n', static_cast<std::size_t>(end - p)));
        const char* stop = nl ? nl : end;
        bool any = false;
        while (p < stop) {
            while (p < stop && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
            if (p >= stop) break;
            values.push_back(parse_double(p, stop, file.string()));
            any = true;
        }
        if (any) ++rows;
        p = nl ? nl + 1 : end;
    }
    if (rows == 0) throw std::runtime_error("empty grid file " + file.string());
    if (values.size() != static_cast<std::size_t>(rows) * rows)
        throw std::runtime_error("grid file is not square: " + file.string());
    Image img(rows);
    img.data() = std::move(values);
    return img;
}

void write_grid_text(const std::filesystem::path& file, const Image& img) {
    std::string out;
    out.reserve(img.size() * 12);
    for (int i1 = 0; i1 < img.n(); ++i1) {
        for (int i2 = 0; i2 < img.n(); ++i2) {
            if (i2) out.push_back(' ');
            append_double(out, img(i1, i2));
        }
        out.push_back('\n');
    }
    write_file(file, out);
}

void write_stack_dir(const std::filesystem::path& dir, const FrameStack& stack) {
    std::filesystem::create_directories(dir);
    for (int t = 0; t < stack.T; ++t)
        write_grid_text(dir / frame_name(t), stack.frames[static_cast<std::size_t>(t)]);
    std::string counts;
    for (auto c : stack.counts) {
        counts += std::to_string(c);
        counts.push_back('\n');
    }
    write_file(dir / "counts.txt", counts);
}

FrameStack read_stack_dir(const std::filesystem::path& dir) {
    std::string counts_text = read_file(dir / "counts.txt");
    std::vector<std::int64_t> counts;
    const char* p = counts_text.data();
    const char* end = p + counts_text.size();
    while (p < end) {
        while (p < end && (*p == '\n' || *p == '\r' || *p == ' ')) ++p;
        if (p >= end) break;
        std::int64_t c = 0;
        auto res = std::from_chars(p, end, c);
        if (res.ec != std::errc{}) throw std::runtime_error("bad counts.txt in " + dir.string());
        counts.push_back(c);
        p = res.ptr;
    }
    FrameStack stack;
    stack.T = static_cast<int>(counts.size());
    stack.counts = std::move(counts);
    stack.frames.reserve(static_cast<std::size_t>(stack.T));
    for (int t = 0; t < stack.T; ++t)
        stack.frames.push_back(read_grid_text(dir / frame_name(t)));
    if (stack.frames.empty()) throw std::runtime_error("empty stack in " + dir.string());
    stack.N = stack.frames.front().n();
    for (const auto& f : stack.frames)
        if (f.n() != stack.N) throw std::runtime_error("inconsistent frame sizes in " + dir.string());
    return stack;
}

void write_stack_binary(const std::filesystem::path& file, const FrameStack& stack) {
    std::string out;
    out.reserve(16 + 8 * (stack.frames.size() * stack.frames.front().size() + stack.counts.size()));
    out += "DRFT";
    put_u32(out, 1);
    put_u32(out, static_cast<std::uint32_t>(stack.T));
    put_u32(out, static_cast<std::uint32_t>(stack.N));
    for (const auto& f : stack.frames)
        for (double v : f.data()) put_f64(out, v);
    for (auto c : stack.counts) put_f64(out, static_cast<double>(c));
    write_file(file, out);
}

FrameStack read_stack_binary(const std::filesystem::path& file) {
    std::string s = read_file(file);
    if (s.size() < 16 || s.compare(0, 4, "DRFT") != 0)
        throw std::runtime_error("not a DRFT stack: " + file.string());
    const auto* p = reinterpret_cast<const unsigned char*>(s.data());
    std::uint32_t version = get_u32(p + 4);
    if (version != 1) throw std::runtime_error("unsupported DRFT version in " + file.string());
    int T = static_cast<int>(get_u32(p + 8));
    int N = static_cast<int>(get_u32(p + 12));
    std::size_t expect = 16 + 8 * (static_cast<std::size_t>(T) * N * N + static_cast<std::size_t>(T));
    if (s.size() != expect) throw std::runtime_error("truncated DRFT stack: " + file.string());
    FrameStack stack = make_empty_stack(T, N);
    const unsigned char* q = p + 16;
    for (auto& f : stack.frames)
        for (double& v : f.data()) {
            v = get_f64(q);
            q += 8;
        }
    for (auto& c : stack.counts) {
        c = static_cast<std::int64_t>(get_f64(q));
        q += 8;
    }
    return stack;
}

FrameStack read_stack(const std::filesystem::path& path) {
    if (std::filesystem::is_directory(path)) return read_stack_dir(path);
    return read_stack_binary(path);
}

}  // namespace drift
