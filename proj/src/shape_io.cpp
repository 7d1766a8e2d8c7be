#include <squarec/error.hpp>
#include <squarec/shape_io.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>

namespace squarec {

namespace {

// Cursor over the raw file bytes for the PNM-style header grammar.
struct Reader {
    const std::string& buf;
    std::size_t pos = 0;

    void skip_space_and_comments() {
        while (pos < buf.size()) {
            const auto ch = static_cast<unsigned char>(buf[pos]);
            if (std::isspace(ch)) {
                ++pos;
            } else if (ch == '#') {
                while (pos < buf.size() && buf[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
    }

    std::string token() {
        skip_space_and_comments();
        const std::size_t start = pos;
        while (pos < buf.size() && !std::isspace(static_cast<unsigned char>(buf[pos])) && buf[pos] != '#')
            ++pos;
        return buf.substr(start, pos - start);
    }

    int positive_int(const std::string& what) {
        const std::string t = token();
        if (t.empty() || t.size() > 9)
            throw ParseError("malformed header: bad " + what);
        for (char c : t)
            if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError("malformed header: bad " + what);
        const int v = std::stoi(t);
        if (v < 1) throw ParseError("malformed header: " + what + " must be positive");
        return v;
    }
};

std::string read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

BinaryShape parse_p1(Reader& r) {
    const int w = r.positive_int("width");
    const int h = r.positive_int("height");
    Dims d{w, h, 1};
    std::vector<std::uint8_t> mask(d.cells(), 0);
    std::size_t filled = 0;
    while (filled < mask.size()) {
        r.skip_space_and_comments();
        if (r.pos >= r.buf.size()) throw ParseError("truncated payload");
        const char c = r.buf[r.pos++];
        if (c != '0' && c != '1') throw ParseError(std::string("unexpected character '") + c + "' in P1 payload");
        mask[filled++] = c == '1' ? 1 : 0;
    }
    return BinaryShape::with_margin(2, d, std::move(mask));
}

BinaryShape parse_p4(Reader& r) {
    const int w = r.positive_int("width");
    const int h = r.positive_int("height");
    if (r.pos >= r.buf.size() || !std::isspace(static_cast<unsigned char>(r.buf[r.pos])))
        throw ParseError("malformed header: missing separator before P4 payload");
    ++r.pos;
    const std::size_t row_bytes = (static_cast<std::size_t>(w) + 7) / 8;
    if (r.buf.size() - r.pos < row_bytes * static_cast<std::size_t>(h)) throw ParseError("truncated payload");
    Dims d{w, h, 1};
    std::vector<std::uint8_t> mask(d.cells(), 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const auto byte = static_cast<unsigned char>(r.buf[r.pos + y * row_bytes + x / 8]);
            mask[d.index(x, y)] = (byte >> (7 - x % 8)) & 1u;
        }
    return BinaryShape::with_margin(2, d, std::move(mask));
}

BinaryShape parse_vox3(Reader& r) {
    const int w = r.positive_int("width");
    const int h = r.positive_int("height");
    const int dd = r.positive_int("depth");
    if (r.pos >= r.buf.size() || r.buf[r.pos] != '\n')
        throw ParseError("malformed header: VOX3 header must end with a newline");
    ++r.pos;
    Dims d{w, h, dd};
    if (r.buf.size() - r.pos < d.cells()) throw ParseError("truncated payload");
    std::vector<std::uint8_t> mask(d.cells(), 0);
    for (std::size_t i = 0; i < mask.size(); ++i) {
        const auto b = static_cast<unsigned char>(r.buf[r.pos + i]);
        if (b > 1) throw ParseError("VOX3 payload byte is neither 0 nor 1");
        mask[i] = b;
    }
    return BinaryShape::with_margin(3, d, std::move(mask));
}

std::string encode(const BinaryShape& s, ShapeFormat format) {
    const Dims& d = s.dims();
    std::ostringstream out;
    if (s.ndim() == 3 || format == ShapeFormat::vox3) {
        if (s.ndim() != 3) throw std::invalid_argument("VOX3 holds 3-D shapes only");
        out << "VOX3 " << d.nx << ' ' << d.ny << ' ' << d.nz << '\n';
        for (auto v : s.mask()) out.put(static_cast<char>(v));
        return out.str();
    }
    if (format == ShapeFormat::pbm_ascii) {
        out << "P1\n" << d.nx << ' ' << d.ny << '\n';
        for (int y = 0; y < d.ny; ++y) {
            for (int x = 0; x < d.nx; ++x) out.put(s.at(x, y) ? '1' : '0');
            out.put('\n');
        }
        return out.str();
    }
    out << "P4\n" << d.nx << ' ' << d.ny << '\n';
    const std::size_t row_bytes = (static_cast<std::size_t>(d.nx) + 7) / 8;
    std::string row(row_bytes, '\0');
    for (int y = 0; y < d.ny; ++y) {
        std::fill(row.begin(), row.end(), '\0');
        for (int x = 0; x < d.nx; ++x)
            if (s.at(x, y)) row[x / 8] = static_cast<char>(static_cast<unsigned char>(row[x / 8]) | (0x80u >> (x % 8)));
        out << row;
    }
    return out.str();
}

}  // namespace

BinaryShape load_shape(const std::filesystem::path& path) {
    const std::string buf = read_all(path);
    Reader r{buf};
    const std::string magic = r.token();
    try {
        if (magic == "P1") return parse_p1(r);
        if (magic == "P4") return parse_p4(r);
        if (magic == "VOX3") return parse_vox3(r);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    throw ParseError(path.string() + ": malformed header: unknown magic '" + magic + "'");
}

void save_shape(const BinaryShape& shape, const std::filesystem::path& path, ShapeFormat format) {
    write_file_atomic(path, encode(shape, format));
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    thread_local std::mt19937_64 salt{std::random_device{}()};
    auto tmp = path;
    tmp += ".tmp" + std::to_string(salt() % 1000000);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + path.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoError("write failed for '" + path.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move temporary file onto '" + path.string() + "'");
    }
}

}  // namespace squarec
