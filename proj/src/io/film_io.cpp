#include "thermoweld/io/film_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace tw {

namespace {

static_assert(std::endian::native == std::endian::little,
              "film I/O assumes a little-endian host");

struct HeaderWriter {
    unsigned char bytes[kFilmHeaderSize] = {};
    std::size_t at = 0;

    void raw(const void* p, std::size_t n) {
        std::memcpy(bytes + at, p, n);
        at += n;
    }
    void u32(std::uint32_t v) { raw(&v, 4); }
    void u16(std::uint16_t v) { raw(&v, 2); }
    void u8(std::uint8_t v) { raw(&v, 1); }
    void f32(float v) { raw(&v, 4); }
};

struct HeaderReader {
    unsigned char bytes[kFilmHeaderSize];
    std::size_t at = 0;

    void raw(void* p, std::size_t n) {
        std::memcpy(p, bytes + at, n);
        at += n;
    }
    std::uint32_t u32() {
        std::uint32_t v;
        raw(&v, 4);
        return v;
    }
    std::uint16_t u16() {
        std::uint16_t v;
        raw(&v, 2);
        return v;
    }
    std::uint8_t u8() {
        std::uint8_t v;
        raw(&v, 1);
        return v;
    }
    float f32() {
        float v;
        raw(&v, 4);
        return v;
    }
};

void put_id(HeaderWriter& h, const std::string& id) {
    if (id.size() > kFilmIdCapacity)
        throw DataError("film id too long for header (max 23 chars): " + id);
    char buf[24] = {};
    std::memcpy(buf, id.data(), id.size());
    h.raw(buf, sizeof(buf));
}

std::string get_id(HeaderReader& h) {
    char buf[25] = {};
    h.raw(buf, 24);
    return std::string(buf);
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open for reading: " + path.string());
    return in;
}

}  // namespace

void write_tfilm(const std::filesystem::path& path, const ThermalFilm& film) {
    if (!film.well_formed()) throw DataError("write_tfilm: malformed film");
    HeaderWriter h;
    h.raw("TFLM", 4);
    h.u32(1);
    h.u32(static_cast<std::uint32_t>(film.width));
    h.u32(static_cast<std::uint32_t>(film.height));
    h.u32(static_cast<std::uint32_t>(film.n_frames));
    h.f32(static_cast<float>(film.frame_rate));
    h.u8(film.label);
    h.u8(0);
    h.u16(0);
    h.u16(0);
    h.u16(0);
    put_id(h, film.specimen_id);

    auto out = open_out(path);
    out.write(reinterpret_cast<const char*>(h.bytes), kFilmHeaderSize);
    out.write(reinterpret_cast<const char*>(film.data.data()),
              static_cast<std::streamsize>(film.data.size() * sizeof(std::uint16_t)));
    if (!out) throw DataError("write_tfilm: short write: " + path.string());
}

ThermalFilm read_tfilm(const std::filesystem::path& path) {
    auto in = open_in(path);
    HeaderReader h;
    if (!in.read(reinterpret_cast<char*>(h.bytes), kFilmHeaderSize))
        throw DataError("read_tfilm: truncated header: " + path.string());
    char magic[5] = {};
    h.raw(magic, 4);
    if (std::string(magic) != "TFLM") throw DataError("read_tfilm: bad magic: " + path.string());
    if (h.u32() != 1) throw DataError("read_tfilm: unsupported version: " + path.string());

    ThermalFilm film;
    film.width = static_cast<int>(h.u32());
    film.height = static_cast<int>(h.u32());
    film.n_frames = static_cast<int>(h.u32());
    film.frame_rate = h.f32();
    film.label = h.u8();
    if (h.u8() != 0) throw DataError("read_tfilm: unexpected payload kind: " + path.string());
    h.u16();
    h.u16();
    h.u16();
    film.specimen_id = get_id(h);

    if (film.width <= 0 || film.height <= 0 || film.n_frames <= 0)
        throw DataError("read_tfilm: bad dimensions: " + path.string());
    film.data.resize(film.frame_size() * static_cast<std::size_t>(film.n_frames));
    if (!in.read(reinterpret_cast<char*>(film.data.data()),
                 static_cast<std::streamsize>(film.data.size() * sizeof(std::uint16_t))))
        throw DataError("read_tfilm: truncated payload: " + path.string());
    return film;
}

void write_nfilm(const std::filesystem::path& path, const NormalizedFilm& film) {
    HeaderWriter h;
    h.raw("TFLN", 4);
    h.u32(1);
    h.u32(static_cast<std::uint32_t>(film.width));
    h.u32(static_cast<std::uint32_t>(film.height));
    h.u32(static_cast<std::uint32_t>(film.n_frames));
    h.f32(0.0f);
    h.u8(film.label);
    h.u8(1);
    h.u16(static_cast<std::uint16_t>(film.t0_lo));
    h.u16(static_cast<std::uint16_t>(film.t0_hi));
    h.u16(static_cast<std::uint16_t>(film.t_norm_frame));
    put_id(h, film.specimen_id);

    auto out = open_out(path);
    out.write(reinterpret_cast<const char*>(h.bytes), kFilmHeaderSize);
    out.write(reinterpret_cast<const char*>(film.data.data()),
              static_cast<std::streamsize>(film.data.size() * sizeof(float)));
    out.write(reinterpret_cast<const char*>(film.valid.data()),
              static_cast<std::streamsize>(film.valid.size()));
    if (!out) throw DataError("write_nfilm: short write: " + path.string());
}

NormalizedFilm read_nfilm(const std::filesystem::path& path) {
    auto in = open_in(path);
    HeaderReader h;
    if (!in.read(reinterpret_cast<char*>(h.bytes), kFilmHeaderSize))
        throw DataError("read_nfilm: truncated header: " + path.string());
    char magic[5] = {};
    h.raw(magic, 4);
    if (std::string(magic) != "TFLN") throw DataError("read_nfilm: bad magic: " + path.string());
    if (h.u32() != 1) throw DataError("read_nfilm: unsupported version: " + path.string());

    NormalizedFilm film;
    film.width = static_cast<int>(h.u32());
    film.height = static_cast<int>(h.u32());
    film.n_frames = static_cast<int>(h.u32());
    h.f32();
    film.label = h.u8();
    if (h.u8() != 1) throw DataError("read_nfilm: unexpected payload kind: " + path.string());
    film.t0_lo = h.u16();
    film.t0_hi = h.u16();
    film.t_norm_frame = h.u16();
    film.specimen_id = get_id(h);

    if (film.width <= 0 || film.height <= 0 || film.n_frames <= 0)
        throw DataError("read_nfilm: bad dimensions: " + path.string());
    film.data.resize(film.frame_size() * static_cast<std::size_t>(film.n_frames));
    film.valid.resize(film.frame_size());
    if (!in.read(reinterpret_cast<char*>(film.data.data()),
                 static_cast<std::streamsize>(film.data.size() * sizeof(float))))
        throw DataError("read_nfilm: truncated payload: " + path.string());
    if (!in.read(reinterpret_cast<char*>(film.valid.data()),
                 static_cast<std::streamsize>(film.valid.size())))
        throw DataError("read_nfilm: truncated validity mask: " + path.string());
    return film;
}

}  // namespace tw
