#include "logoped/zip.hpp"

#include <zlib.h>

#include <limits>
#include <set>

#include "logoped/error.hpp"

namespace logoped::zip {

namespace {

constexpr std::uint32_t kLocalSig = 0x04034b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kEndSig = 0x06054b50;
constexpr std::uint16_t kUtf8Flag = 0x0800;
constexpr std::uint16_t kDosDate1980 = (0 << 9) | (1 << 5) | 1;

void put16(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put32(std::string& out, std::uint32_t v) {
  put16(out, v & 0xffff);
  put16(out, v >> 16);
}

std::uint32_t crc_of(std::string_view data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // crc32 takes uInt lengths; feed in chunks for large inputs
  for (std::size_t at = 0; at < data.size();) {
    const auto n = static_cast<uInt>(std::min<std::size_t>(data.size() - at, 1u << 30));
    crc = crc32(crc, reinterpret_cast<const Bytef*>(data.data() + at), n);
    at += n;
  }
  return static_cast<std::uint32_t>(crc);
}

[[noreturn]] void corrupt(const std::string& what) { fail(ErrorCode::CorruptArchive, "corrupt archive: " + what); }

struct Reader {
  std::string_view buf;

  std::uint32_t u16(std::size_t at) const {
    if (at + 2 > buf.size()) corrupt("truncated header");
    return static_cast<std::uint8_t>(buf[at]) | static_cast<std::uint8_t>(buf[at + 1]) << 8;
  }
  std::uint32_t u32(std::size_t at) const { return u16(at) | u16(at + 2) << 16; }
  std::string_view slice(std::size_t at, std::size_t n) const {
    if (at > buf.size() || n > buf.size() - at) corrupt("entry extends past end of file");
    return buf.substr(at, n);
  }
};

std::string inflate_raw(std::string_view in, std::size_t expected) {
  std::string out(expected, '\0');
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) corrupt("cannot initialise inflate");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = inflate(&zs, Z_FINISH);
  const auto produced = zs.total_out;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || produced != expected) corrupt("deflate stream damaged");
  return out;
}

}  // namespace

std::string write(const std::vector<Entry>& entries) {
  std::string out;
  std::string central;
  for (const auto& e : entries) {
    if (e.data.size() >= std::numeric_limits<std::uint32_t>::max() || out.size() >= std::numeric_limits<std::uint32_t>::max()) {
      fail(ErrorCode::InvalidArgument, "archive larger than 4 GiB is not supported");
    }
    const auto crc = crc_of(e.data);
    const auto offset = static_cast<std::uint32_t>(out.size());
    const auto size = static_cast<std::uint32_t>(e.data.size());

    put32(out, kLocalSig);
    put16(out, 20);
    put16(out, kUtf8Flag);
    put16(out, 0);  // stored
    put16(out, 0);
    put16(out, kDosDate1980);
    put32(out, crc);
    put32(out, size);
    put32(out, size);
    put16(out, static_cast<std::uint32_t>(e.name.size()));
    put16(out, 0);
    out += e.name;
    out += e.data;

    put32(central, kCentralSig);
    put16(central, 20);
    put16(central, 20);
    put16(central, kUtf8Flag);
    put16(central, 0);
    put16(central, 0);
    put16(central, kDosDate1980);
    put32(central, crc);
    put32(central, size);
    put32(central, size);
    put16(central, static_cast<std::uint32_t>(e.name.size()));
    put16(central, 0);
    put16(central, 0);
    put16(central, 0);
    put16(central, 0);
    put32(central, 0);
    put32(central, offset);
    central += e.name;
  }
  const auto cd_offset = static_cast<std::uint32_t>(out.size());
  out += central;
  put32(out, kEndSig);
  put16(out, 0);
  put16(out, 0);
  put16(out, static_cast<std::uint32_t>(entries.size()));
  put16(out, static_cast<std::uint32_t>(entries.size()));
  put32(out, static_cast<std::uint32_t>(central.size()));
  put32(out, cd_offset);
  put16(out, 0);
  return out;
}

std::vector<Entry> read(std::string_view archive) {
  const Reader r{archive};
  if (archive.size() < 22) corrupt("too short");
  // the end record sits in the last 22 + 65535 bytes
  std::size_t end = std::string_view::npos;
  const std::size_t floor = archive.size() > 22 + 0xffff ? archive.size() - 22 - 0xffff : 0;
  for (std::size_t at = archive.size() - 22 + 1; at-- > floor;) {
    if (r.u32(at) == kEndSig && at + 22 + r.u16(at + 20) == archive.size()) {
      end = at;
      break;
    }
  }
  if (end == std::string_view::npos) corrupt("no end of central directory");
  const auto count = r.u16(end + 10);
  const auto cd_size = r.u32(end + 12);
  std::size_t at = r.u32(end + 16);
  if (at + cd_size > end) corrupt("central directory out of bounds");

  std::vector<Entry> out;
  std::set<std::string> names;
  for (std::uint32_t i = 0; i < count; ++i) {
    if (r.u32(at) != kCentralSig) corrupt("bad central directory signature");
    const auto method = r.u16(at + 10);
    const auto crc = r.u32(at + 16);
    const auto csize = r.u32(at + 20);
    const auto usize = r.u32(at + 24);
    const auto name_len = r.u16(at + 28);
    const auto extra_len = r.u16(at + 30);
    const auto comment_len = r.u16(at + 32);
    const auto local = r.u32(at + 42);
    Entry e;
    e.name = std::string(r.slice(at + 46, name_len));
    at += 46 + name_len + extra_len + comment_len;

    if (r.u32(local) != kLocalSig) corrupt("bad local header for '" + e.name + "'");
    if (r.slice(local + 30, r.u16(local + 26)) != e.name) corrupt("local and central names differ for '" + e.name + "'");
    const auto data_at = local + 30 + r.u16(local + 26) + r.u16(local + 28);
    const auto raw = r.slice(data_at, csize);
    if (method == 0) {
      if (csize != usize) corrupt("stored entry '" + e.name + "' has mismatched sizes");
      e.data = std::string(raw);
    } else if (method == 8) {
      e.data = inflate_raw(raw, usize);
    } else {
      corrupt("entry '" + e.name + "' uses unsupported compression method " + std::to_string(method));
    }
    e.crc_ok = crc_of(e.data) == crc;
    if (!names.insert(e.name).second) corrupt("duplicate entry '" + e.name + "'");
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace logoped::zip
