#include "bdatp/wire.hpp"

#include <zlib.h>

namespace bdatp::wire {

namespace {
std::uint32_t crc32_of(const std::uint8_t* data, std::size_t n) {
  return static_cast<std::uint32_t>(
      ::crc32(0L, reinterpret_cast<const Bytef*>(data), static_cast<uInt>(n)));
}
}  // namespace

void Writer::append_crc32_trailer() {
  u32(crc32_of(buf_.data(), buf_.size()));
}

void Reader::check_crc32_trailer() {
  if (data_.size() < pos_ + 4) throw ParseError(what_ + ": truncated");
  std::size_t body = data_.size() - 4;
  std::uint32_t stored = 0;
  for (int i = 0; i < 4; ++i)
    stored |= std::uint32_t(data_[body + i]) << (8 * i);
  if (crc32_of(data_.data(), body) != stored)
    throw ParseError(what_ + ": checksum mismatch");
  trailer_checked_ = true;
}

}  // namespace bdatp::wire
