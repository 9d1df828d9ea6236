#pragma once

// Test-only gzip compressor, used to exercise magic-byte detection.

#include <stdexcept>
#include <string>
#include <string_view>

#include <zlib.h>

namespace testutil {

inline std::string gzip_compress(std::string_view data) {
  z_stream strm{};
  if (deflateInit2(&strm, Z_BEST_COMPRESSION, Z_DEFLATED, 16 + MAX_WBITS, 8,
                   Z_DEFAULT_STRATEGY) != Z_OK)
    throw std::runtime_error("deflateInit2 failed");
  strm.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  strm.avail_in = static_cast<uInt>(data.size());

  std::string out;
  char buf[1 << 15];
  int rc = Z_OK;
  do {
    strm.next_out = reinterpret_cast<Bytef*>(buf);
    strm.avail_out = sizeof(buf);
    rc = deflate(&strm, Z_FINISH);
    if (rc == Z_STREAM_ERROR) {
      deflateEnd(&strm);
      throw std::runtime_error("deflate failed");
    }
    out.append(buf, sizeof(buf) - strm.avail_out);
  } while (rc != Z_STREAM_END);
  deflateEnd(&strm);
  return out;
}

}  // namespace testutil
