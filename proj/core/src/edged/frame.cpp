#include "twinops/edged/frame.hpp"

#include <algorithm>
#include <limits>

#include "twinops/error.hpp"

namespace twinops::edged {

std::string encode_frame(std::string_view body) {
  if (body.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(Errc::InvalidArgument, "frame body exceeds 4 GiB");
  }
  const auto n = static_cast<std::uint32_t>(body.size());
  std::string out;
  out.reserve(kFrameHeaderBytes + body.size());
  out.push_back(static_cast<char>((n >> 24) & 0xFF));
  out.push_back(static_cast<char>((n >> 16) & 0xFF));
  out.push_back(static_cast<char>((n >> 8) & 0xFF));
  out.push_back(static_cast<char>(n & 0xFF));
  out.append(body);
  return out;
}

void FrameDecoder::feed(std::string_view bytes) {
  if (skip_remaining_ > 0) {
    const auto skipped = std::min<std::uint64_t>(skip_remaining_, bytes.size());
    skip_remaining_ -= skipped;
    bytes.remove_prefix(static_cast<std::size_t>(skipped));
  }
  buffer_.append(bytes);
  drain();
}

void FrameDecoder::drain() {
  for (;;) {
    if (skip_remaining_ > 0) {
      const auto skipped = std::min<std::uint64_t>(skip_remaining_, pending_bytes());
      skip_remaining_ -= skipped;
      read_pos_ += static_cast<std::size_t>(skipped);
      if (skip_remaining_ > 0) break;
    }
    if (pending_bytes() < kFrameHeaderBytes) break;
    const auto* p = reinterpret_cast<const unsigned char*>(buffer_.data() + read_pos_);
    const std::uint32_t len = (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
                              (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
    if (len > max_) {
      read_pos_ += kFrameHeaderBytes;
      skip_remaining_ = len;
      ready_.push_back({{}, true, len});
      continue;
    }
    if (pending_bytes() < kFrameHeaderBytes + len) break;
    ready_.push_back({buffer_.substr(read_pos_ + kFrameHeaderBytes, len), false, len});
    read_pos_ += kFrameHeaderBytes + len;
  }
  if (read_pos_ > 0 && read_pos_ * 2 >= buffer_.size()) {
    buffer_.erase(0, read_pos_);
    read_pos_ = 0;
  }
}

std::optional<DecodedFrame> FrameDecoder::next() {
  if (ready_pos_ >= ready_.size()) {
    ready_.clear();
    ready_pos_ = 0;
    return std::nullopt;
  }
  return std::move(ready_[ready_pos_++]);
}

}  // namespace twinops::edged
