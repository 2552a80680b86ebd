#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace twinops::edged {

/// Frames are a 4-byte big-endian body length followed by that many bytes of
/// UTF-8 JSON.
inline constexpr std::size_t kFrameHeaderBytes = 4;
inline constexpr std::uint32_t kDefaultMaxFrameBytes = 16u * 1024u * 1024u;

std::string encode_frame(std::string_view body);

/// One decoder output: either a complete body or an oversized frame that was
/// skipped (its bytes are consumed without being buffered).
struct DecodedFrame {
  std::string body;
  bool oversized = false;
  std::uint32_t declared_length = 0;
};

/// Incremental decoder for a byte stream. Oversized frames are reported and
/// skipped so the stream stays aligned on the next header.
class FrameDecoder {
 public:
  explicit FrameDecoder(std::uint32_t max_frame_bytes = kDefaultMaxFrameBytes) : max_(max_frame_bytes) {}

  void feed(std::string_view bytes);
  std::optional<DecodedFrame> next();

  /// Bytes buffered but not yet returned as frames.
  std::size_t pending_bytes() const { return buffer_.size() - read_pos_; }

 private:
  std::uint32_t max_;
  std::string buffer_;
  std::size_t read_pos_ = 0;
  std::uint64_t skip_remaining_ = 0;
  std::vector<DecodedFrame> ready_;
  std::size_t ready_pos_ = 0;

  void drain();
};

}  // namespace twinops::edged
