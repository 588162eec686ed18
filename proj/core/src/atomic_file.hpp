#pragma once

#include <cstdio>
#include <filesystem>

namespace quakescore::detail {

// A temporary file next to `target` that replaces it on commit(). If the
// object is destroyed without commit() the temporary is removed.
class AtomicFile {
 public:
  explicit AtomicFile(std::filesystem::path target);
  ~AtomicFile();

  AtomicFile(const AtomicFile&) = delete;
  AtomicFile& operator=(const AtomicFile&) = delete;

  std::FILE* stream() const noexcept { return stream_; }
  const std::filesystem::path& target() const noexcept { return target_; }

  // Flushes, closes and renames over the target. Throws InputError on failure.
  void commit();

 private:
  std::filesystem::path target_;
  std::filesystem::path temp_;
  std::FILE* stream_ = nullptr;
  bool committed_ = false;
};

}  // namespace quakescore::detail
