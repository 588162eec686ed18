#include "atomic_file.hpp"

#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <string>
#include <system_error>
#include <vector>

#include "quakescore/error.hpp"

namespace quakescore::detail {

AtomicFile::AtomicFile(std::filesystem::path target) : target_(std::move(target)) {
  std::filesystem::path dir = target_.parent_path();
  if (dir.empty()) dir = ".";
  const std::string pattern =
      (dir / ("." + target_.filename().string() + ".tmpXXXXXX")).string();
  std::vector<char> buf(pattern.begin(), pattern.end());
  buf.push_back('\0');

  const int fd = ::mkstemp(buf.data());
  if (fd < 0) {
    throw InputError(target_.string() + ": cannot create temporary file: " +
                     std::strerror(errno));
  }
  ::fchmod(fd, 0644);
  temp_ = buf.data();
  stream_ = ::fdopen(fd, "wb");
  if (stream_ == nullptr) {
    const int err = errno;
    ::close(fd);
    std::filesystem::remove(temp_);
    throw InputError(target_.string() + ": cannot open temporary file: " +
                     std::strerror(err));
  }
}

AtomicFile::~AtomicFile() {
  if (stream_ != nullptr) std::fclose(stream_);
  if (!committed_) {
    std::error_code ignored;
    std::filesystem::remove(temp_, ignored);
  }
}

void AtomicFile::commit() {
  const bool flushed = std::fflush(stream_) == 0;
  const bool closed = std::fclose(stream_) == 0;
  stream_ = nullptr;
  if (!flushed || !closed) {
    throw InputError(target_.string() + ": write failed: " + std::strerror(errno));
  }
  std::error_code ec;
  std::filesystem::rename(temp_, target_, ec);
  if (ec) {
    throw InputError(target_.string() + ": cannot rename into place: " + ec.message());
  }
  committed_ = true;
}

}  // namespace quakescore::detail
