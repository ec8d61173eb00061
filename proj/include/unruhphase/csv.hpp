// csv.hpp — deterministic numeric formatting and atomic file output.

#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace unruhphase {

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 17 significant digits, '.' decimal separator, locale independent; enough to
// round-trip any double, so identical runs produce byte-identical files.
inline std::string format_g17(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

// Writes through a sibling temp file and renames on commit, so a failed run
// leaves no partial output behind.
class AtomicFile {
  public:
    explicit AtomicFile(const std::string& path) : path_(path), tmp_(path + ".tmp") {
        out_.open(tmp_, std::ios::binary | std::ios::trunc);
        if (!out_) throw io_error("cannot open '" + tmp_ + "' for writing");
    }

    AtomicFile(const AtomicFile&) = delete;
    AtomicFile& operator=(const AtomicFile&) = delete;

    std::ostream& stream() { return out_; }

    void commit() {
        out_.flush();
        if (!out_) throw io_error("write to '" + tmp_ + "' failed");
        out_.close();
        if (std::rename(tmp_.c_str(), path_.c_str()) != 0)
            throw io_error("cannot rename '" + tmp_ + "' to '" + path_ + "'");
        committed_ = true;
    }

    ~AtomicFile() {
        if (!committed_) {
            out_.close();
            std::remove(tmp_.c_str());
        }
    }

  private:
    std::string path_;
    std::string tmp_;
    std::ofstream out_;
    bool committed_{false};
};

}  // namespace unruhphase
