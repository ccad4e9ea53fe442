#include "tms/util/io.hpp"

#include <algorithm>
#include <cstring>

namespace tms::io {

ReadOutcome read_exact(ByteSource& in, std::uint8_t* dst, std::size_t len)
{
    std::size_t got = 0;
    while (got < len) {
        const std::size_t n = in.read_some(dst + got, len - got);
        if (n == 0) {
            return got == 0 ? ReadOutcome::EndOfStream : ReadOutcome::Truncated;
        }
        got += n;
    }
    return ReadOutcome::Complete;
}

std::size_t MemorySource::read_some(std::uint8_t* dst, std::size_t len)
{
    const std::size_t n = std::min(len, data_.size() - pos_);
    if (n > 0) {
        std::memcpy(dst, data_.data() + pos_, n);
        pos_ += n;
    }
    return n;
}

} // namespace tms::io
