#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sparseasm {

/// One sequencing read. clip_left/clip_right count bases removed from the
/// original record's ends by denoising; they let evaluation map surviving
/// bases back onto the input read.
struct ReadRecord {
    std::string id;
    std::string seq;
    std::string qual;  // empty for FASTA input
    std::uint32_t clip_left = 0;
    std::uint32_t clip_right = 0;

    bool operator==(const ReadRecord&) const = default;
};

using ReadSet = std::vector<ReadRecord>;

}  // namespace sparseasm
