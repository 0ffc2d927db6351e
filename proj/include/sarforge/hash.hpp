#ifndef SARFORGE_HASH_HPP
#define SARFORGE_HASH_HPP

#include <cstdint>
#include <filesystem>
#include <string>

namespace sarforge {

/// FNV-1a 64-bit. Change-detection hash for output trees, not cryptographic.
class Fnv1a64 {
public:
    void update(const void* data, size_t n) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < n; ++i) {
            state_ ^= bytes[i];
            state_ *= 0x100000001B3ULL;
        }
    }
    void update(const std::string& s) { update(s.data(), s.size()); }
    uint64_t digest() const { return state_; }

private:
    uint64_t state_ = 0xCBF29CE484222325ULL;
};

std::string hex64(uint64_t v);

/// Content hash of every regular file under root: per-file FNV-1a digests
/// folded in sorted relative-path order, so generation order and thread
/// scheduling cannot change the result.
std::string hash_tree(const std::filesystem::path& root);

}  // namespace sarforge

#endif  // SARFORGE_HASH_HPP
