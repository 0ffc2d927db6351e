#include "sarforge/hash.hpp"

#include <algorithm>
#include <fstream>
#include <vector>

#include "sarforge/errors.hpp"

namespace sarforge {

std::string hex64(uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[v & 0xF];
        v >>= 4;
    }
    return s;
}

std::string hash_tree(const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    std::vector<std::string> rel_paths;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_regular_file()) {
            rel_paths.push_back(fs::relative(entry.path(), root).generic_string());
        }
    }
    std::sort(rel_paths.begin(), rel_paths.end());

    Fnv1a64 tree;
    std::vector<char> buf(1 << 16);
    for (const std::string& rel : rel_paths) {
        std::ifstream in(root / rel, std::ios::binary);
        if (!in) throw IoError("cannot hash: " + (root / rel).string());
        Fnv1a64 file;
        while (in) {
            in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
            file.update(buf.data(), static_cast<size_t>(in.gcount()));
        }
        tree.update(rel);
        tree.update("\0", 1);
        tree.update(hex64(file.digest()));
        tree.update("\n", 1);
    }
    return "fnv1a64:" + hex64(tree.digest());
}

}  // namespace sarforge
