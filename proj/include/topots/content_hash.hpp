#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace topots {

/// Incremental SHA-256; digest() returns lowercase hex.
class ContentHasher {
public:
    ContentHasher();
    ~ContentHasher();
    ContentHasher(const ContentHasher&) = delete;
    ContentHasher& operator=(const ContentHasher&) = delete;

    /// Each field is length-prefixed so ("ab","c") and ("a","bc") differ.
    ContentHasher& add(std::string_view field);
    std::string digest();

private:
    struct State;
    std::unique_ptr<State> state_;
};

std::string sha256_hex(std::string_view data);

}  // namespace topots
