#include "topots/content_hash.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdint>

#include "topots/error.hpp"

namespace topots {

struct ContentHasher::State {
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    bool finished = false;

    State() = default;
    State(const State&) = delete;
    State& operator=(const State&) = delete;
    ~State() { EVP_MD_CTX_free(ctx); }
};

ContentHasher::ContentHasher() : state_(std::make_unique<State>()) {
    if (state_->ctx == nullptr || EVP_DigestInit_ex(state_->ctx, EVP_sha256(), nullptr) != 1) {
        throw_numerical("SHA-256 initialization failed");
    }
}

ContentHasher::~ContentHasher() = default;

ContentHasher& ContentHasher::add(std::string_view field) {
    const std::uint64_t n = field.size();
    std::array<unsigned char, 8> prefix{};
    for (int i = 0; i < 8; ++i) {
        prefix[i] = static_cast<unsigned char>((n >> (8 * i)) & 0xffU);
    }
    EVP_DigestUpdate(state_->ctx, prefix.data(), prefix.size());
    EVP_DigestUpdate(state_->ctx, field.data(), field.size());
    return *this;
}

std::string ContentHasher::digest() {
    if (state_->finished) {
        throw_usage("ContentHasher::digest called twice");
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(state_->ctx, md.data(), &len);
    state_->finished = true;
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0x0f]);
    }
    return out;
}

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw_numerical("SHA-256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0x0f]);
    }
    return out;
}

}  // namespace topots
