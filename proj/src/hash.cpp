#include "fseg/hash.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <stdexcept>

namespace fseg {

namespace {

std::string to_hex(const unsigned char* digest, unsigned int len) {
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

struct EvpCtx {
    EVP_MD_CTX* ctx;
    EvpCtx() : ctx(EVP_MD_CTX_new()) {
        if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
            throw std::runtime_error("sha256: init failed");
        }
    }
    ~EvpCtx() { EVP_MD_CTX_free(ctx); }
};

}  // namespace

std::string sha256_hex(std::string_view data) {
    EvpCtx c;
    if (EVP_DigestUpdate(c.ctx, data.data(), data.size()) != 1) {
        throw std::runtime_error("sha256: update failed");
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(c.ctx, digest, &len) != 1) {
        throw std::runtime_error("sha256: final failed");
    }
    return to_hex(digest, len);
}

std::string sha256_file_hex(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("sha256: cannot open " + path.string());
    EvpCtx c;
    std::array<char, 1 << 15> buf;
    while (in.read(buf.data(), buf.size()) || in.gcount() > 0) {
        if (EVP_DigestUpdate(c.ctx, buf.data(), static_cast<size_t>(in.gcount())) != 1) {
            throw std::runtime_error("sha256: update failed");
        }
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(c.ctx, digest, &len) != 1) {
        throw std::runtime_error("sha256: final failed");
    }
    return to_hex(digest, len);
}

}  // namespace fseg
