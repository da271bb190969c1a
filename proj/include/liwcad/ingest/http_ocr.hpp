#pragma once

// OCR over HTTP: POST the raw image (application/octet-stream) to the
// configured endpoint, expect 200 with the UTF-8 text as the body.
//
//   LIWCAD_OCR_ENDPOINT  e.g. https://ocr.example.com/v1/recognize
//   LIWCAD_OCR_TOKEN     sent as "Authorization: Bearer <token>"; never logged

#include <cstdlib>
#include <optional>
#include <string>

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include "liwcad/ingest/ocr.hpp"

namespace liwcad::ingest {

inline constexpr const char* kOcrEndpointEnv = "LIWCAD_OCR_ENDPOINT";
inline constexpr const char* kOcrTokenEnv = "LIWCAD_OCR_TOKEN";

class HttpOcrProvider : public OcrProvider {
public:
    HttpOcrProvider(std::string endpoint, std::string token, int timeout_seconds = 30)
        : token_(std::move(token)), timeout_seconds_(timeout_seconds) {
        const auto scheme_end = endpoint.find("://");
        if (scheme_end == std::string::npos) throw OcrError("OCR endpoint must be an http(s) URL");
        const auto path_start = endpoint.find('/', scheme_end + 3);
        origin_ = endpoint.substr(0, path_start);
        path_ = path_start == std::string::npos ? "/" : endpoint.substr(path_start);
    }

    static std::optional<HttpOcrProvider> from_env() {
        const char* endpoint = std::getenv(kOcrEndpointEnv);
        if (endpoint == nullptr || *endpoint == '\0') return std::nullopt;
        const char* token = std::getenv(kOcrTokenEnv);
        return HttpOcrProvider(endpoint, token ? token : "");
    }

    std::string recognize(std::span<const std::byte> image) override {
        httplib::Client client(origin_);
        client.set_connection_timeout(timeout_seconds_);
        client.set_read_timeout(timeout_seconds_);
        httplib::Headers headers;
        if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);
        auto res = client.Post(path_, headers, reinterpret_cast<const char*>(image.data()), image.size(),
                               "application/octet-stream");
        if (!res) throw OcrError("OCR request failed: " + httplib::to_string(res.error()));
        if (res->status != 200) throw OcrError("OCR endpoint returned status " + std::to_string(res->status));
        return res->body;
    }

    const std::string& origin() const noexcept { return origin_; }
    const std::string& path() const noexcept { return path_; }

private:
    std::string origin_;
    std::string path_;
    std::string token_;
    int timeout_seconds_;
};

}  // namespace liwcad::ingest
